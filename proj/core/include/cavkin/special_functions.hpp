#pragma once

// Special functions used across the stationary, stability and photon-statistics
// layers. Modified Bessel functions of integer order are evaluated by their
// power series for moderate arguments and by the Hankel asymptotic expansion
// for large ones; erfcx switches to its asymptotic series for large positive
// arguments. Target relative accuracy is 1e-12 or better on the real line.

namespace cavkin::special {

/// Modified Bessel function of the first kind I_n(x), integer n >= 0.
double bessel_i(int n, double x);

/// Exponentially scaled I_n(x) * exp(-|x|); finite for all finite x.
double bessel_i_scaled(int n, double x);

inline double bessel_i0(double x) { return bessel_i(0, x); }
inline double bessel_i1(double x) { return bessel_i(1, x); }

/// ln I_0(x), evaluated without overflow.
double log_bessel_i0(double x);

/// I_1(x)/I_0(x): the mean of cos under a von Mises weight exp(x cos).
double bessel_ratio(double x);

/// d/dx [I_1(x)/I_0(x)] = 1 - q/x - q^2, with the x -> 0 limit 1/2.
double bessel_ratio_derivative(double x);

/// Scaled complementary error function exp(x^2) erfc(x), any real x.
/// Overflows to +inf for x < about -26.6, as exp(x^2) itself does.
double erfcx(double x);

/// Gamma(3/4) / Gamma(1/4).
double gamma_ratio_3_4_over_1_4();

/// Complete elliptic integral of the first kind K(k), modulus k in [0, 1).
double elliptic_k(double k);

}  // namespace cavkin::special
