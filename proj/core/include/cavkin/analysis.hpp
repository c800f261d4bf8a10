#pragma once

#include <span>
#include <utility>
#include <vector>

// Post-processing of sampled curves: exponential-growth fits, threshold
// crossing times and the spread of curves plotted against a rescaled axis.

namespace cavkin {

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  double r2 = 0.0;
};

/// Least-squares line through ln|y| over the first contiguous run of samples
/// with lo <= |y| <= hi. Throws std::invalid_argument if fewer than 3 points qualify.
LogFit fit_log_slope(std::span<const double> t, std::span<const double> y, double lo, double hi);

/// Centered moving average over 2 * half + 1 samples (shrunk at the ends).
std::vector<double> moving_average(std::span<const double> y, std::size_t half);

/// First time at which the moving average of y reaches `level`, linearly
/// interpolated between samples. NaN if it never does.
double crossing_time(std::span<const double> t, std::span<const double> y, double level, std::size_t half = 0);

/// Time after t_ref for the moving average of y to cover `fraction` of the way
/// from its value at t_ref to `asymptote`. NaN if it never gets there.
double relaxation_time(std::span<const double> t, std::span<const double> y, double t_ref, double asymptote,
                       double fraction = 0.9, std::size_t half = 0);

/// Linear interpolation of (t, y) at s; clamps outside the sampled range.
double interpolate(std::span<const double> t, std::span<const double> y, double s);

/// Largest spread max_k y_k(s) - min_k y_k(s) over `points` evenly spaced s in
/// [s_lo, s_hi]. Each curve is a pair (s samples, y samples).
double collapse_deviation(const std::vector<std::pair<std::vector<double>, std::vector<double>>>& curves,
                          double s_lo, double s_hi, std::size_t points = 200);

}  // namespace cavkin
