#include "cavkin/spectral_shift.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace cavkin {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    if (p) fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

// Multiply spectrum c[0..n/2] of a length-n real signal by exp(-i q s) where
// q = 2 pi k / period, keeping the Nyquist bin real for even n.
void apply_shift(fftw_complex* c, std::size_t n, double period, double shift) {
  const std::size_t nc = n / 2 + 1;
  const double base = -2.0 * std::numbers::pi * shift / period;
  const std::complex<double> step = std::polar(1.0, base);
  std::complex<double> phase = step;
  for (std::size_t k = 1; k < nc; ++k) {
    if (k % 64 == 0) phase = std::polar(1.0, base * static_cast<double>(k));
    auto* z = reinterpret_cast<std::complex<double>*>(c[k]);
    if (n % 2 == 0 && k == nc - 1) {
      *z *= std::cos(base * static_cast<double>(k));
    } else {
      *z *= phase;
    }
    phase *= step;
  }
}

}  // namespace

struct SpectralShifter::Impl {
  PhaseSpaceGrid grid;
  FftwBuffer<double> real;
  FftwBuffer<fftw_complex> rows_spec;
  FftwBuffer<fftw_complex> cols_spec;
  Plan rows_fwd, rows_bwd, cols_fwd, cols_bwd;

  explicit Impl(const PhaseSpaceGrid& g) : grid(g) {
    const int nx = static_cast<int>(g.nx);
    const int np = static_cast<int>(g.np);
    const int ncx = nx / 2 + 1;
    const int ncp = np / 2 + 1;
    real.reset(fftw_alloc_real(g.size()));
    rows_spec.reset(fftw_alloc_complex(static_cast<std::size_t>(ncx) * g.np));
    cols_spec.reset(fftw_alloc_complex(static_cast<std::size_t>(ncp) * g.nx));

    // rows: np transforms of length nx, contiguous
    rows_fwd.reset(fftw_plan_many_dft_r2c(1, &nx, np, real.get(), nullptr, 1, nx, rows_spec.get(),
                                          nullptr, 1, ncx, FFTW_ESTIMATE));
    rows_bwd.reset(fftw_plan_many_dft_c2r(1, &nx, np, rows_spec.get(), nullptr, 1, ncx, real.get(),
                                          nullptr, 1, nx, FFTW_ESTIMATE));
    // columns: nx transforms of length np with stride nx; spectra stored
    // interleaved with the same stride pattern
    cols_fwd.reset(fftw_plan_many_dft_r2c(1, &np, nx, real.get(), nullptr, nx, 1, cols_spec.get(),
                                          nullptr, nx, 1, FFTW_ESTIMATE));
    cols_bwd.reset(fftw_plan_many_dft_c2r(1, &np, nx, cols_spec.get(), nullptr, nx, 1, real.get(),
                                          nullptr, nx, 1, FFTW_ESTIMATE));
    if (!rows_fwd || !rows_bwd || !cols_fwd || !cols_bwd) {
      throw std::runtime_error("FFTW plan creation failed");
    }
  }
};

SpectralShifter::SpectralShifter(const PhaseSpaceGrid& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralShifter::~SpectralShifter() = default;
SpectralShifter::SpectralShifter(SpectralShifter&&) noexcept = default;
SpectralShifter& SpectralShifter::operator=(SpectralShifter&&) noexcept = default;

const PhaseSpaceGrid& SpectralShifter::grid() const { return impl_->grid; }

void SpectralShifter::shift_rows(PhaseSpaceField& f, std::span<const double> shifts) {
  auto& im = *impl_;
  const auto& g = im.grid;
  if (shifts.size() != g.np) throw std::invalid_argument("shift_rows: one shift per row required");
  std::memcpy(im.real.get(), f.values().data(), g.size() * sizeof(double));
  fftw_execute(im.rows_fwd.get());
  const std::size_t ncx = g.nx / 2 + 1;
  for (std::size_t j = 0; j < g.np; ++j) {
    apply_shift(im.rows_spec.get() + j * ncx, g.nx, g.wavelength(), shifts[j]);
  }
  fftw_execute(im.rows_bwd.get());
  const double inv = 1.0 / static_cast<double>(g.nx);
  double* out = f.values().data();
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = im.real[k] * inv;
}

void SpectralShifter::shift_columns(PhaseSpaceField& f, std::span<const double> shifts) {
  auto& im = *impl_;
  const auto& g = im.grid;
  if (shifts.size() != g.nx) throw std::invalid_argument("shift_columns: one shift per column required");
  std::memcpy(im.real.get(), f.values().data(), g.size() * sizeof(double));
  fftw_execute(im.cols_fwd.get());
  const std::size_t ncp = g.np / 2 + 1;
  const double period = 2.0 * g.p_max;
  // spectrum of column i, mode k lives at cols_spec[k * nx + i]
  std::vector<std::complex<double>> step(g.nx), phase(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) {
    step[i] = std::polar(1.0, -2.0 * std::numbers::pi * shifts[i] / period);
    phase[i] = step[i];
  }
  for (std::size_t k = 1; k < ncp; ++k) {
    auto* row = reinterpret_cast<std::complex<double>*>(im.cols_spec.get() + k * g.nx);
    const bool nyquist = (g.np % 2 == 0 && k == ncp - 1);
    const bool refresh = (k % 64 == 0);
    for (std::size_t i = 0; i < g.nx; ++i) {
      if (refresh) {
        phase[i] = std::polar(1.0, -2.0 * std::numbers::pi * shifts[i] * static_cast<double>(k) / period);
      }
      if (nyquist) {
        row[i] *= phase[i].real();
      } else {
        row[i] *= phase[i];
      }
      phase[i] *= step[i];
    }
  }
  fftw_execute(im.cols_bwd.get());
  const double inv = 1.0 / static_cast<double>(g.np);
  double* out = f.values().data();
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = im.real[k] * inv;
}

}  // namespace cavkin
