#pragma once

#include <memory>
#include <span>

#include "cavkin/phase_space.hpp"

namespace cavkin {

/// Constant-coefficient 1D advection along either grid axis by Fourier
/// interpolation: every row (or column) is translated by its own amount,
/// f(q) -> f(q - shift). The zero mode is untouched, so the total mass is
/// conserved up to rounding. Plans are created with FFTW_ESTIMATE so that
/// repeated runs are bit-identical.
class SpectralShifter {
 public:
  explicit SpectralShifter(const PhaseSpaceGrid& grid);
  ~SpectralShifter();
  SpectralShifter(SpectralShifter&&) noexcept;
  SpectralShifter& operator=(SpectralShifter&&) noexcept;
  SpectralShifter(const SpectralShifter&) = delete;
  SpectralShifter& operator=(const SpectralShifter&) = delete;

  /// Translate row j (fixed momentum p_j) along x by shifts[j].
  void shift_rows(PhaseSpaceField& f, std::span<const double> shifts);

  /// Translate column i (fixed position x_i) along p by shifts[i]. The
  /// momentum axis is treated as periodic with period 2 p_max; the field must
  /// vanish at the edges for this to be a faithful advection.
  void shift_columns(PhaseSpaceField& f, std::span<const double> shifts);

  const PhaseSpaceGrid& grid() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cavkin
