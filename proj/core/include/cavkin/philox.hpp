#pragma once

#include <array>
#include <cstdint>

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is
// identified by (seed, stream id, purpose); draws within a stream advance a
// 64-bit counter, so any trajectory can be regenerated independently of how
// work is scheduled.

namespace cavkin {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten rounds of the Philox4x32 bijection.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint32_t stream, std::uint32_t purpose = 0);

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller; both variates of a pair are used.
  double normal();

  std::uint64_t draws() const { return block_; }

 private:
  void refill();

  PhiloxKey key_;
  std::uint32_t stream_;
  std::uint32_t purpose_;
  std::uint64_t block_ = 0;
  std::array<double, 2> uniforms_{};
  int uniform_left_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cavkin

namespace cavkin {

/// Stateless draws: the block (index lo, index hi, stream, purpose) under key
/// `seed` mapped to two uniforms on (0, 1), or to one standard normal by
/// Box-Muller.
std::array<double, 2> philox_uniform2(std::uint64_t seed, std::uint32_t stream, std::uint32_t purpose,
                                      std::uint64_t index);
double philox_normal(std::uint64_t seed, std::uint32_t stream, std::uint32_t purpose, std::uint64_t index);

}  // namespace cavkin
