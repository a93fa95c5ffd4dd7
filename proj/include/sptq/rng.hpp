#pragma once

#include <cstdint>

namespace sptq::rng {

// Algorithm identifier echoed in every report so sampled results can be
// reproduced. Streams are splitmix64; Poisson variates use sequential
// inversion for small means and Hormann's PTRS transformed rejection
// otherwise.
inline constexpr const char* kAlgorithm = "splitmix64-ptrs";

// A deterministic counter-based stream. Independent streams for parallel
// work are derived from (seed, stream_index) so parallel and serial
// execution draw identical variates.
class Stream {
 public:
  explicit Stream(std::uint64_t seed);
  static Stream for_setting(std::uint64_t seed, std::uint64_t setting_index);

  std::uint64_t next_u64();
  double uniform();  // strictly inside (0,1)
  double normal();   // standard normal, Box-Muller
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace sptq::rng
