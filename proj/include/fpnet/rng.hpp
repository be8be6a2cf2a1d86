#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace fpnet {

/// Philox4x32-10 block function (Salmon et al., Random123). Maps a 128-bit
/// counter and a 64-bit key to 128 pseudo-random bits. Pure function, so any
/// draw can be recomputed from (key, counter) alone.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to fold tags and indices into stream ids.
std::uint64_t mix64(std::uint64_t x);

/// Derives a 64-bit stream id from a sequence of integers (seed, purpose tag,
/// sample index, ...). Order-sensitive.
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts);

/// Counter-based generator: draws are Philox blocks keyed by `seed`, with the
/// counter's upper 64 bits set to `stream` and lower 64 bits incremented per
/// block. Two generators with the same (seed, stream) produce identical
/// sequences on every platform; different streams are independent.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (both variates used).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace fpnet
