#pragma once

// Counter-based random streams (Philox4x32-10) and uniform sampling in boxes.

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "hypercover/core.hpp"
#include "hypercover/parallel.hpp"

namespace hypercover {

namespace detail {

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t{a} * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

using PhiloxBlock = std::array<std::uint32_t, 4>;

/// One Philox4x32 block with 10 rounds.
inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    detail::mulhilo32(kM0, ctr[0], hi0, lo0);
    detail::mulhilo32(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Deterministic random stream addressed by (seed, stream_index).
///
/// The seed is the Philox key; stream_index fills the upper half of the
/// 128-bit counter and the draw position the lower half, so distinct streams
/// never share a counter value. Copies replay the same sequence.
/// Satisfies UniformRandomBitGenerator.
class SeededStream {
 public:
  using result_type = std::uint64_t;

  SeededStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
      : seed_(seed), stream_(stream_index) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (have_ == 0) refill();
    const std::size_t i = 2 - have_;
    --have_;
    return (std::uint64_t{buf_[2 * i + 1]} << 32) | buf_[2 * i];
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  void refill() noexcept {
    const PhiloxBlock ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buf_ = philox4x32_10(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    ++block_;
    have_ = 2;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxBlock buf_{};
  std::size_t have_ = 0;
};

/// SplitMix64 finalizer; used to derive independent seeds for sub-jobs.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed for job `index` of purpose `tag` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) noexcept {
  return mix64(mix64(mix64(seed) ^ tag) ^ index);
}

/// Fill `out` (row-major, d columns) with uniform points in the box.
inline void fill_uniform(const Box& box, SeededStream& stream, std::span<double> out) {
  const std::size_t d = box.dimension();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t k = i % d;
    const double lo = box.lower(k), hi = box.upper(k);
    out[i] = std::min(lo + (hi - lo) * stream.uniform01(), hi);
  }
}

/// `count` i.i.d. uniform points in the box, row-major.
inline std::vector<double> sample_uniform(const Box& box, std::size_t count, SeededStream stream) {
  if (count == 0) throw parameter_error("sample_uniform: count must be >= 1");
  std::vector<double> out(count * box.dimension());
  fill_uniform(box, stream, out);
  return out;
}

/// Uniform points per chunk in chunked sampling; chunk c draws from SeededStream(seed, c).
inline constexpr std::size_t kSampleChunk = std::size_t{1} << 14;

/// N uniform points (row-major) laid out in kSampleChunk chunks, one stream per
/// chunk, so the output does not depend on the thread count.
inline std::vector<double> sample_uniform_chunked(const Box& box, std::size_t count, std::uint64_t seed,
                                                  Execution exec = {}) {
  if (count == 0) throw parameter_error("sample_uniform: count must be >= 1");
  const std::size_t d = box.dimension();
  std::vector<double> out(count * d);
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, exec, [&](std::size_t c) {
    const std::size_t begin = c * kSampleChunk;
    const std::size_t m = std::min(kSampleChunk, count - begin);
    SeededStream stream(seed, c);
    fill_uniform(box, stream, std::span<double>(out.data() + begin * d, m * d));
  });
  return out;
}

}  // namespace hypercover
