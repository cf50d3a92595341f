#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace critzero {

/// Identifies one reproducible stream of variates. Two equal SeedStreams
/// always produce bit-identical sequences, independent of thread or order.
struct SeedStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const SeedStream&, const SeedStream&) = default;
};

/// Stream index for the given work item and retry attempt. Attempt 0 is the
/// item's own stream; later attempts land in disjoint high ranges.
constexpr std::uint64_t substream(std::uint64_t item, std::uint32_t attempt = 0) noexcept {
  return item + (static_cast<std::uint64_t>(attempt) << 44);
}

/// Philox4x32-10 (Salmon et al., SC'11): a counter-based generator. The key is
/// the master seed; the upper half of the counter holds the stream index and
/// the lower half counts blocks within the stream.
class CounterRng {
 public:
  using block_type = std::array<std::uint32_t, 4>;

  explicit CounterRng(SeedStream seed) noexcept : seed_(seed) {}

  block_type next_block() noexcept {
    block_type ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                   static_cast<std::uint32_t>(seed_.stream_index),
                   static_cast<std::uint32_t>(seed_.stream_index >> 32)};
    ++block_;
    return philox(ctr, {static_cast<std::uint32_t>(seed_.master_seed),
                        static_cast<std::uint32_t>(seed_.master_seed >> 32)});
  }

  /// Uniform in the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    if (uniform_left_ == 0) {
      const auto b = next_block();
      uniform_buf_[0] = to_unit(b[0], b[1]);
      uniform_buf_[1] = to_unit(b[2], b[3]);
      uniform_left_ = 2;
    }
    return uniform_buf_[2 - uniform_left_--];
  }

  /// Uniform in the open interval (lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal variate by Box-Muller; each block yields a pair.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const auto b = next_block();
    const double u1 = to_unit(b[0], b[1]);
    const double u2 = to_unit(b[2], b[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  static block_type philox(block_type ctr, std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += w0;
      key[1] += w1;
    }
    return ctr;
  }

 private:
  static double to_unit(std::uint32_t lo, std::uint32_t hi) noexcept {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  SeedStream seed_;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
  std::array<double, 2> uniform_buf_{};
  int uniform_left_ = 0;
};

}  // namespace critzero
