#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace squeezelab {

// xoshiro256** seeded through splitmix64 from (seed, stream). The output
// sequence depends only on (seed, stream), never on scheduling; parallel
// tasks take their own generator via substream().
class SeededRng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view algorithm = "xoshiro256**";

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  // Independent generator for task `task` of this stream.
  SeededRng substream(std::uint64_t task) const;

  std::uint64_t next_u64() noexcept;
  result_type operator()() noexcept { return next_u64(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  // Unbiased integer in [0, bound); bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> state_{};
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace squeezelab
