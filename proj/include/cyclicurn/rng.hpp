#pragma once

#include <cstdint>
#include <bit>
#include <limits>

namespace cyclicurn {

/// Stafford "mix13" finalizer as used by splitmix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of replicate stream `stream` under `master`:
/// mix64(master + (stream + 1) * 0x9E3779B97F4A7C15).
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(master + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

/// xoshiro256++ (Blackman and Vigna).  State words come from a splitmix64
/// sequence started at the seed, as the reference code recommends.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed) noexcept {
    for (auto& w : s_) {
      seed += 0x9E3779B97F4A7C15ULL;
      w = mix64(seed);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t out = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return out;
  }

 private:
  std::uint64_t s_[4];
};

/// Reproducible random source.
///
/// Bounded integers use Lemire's multiply-and-reject method and doubles take
/// the top 53 bits, so every derived value is identical across platforms and
/// standard libraries.
class Rng {
 public:
  static constexpr const char* kAlgorithm =
      "xoshiro256++(splitmix64(seed)); bounded=lemire-u128; streams=mix64(master+(r+1)*phi64)";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_stream(std::uint64_t master, std::uint64_t stream) {
    return Rng(stream_seed(master, stream));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound).  bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t x = engine_();
    unsigned __int128 prod = static_cast<unsigned __int128>(x) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = engine_();
        prod = static_cast<unsigned __int128>(x) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  /// Uniform double strictly inside (0, 1).
  double open01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  Xoshiro256pp& engine() { return engine_; }

 private:
  Xoshiro256pp engine_;
};

}  // namespace cyclicurn
