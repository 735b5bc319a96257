#pragma once

// SplitMix64 (Steele, Lea & Flood 2014) with explicit, platform-independent
// derived operations. Everything stochastic in the library draws from this
// generator, so results for a given seed are identical across compilers and
// standard libraries (std::uniform_int_distribution is not).

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace gramprof {

// The SplitMix64 output finalizer; also used to derive stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  // Independent stream `index` of `seed`: state = mix64(seed + kGamma * (index + 1)).
  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(mix64(seed + kGamma * (index + 1)));
  }

  constexpr std::uint64_t next() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }
  constexpr std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  // Uniform integer in [0, bound), bound >= 1, by rejection of the biased
  // low range: draw x until x >= (2^64 - bound) mod bound, return x mod bound.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  // Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates from the back: for i = n-1 .. 1, swap(v[i], v[below(i+1)]).
template <typename T>
void shuffle(std::span<T> values, SplitMix64& rng) noexcept {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

// Stable 64-bit FNV-1a; used to derive per-purpose seeds from names.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t hash = 0xcbf29ce484222325ULL) noexcept {
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace gramprof
