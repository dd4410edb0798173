#pragma once

// Seeded randomness. Engines are std::mt19937_64; the sampling helpers below
// are written out so that streams are identical across standard libraries.

#include <bit>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hs {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// FNV-1a over the tag, folded through splitmix64.
constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return splitmix64(h);
}

// Child seed for (parent, index, tag); distinct phases of one trial draw
// from unrelated streams and can be replayed in isolation.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index,
                                    std::string_view tag) noexcept {
  return splitmix64(splitmix64(parent ^ hash_tag(tag)) + index);
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

inline Rng child_rng(Rng& parent, std::string_view tag) {
  return Rng{derive_seed(parent(), 0, tag)};
}

// Uniform integer in [0, bound). Rejection sampling, bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (std::has_single_bit(bound)) return rng() & (bound - 1);
  const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= limit) return r % bound;
  }
}

// Uniform real in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Fair coin flips served 64 at a time.
class BitSource {
 public:
  explicit BitSource(Rng& rng) : rng_(rng) {}

  bool next() {
    if (left_ == 0) {
      bits_ = rng_();
      left_ = 64;
    }
    const bool b = bits_ & 1U;
    bits_ >>= 1;
    --left_;
    return b;
  }

 private:
  Rng& rng_;
  std::uint64_t bits_ = 0;
  int left_ = 0;
};

// Each element kept independently with probability 1/2.
template <class T>
std::vector<T> sample_half(const std::vector<T>& items, Rng& rng) {
  std::vector<T> out;
  out.reserve(items.size() / 2 + 1);
  BitSource bits(rng);
  for (const T& v : items)
    if (bits.next()) out.push_back(v);
  return out;
}

template <class T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_below(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace hs
