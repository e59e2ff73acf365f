#pragma once

#include <cstdint>
#include <vector>

namespace zeroone {

/// Counter-based pseudo-random stream (SplitMix64 walk over a keyed counter).
///
/// Every sampler takes an explicit stream, so runs are bit-reproducible for a
/// given seed. branch(i) derives a statistically independent child stream from
/// (key, i) without touching the parent state; concurrent trials use disjoint
/// branches keyed by trial index and reduce in a fixed order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ kSeedSalt)) {}

  std::uint64_t next_u64() { return mix(key_ + kGamma * ++counter_); }

  /// Child stream fully determined by (key, index); parent state unchanged.
  RngStream branch(std::uint64_t index) const {
    return RngStream(FromKey{}, mix(mix(key_ ^ kBranchSalt) + kGamma * index));
  }

  /// Uniform integer in [0, bound). Lemire's multiply-reject method; bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound) {
    unsigned __int128 product = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform_double() < p; }

  /// Fisher-Yates on the first k positions of v; the prefix is a uniform
  /// k-subset of v in uniform order.
  template <typename T>
  void shuffle_prefix(std::vector<T>& v, std::size_t k) {
    const std::size_t n = v.size();
    if (k > n) k = n;
    for (std::size_t i = 0; i + 1 < n && i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_below(n - i));
      if (j != i) std::swap(v[i], v[j]);
    }
  }

 private:
  struct FromKey {};
  RngStream(FromKey, std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5123fb0d8c3a91e7ULL;
  static constexpr std::uint64_t kBranchSalt = 0x8e9c4b1a3d5f7e21ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace zeroone
