#pragma once

#include <cstdint>
#include <vector>

#include "zeroone/batch_eval.hpp"
#include "zeroone/circuit.hpp"
#include "zeroone/rational.hpp"
#include "zeroone/rng.hpp"

namespace zeroone {

/// Exact enumeration refuses above this many weight-i assignments.
inline constexpr std::uint64_t kExactEnumerationCap = 100'000'000ULL;

/// Revolving-door Gray enumeration of all C(n, t) t-subsets of {0..n-1}:
/// consecutive combinations differ by removing one element and adding another.
class RevolvingDoorCombinations {
 public:
  RevolvingDoorCombinations(unsigned n, unsigned t);

  /// Writes the next combination (ascending order) into `combo`; returns false
  /// after the last one.
  bool next(std::vector<unsigned>& combo);

 private:
  unsigned n_;
  unsigned t_;
  bool first_ = true;
  bool done_ = false;
  std::vector<unsigned> c_;  // c_[1..t] ascending plus sentinel c_[t+1] = n
};

/// f_C(i): probability that C holds when exactly i inputs, chosen uniformly,
/// are true. Exact average over all C(m, i) assignments via the batch kernel;
/// TooLargeError past kExactEnumerationCap.
Rat exact_weight_probability(const Circuit& c, unsigned i);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
};

/// Monte Carlo f_C(i) from uniform weight-i assignments (partial shuffle).
/// Trial j draws from rng.branch(j), so the estimate is independent of the
/// thread count.
McEstimate mc_weight_probability(const Circuit& c, unsigned i, std::uint64_t trials,
                                 const RngStream& rng, int threads = 1);

}  // namespace zeroone
