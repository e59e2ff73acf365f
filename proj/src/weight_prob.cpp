#include "zeroone/weight_prob.hpp"

#include <bit>
#include <numeric>

#include "zeroone/parallel.hpp"
#include "zeroone/stats.hpp"

namespace zeroone {

// Knuth's revolving-door scheme (TAOCP 7.2.1.3, Algorithm R), 0-based, with
// the degenerate sizes t = 0, 1, n handled up front.
RevolvingDoorCombinations::RevolvingDoorCombinations(unsigned n, unsigned t) : n_(n), t_(t) {
  if (t > n) throw std::invalid_argument("combination size exceeds the universe");
  c_.assign(static_cast<std::size_t>(t) + 2, 0);
  for (unsigned j = 1; j <= t; ++j) c_[j] = j - 1;
  c_[static_cast<std::size_t>(t) + 1] = n;
}

bool RevolvingDoorCombinations::next(std::vector<unsigned>& combo) {
  if (done_) return false;
  auto emit = [&] {
    combo.assign(c_.begin() + 1, c_.begin() + 1 + t_);
  };
  if (first_) {
    first_ = false;
    emit();
    return true;
  }
  if (t_ == 0 || t_ == n_) {
    done_ = true;
    return false;
  }
  if (t_ == 1) {
    // Ascending walk is the revolving-door order for a single element.
    if (c_[1] + 1 >= n_) {
      done_ = true;
      return false;
    }
    ++c_[1];
    emit();
    return true;
  }
  // R3..R5 of Algorithm R.
  unsigned j = 0;
  if (t_ % 2 == 1) {
    if (c_[1] + 1 < c_[2]) {
      ++c_[1];
      emit();
      return true;
    }
    j = 2;
    // fall through to R4
  } else {
    if (c_[1] > 0) {
      --c_[1];
      emit();
      return true;
    }
    j = 2;
    goto r5;
  }
r4:
  if (c_[j] >= j) {
    c_[j] = c_[j - 1];
    c_[j - 1] = j - 2;
    emit();
    return true;
  }
  ++j;
r5:
  if (c_[j] + 1 < c_[j + 1]) {
    c_[j - 1] = c_[j];
    ++c_[j];
    emit();
    return true;
  }
  ++j;
  if (j <= t_) goto r4;
  done_ = true;
  return false;
}

namespace {

std::uint64_t popcount_row(const std::uint64_t row[kBlockWords]) {
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < kBlockWords; ++w) {
    total += static_cast<std::uint64_t>(std::popcount(row[w]));
  }
  return total;
}

void mask_tail(std::uint64_t row[kBlockWords], std::size_t used_columns) {
  for (std::size_t w = 0; w < kBlockWords; ++w) {
    const std::size_t lo = w * 64;
    if (used_columns <= lo) {
      row[w] = 0;
    } else if (used_columns < lo + 64) {
      row[w] &= (~std::uint64_t{0}) >> (64 - (used_columns - lo));
    }
  }
}

}  // namespace

Rat exact_weight_probability(const Circuit& c, unsigned i) {
  const unsigned m = c.num_inputs;
  if (i > m) throw std::invalid_argument("weight exceeds the number of inputs");
  std::uint64_t total = 0;
  try {
    total = binomial(m, i);
  } catch (const TooLargeError&) {
    total = UINT64_MAX;
  }
  if (total > kExactEnumerationCap) {
    throw TooLargeError("C(m,i) exceeds the exact-enumeration cap; use Monte Carlo");
  }

  BatchEvaluator evaluator(c);
  AssignmentBlock block(m);
  RevolvingDoorCombinations combos(m, i);
  std::vector<unsigned> combo;
  std::uint64_t hits = 0;
  std::uint64_t enumerated = 0;
  std::size_t column = 0;
  std::uint64_t out[kBlockWords];
  while (combos.next(combo)) {
    for (unsigned v : combo) block.set(v + 1, column);
    ++column;
    ++enumerated;
    if (column == kBlockBits) {
      evaluator.eval_block(block, out);
      hits += popcount_row(out);
      block.clear();
      column = 0;
    }
  }
  if (column > 0) {
    evaluator.eval_block(block, out);
    mask_tail(out, column);
    hits += popcount_row(out);
  }
  if (enumerated != total) throw std::logic_error("combination enumeration miscounted");
  return Rat::from_count(hits, total);
}

McEstimate mc_weight_probability(const Circuit& c, unsigned i, std::uint64_t trials,
                                 const RngStream& rng, int threads) {
  const unsigned m = c.num_inputs;
  if (i > m) throw std::invalid_argument("weight exceeds the number of inputs");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");

  const int workers = threads > 1 ? threads : 1;
  std::vector<std::uint64_t> chunk_hits(static_cast<std::size_t>(workers), 0);
  parallel_for_chunks(trials, workers,
                      [&](std::size_t chunk, std::uint64_t begin, std::uint64_t end) {
    BatchEvaluator evaluator(c);
    AssignmentBlock block(m);
    std::vector<int> pool(m);
    std::uint64_t local_hits = 0;
    std::size_t column = 0;
    std::uint64_t out[kBlockWords];
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      RngStream trial_rng = rng.branch(trial);
      std::iota(pool.begin(), pool.end(), 1);
      trial_rng.shuffle_prefix(pool, i);
      for (unsigned k = 0; k < i; ++k) block.set(static_cast<std::uint32_t>(pool[k]), column);
      ++column;
      if (column == kBlockBits) {
        evaluator.eval_block(block, out);
        local_hits += popcount_row(out);
        block.clear();
        column = 0;
      }
    }
    if (column > 0) {
      evaluator.eval_block(block, out);
      mask_tail(out, column);
      local_hits += popcount_row(out);
    }
    chunk_hits[chunk] += local_hits;
  });

  std::uint64_t hits = 0;
  for (auto h : chunk_hits) hits += h;
  McEstimate est;
  est.trials = trials;
  est.hits = hits;
  est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  est.stderr_ = stderr_bernoulli(est.estimate, trials);
  return est;
}

}  // namespace zeroone
