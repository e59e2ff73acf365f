#include <bit>
#include <cmath>
#include <set>

#include "doctest.h"
#include "support/fuzz.hpp"
#include "zeroone/weight_prob.hpp"

using namespace zeroone;
using namespace zeroone::testsupport;

namespace {

// Independent recount: average over all bitmasks of the right popcount.
Rat brute_weight_probability(const Circuit& c, unsigned i) {
  const unsigned m = c.num_inputs;
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  std::vector<std::uint8_t> assignment(m, 0);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) != i) continue;
    ++total;
    for (unsigned v = 0; v < m; ++v) assignment[v] = (mask >> v) & 1;
    if (eval_circuit(c, assignment)) ++hits;
  }
  return Rat::from_count(hits, total);
}

}  // namespace

TEST_CASE("revolving-door enumeration: count, distinctness, single swaps") {
  const std::vector<std::pair<unsigned, unsigned>> shapes = {
      {5, 2}, {6, 3}, {7, 0}, {7, 7}, {8, 1}, {9, 2}, {10, 4}, {10, 9}, {12, 5}, {13, 6}, {16, 8}};
  for (auto [n, t] : shapes) {
    CAPTURE(n);
    CAPTURE(t);
    RevolvingDoorCombinations combos(n, t);
    std::vector<unsigned> combo;
    std::set<std::uint64_t> seen;
    std::uint64_t previous_mask = 0;
    std::uint64_t count = 0;
    while (combos.next(combo)) {
      REQUIRE(combo.size() == t);
      std::uint64_t mask = 0;
      for (unsigned v : combo) {
        REQUIRE(v < n);
        mask |= std::uint64_t{1} << v;
      }
      REQUIRE(static_cast<unsigned>(std::popcount(mask)) == t);  // all distinct
      // ascending output
      for (std::size_t j = 1; j < combo.size(); ++j) REQUIRE(combo[j - 1] < combo[j]);
      if (count > 0 && t >= 1) {
        // revolving door: one element out, one in
        CHECK(std::popcount(previous_mask ^ mask) == 2);
      }
      CHECK(seen.insert(mask).second);
      previous_mask = mask;
      ++count;
    }
    CHECK(count == binomial(n, t));
  }
}

TEST_CASE("exact weight probability of an OR and of a literal") {
  CircuitBuilder b(6);
  std::vector<std::uint32_t> lits;
  for (std::uint32_t v = 1; v <= 6; ++v) lits.push_back(b.literal(v, true));
  const Circuit any = std::move(b).finish(b.or_gate(std::move(lits)));
  CHECK(exact_weight_probability(any, 0) == Rat(0));
  for (unsigned i = 1; i <= 6; ++i) CHECK(exact_weight_probability(any, i) == Rat(1));

  CircuitBuilder b2(7);
  const Circuit first = std::move(b2).finish(b2.literal(1, true));
  for (unsigned i = 0; i <= 7; ++i) {
    CHECK(exact_weight_probability(first, i) == Rat(i, 7));  // symmetry
  }
}

TEST_CASE("exact enumeration equals the bitmask recount on fuzzed circuits") {
  RngStream rng(2468);
  for (int round = 0; round < 30; ++round) {
    RngStream r = rng.branch(round);
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(r.uniform_below(9));  // up to 10
    const Circuit c = random_circuit(r, m, 4);
    for (unsigned i = 0; i <= m; ++i) {
      CHECK(exact_weight_probability(c, i) == brute_weight_probability(c, i));
    }
  }
}

TEST_CASE("monte carlo agrees with exact within three standard errors") {
  RngStream rng(1357);
  int checked = 0;
  for (int round = 0; round < 8; ++round) {
    RngStream r = rng.branch(round);
    const Circuit c = random_circuit(r, 15, 4);
    const unsigned i = 7;
    const Rat exact = exact_weight_probability(c, i);
    const McEstimate mc = mc_weight_probability(c, i, 10000, RngStream(900 + round));
    const double gap = std::fabs(mc.estimate - exact.to_double());
    // a constant circuit gives stderr 0 and gap 0
    CHECK(gap <= 3.0 * mc.stderr_ + 1e-12);
    if (mc.stderr_ > 0) ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("monte carlo trivia: constants and weight zero") {
  CircuitBuilder b(5);
  const Circuit always = std::move(b).finish(b.constant(true));
  const McEstimate sure = mc_weight_probability(always, 2, 1000, RngStream(1));
  CHECK(sure.estimate == 1.0);
  CHECK(sure.stderr_ == 0.0);

  CircuitBuilder b2(5);
  std::vector<std::uint32_t> lits;
  for (std::uint32_t v = 1; v <= 5; ++v) lits.push_back(b2.literal(v, true));
  const Circuit any = std::move(b2).finish(b2.or_gate(std::move(lits)));
  const McEstimate none = mc_weight_probability(any, 0, 1000, RngStream(2));
  CHECK(none.estimate == 0.0);
}

TEST_CASE("monte carlo is deterministic and thread-count independent") {
  RngStream rng(42);
  const Circuit c = random_circuit(rng, 12, 3);
  const McEstimate one = mc_weight_probability(c, 5, 5000, RngStream(7), 1);
  const McEstimate two = mc_weight_probability(c, 5, 5000, RngStream(7), 4);
  const McEstimate again = mc_weight_probability(c, 5, 5000, RngStream(7), 1);
  CHECK(one.hits == two.hits);
  CHECK(one.hits == again.hits);
  CHECK(one.estimate == two.estimate);
}

TEST_CASE("exact mode refuses oversized enumerations") {
  CircuitBuilder b(64);
  const Circuit c = std::move(b).finish(b.literal(1, true));
  CHECK_THROWS_AS(exact_weight_probability(c, 32), TooLargeError);
  CHECK(exact_weight_probability(c, 1) == Rat(1, 64));  // C(64,1) is tiny
}

TEST_CASE("restriction then weight probability equals the conditional average") {
  // Conditioning the uniform weight-i distribution on agreeing with rho is the
  // same as the weight-(i - ones(rho)) distribution on the stars.
  RngStream rng(97531);
  for (int round = 0; round < 25; ++round) {
    RngStream r = rng.branch(round);
    const int m = 6 + static_cast<int>(r.uniform_below(5));  // up to 10
    const Circuit c = random_circuit(r, static_cast<std::uint32_t>(m), 4);
    Restriction rho(m);
    int ones = 0;
    int stars = 0;
    for (int v = 1; v <= m; ++v) {
      const auto roll = r.uniform_below(3);
      rho.set(v, roll == 0 ? RVal::Zero : roll == 1 ? RVal::One : RVal::Star);
      if (rho.at(v) == RVal::One) ++ones;
      if (rho.at(v) == RVal::Star) ++stars;
    }
    const unsigned i =
        static_cast<unsigned>(ones) + static_cast<unsigned>(r.uniform_below(stars + 1));

    // direct conditional enumeration over weight-i assignments extending rho
    std::uint64_t hits = 0;
    std::uint64_t total = 0;
    std::vector<std::uint8_t> assignment(m, 0);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
      if (static_cast<unsigned>(std::popcount(mask)) != i) continue;
      bool compatible = true;
      for (int v = 1; v <= m; ++v) {
        const bool bit = (mask >> (v - 1)) & 1;
        if ((rho.at(v) == RVal::One && !bit) || (rho.at(v) == RVal::Zero && bit)) {
          compatible = false;
          break;
        }
      }
      if (!compatible) continue;
      ++total;
      for (int v = 0; v < m; ++v) assignment[v] = (mask >> v) & 1;
      if (eval_circuit(c, assignment)) ++hits;
    }
    if (total == 0) continue;  // no compatible assignment at this weight

    // The conditional law puts weight i - ones(rho) uniformly on the stars, so
    // the weight probability must be taken over the star variables alone.
    const Circuit on_stars = project_to_stars(apply_restriction(c, rho), rho);
    const Rat via_restriction =
        exact_weight_probability(on_stars, i - static_cast<unsigned>(ones));
    CHECK(via_restriction == Rat::from_count(hits, total));
  }
}

TEST_CASE("levelling preserves every exact weight probability") {
  RngStream rng(864);
  for (int round = 0; round < 25; ++round) {
    RngStream r = rng.branch(round);
    const std::uint32_t m = 3 + static_cast<std::uint32_t>(r.uniform_below(8));  // up to 10
    const Circuit c = random_circuit(r, m, 4);
    const LayeredCircuit layered = to_levelled(c);
    for (unsigned i = 0; i <= m; ++i) {
      CHECK(exact_weight_probability(c, i) == exact_weight_probability(layered.circuit, i));
    }
  }
}
