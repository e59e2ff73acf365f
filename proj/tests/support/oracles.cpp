#include "support/oracles.hpp"

#include <bit>
#include <stdexcept>

#include "zeroone/semantics.hpp"

namespace zeroone::testsupport {

Rat exact_f_graph(const Sentence& s, int n) {
  if (n < 0 || n > 6) throw std::invalid_argument("graph enumeration supports n <= 6");
  const int edges = n * (n - 1) / 2;
  const std::uint64_t total = std::uint64_t{1} << edges;
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    OrderedGraph g(n);
    int bit = 0;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j, ++bit) {
        if ((mask >> bit) & 1) g.set_edge(i, j, true);
      }
    }
    if (eval_graph_sentence(g, s)) ++hits;
  }
  return Rat::from_count(hits, total);
}

Rat exact_f_function(const Sentence& s, int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("table enumeration supports 1 <= n <= 3");
  const int cells = n * n;
  std::uint64_t total = 1;
  for (int c = 0; c < cells; ++c) total *= static_cast<std::uint64_t>(n);
  std::uint64_t hits = 0;
  BinaryFunctionTable f;
  f.m = n;
  f.table.assign(static_cast<std::size_t>(cells), 1);
  for (std::uint64_t index = 0; index < total; ++index) {
    std::uint64_t rest = index;  // mixed-radix digits are the table entries
    for (int c = 0; c < cells; ++c) {
      f.table[static_cast<std::size_t>(c)] = static_cast<std::int32_t>(rest % n) + 1;
      rest /= static_cast<std::uint64_t>(n);
    }
    if (eval_function_sentence(f, s)) ++hits;
  }
  return Rat::from_count(hits, total);
}

std::vector<SubsetSelection> all_subsets_of_size(int m, int i) {
  if (m < 0 || m > 24) throw std::invalid_argument("subset enumeration supports m <= 24");
  std::vector<SubsetSelection> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    if (std::popcount(mask) != i) continue;
    SubsetSelection s;
    s.host_size = m;
    for (int v = 1; v <= m; ++v) {
      if ((mask >> (v - 1)) & 1) s.members.push_back(v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Rat subset_average_graph(const OrderedGraph& g, const Sentence& s, int i) {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  for (const auto& subset : all_subsets_of_size(g.size(), i)) {
    ++total;
    if (eval_graph_sentence(induced_substructure(g, subset), s)) ++hits;
  }
  return Rat::from_count(hits, total);
}

ConditionedAverage subset_average_function(const TernaryFunction& f, const Sentence& s, int i) {
  ConditionedAverage out;
  std::uint64_t hits = 0;
  for (const auto& subset : all_subsets_of_size(f.m, i)) {
    ++out.total;
    const PartialBinaryFunction projected = project_function(f, subset);
    if (!projected.totally_defined()) continue;
    ++out.defined;
    if (eval_function_sentence(projected, s)) ++hits;
  }
  out.conditioned = out.defined == 0 ? Rat(0) : Rat::from_count(hits, out.defined);
  return out;
}

}  // namespace zeroone::testsupport
