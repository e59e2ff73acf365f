#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zeroone/errors.hpp"
#include "zeroone/rng.hpp"

namespace zeroone {

/// Simple graph on the ordered vertex set 1 < 2 < ... < m. Immutable after
/// construction apart from set_edge during building.
class OrderedGraph {
 public:
  explicit OrderedGraph(int m) : m_(m), adj_(static_cast<std::size_t>(m) * m, 0) {
    if (m < 0) throw std::invalid_argument("graph size must be >= 0");
  }

  int size() const { return m_; }

  bool adjacent(int i, int j) const {
    if (i == j) return false;
    return adj_[index(i, j)] != 0;
  }

  void set_edge(int i, int j, bool present) {
    if (i == j) throw std::invalid_argument("no self-loops");
    adj_[index(i, j)] = present;
    adj_[index(j, i)] = present;
  }

  std::size_t edge_count() const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * m_ + static_cast<std::size_t>(j - 1);
  }

  int m_;
  std::vector<std::uint8_t> adj_;
};

/// Three-place function [m]^3 -> [m], the host object of the function model.
struct TernaryFunction {
  int m = 0;
  std::vector<std::int32_t> table;  // m^3 entries in 1..m, x-major then y then z

  int value(int x, int y, int z) const {
    const auto mm = static_cast<std::size_t>(m);
    return table[((static_cast<std::size_t>(x - 1) * mm) + (y - 1)) * mm + (z - 1)];
  }
};

/// Total two-place function [m]^2 -> [m]; the object the function-model oracle
/// evaluates sentences on.
struct BinaryFunctionTable {
  int m = 0;
  std::vector<std::int32_t> table;  // m^2 entries in 1..m, x-major

  int value(int x, int y) const {
    return table[static_cast<std::size_t>(x - 1) * m + (y - 1)];
  }
};

/// Partial two-place function on a subset S of the host universe. Entries keep
/// host labels; 0 marks "undefined".
class PartialBinaryFunction {
 public:
  PartialBinaryFunction(std::vector<int> domain, std::vector<std::int32_t> table);

  const std::vector<int>& domain() const { return domain_; }
  int size() const { return static_cast<int>(domain_.size()); }

  /// Host label at position (x, y), 1-based positions into the domain; 0 if undefined.
  int value_at(int x_pos, int y_pos) const {
    return table_[static_cast<std::size_t>(x_pos - 1) * domain_.size() + (y_pos - 1)];
  }

  bool totally_defined() const { return undefined_count_ == 0; }
  std::size_t undefined_count() const { return undefined_count_; }

  /// Order-preserving relabelling onto [|S|]; PartialModelError if any entry undefined.
  BinaryFunctionTable relabelled() const;

 private:
  std::vector<int> domain_;           // sorted host labels
  std::vector<std::int32_t> table_;   // |S|^2 entries, host labels or 0
  std::size_t undefined_count_ = 0;
};

/// A subset of [m] stored sorted; relabelling is order-preserving by position.
struct SubsetSelection {
  int host_size = 0;
  std::vector<int> members;  // strictly increasing

  std::vector<std::uint8_t> indicator() const {
    std::vector<std::uint8_t> z(host_size, 0);
    for (int v : members) z[static_cast<std::size_t>(v - 1)] = 1;
    return z;
  }
};

enum class RVal : std::uint8_t { Zero = 0, One = 1, Star = 2 };

/// Partial assignment [m] -> {0, 1, *}.
class Restriction {
 public:
  explicit Restriction(int m) : values_(static_cast<std::size_t>(m), RVal::Star) {}

  int host_size() const { return static_cast<int>(values_.size()); }
  RVal at(int i) const { return values_[static_cast<std::size_t>(i - 1)]; }
  void set(int i, RVal v) { values_[static_cast<std::size_t>(i - 1)] = v; }

  std::size_t count(RVal v) const;
  std::size_t star_count() const { return count(RVal::Star); }
  bool balanced() const { return count(RVal::Zero) == count(RVal::One); }

  std::vector<int> star_positions() const;

  /// Extension in the restriction order: rho' differs from rho only on stars of rho.
  bool extends(const Restriction& rho) const;

  /// Overlays rho_prime's decided values on this restriction's stars.
  Restriction merged_with(const Restriction& rho_prime) const;

 private:
  std::vector<RVal> values_;
};

// --- samplers ------------------------------------------------------------

/// G(m, p) on the ordered set [m]: each unordered pair an edge independently.
OrderedGraph sample_graph(int m, double p, RngStream& rng);

/// Uniform over the C(m, i) subsets of size exactly i (partial Fisher-Yates, then sort).
SubsetSelection sample_subset_exact(int m, int i, RngStream& rng);

/// Every entry of the m^3 table independent uniform on [m].
TernaryFunction sample_ternary_function(int m, RngStream& rng);

/// Every entry of the m^2 table independent uniform on [m].
BinaryFunctionTable sample_binary_function(int m, RngStream& rng);

// --- derived structures ---------------------------------------------------

/// Vertex-induced subgraph relabelled onto [|S|] preserving order.
OrderedGraph induced_substructure(const OrderedGraph& g, const SubsetSelection& s);

/// F*_S(x,y) = F*(x,y,z) for the minimal z with F*(x,y,z) in S; no such z
/// leaves the entry undefined. S must be nonempty.
PartialBinaryFunction project_function(const TernaryFunction& f, const SubsetSelection& s);

// --- fixture dump formats ---------------------------------------------------

std::string dump_graph(const OrderedGraph& g);
OrderedGraph parse_graph_dump(std::string_view text);

std::string dump_ternary(const TernaryFunction& f);
TernaryFunction parse_ternary_dump(std::string_view text);

std::string dump_binary_function(const BinaryFunctionTable& f);
BinaryFunctionTable parse_binary_function_dump(std::string_view text);

}  // namespace zeroone
