#include "zeroone/models.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace zeroone {

std::size_t OrderedGraph::edge_count() const {
  std::size_t count = 0;
  for (int i = 1; i <= m_; ++i) {
    for (int j = i + 1; j <= m_; ++j) {
      if (adjacent(i, j)) ++count;
    }
  }
  return count;
}

PartialBinaryFunction::PartialBinaryFunction(std::vector<int> domain,
                                             std::vector<std::int32_t> table)
    : domain_(std::move(domain)), table_(std::move(table)) {
  if (table_.size() != domain_.size() * domain_.size()) {
    throw std::invalid_argument("partial function table size mismatch");
  }
  for (auto v : table_) {
    if (v == 0) {
      ++undefined_count_;
    } else if (!std::binary_search(domain_.begin(), domain_.end(), v)) {
      throw std::invalid_argument("partial function value outside its domain");
    }
  }
}

BinaryFunctionTable PartialBinaryFunction::relabelled() const {
  if (!totally_defined()) {
    throw PartialModelError("partial function has undefined entries; condition on total definedness");
  }
  BinaryFunctionTable out;
  out.m = size();
  out.table.resize(table_.size());
  for (std::size_t idx = 0; idx < table_.size(); ++idx) {
    const auto it = std::lower_bound(domain_.begin(), domain_.end(), table_[idx]);
    out.table[idx] = static_cast<std::int32_t>(it - domain_.begin()) + 1;
  }
  return out;
}

std::size_t Restriction::count(RVal v) const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), v));
}

std::vector<int> Restriction::star_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == RVal::Star) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

bool Restriction::extends(const Restriction& rho) const {
  if (host_size() != rho.host_size()) return false;
  for (int i = 1; i <= host_size(); ++i) {
    if (at(i) != rho.at(i) && rho.at(i) != RVal::Star) return false;
  }
  return true;
}

Restriction Restriction::merged_with(const Restriction& rho_prime) const {
  if (host_size() != rho_prime.host_size()) {
    throw std::invalid_argument("restriction host size mismatch");
  }
  Restriction out = *this;
  for (int i = 1; i <= host_size(); ++i) {
    if (rho_prime.at(i) != RVal::Star) {
      if (out.at(i) != RVal::Star && out.at(i) != rho_prime.at(i)) {
        throw std::invalid_argument("merge conflicts with a decided value");
      }
      out.set(i, rho_prime.at(i));
    }
  }
  return out;
}

OrderedGraph sample_graph(int m, double p, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("sample_graph: m must be >= 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_graph: p must be in [0,1]");
  OrderedGraph g(m);
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      g.set_edge(i, j, rng.bernoulli(p));
    }
  }
  return g;
}

SubsetSelection sample_subset_exact(int m, int i, RngStream& rng) {
  if (i < 0 || i > m) throw std::invalid_argument("sample_subset_exact: need 0 <= i <= m");
  std::vector<int> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 1);
  rng.shuffle_prefix(pool, static_cast<std::size_t>(i));
  SubsetSelection s;
  s.host_size = m;
  s.members.assign(pool.begin(), pool.begin() + i);
  std::sort(s.members.begin(), s.members.end());
  return s;
}

TernaryFunction sample_ternary_function(int m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("sample_ternary_function: m must be >= 1");
  TernaryFunction f;
  f.m = m;
  const std::size_t n = static_cast<std::size_t>(m) * m * m;
  f.table.resize(n);
  for (auto& v : f.table) {
    v = static_cast<std::int32_t>(rng.uniform_below(static_cast<std::uint64_t>(m))) + 1;
  }
  return f;
}

BinaryFunctionTable sample_binary_function(int m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("sample_binary_function: m must be >= 1");
  BinaryFunctionTable f;
  f.m = m;
  f.table.resize(static_cast<std::size_t>(m) * m);
  for (auto& v : f.table) {
    v = static_cast<std::int32_t>(rng.uniform_below(static_cast<std::uint64_t>(m))) + 1;
  }
  return f;
}

OrderedGraph induced_substructure(const OrderedGraph& g, const SubsetSelection& s) {
  if (s.host_size != g.size()) throw std::invalid_argument("subset drawn from a different host");
  const int k = static_cast<int>(s.members.size());
  OrderedGraph out(k);
  for (int a = 1; a <= k; ++a) {
    for (int b = a + 1; b <= k; ++b) {
      out.set_edge(a, b, g.adjacent(s.members[a - 1], s.members[b - 1]));
    }
  }
  return out;
}

PartialBinaryFunction project_function(const TernaryFunction& f, const SubsetSelection& s) {
  if (s.host_size != f.m) throw std::invalid_argument("subset drawn from a different host");
  if (s.members.empty()) throw std::invalid_argument("project_function: S must be nonempty");
  const std::size_t k = s.members.size();
  std::vector<std::uint8_t> in_s(static_cast<std::size_t>(f.m) + 1, 0);
  for (int v : s.members) in_s[static_cast<std::size_t>(v)] = 1;
  std::vector<std::int32_t> table(k * k, 0);
  for (std::size_t xi = 0; xi < k; ++xi) {
    for (std::size_t yi = 0; yi < k; ++yi) {
      const int x = s.members[xi];
      const int y = s.members[yi];
      for (int z = 1; z <= f.m; ++z) {  // minimal z whose image lands in S
        const int value = f.value(x, y, z);
        if (in_s[static_cast<std::size_t>(value)]) {
          table[xi * k + yi] = value;
          break;
        }
      }
    }
  }
  return PartialBinaryFunction(s.members, std::move(table));
}

// --- dump formats ----------------------------------------------------------

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) return true;
    }
    return false;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

int parse_int_field(std::string_view s, const char* what) {
  int value = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(std::string("bad integer for ") + what + ": '" + std::string(s) + "'");
  }
  return value;
}

int parse_size_header(std::string_view line) {
  if (line.substr(0, 2) != "m=") throw FormatError("expected 'm=<int>' header line");
  return parse_int_field(line.substr(2), "m");
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string dump_graph(const OrderedGraph& g) {
  std::ostringstream out;
  out << "m=" << g.size() << "\n";
  for (int i = 1; i <= g.size(); ++i) {
    for (int j = i + 1; j <= g.size(); ++j) {
      if (g.adjacent(i, j)) out << i << " " << j << "\n";
    }
  }
  return out.str();
}

OrderedGraph parse_graph_dump(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw FormatError("empty graph dump");
  OrderedGraph g(parse_size_header(line));
  while (reader.next(line)) {
    auto fields = split_fields(line);
    if (fields.size() != 2) throw FormatError("expected edge line 'i j'");
    const int i = parse_int_field(fields[0], "edge endpoint");
    const int j = parse_int_field(fields[1], "edge endpoint");
    if (i < 1 || j < 1 || i > g.size() || j > g.size() || i >= j) {
      throw FormatError("edge endpoints must satisfy 1 <= i < j <= m");
    }
    g.set_edge(i, j, true);
  }
  return g;
}

std::string dump_ternary(const TernaryFunction& f) {
  std::ostringstream out;
  out << "m=" << f.m << "\n";
  for (int x = 1; x <= f.m; ++x) {
    for (int y = 1; y <= f.m; ++y) {
      for (int z = 1; z <= f.m; ++z) {
        out << x << " " << y << " " << z << " -> " << f.value(x, y, z) << "\n";
      }
    }
  }
  return out.str();
}

TernaryFunction parse_ternary_dump(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw FormatError("empty ternary function dump");
  const int m = parse_size_header(line);
  TernaryFunction f;
  f.m = m;
  f.table.assign(static_cast<std::size_t>(m) * m * m, 0);
  std::size_t seen = 0;
  while (reader.next(line)) {
    auto fields = split_fields(line);
    if (fields.size() != 5 || fields[3] != "->") {
      throw FormatError("expected entry line 'x y z -> v'");
    }
    const int x = parse_int_field(fields[0], "x");
    const int y = parse_int_field(fields[1], "y");
    const int z = parse_int_field(fields[2], "z");
    const int v = parse_int_field(fields[4], "v");
    if (x < 1 || y < 1 || z < 1 || v < 1 || x > m || y > m || z > m || v > m) {
      throw FormatError("ternary entry out of range");
    }
    f.table[((static_cast<std::size_t>(x - 1) * m) + (y - 1)) * static_cast<std::size_t>(m) +
            (z - 1)] = v;
    ++seen;
  }
  if (seen != f.table.size()) throw FormatError("ternary dump is missing entries");
  return f;
}

std::string dump_binary_function(const BinaryFunctionTable& f) {
  std::ostringstream out;
  out << "m=" << f.m << "\n";
  for (int x = 1; x <= f.m; ++x) {
    for (int y = 1; y <= f.m; ++y) {
      out << x << " " << y << " -> " << f.value(x, y) << "\n";
    }
  }
  return out.str();
}

BinaryFunctionTable parse_binary_function_dump(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw FormatError("empty binary function dump");
  const int m = parse_size_header(line);
  BinaryFunctionTable f;
  f.m = m;
  f.table.assign(static_cast<std::size_t>(m) * m, 0);
  std::size_t seen = 0;
  while (reader.next(line)) {
    auto fields = split_fields(line);
    if (fields.size() != 4 || fields[2] != "->") {
      throw FormatError("expected entry line 'x y -> v'");
    }
    const int x = parse_int_field(fields[0], "x");
    const int y = parse_int_field(fields[1], "y");
    const int v = parse_int_field(fields[3], "v");
    if (x < 1 || y < 1 || v < 1 || x > m || y > m || v > m) {
      throw FormatError("binary entry out of range");
    }
    f.table[static_cast<std::size_t>(x - 1) * m + (y - 1)] = v;
    ++seen;
  }
  if (seen != f.table.size()) throw FormatError("binary function dump is missing entries");
  return f;
}

}  // namespace zeroone
