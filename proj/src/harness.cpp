#include "zeroone/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "zeroone/circuit.hpp"
#include "zeroone/parallel.hpp"
#include "zeroone/semantics.hpp"
#include "zeroone/stats.hpp"
#include "zeroone/weight_prob.hpp"

namespace zeroone {

std::string csv_header() { return "experiment,n,quantity,estimate,stderr,trials,seed"; }

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string render_csv(const std::vector<EstimateRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& row : rows) {
    out += csv_quote(row.experiment);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += csv_quote(row.quantity);
    out += ',';
    out += format_double(row.estimate);
    out += ',';
    out += format_double(row.stderr_);
    out += ',';
    out += std::to_string(row.trials);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<EstimateRow>& rows, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for writing: " + path);
  file << render_csv(rows);
  if (!file) throw IoError("write failed: " + path);
}

EstimateRow estimate_f(const Sentence& s, int n, std::uint64_t trials, ModelKind kind, double p,
                       std::uint64_t seed, int threads) {
  if (n < 0) throw std::invalid_argument("estimate_f: n must be >= 0");
  if (trials == 0) throw std::invalid_argument("estimate_f: trials must be >= 1");
  EstimateRow row;
  row.experiment = "estimate_f";
  row.n = n;
  row.quantity = "f(n)";
  row.trials = trials;
  row.seed = seed;

  if (n == 0) {
    // Empty universe: every trial evaluates the same model.
    bool value = false;
    if (kind == ModelKind::Graph) {
      value = eval_graph_sentence(OrderedGraph(0), s);
    } else {
      value = eval_function_sentence(BinaryFunctionTable{0, {}}, s);
    }
    row.estimate = value ? 1.0 : 0.0;
    row.stderr_ = 0.0;
    return row;
  }

  const RngStream rng(seed);
  const int workers = threads > 1 ? threads : 1;
  std::vector<std::uint64_t> chunk_hits(static_cast<std::size_t>(workers), 0);
  parallel_for_chunks(trials, workers,
                      [&](std::size_t chunk, std::uint64_t begin, std::uint64_t end) {
    std::uint64_t hits = 0;
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      RngStream trial_rng = rng.branch(trial);
      if (kind == ModelKind::Graph) {
        const OrderedGraph g = sample_graph(n, p, trial_rng);
        if (eval_graph_sentence(g, s)) ++hits;
      } else {
        const BinaryFunctionTable f = sample_binary_function(n, trial_rng);
        if (eval_function_sentence(f, s)) ++hits;
      }
    }
    chunk_hits[chunk] += hits;
  });
  std::uint64_t hits = 0;
  for (auto h : chunk_hits) hits += h;
  row.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  row.stderr_ = stderr_bernoulli(row.estimate, trials);
  return row;
}

namespace {

std::string quantity_for_weight(int n, unsigned i, const char* prefix) {
  if (static_cast<int>(i) == n) return std::string(prefix) + "(n)";
  if (static_cast<int>(i) == n + 1) return std::string(prefix) + "(n+1)";
  return std::string(prefix) + "(i=" + std::to_string(i) + ")";
}

}  // namespace

CoupledG coupled_g(const Sentence& s, const OrderedGraph& host, unsigned i, bool exact,
                   std::uint64_t mc_trials, std::uint64_t seed) {
  const Circuit circuit = compile_graph_sentence(host, s);
  const int n = (host.size() - 1) / 2;
  CoupledG out;
  out.row.experiment = "coupled_g";
  out.row.n = n;
  out.row.quantity = quantity_for_weight(n, i, "g");
  out.row.seed = seed;
  if (exact) {
    out.exact = true;
    out.exact_value = exact_weight_probability(circuit, i);
    out.row.estimate = out.exact_value.to_double();
    out.row.stderr_ = 0.0;
    out.row.trials = 0;
  } else {
    const McEstimate est = mc_weight_probability(circuit, i, mc_trials, RngStream(seed));
    out.row.estimate = est.estimate;
    out.row.stderr_ = est.stderr_;
    out.row.trials = est.trials;
    out.hits = est.hits;
    out.accepted = est.trials;
  }
  return out;
}

CoupledG coupled_g(const Sentence& s, const TernaryFunction& host, unsigned i, bool exact,
                   std::uint64_t mc_trials, std::uint64_t seed) {
  const Circuit circuit = compile_function_sentence(host, s);
  const unsigned m = static_cast<unsigned>(host.m);
  const int n = (host.m - 1) / 2;
  if (i > m) throw std::invalid_argument("subset size exceeds the host");
  CoupledG out;
  out.row.experiment = "coupled_g";
  out.row.n = n;
  out.row.quantity = quantity_for_weight(n, i, "g");
  out.row.seed = seed;

  BatchEvaluator evaluator(circuit);
  AssignmentBlock block(circuit.num_inputs);
  std::uint64_t out_row[kBlockWords];
  std::uint64_t accepted = 0;
  std::uint64_t accepted_true = 0;
  std::uint64_t rejected = 0;

  // Columns hold only subsets whose projection is totally defined; the
  // rejected ones are recounted into the conditioning rate.
  std::size_t column = 0;
  auto flush = [&]() {
    if (column == 0) return;
    evaluator.eval_block(block, out_row);
    for (std::size_t w = 0; w < kBlockWords; ++w) {
      std::uint64_t bits = out_row[w];
      const std::size_t lo = w * 64;
      if (column <= lo) {
        bits = 0;
      } else if (column < lo + 64) {
        bits &= (~std::uint64_t{0}) >> (64 - (column - lo));
      }
      accepted_true += static_cast<std::uint64_t>(__builtin_popcountll(bits));
    }
    block.clear();
    column = 0;
  };
  auto consider = [&](const SubsetSelection& subset) {
    const PartialBinaryFunction projected = project_function(host, subset);
    if (!projected.totally_defined()) {
      ++rejected;
      return;
    }
    ++accepted;
    for (int v : subset.members) block.set(static_cast<std::uint32_t>(v), column);
    if (++column == kBlockBits) flush();
  };

  if (exact) {
    if (i == 0) throw std::invalid_argument("conditioned g needs a nonempty subset");
    const std::uint64_t total = binomial(m, i);
    if (total > kExactEnumerationCap) {
      throw TooLargeError("C(m,i) exceeds the exact-enumeration cap; use Monte Carlo");
    }
    RevolvingDoorCombinations combos(m, i);
    std::vector<unsigned> combo;
    SubsetSelection subset;
    subset.host_size = host.m;
    while (combos.next(combo)) {
      subset.members.assign(combo.begin(), combo.end());
      for (auto& v : subset.members) ++v;
      std::sort(subset.members.begin(), subset.members.end());
      consider(subset);
    }
    flush();
    out.exact = true;
    out.exact_value = accepted == 0 ? Rat(0) : Rat::from_count(accepted_true, accepted);
    out.row.estimate = out.exact_value.to_double();
    out.row.stderr_ = 0.0;
    out.row.trials = 0;
    out.hits = accepted_true;
    out.accepted = accepted;
    out.rejected = rejected;
    out.undefined_fraction = total == 0 ? 0.0
                                        : static_cast<double>(rejected) / static_cast<double>(total);
  } else {
    RngStream rng(seed);
    for (std::uint64_t trial = 0; trial < mc_trials; ++trial) {
      RngStream trial_rng = rng.branch(trial);
      consider(sample_subset_exact(host.m, static_cast<int>(i), trial_rng));
    }
    flush();
    out.exact = false;
    out.row.trials = accepted;
    out.row.estimate =
        accepted == 0 ? 0.0 : static_cast<double>(accepted_true) / static_cast<double>(accepted);
    out.row.stderr_ = accepted == 0 ? 0.0 : stderr_bernoulli(out.row.estimate, accepted);
    out.hits = accepted_true;
    out.accepted = accepted;
    out.rejected = rejected;
    out.undefined_fraction =
        mc_trials == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(mc_trials);
  }
  return out;
}

namespace {

CouplingSide coupling_side(const Sentence& s, int n, unsigned i, std::uint64_t host_trials,
                           std::uint64_t direct_trials, ModelKind kind, double p,
                           const RngStream& rng, std::uint64_t seed, int threads,
                           SubsetMode subset_mode, std::uint64_t subsets_per_host) {
  CouplingSide side;
  const std::uint64_t direct_branch = 2 * static_cast<std::uint64_t>(i);
  const std::uint64_t host_branch = direct_branch + 1;

  side.direct = estimate_f(s, static_cast<int>(i), direct_trials, kind, p,
                           seed ^ (0x9e3779b97f4a7c15ULL * (direct_branch + 1)), threads);
  side.direct.experiment = "couple";
  side.direct.quantity = quantity_for_weight(n, i, "f");
  side.direct.seed = seed;

  const int m = 2 * n + 1;
  const RngStream host_rng = rng.branch(host_branch);
  const bool exact = subset_mode == SubsetMode::ExactPerHost;
  if (exact && binomial(static_cast<unsigned>(m), i) > kExactEnumerationCap) {
    throw TooLargeError("exact per-host g is infeasible at this size; use McPerHost");
  }
  if (!exact && subsets_per_host == 0) {
    throw std::invalid_argument("subsets_per_host must be >= 1");
  }

  std::vector<double> g_values(exact ? host_trials : 0, 0.0);
  std::vector<double> undefined(exact ? host_trials : 0, 0.0);
  std::vector<std::uint64_t> hits(exact ? 0 : host_trials, 0);
  std::vector<std::uint64_t> accepted(exact ? 0 : host_trials, 0);
  std::vector<std::uint64_t> rejected(exact ? 0 : host_trials, 0);
  const int workers = threads > 1 ? threads : 1;
  parallel_for_chunks(host_trials, workers,
                      [&](std::size_t, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t h = begin; h < end; ++h) {
      RngStream host_stream = host_rng.branch(h);
      CoupledG g;
      if (kind == ModelKind::Graph) {
        const OrderedGraph host = sample_graph(m, p, host_stream);
        g = coupled_g(s, host, i, exact, subsets_per_host, host_stream.next_u64());
      } else {
        const TernaryFunction host = sample_ternary_function(m, host_stream);
        g = coupled_g(s, host, i, exact, subsets_per_host, host_stream.next_u64());
      }
      if (exact) {
        g_values[h] = g.row.estimate;
        undefined[h] = g.undefined_fraction;
      } else {
        hits[h] = g.hits;
        accepted[h] = g.accepted;
        rejected[h] = g.rejected;
      }
    }
  });

  side.coupled.experiment = "couple";
  side.coupled.n = n;
  side.coupled.quantity = quantity_for_weight(n, i, "g");
  side.coupled.seed = seed;
  if (exact) {
    // Mean of per-host exact values; spread across hosts gives the stderr.
    double sum = 0.0;
    for (double v : g_values) sum += v;
    const double mean = sum / static_cast<double>(host_trials);
    double sq = 0.0;
    for (double v : g_values) sq += (v - mean) * (v - mean);
    const double sample_se =
        host_trials > 1 ? std::sqrt(sq / (static_cast<double>(host_trials) *
                                          (static_cast<double>(host_trials) - 1)))
                        : 0.0;
    double undef_sum = 0.0;
    for (double v : undefined) undef_sum += v;
    side.coupled.estimate = mean;
    side.coupled.stderr_ = sample_se;
    side.coupled.trials = host_trials;
    side.mean_undefined_fraction = undef_sum / static_cast<double>(host_trials);
  } else {
    // Pooled (host, subset) draws conditioned on definedness: iid Bernoulli
    // samples of the coupled law, directly comparable with the direct side.
    std::uint64_t pooled_hits = 0;
    std::uint64_t pooled_accepted = 0;
    std::uint64_t pooled_rejected = 0;
    for (std::uint64_t h = 0; h < host_trials; ++h) {
      pooled_hits += hits[h];
      pooled_accepted += accepted[h];
      pooled_rejected += rejected[h];
    }
    side.coupled.estimate = pooled_accepted == 0 ? 0.0
                                                 : static_cast<double>(pooled_hits) /
                                                       static_cast<double>(pooled_accepted);
    side.coupled.stderr_ = pooled_accepted == 0
                               ? 0.0
                               : stderr_bernoulli(side.coupled.estimate, pooled_accepted);
    side.coupled.trials = pooled_accepted;
    side.mean_undefined_fraction =
        pooled_accepted + pooled_rejected == 0
            ? 0.0
            : static_cast<double>(pooled_rejected) /
                  static_cast<double>(pooled_accepted + pooled_rejected);
  }

  side.difference = side.direct.estimate - side.coupled.estimate;
  side.combined_stderr = combined_stderr(side.direct.stderr_, side.coupled.stderr_);
  side.within_3sigma = std::fabs(side.difference) <= 3.0 * side.combined_stderr;
  return side;
}

}  // namespace

CouplingReport coupling_identity_check(const Sentence& s, int n, std::uint64_t host_trials,
                                       std::uint64_t direct_trials, ModelKind kind, double p,
                                       std::uint64_t seed, int threads, SubsetMode subset_mode,
                                       std::uint64_t subsets_per_host) {
  if (n < 1) throw std::invalid_argument("coupling check needs n >= 1");
  if (host_trials == 0 || direct_trials == 0) {
    throw std::invalid_argument("coupling check needs trials >= 1");
  }
  CouplingReport report;
  report.n = n;
  const RngStream rng(seed);
  report.at_n = coupling_side(s, n, static_cast<unsigned>(n), host_trials, direct_trials, kind, p,
                              rng, seed, threads, subset_mode, subsets_per_host);
  report.at_n_plus_1 = coupling_side(s, n, static_cast<unsigned>(n) + 1, host_trials,
                                     direct_trials, kind, p, rng, seed, threads, subset_mode,
                                     subsets_per_host);
  for (const auto* side : {&report.at_n, &report.at_n_plus_1}) {
    report.rows.push_back(side->direct);
    report.rows.push_back(side->coupled);
    EstimateRow diff;
    diff.experiment = "couple";
    diff.n = n;
    diff.quantity = "delta";
    diff.estimate = side->difference;
    diff.stderr_ = side->combined_stderr;
    diff.trials = direct_trials + host_trials;
    diff.seed = seed;
    report.rows.push_back(diff);
  }
  return report;
}

bool detect_alternation(const std::vector<double>& deltas, const std::vector<double>& stderrs) {
  if (deltas.size() < 3 || deltas.size() != stderrs.size()) return false;
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    if (std::fabs(deltas[j]) <= 4.0 * stderrs[j]) return false;
    if (j > 0 && deltas[j] * deltas[j - 1] >= 0.0) return false;
  }
  return true;
}

ScanResult delta_scan(const Sentence& s, const std::vector<int>& ns, std::uint64_t trials,
                      ModelKind kind, double p, std::uint64_t seed, int threads) {
  if (ns.empty()) throw std::invalid_argument("delta_scan: empty n range");
  ScanResult result;
  const RngStream rng(seed);
  std::vector<double> deltas;
  std::vector<double> delta_ses;
  for (int n : ns) {
    // Paired seeds: both sizes branch from one seed, independent streams.
    const std::uint64_t seed_lo = rng.branch(2 * static_cast<std::uint64_t>(n)).next_u64();
    const std::uint64_t seed_hi = rng.branch(2 * static_cast<std::uint64_t>(n) + 1).next_u64();
    EstimateRow at_n = estimate_f(s, n, trials, kind, p, seed_lo, threads);
    EstimateRow at_n1 = estimate_f(s, n + 1, trials, kind, p, seed_hi, threads);
    at_n.experiment = "scan";
    at_n.quantity = "f(n)";
    at_n.seed = seed;
    at_n1.experiment = "scan";
    at_n1.n = n;
    at_n1.quantity = "f(n+1)";
    at_n1.seed = seed;
    EstimateRow delta;
    delta.experiment = "scan";
    delta.n = n;
    delta.quantity = "delta";
    delta.estimate = at_n1.estimate - at_n.estimate;
    delta.stderr_ = combined_stderr(at_n.stderr_, at_n1.stderr_);
    delta.trials = 2 * trials;
    delta.seed = seed;
    result.rows.push_back(at_n);
    result.rows.push_back(at_n1);
    result.rows.push_back(delta);
    deltas.push_back(delta.estimate);
    delta_ses.push_back(delta.stderr_);
  }
  result.summary.first_abs_delta = std::fabs(deltas.front());
  result.summary.last_abs_delta = std::fabs(deltas.back());
  result.summary.flag_threshold =
      3.0 * combined_stderr(delta_ses.front(), delta_ses.back());
  result.summary.trend_flagged = result.summary.last_abs_delta >
                                 result.summary.first_abs_delta + result.summary.flag_threshold;
  result.summary.alternation_flagged = detect_alternation(deltas, delta_ses);
  return result;
}

}  // namespace zeroone
