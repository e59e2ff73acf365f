#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeroone/formula.hpp"
#include "zeroone/models.hpp"
#include "zeroone/rational.hpp"
#include "zeroone/rng.hpp"

namespace zeroone {

enum class ModelKind { Graph, Function };

/// One CSV line of every report: estimates carry binomial stderr, delta rows
/// the combined stderr of their two sides.
struct EstimateRow {
  std::string experiment;
  int n = 0;
  std::string quantity;  // f(n) | f(n+1) | g(n) | g(n+1) | delta, plus survey keys
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

std::string csv_header();
std::string render_csv(const std::vector<EstimateRow>& rows);
void emit_csv(const std::vector<EstimateRow>& rows, const std::string& path);

/// Deterministic shortest-roundtrip-ish formatting used in all CSV output.
std::string format_double(double value);

/// f_A(n): mean of the oracle over `trials` independent random models of size
/// n (graph G(n,p) or uniform total binary function). Trial j draws from
/// seed-branch j, so results do not depend on the thread count.
EstimateRow estimate_f(const Sentence& s, int n, std::uint64_t trials, ModelKind kind, double p,
                       std::uint64_t seed, int threads = 1);

struct CoupledG {
  EstimateRow row;
  bool exact = false;
  Rat exact_value;
  double undefined_fraction = 0.0;  // function hosts: share of rejected subsets
  std::uint64_t hits = 0;           // Monte Carlo mode: accepted subsets satisfying A
  std::uint64_t accepted = 0;       // Monte Carlo mode: subsets with defined projection
  std::uint64_t rejected = 0;       // Monte Carlo mode: subsets conditioned away
};

/// g_{G,A}(i) through the circuit path: compile once against the host, then
/// the weight-i acceptance probability (exact enumeration or Monte Carlo).
CoupledG coupled_g(const Sentence& s, const OrderedGraph& host, unsigned i, bool exact,
                   std::uint64_t mc_trials, std::uint64_t seed);

/// Function-host variant conditions on totally defined projections: rejected
/// subsets are recounted into undefined_fraction, estimates average over the
/// accepted ones only.
CoupledG coupled_g(const Sentence& s, const TernaryFunction& host, unsigned i, bool exact,
                   std::uint64_t mc_trials, std::uint64_t seed);

/// How the coupled side turns a host into a g estimate. ExactPerHost averages
/// the exact weight-i probability over hosts (the richer report, but it
/// resolves rare events an equally sized direct sample cannot, so its stated
/// stderr is not comparable when the estimates pin to 0 or 1). McPerHost draws
/// subsets per host and pools them, making both sides of the identity check
/// identically distributed Bernoulli estimators of the same scalar.
enum class SubsetMode { ExactPerHost, McPerHost };

struct CouplingSide {
  EstimateRow direct;   // f(i) sampled on size-i models
  EstimateRow coupled;  // E_G[g_G(i)] averaged over random hosts on [2n+1]
  double difference = 0.0;
  double combined_stderr = 0.0;
  bool within_3sigma = false;
  double mean_undefined_fraction = 0.0;  // function model only
};

struct CouplingReport {
  int n = 0;
  CouplingSide at_n;
  CouplingSide at_n_plus_1;
  std::vector<EstimateRow> rows;
};

/// The implemented content of the coupling: both sides estimate the same
/// scalar, so their gap is judged against the combined standard error.
CouplingReport coupling_identity_check(const Sentence& s, int n, std::uint64_t host_trials,
                                       std::uint64_t direct_trials, ModelKind kind, double p,
                                       std::uint64_t seed, int threads = 1,
                                       SubsetMode subset_mode = SubsetMode::McPerHost,
                                       std::uint64_t subsets_per_host = 1);

struct ScanSummary {
  double first_abs_delta = 0.0;
  double last_abs_delta = 0.0;
  double flag_threshold = 0.0;
  bool trend_flagged = false;       // diagnostic only, not a claim from the theory
  bool alternation_flagged = false; // parity-like sign-flipping deltas above 4*stderr
};

/// True when the deltas flip sign at every step and every magnitude clears
/// 4x its standard error - the signature a parity-like non-FO property would
/// leave. Needs at least three points.
bool detect_alternation(const std::vector<double>& deltas, const std::vector<double>& stderrs);

struct ScanResult {
  std::vector<EstimateRow> rows;
  ScanSummary summary;
};

/// f(n), f(n+1) and their difference for each n, with paired seed branches.
ScanResult delta_scan(const Sentence& s, const std::vector<int>& ns, std::uint64_t trials,
                      ModelKind kind, double p, std::uint64_t seed, int threads = 1);

}  // namespace zeroone
