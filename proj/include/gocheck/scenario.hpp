#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gocheck/go.hpp"

namespace gocheck {

/// How parameters map to metric blocks and which subalgebra is the base k.
///   partition: so(n) with k = so(k1)+...+so(ks); params x_1..x_s, then x_ij (i<j)
///   flag:      su(n) with k = maximal torus; params t_1..t_{n-1} on a Q-orthogonal
///              torus basis, then x_ij on m_ij = span(A_ij, S_ij)
///   triple:    h in k in g given by label lists; params (x, y) for Q|h + x Q|u + y Q|p
///   subspace:  k read from a subspace file; params (x_k, x_m) for x_k Q|k + x_m Q|m
enum class Shape { partition, flag, triple, subspace };
std::string to_string(Shape s);
Shape parse_shape(const std::string& s);

enum class Check { validate, regular, weakly_regular, equivariance, go, natred, split, sweep };
std::string to_string(Check c);
Check parse_check(const std::string& s);

struct GridSpec {
  std::size_t tuples = 200;
  long max_param = 30;
};

struct ScenarioSpec {
  std::string name = "adhoc";
  std::string description;
  // algebra
  std::string family = "so";  // so | su | sp, ignored when table_path is set
  std::size_t n = 6;
  std::string table_path;
  // subgroup and metric shape
  Shape shape = Shape::partition;
  std::vector<std::size_t> partition{2, 2, 2};
  std::vector<std::string> h_labels;  // triple shape
  std::vector<std::string> k_labels;  // triple shape
  std::string subspace_path;          // subspace shape
  // metric
  std::vector<Rational> params;  // single metric (empty: all ones)
  std::string blockspec_text;    // overrides params when set
  GridSpec grid;
  // execution
  std::vector<Check> checks;
  Backend backend = Backend::exact;
  ToleranceProfile tol;
  std::uint64_t seed = 1;
  std::size_t samples = 64;  // random directions per go verdict
  std::size_t threads = 0;   // 0: hardware concurrency; never affects output
  std::map<std::string, std::string> expect;  // report key -> expected value
  double time_budget_seconds = 0;             // informational
};

/// Canonical key=value serialization (sorted, threads excluded).
std::vector<std::pair<std::string, std::string>> canonical_spec(const ScenarioSpec& spec);
/// Inverse of canonical_spec (keys without the "spec." prefix). Throws std::invalid_argument.
ScenarioSpec spec_from_fields(const std::map<std::string, std::string>& fields);
/// FNV-1a 64 over the canonical serialization, as 16 hex digits.
std::string spec_hash(const ScenarioSpec& spec);

std::vector<std::size_t> parse_partition(const std::string& text);
std::vector<Rational> parse_params(const std::string& text);
std::string format_params(const std::vector<Rational>& p);

enum class Status { pass, negative, error };
std::string to_string(Status s);
int exit_code(Status s);

struct Report {
  std::vector<std::pair<std::string, std::string>> fields;  // machine record, in order
  std::vector<std::string> human;                           // human summary lines
  Status status = Status::pass;
  void add(const std::string& key, const std::string& value) { fields.emplace_back(key, value); }
  std::optional<std::string> get(const std::string& key) const;
};

enum class ReportFormat { human, machine };
std::string emit_report(const Report& report, ReportFormat format);
/// Parses the machine format back into fields. Throws std::invalid_argument.
std::vector<std::pair<std::string, std::string>> parse_machine_report(const std::string& text);

/// Per-tuple result of the equivalence sweep.
struct TupleResult {
  std::vector<Rational> params;
  std::string pattern;
  std::size_t kprime_dim = 0;
  bool dazi = false;
  GoVerdictKind go = GoVerdictKind::not_disproved;
  std::size_t evaluated = 0;
  std::size_t certificates = 0;
  bool certificates_replay = true;
  std::optional<Vector<Rational>> counterexample;
  std::size_t rank_matrix = 0;
  std::size_t rank_augmented = 0;
  bool counterexample_replays = true;
  std::string counterexample_source;
  std::optional<bool> normalizer_equivariant;  // NotDisproved only
  std::optional<bool> split_holds;             // NotDisproved only
  std::string split_label;
  std::optional<bool> natred_condition;        // dazi true only
  std::optional<bool> forms_agree;             // coset vs geodesic-lemma verdicts
  std::string error;
  bool agree() const { return (go == GoVerdictKind::not_disproved) == dazi; }
};

struct SweepSummary {
  std::size_t tuples = 0;
  std::size_t not_disproved = 0;
  std::size_t disproved = 0;
  std::size_t dazi_true = 0;
  std::size_t disagreements = 0;
  std::size_t replay_failures = 0;
  std::size_t normalizer_violations = 0;
  std::size_t split_violations = 0;
  std::size_t natred_violations = 0;
  std::size_t form_disagreements = 0;
  std::size_t pair_misses = 0;  // disproved only by a random direction (informational)
  std::size_t errors = 0;
  bool clean() const {
    return disagreements + replay_failures + normalizer_violations + split_violations + natred_violations +
               form_disagreements + errors ==
           0;
  }
};

struct SweepResult {
  std::vector<TupleResult> tuples;
  SweepSummary summary;
};

/// Seeded parameter tuples: the first half generic (distinct values and
/// near-misses of the structured patterns), the second half on the patterns.
std::vector<std::pair<std::vector<Rational>, std::string>> grid_tuples(const ScenarioSpec& spec);

/// Runs the equivalence sweep over grid_tuples(spec), fanned out over threads
/// and merged by tuple index.
SweepResult run_sweep(const ScenarioSpec& spec);

/// Executes the requested checks in dependency order and builds the report.
/// Throws std::invalid_argument on invalid input.
Report run_check(const ScenarioSpec& spec);

/// Built-in scenarios.
std::vector<ScenarioSpec> scenario_catalog();
std::optional<ScenarioSpec> find_scenario(const std::string& name);

struct ReplayResult {
  std::size_t counterexamples = 0;
  std::size_t verified = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Re-verifies every embedded counterexample in exact arithmetic.
ReplayResult replay_report(const std::string& machine_text);

}  // namespace gocheck
