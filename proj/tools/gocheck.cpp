// gocheck: command-line front end for the verifier library.
// Exit codes: 0 pass/consistent, 2 negative verdict, 1 usage or validation error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gocheck/scenario.hpp"

using namespace gocheck;

namespace {

struct Options {
  std::string family = "so";
  std::size_t n = 6;
  std::string table;
  std::string shape = "partition";
  std::string partition = "2,2,2";
  std::string h_labels, k_labels, subspace;
  std::string params;
  std::string blockspec;
  std::string backend = "exact";
  std::uint64_t seed = 1;
  std::size_t samples = 64;
  std::size_t tuples = 200;
  long max_param = 30;
  std::size_t threads = 0;
  ToleranceProfile tol;
  std::string format = "human";
  std::string output;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void algebra_flags(CLI::App* app, Options& o) {
  app->add_option("--family", o.family, "so | su | sp");
  app->add_option("--n", o.n, "family index");
  app->add_option("--table", o.table, "structure table file (overrides --family/--n)");
}

void common_flags(CLI::App* app, Options& o) {
  algebra_flags(app, o);
  app->add_option("--shape", o.shape, "partition | flag | triple | subspace");
  app->add_option("--partition", o.partition, "block sizes, e.g. 2,2,3");
  app->add_option("--h-labels", o.h_labels, "triple shape: basis labels spanning h");
  app->add_option("--k-labels", o.k_labels, "triple shape: basis labels spanning k");
  app->add_option("--subspace", o.subspace, "subspace shape: file with the subalgebra k");
  app->add_option("--params", o.params, "comma-separated metric parameters (p/q allowed)");
  app->add_option("--blockspec", o.blockspec, "BlockSpec file (overrides --params)");
  app->add_option("--backend", o.backend, "exact | float");
  app->add_option("--seed", o.seed, "sampling seed");
  app->add_option("--samples", o.samples, "random directions per geodesic orbit verdict");
  app->add_option("--tol-rank", o.tol.rank_epsilon, "float backend: relative rank threshold");
  app->add_option("--tol-residual", o.tol.residual_epsilon, "float backend: residual threshold");
  app->add_option("--tol-eigen", o.tol.eigen_gap_epsilon, "float backend: eigenvalue clustering gap");
  app->add_option("--format", o.format, "human | machine")->check(CLI::IsMember({"human", "machine"}));
  app->add_option("--output", o.output, "also write the machine report to this file");
}

ScenarioSpec spec_from(const Options& o, std::vector<Check> checks) {
  ScenarioSpec s;
  s.family = o.family;
  s.n = o.n;
  s.table_path = o.table;
  s.shape = parse_shape(o.shape);
  s.partition.clear();
  if (s.shape == Shape::partition) s.partition = parse_partition(o.partition);
  auto labels = [](const std::string& t) {
    std::vector<std::string> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  s.h_labels = labels(o.h_labels);
  s.k_labels = labels(o.k_labels);
  s.subspace_path = o.subspace;
  if (!o.params.empty()) s.params = parse_params(o.params);
  if (!o.blockspec.empty()) s.blockspec_text = slurp(o.blockspec);
  s.backend = parse_backend(o.backend);
  s.seed = o.seed;
  s.samples = o.samples;
  s.tol = o.tol;
  s.grid.tuples = o.tuples;
  s.grid.max_param = o.max_param;
  s.threads = o.threads;
  s.checks = std::move(checks);
  return s;
}

int emit(const Report& r, const Options& o) {
  std::cout << emit_report(r, o.format == "machine" ? ReportFormat::machine : ReportFormat::human);
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw std::invalid_argument("cannot write " + o.output);
    out << emit_report(r, ReportFormat::machine);
  }
  return exit_code(r.status);
}

int validate_algebra(const Options& o) {
  ScenarioSpec s;
  StructureAlgebra g;
  if (!o.table.empty()) {
    std::ifstream in(o.table);
    if (!in) throw std::invalid_argument("cannot read " + o.table);
    g = ingest_structure_table(in);
  } else {
    g = build_classical(o.family, o.n);
  }
  g.validate();
  const auto kf = killing_form(g);
  std::cout << "algebra: " << g.name() << ", dim " << g.dim() << "\n";
  std::cout << "antisymmetry: ok\njacobi: ok\n";
  std::cout << "killing form negative definite: " << (kf.q_positive_definite ? "yes" : "no") << "\n";
  if (auto v = ad_invariance_violation<Rational>(g, kf.q)) {
    const auto [k, i, j] = *v;
    std::cout << "ad-invariance: violated at (" << k + 1 << ", " << i + 1 << ", " << j + 1 << ")\n";
    return 1;
  }
  std::cout << "ad-invariance: ok\n";
  return kf.q_positive_definite ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gocheck: geodesic orbit and natural reductivity verifier for compact Lie algebras"};
  app.require_subcommand(1);
  Options o;
  std::string check_kind, scenario_name, report_path;

  auto* algebra = app.add_subcommand("algebra", "structure tables");
  algebra->require_subcommand(1);
  auto* validate = algebra->add_subcommand("validate", "antisymmetry, Jacobi identity, ad-invariance of -Killing");
  algebra_flags(validate, o);
  auto* exporter = algebra->add_subcommand("export", "print the structure table of a built-in algebra");
  algebra_flags(exporter, o);

  auto* check = app.add_subcommand("check", "run one check on one metric");
  check->add_option("kind", check_kind, "regular | weakly-regular | equivariance | go | natred | split | all")
      ->required()
      ->check(CLI::IsMember({"regular", "weakly-regular", "equivariance", "go", "natred", "split", "all"}));
  common_flags(check, o);

  auto* sweep = app.add_subcommand("sweep", "parameter sweeps");
  sweep->require_subcommand(1);
  auto* equivalence = sweep->add_subcommand("equivalence", "geodesic orbit vs block form over a seeded grid");
  common_flags(equivalence, o);
  equivalence->add_option("--tuples", o.tuples, "grid size");
  equivalence->add_option("--max-param", o.max_param, "parameters are drawn from 1..max");
  equivalence->add_option("--threads", o.threads, "worker threads (0: all cores); output does not depend on it");

  auto* scenario = app.add_subcommand("scenario", "built-in case studies");
  scenario->require_subcommand(1);
  auto* list = scenario->add_subcommand("list", "list built-in scenarios");
  auto* run = scenario->add_subcommand("run", "run a built-in scenario");
  run->add_option("name", scenario_name)->required();
  run->add_option("--seed", o.seed, "sampling seed");
  run->add_option("--backend", o.backend, "exact | float");
  run->add_option("--threads", o.threads, "worker threads");
  run->add_option("--format", o.format, "human | machine")->check(CLI::IsMember({"human", "machine"}));
  run->add_option("--output", o.output, "also write the machine report to this file");

  auto* replay = app.add_subcommand("replay", "re-verify every counterexample in a machine report");
  replay->add_option("report", report_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    o.tol.validate();
    if (validate->parsed()) return validate_algebra(o);
    if (exporter->parsed()) {
      std::cout << serialize_structure_table(build_classical(o.family, o.n));
      return 0;
    }
    if (check->parsed()) {
      std::vector<Check> checks;
      if (check_kind != "all") checks.push_back(parse_check(check_kind));
      return emit(run_check(spec_from(o, checks)), o);
    }
    if (equivalence->parsed()) return emit(run_check(spec_from(o, {Check::sweep})), o);
    if (list->parsed()) {
      for (const auto& s : scenario_catalog())
        std::cout << s.name << "  (budget " << s.time_budget_seconds << " s)  " << s.description << "\n";
      return 0;
    }
    if (run->parsed()) {
      auto s = find_scenario(scenario_name);
      if (!s) throw std::invalid_argument("unknown scenario '" + scenario_name + "' (see: gocheck scenario list)");
      if (run->count("--seed")) s->seed = o.seed;
      if (run->count("--backend")) s->backend = parse_backend(o.backend);
      s->threads = o.threads;
      return emit(run_check(*s), o);
    }
    if (replay->parsed()) {
      const auto r = replay_report(slurp(report_path));
      std::cout << "counterexamples: " << r.counterexamples << "\nverified: " << r.verified << "\n";
      for (const auto& f : r.failures) std::cout << "FAILED " << f << "\n";
      return r.ok() ? 0 : 2;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error (" << e.kind() << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
