#include <gtest/gtest.h>

#include <set>

#include "gocheck/scenario.hpp"

using namespace gocheck;

namespace {

ScenarioSpec so6(std::vector<Check> checks) {
  ScenarioSpec s;
  s.family = "so";
  s.n = 6;
  s.partition = {2, 2, 2};
  s.checks = std::move(checks);
  return s;
}

std::vector<Rational> rs(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

}  // namespace

TEST(Catalog, Contents) {
  const auto cat = scenario_catalog();
  EXPECT_GE(cat.size(), 7u);
  std::set<std::string> names;
  for (const auto& s : cat) {
    names.insert(s.name);
    EXPECT_GT(s.time_budget_seconds, 0.0) << s.name;
  }
  for (const char* n : {"so6-222-grid", "so7-223-grid", "so8-233-grid", "so9-333-regularity",
                        "so12-partition4-genmet1", "su3-torus-flag", "triple-shape-demo"})
    EXPECT_TRUE(names.count(n)) << n;
  EXPECT_EQ(find_scenario("so6-222-grid")->partition, (std::vector<std::size_t>{2, 2, 2}));
  const auto g12 = *find_scenario("so12-partition4-genmet1");
  const auto layout = embed_so_partition(g12.n, g12.partition);
  EXPECT_EQ(layout.factors.size(), 4u);
  EXPECT_EQ(layout.offdiag.size(), 6u);
  EXPECT_FALSE(find_scenario("nope").has_value());
}

TEST(RunCheck, TrivialReport) {
  const auto rep = run_check(so6({}));
  EXPECT_EQ(rep.status, Status::pass);
  const auto human = emit_report(rep, ReportFormat::human);
  EXPECT_NE(human.find("naturally reductive: yes (bi-invariant)"), std::string::npos) << human;
  for (const char* key : {"regular", "weakly_regular", "equivariance", "natred", "split.holds"})
    EXPECT_EQ(rep.get(key).value_or("?"), "true") << key;
  EXPECT_EQ(rep.get("go.verdict").value_or("?"), "not_disproved");
  const auto machine = emit_report(rep, ReportFormat::machine);
  EXPECT_EQ(machine.rfind("format=gocheck-report/1\nversion=", 0), 0u);
  EXPECT_EQ(machine.find("time"), std::string::npos);
}

TEST(RunCheck, So9Regularity) {
  ScenarioSpec s;
  s.n = 9;
  s.partition = {3, 3, 3};
  s.checks = {Check::regular, Check::weakly_regular};
  const auto rep = run_check(s);
  EXPECT_EQ(rep.get("regular").value_or("?"), "false");
  EXPECT_EQ(rep.get("weakly_regular").value_or("?"), "true");
  EXPECT_EQ(rep.get("self_normalizing").value_or("?"), "true");
  EXPECT_EQ(rep.status, Status::negative);  // not regular is a negative verdict
  const auto cat = run_check(*find_scenario("so9-333-regularity"));
  EXPECT_EQ(cat.status, Status::pass);  // the scenario expects exactly that
}

TEST(RunCheck, DisprovedReportReplays) {
  auto s = so6({Check::go, Check::natred});
  s.params = rs({1, 2, 3, 4, 5, 6});
  const auto rep = run_check(s);
  EXPECT_EQ(rep.status, Status::negative);
  EXPECT_EQ(rep.get("go.verdict").value_or("?"), "disproved");
  EXPECT_EQ(rep.get("natred").value_or("?"), "false");
  EXPECT_EQ(rep.get("equivalence.agree").value_or("?"), "true");
  const auto dir = rep.get("go.counterexample.direction");
  ASSERT_TRUE(dir.has_value());
  EXPECT_NE(dir->find('/'), std::string::npos);  // exact rationals
  const auto text = emit_report(rep, ReportFormat::machine);
  const auto r = replay_report(text);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.counterexamples, 1u);
  EXPECT_EQ(r.verified, 1u);

  // Tampering with the direction or the spec is caught.
  // Basis directions were all solvable, so e1 is no counterexample.
  std::string bad = text;
  const std::string key = "go.counterexample.direction=";
  const auto pos = bad.find(key);
  std::string e1 = "1";
  for (int i = 1; i < 15; ++i) e1 += " 0";
  bad.replace(pos, bad.find('\n', pos) - pos, key + e1);
  EXPECT_EQ(rep.get("go.counterexample.source").value_or("?").rfind("pair", 0), 0u);
  EXPECT_FALSE(replay_report(bad).ok());
  std::string bad_spec = text;
  bad_spec.replace(bad_spec.find("spec.seed=1"), 11, "spec.seed=2");
  EXPECT_FALSE(replay_report(bad_spec).ok());
  EXPECT_THROW(replay_report("nonsense\n"), std::invalid_argument);
}

TEST(RunCheck, FloatBackendCounterexampleIsExact) {
  auto s = so6({Check::go});
  s.params = rs({1, 2, 3, 4, 5, 6});
  s.backend = Backend::floating;
  const auto rep = run_check(s);
  EXPECT_EQ(rep.get("go.verdict").value_or("?"), "disproved");
  EXPECT_TRUE(replay_report(emit_report(rep, ReportFormat::machine)).ok());
}

TEST(RunCheck, InputErrors) {
  auto s = so6({Check::go});
  s.params = rs({1, 2});
  EXPECT_THROW(run_check(s), std::invalid_argument);
  s.params = rs({1, 1, 1, 1, 0, 1});
  EXPECT_THROW(run_check(s), std::invalid_argument);
  s.params.clear();
  s.blockspec_text = "block so1 scalar 1\nblock bogus scalar 2\n";
  try {
    run_check(s);
    ADD_FAILURE() << "no error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_partition("2,x"), std::invalid_argument);
  EXPECT_THROW(parse_partition(""), std::invalid_argument);
  EXPECT_THROW(parse_check("frobnicate"), std::invalid_argument);
  ScenarioSpec flag;
  flag.shape = Shape::flag;  // needs su
  flag.checks = {Check::go};
  EXPECT_THROW(run_check(flag), std::invalid_argument);
  try {
    parse_machine_report("format=gocheck-report/1\nbroken line\n");
    ADD_FAILURE() << "no error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(RunCheck, ExitCodes) {
  EXPECT_EQ(exit_code(Status::pass), 0);
  EXPECT_EQ(exit_code(Status::negative), 2);
  EXPECT_EQ(exit_code(Status::error), 1);
}

TEST(RunCheck, FlagShape) {
  ScenarioSpec s;
  s.family = "su";
  s.n = 3;
  s.shape = Shape::flag;
  s.partition.clear();
  s.checks = {Check::go, Check::natred};
  s.params = rs({1, 2, 1, 3, 3});  // t1 = x12, x13 = x23: block form over u(2)
  auto rep = run_check(s);
  EXPECT_EQ(rep.get("kprime.dim").value_or("?"), "4");
  EXPECT_EQ(rep.get("natred").value_or("?"), "true");
  EXPECT_EQ(rep.get("go.verdict").value_or("?"), "not_disproved");
  s.params = rs({1, 2, 3, 4, 5});
  rep = run_check(s);
  EXPECT_EQ(rep.get("kprime.dim").value_or("?"), "2");
  EXPECT_EQ(rep.get("natred").value_or("?"), "false");
  EXPECT_EQ(rep.get("go.verdict").value_or("?"), "disproved");
  EXPECT_TRUE(replay_report(emit_report(rep, ReportFormat::machine)).ok());
}

// The merge of the second and third blocks needs x2 = x3 = x6 and x4 = x5;
// the variant x1 = x5 leaves the isometry algebra at k.
TEST(Grid, MergeBranchNeedsEqualRemainingModules) {
  auto s = so6({Check::go, Check::natred});
  s.params = rs({5, 2, 2, 7, 7, 2});
  EXPECT_EQ(run_check(s).get("kprime.dim").value_or("?"), "7");
  s.params = rs({5, 2, 2, 7, 5, 2});
  const auto rep = run_check(s);
  EXPECT_EQ(rep.get("kprime.dim").value_or("?"), "3");
  EXPECT_EQ(rep.get("natred").value_or("?"), "false");
  EXPECT_EQ(rep.get("go.verdict").value_or("?"), "disproved");
}

TEST(Grid, TuplesFollowTheirPatterns) {
  auto s = so6({Check::sweep});
  s.grid.tuples = 40;
  const auto tuples = grid_tuples(s);
  ASSERT_EQ(tuples.size(), 40u);
  std::size_t generic = 0;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& [x, pat] = tuples[i];
    ASSERT_EQ(x.size(), 6u);
    for (const auto& v : x) EXPECT_GT(sgn(v), 0);
    if (i < 20) {
      EXPECT_TRUE(pat == "generic" || pat.rfind("near-", 0) == 0) << pat;
      if (pat == "generic") {
        ++generic;
        EXPECT_EQ(std::set<Rational>(x.begin(), x.end()).size(), 6u);
      }
    }
    if (pat == "k-form") EXPECT_TRUE(x[3] == x[4] && x[4] == x[5]);
    if (pat == "merge12") EXPECT_TRUE(x[0] == x[1] && x[1] == x[3] && x[4] == x[5]);
    if (pat == "merge13") EXPECT_TRUE(x[0] == x[2] && x[2] == x[4] && x[3] == x[5]);
    if (pat == "merge23") EXPECT_TRUE(x[1] == x[2] && x[2] == x[5] && x[3] == x[4]);
    if (pat == "bi-invariant") EXPECT_EQ(std::set<Rational>(x.begin(), x.end()).size(), 1u);
  }
  EXPECT_EQ(generic, 10u);
  EXPECT_EQ(grid_tuples(s), tuples);
}

TEST(Sweep, SmallGridIsConsistentAndDeterministic) {
  auto s = so6({Check::sweep});
  s.grid.tuples = 24;
  s.samples = 16;
  s.threads = 1;
  const auto a = emit_report(run_check(s), ReportFormat::machine);
  s.threads = 4;
  const auto rep = run_check(s);
  EXPECT_EQ(emit_report(rep, ReportFormat::machine), a);
  EXPECT_EQ(rep.status, Status::pass);
  EXPECT_EQ(rep.get("sweep.disagreements").value_or("?"), "0");
  EXPECT_NE(rep.get("sweep.disproved").value_or("0"), "0");
  EXPECT_NE(rep.get("sweep.not_disproved").value_or("0"), "0");
  const auto r = replay_report(a);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(std::to_string(r.verified), rep.get("sweep.disproved").value());
}

TEST(Sweep, TripleShapeFromTable) {
  auto s = *find_scenario("triple-shape-demo");
  s.grid.tuples = 8;
  const auto rep = run_check(s);
  EXPECT_EQ(rep.status, Status::pass) << emit_report(rep, ReportFormat::human);
  EXPECT_TRUE(rep.get("spec.algebra.table.hash").has_value());
}

TEST(Spec, CanonicalRoundTrip) {
  for (auto s : scenario_catalog()) {
    std::map<std::string, std::string> f;
    for (const auto& [k, v] : canonical_spec(s)) f[k] = v;
    const auto back = spec_from_fields(f);
    EXPECT_EQ(spec_hash(back), spec_hash(s)) << s.name;
  }
  auto a = so6({Check::go});
  auto b = a;
  b.seed = 2;
  EXPECT_NE(spec_hash(a), spec_hash(b));
  b = a;
  b.threads = 7;  // execution detail, not part of the spec
  EXPECT_EQ(spec_hash(a), spec_hash(b));
  EXPECT_EQ(spec_hash(a).size(), 16u);
  EXPECT_EQ(format_params(parse_params("1, 3/2,2")), "1/1,3/2,2/1");
}
