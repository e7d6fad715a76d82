#include <gtest/gtest.h>

#include "gocheck/embedding.hpp"
#include "gocheck/linalg.hpp"
#include "gocheck/metrics.hpp"
#include "gocheck/rep.hpp"

using namespace gocheck;

namespace {

std::shared_ptr<const StructureAlgebra> so_alg(std::size_t n) {
  return std::make_shared<const StructureAlgebra>(build_classical(Family::so, n));
}

LieContext<Rational> so_ctx(std::size_t n) { return LieContext<Rational>::with_killing_form(so_alg(n)); }

std::vector<Rational> params(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

MetricOperator<Rational> partition_metric(const LieContext<Rational>& ctx, const EmbeddingLayout& l,
                                          std::initializer_list<long> xs) {
  return metric_from_blocks(ctx, partition_blockspec(l, params(xs)));
}

// Direct test of the block form w.r.t. a given subalgebra k: Lambda scalar on
// every simple ideal of k, preserving z(k), and one scalar on k^perp.
bool direct_form(const LieContext<Rational>& ctx, const MetricOperator<Rational>& lam, const Subspace<Rational>& k) {
  const auto dec = ideal_decomposition(ctx, k);
  if (!restrict_to(ctx, lam, dec.center)) return false;
  for (const auto& i : dec.ideals)
    if (!scalar_on(ctx, lam, i)) return false;
  const auto m = orthogonal_complement(ctx, k);
  return m.dim() == 0 || scalar_on(ctx, lam, m).has_value();
}

}  // namespace

TEST(MetricFromBlocks, AllEqualIsScalar) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto lam = partition_metric(ctx, l, {3, 3, 3, 3, 3, 3});
  EXPECT_EQ(lam.matrix(), scaled(Matrix<Rational>::identity(15), Rational(3)));
  ASSERT_TRUE(lam.has_eigenspaces());
  EXPECT_EQ(lam.eigenspaces().size(), 1u);
}

TEST(MetricFromBlocks, DistinctParametersSo6) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto lam = partition_metric(ctx, l, {1, 2, 3, 4, 5, 6});
  ASSERT_TRUE(lam.has_eigenspaces());
  std::map<Rational, std::size_t> mult;
  for (const auto& e : lam.eigenspaces()) mult[e.value] = e.basis.rows();
  std::map<Rational, std::size_t> expected{{1, 1}, {2, 1}, {3, 1}, {4, 4}, {5, 4}, {6, 4}};
  EXPECT_EQ(mult, expected);
  // Oracle: the metric on a basis vector of m13 is 5 Q.
  auto v = l.named().at("m13").vector(0);
  EXPECT_EQ(lam.inner(v, v), Rational(5) * ctx.q(v, v));
}

TEST(MetricFromBlocks, DaZiPatternHasThreeEigenvalues) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto lam = partition_metric(ctx, l, {2, 2, 5, 2, 7, 7});
  EXPECT_EQ(lam.eigenspaces().size(), 3u);
}

TEST(MetricFromBlocks, CenterBlockIsGram) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto named = l.named();
  named["z"] = l.subalgebra();
  const std::string text =
      "# torus with a free block\n"
      "centerblock z matrix 20 4 0  4 24 0  0 0 8\n"
      "block m12 scalar 3/2\n"
      "block m13 scalar 2\n"
      "block m23 scalar 5/3\n";
  auto spec = parse_blockspec(text, named);
  auto lam = metric_from_blocks(ctx, spec);
  auto z = named.at("z");
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(lam.inner(z.vector(a), z.vector(b)), spec.center->gram(a, b));
  // Round trip through text.
  auto again = parse_blockspec(serialize_blockspec(spec), named);
  EXPECT_EQ(metric_from_blocks(ctx, again).matrix(), lam.matrix());
}

TEST(MetricFromBlocks, Errors) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto named = l.named();
  auto expect_line = [&](const std::string& text, const std::string& needle) {
    try {
      parse_blockspec(text, named);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const std::invalid_argument& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_line("block so1 scalar 1\nblock nope scalar 1\n", "line 2");
  expect_line("block so1 scalar 1\nblock so1 scalar 2\n", "duplicate");
  expect_line("block so1 scalar 1/0\n", "line 1");
  expect_line("block so1 scalar 1 2\n", "trailing");
  expect_line("frob so1 scalar 1\n", "unknown directive");
  // Missing block: does not span.
  auto spec = parse_blockspec("block so1 scalar 1\nblock so2 scalar 1\n", named);
  EXPECT_THROW(metric_from_blocks(ctx, spec), std::invalid_argument);
  // Overlap.
  named["k"] = l.subalgebra();
  auto overlap = parse_blockspec(
      "block k scalar 1\nblock so1 scalar 1\nblock m12 scalar 1\nblock m13 scalar 1\nblock m23 scalar 1\n", named);
  EXPECT_THROW(metric_from_blocks(ctx, overlap), std::invalid_argument);
  // Non-positive parameter.
  EXPECT_THROW(partition_metric(ctx, l, {1, 1, 1, 1, 0, 1}), std::invalid_argument);
  EXPECT_THROW(partition_blockspec(l, params({1, 2})), std::invalid_argument);
  // Non-self-adjoint matrix.
  Matrix<Rational> bad = Matrix<Rational>::identity(15);
  bad(0, 1) = 1;
  EXPECT_THROW(metric_from_exact(ctx, bad), std::invalid_argument);
}

TEST(Equivariance, Examples) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto g = Subspace<Rational>::whole(15);
  EXPECT_TRUE(equivariance_check(ctx, partition_metric(ctx, l, {2, 2, 2, 2, 2, 2}), g).ok);
  auto lam = partition_metric(ctx, l, {1, 2, 3, 4, 5, 6});
  EXPECT_TRUE(equivariance_check(ctx, lam, l.subalgebra()).ok);
  auto r = equivariance_check(ctx, lam, g);
  ASSERT_FALSE(r.ok);
  ASSERT_TRUE(r.failing_index.has_value());
  EXPECT_FALSE(is_zero_matrix(r.residual, {}));
  // The first failing basis vector (A12 spans so1) is fine; A13 lies in m12.
  EXPECT_TRUE(l.named().at("m12").contains(g.vector(*r.failing_index)));
}

TEST(IsometrySubalgebra, BranchTable) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto named = l.named();
  EXPECT_EQ(isometry_subalgebra(ctx, partition_metric(ctx, l, {4, 4, 4, 4, 4, 4})).dim(), 15u);
  EXPECT_TRUE(isometry_subalgebra(ctx, partition_metric(ctx, l, {1, 2, 3, 4, 5, 6})).same_span(l.subalgebra()));
  auto k = isometry_subalgebra(ctx, partition_metric(ctx, l, {2, 2, 5, 2, 7, 7}));
  EXPECT_TRUE(k.same_span(named.at("so1") + named.at("so2") + named.at("m12") + named.at("so3")));
}

TEST(BiInvariance, Examples) {
  auto ctx4 = so_ctx(4);
  auto g = Subspace<Rational>::whole(6);
  EXPECT_TRUE(bi_invariance_check(ctx4, metric_from_exact(ctx4, Matrix<Rational>::identity(6)), g).ok);
  auto dec = ideal_decomposition(ctx4, g);
  ASSERT_EQ(dec.ideals.size(), 2u);
  BlockSpec two;
  two.blocks.push_back({"i1", dec.ideals[0], Rational(2)});
  two.blocks.push_back({"i2", dec.ideals[1], Rational(5)});
  EXPECT_TRUE(bi_invariance_check(ctx4, metric_from_blocks(ctx4, two), g).ok);
  // Mixing the ideals: Lambda = Id + T/2 with T swapping matched bases.
  const auto& bu = dec.ideals[0].basis();
  const auto& bv = dec.ideals[1].basis();
  const Matrix<Rational> gu = bu * ctx4.form() * bu.transpose();
  const Matrix<Rational> gv = bv * ctx4.form() * bv.transpose();
  ASSERT_EQ(gu, gv);
  const Matrix<Rational> gi = *inverse(gu);
  Matrix<Rational> t = bv.transpose() * gi * bu * ctx4.form() + bu.transpose() * gi * bv * ctx4.form();
  auto mixed = metric_from_exact(ctx4, Matrix<Rational>(Matrix<Rational>::identity(6) + scaled(t, Rational(1, 2))));
  auto r = bi_invariance_check(ctx4, mixed, g);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.reason.empty());
}

TEST(DaZi, Examples) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto named = l.named();
  auto triv = dazi_structure_check(ctx, partition_metric(ctx, l, {3, 3, 3, 3, 3, 3}));
  EXPECT_TRUE(triv.verdict);
  EXPECT_EQ(triv.m.dim(), 0u);
  auto good = dazi_structure_check(ctx, partition_metric(ctx, l, {2, 2, 5, 2, 7, 7}));
  EXPECT_TRUE(good.verdict);
  EXPECT_EQ(good.isometry_subalgebra.dim(), 7u);
  // so(4) has two ideals on which Lambda is 2; the so(2) factor is the center.
  EXPECT_EQ(good.decomposition.center.dim(), 1u);
  ASSERT_EQ(good.ideal_scalars.size(), 2u);
  EXPECT_EQ(good.ideal_scalars[0], Rational(2));
  EXPECT_EQ(good.ideal_scalars[1], Rational(2));
  ASSERT_TRUE(good.m_scalar.has_value());
  EXPECT_EQ(*good.m_scalar, Rational(7));
  EXPECT_EQ(good.center_block(0, 0), Rational(5));
  auto bad = dazi_structure_check(ctx, partition_metric(ctx, l, {1, 2, 3, 4, 5, 6}));
  EXPECT_FALSE(bad.verdict);
  EXPECT_TRUE(bad.isometry_subalgebra.same_span(l.subalgebra()));
  EXPECT_NE(bad.reason.find("m"), std::string::npos);
}

TEST(DaZi, RefusesNonSimple) {
  auto ctx4 = so_ctx(4);
  EXPECT_THROW(dazi_structure_check(ctx4, metric_from_exact(ctx4, Matrix<Rational>::identity(6))), UnsupportedError);
}

// Properties over a seeded grid on so(6)/(2,2,2) and so(7)/(2,2,3).
TEST(MetricsProperty, IsometrySubalgebraInvariants) {
  const std::vector<std::pair<std::size_t, std::vector<std::size_t>>> layouts = {{6, {2, 2, 2}}, {7, {2, 2, 3}}};
  Rng rng(2024);
  std::uniform_int_distribution<long> pick(1, 4);  // small range so equalities occur
  for (const auto& [n, part] : layouts) {
    auto ctx = so_ctx(n);
    auto l = embed_so_partition(n, part);
    for (int trial = 0; trial < 12; ++trial) {
      std::vector<Rational> xs;
      for (int i = 0; i < 6; ++i) xs.emplace_back(pick(rng));
      auto lam = metric_from_blocks(ctx, partition_blockspec(l, xs));
      auto kp = isometry_subalgebra(ctx, lam);
      // Contains k, on which Lambda is equivariant and ad is Q-skew.
      EXPECT_TRUE(kp.contains(l.subalgebra()));
      // Lambda commutes with ad over k'.
      EXPECT_TRUE(equivariance_check(ctx, lam, kp).ok);
      // Eigenspaces are ad_{k'}-invariant.
      for (const auto& e : lam.eigenspaces()) {
        auto es = Subspace<Rational>::from_basis(e.basis);
        for (std::size_t i = 0; i < kp.dim(); ++i)
          for (std::size_t j = 0; j < es.dim(); ++j) EXPECT_TRUE(es.contains(ctx.bracket(kp.vector(i), es.vector(j))));
      }
      // Scaling invariance of the verdict.
      auto r1 = dazi_structure_check(ctx, lam);
      auto lam3 = metric_from_exact(ctx, Matrix<Rational>(scaled(lam.matrix(), Rational(3, 7))));
      EXPECT_EQ(dazi_structure_check(ctx, lam3).verdict, r1.verdict);
      // Block form w.r.t. any sub-subalgebra of k' forces the verdict; the
      // verdict gives the form w.r.t. k'.
      for (const auto& cand : {l.subalgebra(), kp}) {
        if (!kp.contains(cand)) continue;
        if (direct_form(ctx, lam, cand)) EXPECT_TRUE(r1.verdict);
      }
      EXPECT_EQ(r1.verdict, direct_form(ctx, lam, kp));
    }
  }
}

TEST(MetricsProperty, SubSubalgebraForms) {
  // Candidate subalgebras inside so(6): sums of partition blocks for coarser
  // partitions. A metric of block form w.r.t. any of them is flagged by the check.
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto n = l.named();
  std::vector<Subspace<Rational>> cands = {
      l.subalgebra(),
      n.at("so1") + n.at("so2") + n.at("m12") + n.at("so3"),
      n.at("so1") + n.at("so3") + n.at("m13") + n.at("so2"),
      n.at("so2") + n.at("so3") + n.at("m23") + n.at("so1"),
      n.at("so1") + n.at("so2") + n.at("m12"),
      n.at("so1") + n.at("so2"),
  };
  Rng rng(77);
  std::uniform_int_distribution<long> pick(1, 3);
  std::size_t positives = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rational> xs;
    for (int i = 0; i < 6; ++i) xs.emplace_back(pick(rng));
    auto lam = metric_from_blocks(ctx, partition_blockspec(l, xs));
    bool any = false;
    for (const auto& c : cands)
      if (is_subalgebra(ctx, c).ok && direct_form(ctx, lam, c)) any = true;
    bool verdict = dazi_structure_check(ctx, lam).verdict;
    if (any) EXPECT_TRUE(verdict);
    positives += verdict;
  }
  EXPECT_GT(positives, 0u);
}

TEST(MetricsProperty, FloatBackendAgrees) {
  auto g = so_alg(6);
  auto ctxq = LieContext<Rational>::with_killing_form(g);
  auto ctxd = LieContext<double>::with_killing_form(g);
  auto l = embed_so_partition(6, {2, 2, 2});
  for (auto xs : {params({1, 2, 3, 4, 5, 6}), params({2, 2, 5, 2, 7, 7}), params({1, 1, 1, 1, 1, 1})}) {
    auto spec = partition_blockspec(l, xs);
    auto lq = metric_from_blocks(ctxq, spec);
    auto ld = metric_from_blocks(ctxd, spec);
    EXPECT_EQ(isometry_subalgebra(ctxq, lq).dim(), isometry_subalgebra(ctxd, ld).dim());
    EXPECT_EQ(dazi_structure_check(ctxq, lq).verdict, dazi_structure_check(ctxd, ld).verdict);
    EXPECT_EQ(lq.eigenspaces().size(), ld.eigenspaces().size());
  }
}
