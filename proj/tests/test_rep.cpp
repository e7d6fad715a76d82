#include <gtest/gtest.h>

#include "gocheck/embedding.hpp"
#include "gocheck/linalg.hpp"
#include "gocheck/rep.hpp"

using namespace gocheck;

namespace {

LieContext<Rational> so_ctx(std::size_t n) {
  return LieContext<Rational>::with_killing_form(
      std::make_shared<const StructureAlgebra>(build_classical(Family::so, n)));
}

std::pair<Subspace<Rational>, Subspace<Rational>> so4_ideals(const LieContext<Rational>& ctx) {
  auto d = ideal_decomposition(ctx, Subspace<Rational>::whole(6));
  return {d.ideals.at(0), d.ideals.at(1)};
}

}  // namespace

TEST(Intertwiner, AdjointOfSo3HasIdentity) {
  auto ctx = so_ctx(3);
  auto g = Subspace<Rational>::whole(3);
  auto it = intertwiner_space(ctx, g, g, g);
  EXPECT_EQ(it.dim(), 1u);
  // The identity must be in the span (it is a scalar multiple of the basis element).
  const auto& b = it.basis[0];
  EXPECT_EQ(b, scaled(Matrix<Rational>::identity(3), b(0, 0)));
}

TEST(Intertwiner, So4IdealsAreDisjoint) {
  auto ctx = so_ctx(4);
  auto [i1, i2] = so4_ideals(ctx);
  auto g = Subspace<Rational>::whole(6);
  EXPECT_EQ(intertwiner_space(ctx, g, i1, i2).dim(), 0u);
  EXPECT_TRUE(modules_disjoint(ctx, g, i1, i2));
  EXPECT_TRUE(modules_disjoint(ctx, g, i2, i1));
  EXPECT_FALSE(modules_disjoint(ctx, g, i1, i1));
}

TEST(Intertwiner, TorusOfSo6KToM) {
  auto ctx = so_ctx(6);
  auto k = embed_so_partition(6, {2, 2, 2}).subalgebra();
  auto m = orthogonal_complement(ctx, k);
  EXPECT_EQ(intertwiner_space(ctx, k, k, m).dim(), 0u);
}

TEST(Intertwiner, NonInvariantInputRejected) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto k = l.subalgebra();
  EXPECT_THROW(intertwiner_space(ctx, Subspace<Rational>::whole(15), k, k), std::invalid_argument);
}

TEST(WeakRegularity, Examples) {
  auto ctx6 = so_ctx(6);
  auto k6 = embed_so_partition(6, {2, 2, 2}).subalgebra();
  auto w6 = is_weakly_regular(ctx6, k6);
  EXPECT_TRUE(w6.weakly_regular);
  EXPECT_EQ(w6.dim_cm, 0u);
  EXPECT_EQ(w6.dim_p, 12u);
  auto ctx9 = so_ctx(9);
  auto k9 = embed_so_partition(9, {3, 3, 3}).subalgebra();
  auto w9 = is_weakly_regular(ctx9, k9);
  EXPECT_TRUE(w9.weakly_regular);
  EXPECT_EQ(w9.dim_cm, 0u);
  EXPECT_EQ(w9.dim_p, 27u);
  EXPECT_TRUE(is_weakly_regular(ctx6, Subspace<Rational>(15)).weakly_regular);
}

TEST(WeakRegularity, DiagonalSo3IsNotWeaklyRegular) {
  // k = diagonal so(3) in so(3)+so(3): the complement is another adjoint copy.
  auto g = std::make_shared<const StructureAlgebra>(
      direct_sum({build_classical(Family::so, 3), build_classical(Family::so, 3)}));
  auto ctx = LieContext<Rational>::with_killing_form(g);
  Matrix<Rational> rows(0, 6);
  for (std::size_t i = 0; i < 3; ++i) {
    Vector<Rational> v(6);
    v[i] = 1;
    v[i + 3] = 1;
    rows.append_row(v);
  }
  auto k = Subspace<Rational>::from_basis(rows);
  auto w = is_weakly_regular(ctx, k);
  EXPECT_FALSE(w.weakly_regular);
  EXPECT_EQ(w.intertwiner_dim, 1u);
  EXPECT_FALSE(criterion_weak_regularity(ctx, k).holds);
}

TEST(Criterion, Examples) {
  auto ctx6 = so_ctx(6);
  auto k6 = embed_so_partition(6, {2, 2, 2}).subalgebra();
  EXPECT_TRUE(criterion_weak_regularity(ctx6, k6).holds);
  EXPECT_TRUE(criterion_weak_regularity(ctx6, Subspace<Rational>::whole(15)).holds);
  auto ctx9 = so_ctx(9);
  EXPECT_TRUE(criterion_weak_regularity(ctx9, embed_so_partition(9, {3, 3, 3}).subalgebra()).holds);
}

TEST(Isotypic, AdjointSo3SingleComponent) {
  auto ctx = so_ctx(3);
  auto g = Subspace<Rational>::whole(3);
  auto iso = isotypic_decomposition(ctx, g, g);
  ASSERT_EQ(iso.components.size(), 1u);
  EXPECT_EQ(iso.components[0].dim(), 3u);
  EXPECT_EQ(iso.irreducible_count[0], 1u);
}

TEST(Isotypic, TorusOnMOfSo6SplitsEachBlock) {
  auto ctx = so_ctx(6);
  auto l = embed_so_partition(6, {2, 2, 2});
  auto k = l.subalgebra();
  auto m = orthogonal_complement(ctx, k);
  auto iso = isotypic_decomposition(ctx, k, m);
  ASSERT_EQ(iso.components.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(iso.components[i].dim(), 2u);
    EXPECT_EQ(iso.irreducible_count[i], 1u);
  }
  // Every block m_ij is the sum of exactly two components.
  for (const auto& o : l.offdiag) {
    std::size_t inside = 0;
    for (const auto& c : iso.components)
      if (o.space.contains(c)) ++inside;
    EXPECT_EQ(inside, 2u);
  }
}

TEST(Isotypic, So333OnM) {
  auto ctx = so_ctx(9);
  auto l = embed_so_partition(9, {3, 3, 3});
  auto k = l.subalgebra();
  auto m = orthogonal_complement(ctx, k);
  auto iso = isotypic_decomposition(ctx, k, m);
  ASSERT_EQ(iso.components.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(iso.components[i].dim(), 9u);
    EXPECT_TRUE(iso.components[i].same_span(l.offdiag[i].space));
  }
}

TEST(Isotypic, FixedVectorsFormTrivialComponent) {
  // so(2) in so(5) through partition (2,1,1,1): fixes an so(3).
  auto ctx = so_ctx(5);
  auto k = embed_so_partition(5, {2, 1, 1, 1}).subalgebra();
  auto g = Subspace<Rational>::whole(10);
  auto iso = isotypic_decomposition(ctx, k, g);
  std::size_t trivial_dim = 0;
  for (std::size_t i = 0; i < iso.components.size(); ++i)
    if (iso.labels[i] == "trivial") trivial_dim = iso.components[i].dim();
  EXPECT_EQ(trivial_dim, 4u);  // so(2) itself plus the so(3)
  // The rest is R^2 (x) R^3 under so(2): one isotypic component of three copies.
  ASSERT_EQ(iso.components.size(), 2u);
}

// Property: components are Q-orthogonal, invariant, sum to V, mutually
// disjoint; Schur: sampled intertwiners between irreducible pieces are invertible.
TEST(RepProperty, IsotypicInvariants) {
  const std::vector<std::pair<std::size_t, std::vector<std::size_t>>> cases = {
      {6, {2, 2, 2}}, {7, {2, 2, 3}}, {7, {4, 3}}, {8, {2, 3, 3}}, {6, {4, 2}}};
  for (const auto& [n, part] : cases) {
    auto ctx = so_ctx(n);
    auto k = embed_so_partition(n, part).subalgebra();
    auto m = orthogonal_complement(ctx, k);
    auto iso = isotypic_decomposition(ctx, k, m);
    Subspace<Rational> total(m.ambient_dim());
    for (std::size_t a = 0; a < iso.components.size(); ++a) {
      const auto& ca = iso.components[a];
      total = total + ca;
      EXPECT_NO_THROW(ad_restriction(ctx, k, ca));
      for (std::size_t b = a + 1; b < iso.components.size(); ++b) {
        const auto& cb = iso.components[b];
        EXPECT_TRUE(is_zero_matrix(ca.basis() * ctx.form() * cb.basis().transpose(), {}));
        EXPECT_TRUE(modules_disjoint(ctx, k, ca, cb));
        EXPECT_TRUE(modules_disjoint(ctx, k, cb, ca));
      }
      if (iso.irreducible_count[a] == 1) {
        auto it = intertwiner_space(ctx, k, ca, ca);
        Rng rng(3 + a);
        for (int t = 0; t < 3; ++t) {
          Matrix<Rational> x(ca.dim(), ca.dim());
          for (const auto& b : it.basis) x = x + scaled(b, random_small<Rational>(rng));
          if (is_zero_matrix(x, {})) continue;
          EXPECT_EQ(rank(x), ca.dim());
        }
      }
    }
    EXPECT_TRUE(total.same_span(m));
    // The sufficient criterion implies weak regularity.
    if (criterion_weak_regularity(ctx, k).holds) EXPECT_TRUE(is_weakly_regular(ctx, k).weakly_regular);
  }
}

TEST(RepProperty, FloatBackendAgreesOnDimensions) {
  auto g = std::make_shared<const StructureAlgebra>(build_classical(Family::so, 6));
  auto ctxd = LieContext<double>::with_killing_form(g);
  auto ctxq = LieContext<Rational>::with_killing_form(g);
  auto kq = embed_so_partition(6, {2, 2, 2}).subalgebra();
  auto kd = Subspace<double>::from_basis(convert<double>(kq.basis()));
  auto md = orthogonal_complement(ctxd, kd);
  auto iso = isotypic_decomposition(ctxd, kd, md);
  EXPECT_EQ(iso.components.size(), 6u);
  EXPECT_TRUE(is_weakly_regular(ctxd, kd).weakly_regular);
  EXPECT_EQ(intertwiner_space(ctxd, kd, kd, md).dim(), 0u);
}

TEST(Simplicity, Examples) {
  EXPECT_TRUE(is_simple(so_ctx(5)));
  auto g4 = std::make_shared<const StructureAlgebra>(build_classical(Family::so, 4));
  EXPECT_FALSE(is_simple(LieContext<Rational>::with_killing_form(g4)));
  auto t = std::make_shared<const StructureAlgebra>(ingest_structure_table(serialize_structure_table(build_classical(Family::so, 5))));
  EXPECT_FALSE(t->known_simple());
  EXPECT_TRUE(is_simple(LieContext<Rational>::with_killing_form(t)));
}
