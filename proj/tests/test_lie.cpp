#include <gtest/gtest.h>

#include "gocheck/embedding.hpp"
#include "gocheck/lie.hpp"
#include "gocheck/linalg.hpp"

using namespace gocheck;

namespace {

// Oracle: tr(ad_X ad_Y) from dense ad matrices and a plain trace.
Rational trace_ad_ad(const StructureAlgebra& g, std::size_t i, std::size_t j) {
  const Matrix<Rational> p = g.ad_basis<Rational>(i) * g.ad_basis<Rational>(j);
  Rational t = 0;
  for (std::size_t k = 0; k < p.rows(); ++k) t += p(k, k);
  return t;
}

Matrix<long> e_matrix(std::size_t n, std::size_t a, std::size_t b) {
  Matrix<long> m(n, n);
  m(a, b) = 1;
  return m;
}

Vector<Rational> unit(std::size_t n, std::size_t i) { return unit_vector<Rational>(n, i); }

}  // namespace

TEST(BuildClassical, AbelianHasZeroTensor) {
  auto g = build_classical(Family::abelian, 3);
  EXPECT_EQ(g.dim(), 3u);
  EXPECT_TRUE(g.table().empty());
  auto f = killing_form(g);
  EXPECT_TRUE(f.degenerate);
  EXPECT_FALSE(f.q_positive_definite);
}

TEST(BuildClassical, So3BracketFromMatrixCommutator) {
  auto g = build_classical(Family::so, 3);
  ASSERT_EQ(g.dim(), 3u);
  EXPECT_EQ(g.labels(), (std::vector<std::string>{"A12", "A13", "A23"}));
  // Oracle: E_ab E_cd = delta_bc E_ad, so [A12, A23] = E13 - E31 = A13.
  Matrix<long> a12 = e_matrix(3, 0, 1) - e_matrix(3, 1, 0);
  Matrix<long> a23 = e_matrix(3, 1, 2) - e_matrix(3, 2, 1);
  Matrix<long> a13 = e_matrix(3, 0, 2) - e_matrix(3, 2, 0);
  EXPECT_EQ(a12 * a23 - a23 * a12, a13);
  EXPECT_EQ(g.bracket(unit(3, 0), unit(3, 2)), unit(3, 1));
}

TEST(BuildClassical, So6ValidatesExactly) {
  auto g = build_classical(Family::so, 6);
  EXPECT_EQ(g.dim(), 15u);
  EXPECT_FALSE(g.find_violation().has_value());
  EXPECT_TRUE(g.known_simple());
}

TEST(BuildClassical, SuAndSpSmall) {
  for (std::size_t n = 2; n <= 3; ++n) {
    auto su = build_classical(Family::su, n);
    EXPECT_EQ(su.dim(), n * n - 1);
    EXPECT_FALSE(su.find_violation().has_value());
    auto sp = build_classical(Family::sp, n);
    EXPECT_EQ(sp.dim(), 2 * n * n + n);
    EXPECT_FALSE(sp.find_violation().has_value());
    EXPECT_TRUE(killing_form(su).q_positive_definite);
    EXPECT_TRUE(killing_form(sp).q_positive_definite);
  }
}

TEST(BuildClassical, RejectsBadInput) {
  EXPECT_THROW(build_classical("g2", 2), std::invalid_argument);
  EXPECT_THROW(build_classical(Family::so, 1), std::invalid_argument);
}

TEST(KillingForm, So3AndSo6Values) {
  auto g3 = build_classical(Family::so, 3);
  auto f3 = killing_form(g3);
  EXPECT_EQ(f3.q(0, 0), Rational(2));
  EXPECT_EQ(-trace_ad_ad(g3, 0, 0), Rational(2));
  auto g6 = build_classical(Family::so, 6);
  auto f6 = killing_form(g6);
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t j = 0; j < 15; ++j) {
      EXPECT_EQ(f6.q(i, j), i == j ? Rational(8) : Rational(0));
      EXPECT_EQ(f6.killing(i, j), trace_ad_ad(g6, i, j));
    }
  EXPECT_TRUE(f6.q_positive_definite);
}

TEST(KillingForm, MatchesTraceFormulaForSo) {
  // B(X, Y) = (n - 2) tr(XY) on so(n).
  for (std::size_t n = 3; n <= 6; ++n) {
    auto g = build_classical(Family::so, n);
    auto f = killing_form(g);
    const auto& mats = *g.realization();
    for (std::size_t i = 0; i < g.dim(); ++i)
      for (std::size_t j = 0; j < g.dim(); ++j) {
        const Matrix<long> p = mats[i] * mats[j];
        long tr = 0;
        for (std::size_t k = 0; k < n; ++k) tr += p(k, k);
        EXPECT_EQ(f.killing(i, j), Rational(static_cast<long>(n - 2) * tr));
      }
  }
}

TEST(KillingForm, AdInvariance) {
  for (auto fam : {Family::so, Family::su, Family::sp}) {
    auto g = build_classical(fam, 3);
    auto f = killing_form(g);
    EXPECT_FALSE(ad_invariance_violation(g, f.killing).has_value());
  }
}

TEST(StructureTable, So3RoundTripAndEquality) {
  const std::string text =
      "# so(3)\n"
      "dim 3\n"
      "1 2 3 -1/1\n2 1 3 1/1\n"
      "1 3 2 1/1\n3 1 2 -1/1\n"
      "2 3 1 -1/1\n3 2 1 1/1\n";
  auto g = ingest_structure_table(text);
  EXPECT_EQ(g, build_classical(Family::so, 3));
  EXPECT_EQ(serialize_structure_table(g), serialize_structure_table(build_classical(Family::so, 3)));
  auto again = ingest_structure_table(serialize_structure_table(g));
  EXPECT_EQ(serialize_structure_table(again), serialize_structure_table(g));
}

TEST(StructureTable, EmptyTableIsAbelian) {
  auto g = ingest_structure_table("dim 2\n");
  EXPECT_EQ(g.dim(), 2u);
  EXPECT_TRUE(g.table().empty());
}

TEST(StructureTable, MissingAntisymmetricMateRejected) {
  try {
    ingest_structure_table("dim 3\n1 2 3 1/1\n");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), "antisymmetry");
    EXPECT_EQ(e.indices(), (std::vector<std::size_t>{1, 2, 3}));
  }
}

TEST(StructureTable, JacobiViolationReportsQuadruple) {
  // Antisymmetric but not a Lie algebra: [e1,e2]=e3, [e1,e3]=e1, [e2,e3]=e1.
  const std::string text = "dim 3\n1 2 3 1\n2 1 3 -1\n1 3 1 1\n3 1 1 -1\n2 3 1 1\n3 2 1 -1\n";
  try {
    ingest_structure_table(text);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), "jacobi");
    EXPECT_EQ(e.indices().size(), 4u);
  }
}

TEST(StructureTable, ParseErrorsCarryLineNumbers) {
  try {
    ingest_structure_table("dim 2\n1 2 x 1\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(ingest_structure_table("1 2 1 1\n"), std::invalid_argument);
  EXPECT_THROW(ingest_structure_table("dim 2\n1 2 3 1\n"), std::invalid_argument);
}

TEST(DirectSum, CrossBracketsVanish) {
  auto s = direct_sum({build_classical(Family::so, 3), build_classical(Family::so, 3)});
  EXPECT_EQ(s.dim(), 6u);
  EXPECT_FALSE(s.find_violation().has_value());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 3; j < 6; ++j) EXPECT_TRUE(s.terms(i, j).empty());
  auto t = direct_sum({build_classical(Family::abelian, 1), build_classical(Family::so, 3)});
  EXPECT_EQ(t.dim(), 4u);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(t.terms(0, j).empty());
}

TEST(DirectSum, So3PlusSo3KillingMatchesSo4) {
  // so(4) = so(3) + so(3): both have Killing form of signature (0,6) and
  // equal commutant structure; compare the spectrum of -B in each.
  auto s = direct_sum({build_classical(Family::so, 3), build_classical(Family::so, 3)});
  auto f = killing_form(s);
  auto g = build_classical(Family::so, 4);
  auto fg = killing_form(g);
  EXPECT_TRUE(f.q_positive_definite);
  EXPECT_TRUE(fg.q_positive_definite);
  EXPECT_EQ(rank(f.killing), rank(fg.killing));
}

TEST(Embedding, PartitionDims) {
  auto l = embed_so_partition(6, {2, 2, 2});
  EXPECT_EQ(l.subalgebra().dim(), 3u);
  ASSERT_EQ(l.offdiag.size(), 3u);
  for (const auto& o : l.offdiag) EXPECT_EQ(o.space.dim(), 4u);
  auto l9 = embed_so_partition(9, {3, 3, 3});
  EXPECT_EQ(l9.subalgebra().dim(), 9u);
  for (const auto& o : l9.offdiag) EXPECT_EQ(o.space.dim(), 9u);
  auto l4 = embed_so_partition(4, {4});
  EXPECT_EQ(l4.subalgebra().dim(), 6u);
  EXPECT_TRUE(l4.offdiag.empty());
  EXPECT_THROW(embed_so_partition(6, {2, 2}), std::invalid_argument);
  EXPECT_THROW(embed_so_partition(6, {6, 0}), std::invalid_argument);
}

TEST(Embedding, BlocksAreOrthogonalAndSpan) {
  auto g = build_classical(Family::so, 7);
  auto q = killing_form(g).q;
  auto l = embed_so_partition(7, {2, 2, 3});
  std::vector<Subspace<Rational>> parts;
  for (const auto& [name, s] : l.named()) parts.push_back(s);
  std::size_t total = 0;
  for (std::size_t a = 0; a < parts.size(); ++a) {
    total += parts[a].dim();
    for (std::size_t b = a + 1; b < parts.size(); ++b)
      EXPECT_TRUE(is_zero_matrix(parts[a].basis() * q * parts[b].basis().transpose(), {}));
  }
  EXPECT_EQ(total, g.dim());
}

// Property: [so(k_i), m_lm] lands in m_lm when i is l or m, else vanishes;
// [m_ij, m_jl] lands in m_il.
TEST(Embedding, BracketTable) {
  const std::size_t n = 8;
  auto g = build_classical(Family::so, n);
  auto l = embed_so_partition(n, {2, 3, 3});
  auto named = l.named();
  auto in = [&](const Vector<Rational>& v, const std::string& name) { return named.at(name).contains(v); };
  auto block = [&](std::size_t i, std::size_t j) {
    return "m" + std::to_string(std::min(i, j) + 1) + std::to_string(std::max(i, j) + 1);
  };
  for (std::size_t i = 0; i < 3; ++i)
    for (const auto& o : l.offdiag) {
      const auto& f = l.factors[i];
      for (std::size_t a = 0; a < f.dim(); ++a)
        for (std::size_t b = 0; b < o.space.dim(); ++b) {
          auto br = g.bracket(f.vector(a), o.space.vector(b));
          if (i == o.i || i == o.j)
            EXPECT_TRUE(in(br, block(o.i, o.j)));
          else
            EXPECT_TRUE(is_zero_vector(br, {}));
        }
    }
  for (const auto& x : l.offdiag)
    for (const auto& y : l.offdiag) {
      // shared index j between the pairs
      std::vector<std::size_t> common;
      for (auto a : {x.i, x.j})
        for (auto b : {y.i, y.j})
          if (a == b) common.push_back(a);
      if (common.size() != 1) continue;
      const std::size_t sh = common[0];
      const std::size_t p = x.i == sh ? x.j : x.i;
      const std::size_t q = y.i == sh ? y.j : y.i;
      for (std::size_t a = 0; a < x.space.dim(); ++a)
        for (std::size_t b = 0; b < y.space.dim(); ++b) {
          auto br = g.bracket(x.space.vector(a), y.space.vector(b));
          EXPECT_TRUE(in(br, block(p, q)));
        }
    }
}

TEST(LieContext, RejectsNonInvariantForm) {
  auto g = std::make_shared<const StructureAlgebra>(build_classical(Family::so, 3));
  Matrix<Rational> q = Matrix<Rational>::identity(3);
  q(0, 0) = 2;
  EXPECT_THROW(LieContext<Rational>(g, q), std::invalid_argument);
  EXPECT_NO_THROW(LieContext<Rational>(g, Matrix<Rational>::identity(3)));
  auto ab = std::make_shared<const StructureAlgebra>(build_classical(Family::abelian, 2));
  EXPECT_THROW(LieContext<Rational>::with_killing_form(ab), std::invalid_argument);
  EXPECT_NO_THROW(LieContext<Rational>(ab, Matrix<Rational>::identity(2)));
}
