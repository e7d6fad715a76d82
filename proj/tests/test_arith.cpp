#include <gtest/gtest.h>

#include "gocheck/linalg.hpp"

using namespace gocheck;

namespace {

template <class T>
Matrix<T> mat(std::initializer_list<std::initializer_list<long>> rows) {
  Matrix<T> m(0, rows.begin()->size());
  for (const auto& r : rows) {
    Vector<T> v;
    for (long x : r) v.push_back(T(x));
    m.append_row(v);
  }
  return m;
}

// Independent oracle: plain Gaussian elimination over the rationals.
std::size_t hand_rank(Matrix<Rational> m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      Rational f = m(i, c) / m(r, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

Matrix<Rational> random_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::size_t rank_cap) {
  // Product of random factors caps the rank, so rank-deficient cases are common.
  Matrix<Rational> a(rows, rank_cap), b(rank_cap, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rank_cap; ++j) a(i, j) = random_small<Rational>(rng, 3);
  for (std::size_t i = 0; i < rank_cap; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = Rational(random_small<Rational>(rng, 4)) / Rational(1 + (i + j) % 3);
  return a * b;
}

}  // namespace

TEST(Rational, ParseAndFormatRoundTrip) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-4"), Rational(-4));
  EXPECT_EQ(format_rational(Rational(-4)), "-4/1");
  EXPECT_EQ(format_rational(parse_rational("7/21")), "1/3");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/-2"), std::invalid_argument);
}

TEST(Rational, RationalizeRecoversSmallFractions) {
  EXPECT_EQ(rationalize(0.5), Rational(1, 2));
  EXPECT_EQ(rationalize(-7.0 / 3.0), Rational(-7, 3));
  EXPECT_EQ(rationalize(12.0), Rational(12));
}

TEST(Tolerance, RejectsNonPositive) {
  ToleranceProfile t;
  EXPECT_NO_THROW(t.validate());
  t.rank_epsilon = 0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

TEST(SolveLinear, IdentityExact) {
  auto r = solve_linear(Matrix<Rational>::identity(3), Vector<Rational>{1, 2, 3});
  const auto& s = std::get<Solution<Rational>>(r);
  EXPECT_EQ(s.x, (Vector<Rational>{1, 2, 3}));
  EXPECT_EQ(s.nullspace.rows(), 0u);
}

TEST(SolveLinear, ZeroMatrixHasFullNullspace) {
  auto r = solve_linear(Matrix<Rational>(2, 2), Vector<Rational>{0, 0});
  const auto& s = std::get<Solution<Rational>>(r);
  EXPECT_EQ(s.x, (Vector<Rational>{0, 0}));
  EXPECT_EQ(s.nullspace.rows(), 2u);
  auto rf = solve_linear(Matrix<double>(2, 2), Vector<double>{0, 0});
  EXPECT_EQ(std::get<Solution<double>>(rf).nullspace.rows(), 2u);
}

TEST(SolveLinear, InconsistentBothBackends) {
  auto r = solve_linear(mat<Rational>({{1, 1}, {1, 1}}), Vector<Rational>{1, 0});
  ASSERT_TRUE(std::holds_alternative<Inconsistent<Rational>>(r));
  const auto& inc = std::get<Inconsistent<Rational>>(r);
  EXPECT_EQ(inc.rank_matrix, 1u);
  EXPECT_EQ(inc.rank_augmented, 2u);
  EXPECT_NEAR(inc.residual, 0.5, 1e-12);
  auto rf = solve_linear(mat<double>({{1, 1}, {1, 1}}), Vector<double>{1, 0});
  EXPECT_TRUE(std::holds_alternative<Inconsistent<double>>(rf));
}

TEST(SolveLinear, DimensionMismatchThrows) {
  EXPECT_THROW(solve_linear(Matrix<Rational>::identity(2), Vector<Rational>{1}), std::invalid_argument);
  EXPECT_THROW(solve_linear(Matrix<double>::identity(2), Vector<double>{1}), std::invalid_argument);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Matrix<Rational>::identity(4)), 4u);
  EXPECT_EQ(rank(Matrix<Rational>(3, 5)), 0u);
  EXPECT_EQ(rank(mat<Rational>({{1, 2}, {2, 4}})), 1u);
  EXPECT_EQ(rank(mat<double>({{1, 2}, {2, 4}})), 1u);
  EXPECT_EQ(rank(Matrix<double>::identity(4)), 4u);
}

TEST(RowReducer, IncrementalMatchesBatch) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix<Rational> a = random_matrix(rng, 7, 9, 1 + trial % 6);
    RowReducer<Rational> red(9);
    for (std::size_t i = 0; i < a.rows(); ++i) red.add_row(a.row(i));
    EXPECT_EQ(red.rank(), hand_rank(a));
    Matrix<Rational> ns = red.nullspace();
    EXPECT_EQ(ns.rows() + red.rank(), 9u);
    for (std::size_t i = 0; i < ns.rows(); ++i) EXPECT_TRUE(is_zero_vector(a * ns.row_vector(i), {}));
  }
}

TEST(Eigenspaces, ScalarAndDiagonal) {
  auto s = symmetric_eigenspaces(scaled(Matrix<Rational>::identity(4), Rational(5)), Matrix<Rational>::identity(4));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].value, Rational(5));
  EXPECT_EQ(s[0].basis.rows(), 4u);

  Matrix<Rational> d(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 1;
  d(2, 2) = 2;
  auto e = symmetric_eigenspaces(d, Matrix<Rational>::identity(3));
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].basis.rows(), 2u);
  EXPECT_EQ(e[1].basis.rows(), 1u);
  EXPECT_EQ(reconstruct(e, Matrix<Rational>::identity(3)), d);
}

TEST(Eigenspaces, NonSelfAdjointRejected) {
  auto a = mat<Rational>({{1, 1}, {0, 1}});
  EXPECT_THROW(symmetric_eigenspaces(a, Matrix<Rational>::identity(2)), std::invalid_argument);
}

TEST(Eigenspaces, IrrationalSpectrumRejectedExactly) {
  auto a = mat<Rational>({{1, 1}, {1, 0}});  // golden ratio eigenvalues
  EXPECT_THROW(symmetric_eigenspaces(a, Matrix<Rational>::identity(2)), std::domain_error);
  EXPECT_EQ(symmetric_eigenspaces(convert<double>(a), Matrix<double>::identity(2)).size(), 2u);
}

// Property: solve_linear returns a solution iff rank(A) == rank([A|b]).
TEST(ArithProperty, SolvabilityMatchesRankCriterion) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 12, cols = 1 + rng() % 12, cap = 1 + rng() % 12;
    Matrix<Rational> a = random_matrix(rng, rows, cols, cap);
    Vector<Rational> b(rows);
    if (trial % 2 == 0) {
      Vector<Rational> x(cols);
      for (auto& v : x) v = random_small<Rational>(rng);
      b = a * x;
    } else {
      for (auto& v : b) v = random_small<Rational>(rng);
    }
    Matrix<Rational> ab(0, cols + 1);
    for (std::size_t i = 0; i < rows; ++i) {
      Vector<Rational> r = a.row_vector(i);
      r.push_back(b[i]);
      ab.append_row(r);
    }
    const bool consistent = hand_rank(a) == hand_rank(ab);
    const auto res = solve_linear(a, b);
    ASSERT_EQ(std::holds_alternative<Solution<Rational>>(res), consistent);
    if (consistent) {
      const auto& s = std::get<Solution<Rational>>(res);
      EXPECT_EQ(a * s.x, b);
      EXPECT_EQ(s.nullspace.rows(), cols - hand_rank(a));
    }
    // Backend agreement on rank and solvability.
    EXPECT_EQ(rank(convert<double>(a)), hand_rank(a));
    const auto resf = solve_linear(convert<double>(a), convert<double>(b));
    EXPECT_EQ(std::holds_alternative<Solution<double>>(resf), consistent);
  }
}

// Property: eigenspace reconstruction for operators symmetric w.r.t. a random positive form.
TEST(ArithProperty, EigenReconstruction) {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + trial % 6;
    // G = P^T P with P unit upper triangular (exactly invertible).
    Matrix<Rational> p = Matrix<Rational>::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) p(i, j) = random_small<Rational>(rng, 2);
    const Matrix<Rational> g = p.transpose() * p;
    // Block-scalar S built from projectors onto coordinate groups of the basis P^{-1} e_i.
    const Matrix<Rational> pinv = *inverse(p);
    std::vector<Eigenspace<Rational>> spec;
    std::size_t i = 0;
    long value = 1;
    while (i < n) {
      const std::size_t len = 1 + rng() % 3;
      Matrix<Rational> basis(0, n);
      for (std::size_t k = i; k < std::min(n, i + len); ++k) basis.append_row(pinv.col_vector(k));
      spec.push_back({Rational(value), basis});
      value += 1 + static_cast<long>(rng() % 3);
      i += len;
    }
    const Matrix<Rational> s = reconstruct(spec, g);
    ASSERT_TRUE(is_self_adjoint(s, g));
    const auto got = symmetric_eigenspaces(s, g);
    ASSERT_EQ(got.size(), spec.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      EXPECT_EQ(got[k].value, spec[k].value);
      EXPECT_EQ(got[k].basis.rows(), spec[k].basis.rows());
    }
    EXPECT_EQ(reconstruct(got, g), s);
    const auto gotf = symmetric_eigenspaces(convert<double>(s), convert<double>(g));
    ASSERT_EQ(gotf.size(), spec.size());
    EXPECT_LT(max_norm(reconstruct(gotf, convert<double>(g)) - convert<double>(s)), 1e-8);
    // Orthogonality of distinct eigenspaces w.r.t. the form.
    for (std::size_t a = 0; a < got.size(); ++a)
      for (std::size_t b = a + 1; b < got.size(); ++b)
        EXPECT_TRUE(is_zero_matrix(got[a].basis * g * got[b].basis.transpose(), {}));
  }
}

TEST(Inverse, SingularAndRegular) {
  EXPECT_FALSE(inverse(mat<Rational>({{1, 2}, {2, 4}})).has_value());
  auto inv = inverse(mat<Rational>({{2, 1}, {1, 1}}));
  ASSERT_TRUE(inv);
  EXPECT_EQ(*inv * mat<Rational>({{2, 1}, {1, 1}}), Matrix<Rational>::identity(2));
  EXPECT_TRUE(is_positive_definite(mat<Rational>({{2, 1}, {1, 1}})));
  EXPECT_FALSE(is_positive_definite(mat<Rational>({{1, 2}, {2, 1}})));
  EXPECT_TRUE(is_positive_definite(mat<double>({{2, 1}, {1, 1}})));
}

TEST(MinNorm, PicksFormOrthogonalRepresentative) {
  // Solutions of x1 + x2 = 2: minimum Euclidean norm is (1,1).
  auto r = std::get<Solution<Rational>>(solve_linear(mat<Rational>({{1, 1}}), Vector<Rational>{2}));
  auto x = min_norm_representative(r.x, r.nullspace, Matrix<Rational>::identity(2));
  EXPECT_EQ(x, (Vector<Rational>{1, 1}));
}

TEST(Seeds, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
}
