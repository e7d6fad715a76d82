#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "gocheck/matrix.hpp"
#include "gocheck/rational.hpp"

namespace gocheck {

/// Thresholds for the floating point backend. The exact backend ignores them.
struct ToleranceProfile {
  double rank_epsilon = 1e-9;       // singular values below rank_epsilon * sigma_max count as zero
  double residual_epsilon = 1e-8;   // max-norm residual accepted as "solvable" / "zero"
  double eigen_gap_epsilon = 1e-7;  // eigenvalues closer than this are clustered

  /// Throws std::invalid_argument unless every threshold is strictly positive.
  void validate() const;
};

enum class Backend { exact, floating };

std::string to_string(Backend b);
Backend parse_backend(const std::string& text);

template <class T>
struct Field;

template <>
struct Field<Rational> {
  static constexpr bool exact = true;
  static constexpr Backend backend = Backend::exact;

  static Rational from(const Rational& r) { return r; }
  static Rational from_int(long v) { return Rational(v); }
  static bool is_zero(const Rational& x, const ToleranceProfile&) { return sgn(x) == 0; }
  static bool is_positive(const Rational& x, const ToleranceProfile&) { return sgn(x) > 0; }
  static bool equal(const Rational& a, const Rational& b, const ToleranceProfile&) { return a == b; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational to_rational(const Rational& x) { return x; }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static std::string format(const Rational& x) { return format_rational(x); }
};

template <>
struct Field<double> {
  static constexpr bool exact = false;
  static constexpr Backend backend = Backend::floating;

  static double from(const Rational& r) { return r.get_d(); }
  static double from_int(long v) { return static_cast<double>(v); }
  static bool is_zero(double x, const ToleranceProfile& tol) { return std::abs(x) <= tol.residual_epsilon; }
  static bool is_positive(double x, const ToleranceProfile& tol) { return x > tol.residual_epsilon; }
  static bool equal(double a, double b, const ToleranceProfile& tol) {
    return std::abs(a - b) <= tol.eigen_gap_epsilon * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  }
  static double to_double(double x) { return x; }
  static Rational to_rational(double x) { return Rational(x); }
  static double abs(double x) { return std::abs(x); }
  static std::string format(double x);
};

template <class To, class From>
Matrix<To> convert(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Field<To>::from(Field<From>::to_rational(m(i, j)));
  return out;
}

template <class To, class From>
Vector<To> convert(const Vector<From>& v) {
  Vector<To> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Field<To>::from(Field<From>::to_rational(v[i]));
  return out;
}

template <class T>
bool is_zero_vector(const Vector<T>& v, const ToleranceProfile& tol) {
  for (const auto& x : v)
    if (!Field<T>::is_zero(x, tol)) return false;
  return true;
}

template <class T>
bool is_zero_matrix(const Matrix<T>& m, const ToleranceProfile& tol) {
  for (const auto& x : m.data())
    if (!Field<T>::is_zero(x, tol)) return false;
  return true;
}

template <class T>
double max_norm(const Vector<T>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(Field<T>::to_double(x)));
  return m;
}

template <class T>
double max_norm(const Matrix<T>& a) {
  double m = 0.0;
  for (const auto& x : a.data()) m = std::max(m, std::abs(Field<T>::to_double(x)));
  return m;
}

using Rng = std::mt19937_64;

/// Uniform integer in [-bound, bound] as a scalar.
template <class T>
T random_small(Rng& rng, long bound = 9) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  return Field<T>::from_int(dist(rng));
}

/// Random combination of the rows with small integer coefficients,
/// retried until the coefficient vector is nonzero.
template <class T>
Vector<T> random_combination(const Matrix<T>& rows, Rng& rng, long bound = 9) {
  Vector<T> coeffs(rows.rows());
  bool nonzero = false;
  while (!nonzero && rows.rows() > 0) {
    for (auto& c : coeffs) {
      c = random_small<T>(rng, bound);
      if (Field<T>::to_double(c) != 0.0) nonzero = true;
    }
  }
  return combine_rows(rows, coeffs);
}

/// Independent stream for a sample index (splitmix64 of seed and index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace gocheck
