#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "gocheck/linalg.hpp"
#include "gocheck/matrix.hpp"
#include "gocheck/scalar.hpp"

namespace gocheck {

/// Linear subspace of R^n stored as independent coordinate rows.
template <class T>
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : basis_(0, ambient_dim) {}

  /// Keeps the given rows; throws std::invalid_argument if they are dependent.
  static Subspace from_basis(Matrix<T> rows, const ToleranceProfile& tol = {});
  /// Independent basis of the span of arbitrary rows. The exact backend keeps
  /// a subset of the input rows (first independent ones) so bases stay readable.
  static Subspace span(const Matrix<T>& rows, const ToleranceProfile& tol = {});
  static Subspace whole(std::size_t n) { return from_basis(Matrix<T>::identity(n)); }

  std::size_t dim() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return basis_.cols(); }
  bool is_zero() const { return dim() == 0; }
  const Matrix<T>& basis() const { return basis_; }
  Vector<T> vector(std::size_t i) const { return basis_.row_vector(i); }

  bool contains(const Vector<T>& v, const ToleranceProfile& tol = {}) const;
  bool contains(const Subspace& other, const ToleranceProfile& tol = {}) const;
  bool same_span(const Subspace& other, const ToleranceProfile& tol = {}) const;

  /// Span of the union.
  Subspace operator+(const Subspace& other) const;

 private:
  explicit Subspace(Matrix<T> basis) : basis_(std::move(basis)) {}
  Matrix<T> basis_;
};

/// Intersection of two subspaces.
template <class T>
Subspace<T> intersect(const Subspace<T>& a, const Subspace<T>& b, const ToleranceProfile& tol = {});

/// Text form: `dim <ambient>` header then `vector c1 c2 ...` lines (rationals).
std::string serialize_subspace(const Subspace<Rational>& s);
Subspace<Rational> parse_subspace(std::istream& in);
Subspace<Rational> parse_subspace(const std::string& text);

}  // namespace gocheck
