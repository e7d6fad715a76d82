#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gocheck/matrix.hpp"
#include "gocheck/rational.hpp"
#include "gocheck/scalar.hpp"

namespace gocheck {

/// Raised when a structure tensor or a form violates an algebraic identity.
/// `indices` are 1-based: (i, j, k) for antisymmetry, (i, j, k, l) for Jacobi.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string kind, std::vector<std::size_t> indices, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)), indices_(std::move(indices)) {}
  const std::string& kind() const { return kind_; }
  const std::vector<std::size_t>& indices() const { return indices_; }

 private:
  std::string kind_;
  std::vector<std::size_t> indices_;
};

struct StructureTerm {
  std::size_t k;
  Rational value;
  double approx;
};

/// Real Lie algebra given by [e_i, e_j] = sum_k c[i][j][k] e_k, stored sparsely
/// per ordered pair (i, j). Indices are 0-based in the API.
class StructureAlgebra {
 public:
  using Table = std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational>;

  StructureAlgebra() = default;
  /// No antisymmetric completion: the table is taken literally.
  StructureAlgebra(std::size_t dim, const Table& entries, std::vector<std::string> labels = {});

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  const std::vector<StructureTerm>& terms(std::size_t i, std::size_t j) const { return terms_[i * dim_ + j]; }
  Rational coefficient(std::size_t i, std::size_t j, std::size_t k) const;
  Table table() const;

  template <class T>
  Vector<T> bracket(const Vector<T>& x, const Vector<T>& y) const;
  /// Matrix of ad_x acting on column coordinates: column j is [x, e_j].
  template <class T>
  Matrix<T> ad(const Vector<T>& x) const;
  template <class T>
  Matrix<T> ad_basis(std::size_t i) const;

  /// First violated identity, or nullopt. Checks antisymmetry, the Jacobi
  /// identity on all index triples, and the realization if one is attached.
  std::optional<ValidationError> find_violation() const;
  void validate() const;

  /// Integer matrices whose commutators reproduce the tensor.
  const std::optional<std::vector<Matrix<long>>>& realization() const { return realization_; }
  void set_realization(std::vector<Matrix<long>> mats) { realization_ = std::move(mats); }

  /// Set by builders that know the algebra is simple (so(n) n = 3 or n >= 5, su, sp).
  bool known_simple() const { return known_simple_; }
  void set_known_simple(bool v) { known_simple_ = v; }

  bool operator==(const StructureAlgebra& other) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<StructureTerm>> terms_;
  std::vector<std::string> labels_;
  std::string name_;
  std::optional<std::vector<Matrix<long>>> realization_;
  bool known_simple_ = false;
};

enum class Family { so, su, sp, abelian };
Family parse_family(const std::string& text);
std::string to_string(Family f);

/// Basis conventions:
///  so(n): A_ij = E_ij - E_ji, i < j, lexicographic.
///  su(n): realified 2n x 2n matrices; A_ij, S_ij = i(E_ij + E_ji) for i < j,
///         then H_k = i(E_kk - E_{k+1,k+1}).
///  sp(n): compact symplectic [[A, -conj B], [B, conj A]] with A in u(n),
///         B complex symmetric; realified to 4n x 4n.
///  abelian(n): zero tensor.
/// Throws std::invalid_argument for unsupported input.
StructureAlgebra build_classical(Family family, std::size_t n);
StructureAlgebra build_classical(const std::string& family, std::size_t n);

/// Structure constants of a basis of integer matrices closed under commutator.
StructureAlgebra algebra_from_matrices(const std::vector<Matrix<long>>& basis, std::vector<std::string> labels);

/// Text format: `dim d`, then `i j k p/q` (1-based), `#` comments.
/// Throws std::invalid_argument on parse errors (with line number) and
/// ValidationError on identity violations.
StructureAlgebra ingest_structure_table(std::istream& in);
StructureAlgebra ingest_structure_table(const std::string& text);
std::string serialize_structure_table(const StructureAlgebra& g);

StructureAlgebra direct_sum(const std::vector<StructureAlgebra>& parts);

struct SymmetricForm {
  Matrix<Rational> killing;  // B(X, Y) = tr(ad_X ad_Y)
  Matrix<Rational> q;        // -B
  bool q_positive_definite = false;
  bool degenerate = false;
};

SymmetricForm killing_form(const StructureAlgebra& g);

/// First basis pair (k, i, j) with Q([e_k, e_i], e_j) + Q(e_i, [e_k, e_j]) != 0.
template <class T>
std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> ad_invariance_violation(
    const StructureAlgebra& g, const Matrix<T>& form, const ToleranceProfile& tol = {});

/// Algebra plus an ad-invariant positive definite form Q, with ad matrices of
/// the basis cached in the chosen scalar type.
template <class T>
class LieContext {
 public:
  /// Throws std::invalid_argument unless `q` is symmetric positive definite and ad-invariant.
  LieContext(std::shared_ptr<const StructureAlgebra> g, const Matrix<Rational>& q, ToleranceProfile tol = {});
  /// Uses Q = -Killing form; throws std::invalid_argument when it is not positive definite.
  static LieContext with_killing_form(std::shared_ptr<const StructureAlgebra> g, ToleranceProfile tol = {});

  const StructureAlgebra& algebra() const { return *g_; }
  std::shared_ptr<const StructureAlgebra> algebra_ptr() const { return g_; }
  std::size_t dim() const { return g_->dim(); }
  const Matrix<T>& form() const { return q_; }
  const Matrix<Rational>& form_exact() const { return q_exact_; }
  const ToleranceProfile& tol() const { return tol_; }

  const Matrix<T>& ad_basis(std::size_t i) const { return ad_[i]; }
  Matrix<T> ad(const Vector<T>& x) const;
  Vector<T> bracket(const Vector<T>& x, const Vector<T>& y) const { return g_->bracket(x, y); }
  T q(const Vector<T>& x, const Vector<T>& y) const { return bilinear(q_, x, y); }

 private:
  std::shared_ptr<const StructureAlgebra> g_;
  Matrix<Rational> q_exact_;
  Matrix<T> q_;
  ToleranceProfile tol_;
  std::vector<Matrix<T>> ad_;
};

}  // namespace gocheck
