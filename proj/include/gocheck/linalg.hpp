#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "gocheck/matrix.hpp"
#include "gocheck/scalar.hpp"

namespace gocheck {

/// Sparse row: (column, value) pairs; columns need not be sorted on input.
template <class T>
using SparseRow = std::vector<std::pair<std::size_t, T>>;

/// Streaming row-space accumulator. The exact backend keeps a sparse reduced
/// row echelon form updated per row; the float backend stores the rows and
/// decides rank through an SVD when queried.
template <class T>
class RowReducer {
 public:
  RowReducer(std::size_t cols, ToleranceProfile tol = {});
  ~RowReducer();
  RowReducer(RowReducer&&) noexcept;
  RowReducer& operator=(RowReducer&&) noexcept;

  std::size_t cols() const;

  /// Returns true when the row enlarged the row space (exact backend only;
  /// the float backend always returns true).
  bool add_row(std::span<const T> row);
  bool add_row(const Vector<T>& row) { return add_row(std::span<const T>(row)); }
  bool add_sparse_row(const SparseRow<T>& row);

  std::size_t rank() const;
  /// Rows form a basis of { x : A x = 0 }.
  Matrix<T> nullspace() const;
  /// Rows form a basis of the row space (RREF rows on the exact backend,
  /// orthonormal rows on the float backend).
  Matrix<T> row_basis() const;
  /// Pivot columns of the reduced form (exact backend only).
  std::vector<std::size_t> pivot_columns() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

template <class T>
struct Solution {
  Vector<T> x;
  Matrix<T> nullspace;  // rows
};

template <class T>
struct Inconsistent {
  double residual = 0.0;  // max-norm of the least-squares residual
  std::size_t rank_matrix = 0;
  std::size_t rank_augmented = 0;
};

template <class T>
using SolveResult = std::variant<Solution<T>, Inconsistent<T>>;

/// Rank: fraction-free elimination (exact) or singular values above
/// rank_epsilon * sigma_max (float).
template <class T>
std::size_t rank(const Matrix<T>& a, const ToleranceProfile& tol = {});

template <class T>
Matrix<T> nullspace(const Matrix<T>& a, const ToleranceProfile& tol = {});

template <class T>
Matrix<T> row_basis(const Matrix<T>& rows, const ToleranceProfile& tol = {});

/// Solves A x = b. Exact: consistency decided by rank. Float: least squares,
/// Inconsistent when the residual max-norm exceeds residual_epsilon.
/// Throws std::invalid_argument on a dimension mismatch.
template <class T>
SolveResult<T> solve_linear(const Matrix<T>& a, const Vector<T>& b, const ToleranceProfile& tol = {});

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a, const ToleranceProfile& tol = {});

/// Symmetric positive definiteness (exact pivots / Cholesky).
template <class T>
bool is_positive_definite(const Matrix<T>& a, const ToleranceProfile& tol = {});

/// x = x0 + sum c_i n_i minimising x^T G x over the solution set.
template <class T>
Vector<T> min_norm_representative(const Vector<T>& x0, const Matrix<T>& null_rows, const Matrix<T>& gram,
                                  const ToleranceProfile& tol = {});

template <class T>
struct Eigenspace {
  T value;
  Matrix<T> basis;  // rows, coordinates in the ambient basis
};

/// Eigenspaces of an operator S (acting on column coordinates) that is
/// self-adjoint for the positive definite form G, i.e. S^T G = G S.
/// Sorted by increasing eigenvalue. The exact backend requires rational
/// eigenvalues and throws std::domain_error otherwise. Throws
/// std::invalid_argument for non-self-adjoint input.
template <class T>
std::vector<Eigenspace<T>> symmetric_eigenspaces(const Matrix<T>& op, const Matrix<T>& form,
                                                 const ToleranceProfile& tol = {});

/// True when S^T G == G S (within residual_epsilon on the float backend).
template <class T>
bool is_self_adjoint(const Matrix<T>& op, const Matrix<T>& form, const ToleranceProfile& tol = {});

/// Sum over eigenspaces of value * (form-orthogonal projector).
template <class T>
Matrix<T> reconstruct(const std::vector<Eigenspace<T>>& spaces, const Matrix<T>& form,
                      const ToleranceProfile& tol = {});

/// Form-orthogonal projector onto the row span of `basis` (independent rows),
/// as a matrix acting on column coordinates.
template <class T>
Matrix<T> orthogonal_projector(const Matrix<T>& basis, const Matrix<T>& form, const ToleranceProfile& tol = {});

}  // namespace gocheck
