#include "gocheck/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace gocheck {

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
  Matrix<double> m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

struct SvdData {
  Eigen::VectorXd singular;
  Eigen::MatrixXd v;
  std::size_t rank = 0;
};

SvdData svd_of(const Eigen::MatrixXd& a, const ToleranceProfile& tol) {
  SvdData out;
  const auto n = a.cols();
  if (a.rows() == 0 || n == 0) {
    out.v = Eigen::MatrixXd::Identity(n, n);
    out.singular = Eigen::VectorXd::Zero(0);
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  out.singular = svd.singularValues();
  out.v = svd.matrixV();
  const double smax = out.singular.size() > 0 ? out.singular(0) : 0.0;
  // Relative cut plus an absolute floor, so a numerically zero matrix has rank 0.
  const double cut = std::max(tol.rank_epsilon * smax, tol.residual_epsilon);
  for (Eigen::Index i = 0; i < out.singular.size(); ++i)
    if (out.singular(i) > cut) ++out.rank;
  return out;
}

// Binary search for a column in a sorted sparse row.
const Rational* find_entry(const SparseRow<Rational>& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const std::pair<std::size_t, Rational>& e, std::size_t c) { return e.first < c; });
  if (it == row.end() || it->first != col) return nullptr;
  return &it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact reducer: sparse RREF with unit pivots.

template <>
struct RowReducer<Rational>::Impl {
  std::size_t cols;
  std::vector<SparseRow<Rational>> rows;
  std::vector<long> pivot_row;  // per column
  std::vector<Rational> work;
  std::vector<char> queued;

  explicit Impl(std::size_t n) : cols(n), pivot_row(n, -1), work(n), queued(n, 0) {}

  bool add(const SparseRow<Rational>& input) {
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> heap;
    for (const auto& [c, v] : input) {
      if (c >= cols) throw std::invalid_argument("RowReducer: column index out of range");
      if (sgn(v) == 0) continue;
      if (!queued[c]) {
        queued[c] = 1;
        heap.push(c);
      }
      work[c] += v;
    }
    SparseRow<Rational> reduced;
    while (!heap.empty()) {
      const std::size_t c = heap.top();
      heap.pop();
      queued[c] = 0;
      if (sgn(work[c]) == 0) continue;
      const long pr = pivot_row[c];
      if (pr < 0) {
        reduced.emplace_back(c, work[c]);
        work[c] = 0;
        continue;
      }
      const Rational f = work[c];
      work[c] = 0;
      for (const auto& [j, v] : rows[static_cast<std::size_t>(pr)]) {
        if (j == c) continue;
        if (!queued[j]) {
          queued[j] = 1;
          heap.push(j);
        }
        work[j] -= f * v;
      }
    }
    if (reduced.empty()) return false;
    const Rational inv = 1 / reduced.front().second;
    for (auto& e : reduced) e.second *= inv;
    const std::size_t p = reduced.front().first;
    // Clear column p from the existing rows to keep the form fully reduced.
    for (auto& row : rows) {
      const Rational* hit = find_entry(row, p);
      if (hit == nullptr) continue;
      const Rational f = *hit;
      SparseRow<Rational> merged;
      merged.reserve(row.size() + reduced.size());
      std::size_t a = 0, b = 0;
      while (a < row.size() || b < reduced.size()) {
        if (b == reduced.size() || (a < row.size() && row[a].first < reduced[b].first)) {
          merged.push_back(row[a++]);
        } else if (a == row.size() || reduced[b].first < row[a].first) {
          merged.emplace_back(reduced[b].first, -f * reduced[b].second);
          ++b;
        } else {
          Rational v = row[a].second - f * reduced[b].second;
          if (sgn(v) != 0) merged.emplace_back(row[a].first, std::move(v));
          ++a;
          ++b;
        }
      }
      row = std::move(merged);
    }
    pivot_row[p] = static_cast<long>(rows.size());
    rows.push_back(std::move(reduced));
    return true;
  }

  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (const auto& r : rows) out.push_back(r.front().first);
    return out;
  }

  Matrix<Rational> nullspace(std::size_t ncols) const {
    Matrix<Rational> out(0, ncols);
    for (std::size_t f = 0; f < ncols; ++f) {
      if (pivot_row[f] >= 0) continue;
      Vector<Rational> x(ncols);
      x[f] = 1;
      for (const auto& r : rows) {
        const std::size_t p = r.front().first;
        if (p >= ncols) continue;
        if (const Rational* v = find_entry(r, f)) x[p] = -*v;
      }
      out.append_row(x);
    }
    return out;
  }

  Matrix<Rational> basis() const {
    std::vector<const SparseRow<Rational>*> sorted;
    for (const auto& r : rows) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->front().first < b->front().first; });
    Matrix<Rational> out(0, cols);
    for (const auto* r : sorted) {
      Vector<Rational> x(cols);
      for (const auto& [c, v] : *r) x[c] = v;
      out.append_row(x);
    }
    return out;
  }
};

template <>
RowReducer<Rational>::RowReducer(std::size_t cols, ToleranceProfile) : impl_(std::make_unique<Impl>(cols)) {}

template <>
bool RowReducer<Rational>::add_row(std::span<const Rational> row) {
  if (row.size() != impl_->cols) throw std::invalid_argument("RowReducer: row length mismatch");
  SparseRow<Rational> sparse;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (sgn(row[j]) != 0) sparse.emplace_back(j, row[j]);
  return impl_->add(sparse);
}

template <>
bool RowReducer<Rational>::add_sparse_row(const SparseRow<Rational>& row) {
  return impl_->add(row);
}

template <>
std::size_t RowReducer<Rational>::rank() const { return impl_->rows.size(); }

template <>
Matrix<Rational> RowReducer<Rational>::nullspace() const { return impl_->nullspace(impl_->cols); }

template <>
Matrix<Rational> RowReducer<Rational>::row_basis() const { return impl_->basis(); }

template <>
std::vector<std::size_t> RowReducer<Rational>::pivot_columns() const { return impl_->pivots(); }

// ---------------------------------------------------------------------------
// Float reducer: rows are stored, decisions deferred to an SVD.

template <>
struct RowReducer<double>::Impl {
  std::size_t cols;
  ToleranceProfile tol;
  std::vector<double> data;
  std::size_t nrows = 0;

  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd a(nrows, cols);
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = data[i * cols + j];
    return a;
  }
};

template <>
RowReducer<double>::RowReducer(std::size_t cols, ToleranceProfile tol) : impl_(std::make_unique<Impl>()) {
  impl_->cols = cols;
  impl_->tol = tol;
}

template <>
bool RowReducer<double>::add_row(std::span<const double> row) {
  if (row.size() != impl_->cols) throw std::invalid_argument("RowReducer: row length mismatch");
  impl_->data.insert(impl_->data.end(), row.begin(), row.end());
  ++impl_->nrows;
  return true;
}

template <>
bool RowReducer<double>::add_sparse_row(const SparseRow<double>& row) {
  std::vector<double> dense(impl_->cols, 0.0);
  for (const auto& [c, v] : row) {
    if (c >= impl_->cols) throw std::invalid_argument("RowReducer: column index out of range");
    dense[c] += v;
  }
  return add_row(std::span<const double>(dense));
}

template <>
std::size_t RowReducer<double>::rank() const { return svd_of(impl_->matrix(), impl_->tol).rank; }

template <>
Matrix<double> RowReducer<double>::nullspace() const {
  const auto svd = svd_of(impl_->matrix(), impl_->tol);
  const auto n = static_cast<Eigen::Index>(impl_->cols);
  const auto r = static_cast<Eigen::Index>(svd.rank);
  Matrix<double> out(0, impl_->cols);
  for (Eigen::Index j = r; j < n; ++j) {
    Vector<double> x(impl_->cols);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = svd.v(i, j);
    out.append_row(x);
  }
  return out;
}

template <>
Matrix<double> RowReducer<double>::row_basis() const {
  const auto svd = svd_of(impl_->matrix(), impl_->tol);
  Matrix<double> out(0, impl_->cols);
  for (std::size_t j = 0; j < svd.rank; ++j) {
    Vector<double> x(impl_->cols);
    for (std::size_t i = 0; i < impl_->cols; ++i) x[i] = svd.v(i, j);
    out.append_row(x);
  }
  return out;
}

template <>
std::vector<std::size_t> RowReducer<double>::pivot_columns() const {
  throw std::logic_error("pivot columns are only defined on the exact backend");
}

template <class T>
RowReducer<T>::~RowReducer() = default;
template <class T>
RowReducer<T>::RowReducer(RowReducer&&) noexcept = default;
template <class T>
RowReducer<T>& RowReducer<T>::operator=(RowReducer&&) noexcept = default;
template <class T>
std::size_t RowReducer<T>::cols() const {
  return impl_->cols;
}

template class RowReducer<Rational>;
template class RowReducer<double>;

// ---------------------------------------------------------------------------

template <>
std::size_t rank(const Matrix<Rational>& a, const ToleranceProfile&) {
  // Bareiss fraction-free elimination on the integer matrix obtained by
  // clearing denominators row by row.
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::vector<mpz_class>> z(m, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < m; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) z[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
  }
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < m; ++col) {
    std::size_t piv = r;
    while (piv < m && z[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(z[piv], z[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j) {
        z[i][j] = z[r][col] * z[i][j] - z[i][col] * z[r][j];
        mpz_divexact(z[i][j].get_mpz_t(), z[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      z[i][col] = 0;
    }
    prev = z[r][col];
    ++r;
  }
  return r;
}

template <>
std::size_t rank(const Matrix<double>& a, const ToleranceProfile& tol) {
  return svd_of(to_eigen(a), tol).rank;
}

template <class T>
Matrix<T> nullspace(const Matrix<T>& a, const ToleranceProfile& tol) {
  RowReducer<T> r(a.cols(), tol);
  for (std::size_t i = 0; i < a.rows(); ++i) r.add_row(a.row(i));
  return r.nullspace();
}

template <class T>
Matrix<T> row_basis(const Matrix<T>& rows, const ToleranceProfile& tol) {
  RowReducer<T> r(rows.cols(), tol);
  for (std::size_t i = 0; i < rows.rows(); ++i) r.add_row(rows.row(i));
  return r.row_basis();
}

template <>
SolveResult<Rational> solve_linear(const Matrix<Rational>& a, const Vector<Rational>& b, const ToleranceProfile& tol) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_linear: row count of A differs from length of b");
  const std::size_t n = a.cols();
  RowReducer<Rational> red(n + 1, tol);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    SparseRow<Rational> row;
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(a(i, j)) != 0) row.emplace_back(j, a(i, j));
    if (sgn(b[i]) != 0) row.emplace_back(n, b[i]);
    red.add_sparse_row(row);
  }
  const auto pivots = red.pivot_columns();
  const bool inconsistent = std::find(pivots.begin(), pivots.end(), n) != pivots.end();
  if (inconsistent) {
    Inconsistent<Rational> out;
    out.rank_augmented = pivots.size();
    out.rank_matrix = pivots.size() - 1;
    // Least-squares residual through the normal equations (always consistent).
    const Matrix<Rational> at = a.transpose();
    const auto normal = solve_linear(at * a, at * b, tol);
    const auto& ls = std::get<Solution<Rational>>(normal);
    out.residual = max_norm(sub(a * ls.x, b));
    return out;
  }
  Solution<Rational> sol;
  sol.x.assign(n, Rational(0));
  const Matrix<Rational> basis = red.row_basis();
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    std::size_t p = 0;
    while (sgn(basis(i, p)) == 0) ++p;
    sol.x[p] = basis(i, n);
  }
  Matrix<Rational> full_null = red.nullspace();
  sol.nullspace = Matrix<Rational>(0, n);
  for (std::size_t i = 0; i < full_null.rows(); ++i) {
    if (sgn(full_null(i, n)) != 0) continue;  // the free augmented column is not a solution direction
    Vector<Rational> v(full_null.row(i).begin(), full_null.row(i).begin() + static_cast<long>(n));
    sol.nullspace.append_row(v);
  }
  return sol;
}

template <>
SolveResult<double> solve_linear(const Matrix<double>& a, const Vector<double>& b, const ToleranceProfile& tol) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_linear: row count of A differs from length of b");
  const std::size_t n = a.cols();
  const Eigen::MatrixXd ea = to_eigen(a);
  Eigen::VectorXd eb(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) eb(i) = b[i];
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  std::size_t r = 0;
  if (a.rows() > 0 && n > 0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(ea, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    const double cut = std::max(tol.rank_epsilon * smax, tol.residual_epsilon);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > cut) ++r;
    const Eigen::MatrixXd u = svd.matrixU();
    v = svd.matrixV();
    for (std::size_t i = 0; i < r; ++i) x += v.col(i) * (u.col(i).dot(eb) / s(i));
  }
  const Eigen::VectorXd resid = ea * x - eb;
  const double res = resid.size() > 0 ? resid.cwiseAbs().maxCoeff() : 0.0;
  if (res > tol.residual_epsilon) {
    Inconsistent<double> out;
    out.residual = res;
    out.rank_matrix = r;
    out.rank_augmented = r + 1;
    return out;
  }
  Solution<double> sol;
  sol.x.assign(x.data(), x.data() + n);
  sol.nullspace = Matrix<double>(0, n);
  for (std::size_t j = r; j < n; ++j) {
    Vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v(i, j);
    sol.nullspace.append_row(col);
  }
  return sol;
}

template <>
std::optional<Matrix<Rational>> inverse(const Matrix<Rational>& a, const ToleranceProfile&) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = a.rows();
  Matrix<Rational> m = a;
  Matrix<Rational> inv = Matrix<Rational>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(p, j), m(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    const Rational pinv = 1 / m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) *= pinv;
      inv(c, j) *= pinv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        if (sgn(m(c, j)) != 0) m(i, j) -= f * m(c, j);
        if (sgn(inv(c, j)) != 0) inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

template <>
std::optional<Matrix<double>> inverse(const Matrix<double>& a, const ToleranceProfile& tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix is not square");
  if (a.rows() == 0) return Matrix<double>(0, 0);
  const Eigen::MatrixXd e = to_eigen(a);
  if (svd_of(e, tol).rank < a.rows()) return std::nullopt;
  return from_eigen(e.fullPivLu().inverse());
}

template <>
bool is_positive_definite(const Matrix<Rational>& a, const ToleranceProfile&) {
  if (a.rows() != a.cols()) return false;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (a(i, j) != a(j, i)) return false;
  Matrix<Rational> m = a;
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(m(k, k)) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(m(i, k)) == 0) continue;
      const Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

template <>
bool is_positive_definite(const Matrix<double>& a, const ToleranceProfile& tol) {
  if (a.rows() != a.cols()) return false;
  if (a.rows() == 0) return true;
  const Eigen::MatrixXd e = to_eigen(a);
  if ((e - e.transpose()).cwiseAbs().maxCoeff() > tol.residual_epsilon) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > tol.residual_epsilon;
}

template <class T>
Vector<T> min_norm_representative(const Vector<T>& x0, const Matrix<T>& null_rows, const Matrix<T>& gram,
                                  const ToleranceProfile& tol) {
  if (null_rows.rows() == 0) return x0;
  const Matrix<T> ng = null_rows * gram;
  const Matrix<T> ngn = ng * null_rows.transpose();
  const auto inv = inverse(ngn, tol);
  if (!inv) throw std::logic_error("min_norm_representative: nullspace Gram matrix is singular");
  const Vector<T> rhs = ng * x0;
  Vector<T> c = (*inv) * rhs;
  for (auto& v : c) v = -v;
  return add(x0, combine_rows(null_rows, c));
}

template <class T>
bool is_self_adjoint(const Matrix<T>& op, const Matrix<T>& form, const ToleranceProfile& tol) {
  if (op.rows() != op.cols() || form.rows() != op.rows() || form.cols() != op.cols()) return false;
  const Matrix<T> lhs = op.transpose() * form;
  const Matrix<T> rhs = form * op;
  return is_zero_matrix(lhs - rhs, tol);
}

template <class T>
Matrix<T> orthogonal_projector(const Matrix<T>& basis, const Matrix<T>& form, const ToleranceProfile& tol) {
  const std::size_t n = form.rows();
  if (basis.rows() == 0) return Matrix<T>(n, n);
  const Matrix<T> bg = basis * form;
  const auto inv = inverse(bg * basis.transpose(), tol);
  if (!inv) throw std::invalid_argument("orthogonal_projector: basis rows are dependent or the form is degenerate");
  return basis.transpose() * ((*inv) * bg);
}

template <class T>
Matrix<T> reconstruct(const std::vector<Eigenspace<T>>& spaces, const Matrix<T>& form, const ToleranceProfile& tol) {
  Matrix<T> out(form.rows(), form.cols());
  for (const auto& s : spaces) out = out + scaled(orthogonal_projector(s.basis, form, tol), s.value);
  return out;
}

namespace {

struct FloatEigen {
  std::vector<double> values;                  // cluster means, ascending
  std::vector<std::vector<Vector<double>>> vecs;  // per cluster
};

FloatEigen float_eigenspaces(const Matrix<double>& op, const Matrix<double>& form, const ToleranceProfile& tol) {
  const std::size_t n = op.rows();
  FloatEigen out;
  if (n == 0) return out;
  const Eigen::MatrixXd g = to_eigen(form);
  const Eigen::MatrixXd s = to_eigen(op);
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("symmetric_eigenspaces: form is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd linv = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd m = linv * (g * s) * linv.transpose();
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::MatrixXd x = linv.transpose() * es.eigenvectors();
  const auto& ev = es.eigenvalues();
  double scale = 1.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
  std::vector<double> sum;
  std::vector<int> count;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const bool new_cluster = out.values.empty() || ev(i) - ev(i - 1) > tol.eigen_gap_epsilon * scale;
    if (new_cluster) {
      out.values.push_back(ev(i));
      out.vecs.emplace_back();
      sum.push_back(0.0);
      count.push_back(0);
    }
    sum.back() += ev(i);
    count.back() += 1;
    Vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = x(r, i);
    out.vecs.back().push_back(std::move(col));
  }
  for (std::size_t c = 0; c < out.values.size(); ++c) out.values[c] = sum[c] / count[c];
  return out;
}

}  // namespace

template <>
std::vector<Eigenspace<double>> symmetric_eigenspaces(const Matrix<double>& op, const Matrix<double>& form,
                                                      const ToleranceProfile& tol) {
  if (!is_self_adjoint(op, form, tol)) throw std::invalid_argument("symmetric_eigenspaces: operator is not self-adjoint");
  const auto fe = float_eigenspaces(op, form, tol);
  std::vector<Eigenspace<double>> out;
  for (std::size_t c = 0; c < fe.values.size(); ++c)
    out.push_back({fe.values[c], Matrix<double>::from_rows(fe.vecs[c], op.rows())});
  return out;
}

template <>
std::vector<Eigenspace<Rational>> symmetric_eigenspaces(const Matrix<Rational>& op, const Matrix<Rational>& form,
                                                        const ToleranceProfile& tol) {
  if (!is_self_adjoint(op, form, tol)) throw std::invalid_argument("symmetric_eigenspaces: operator is not self-adjoint");
  if (!is_positive_definite(form, tol)) throw std::invalid_argument("symmetric_eigenspaces: form is not positive definite");
  const std::size_t n = op.rows();
  const auto fe = float_eigenspaces(convert<double>(op), convert<double>(form), tol);
  std::vector<Eigenspace<Rational>> out;
  std::size_t total = 0;
  for (double v : fe.values) {
    const Rational lambda = rationalize(v);
    Matrix<Rational> shifted = op;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
    Matrix<Rational> basis = nullspace(shifted, tol);
    if (basis.rows() == 0) throw std::domain_error("symmetric_eigenspaces: operator has non-rational eigenvalues");
    total += basis.rows();
    out.push_back({lambda, std::move(basis)});
  }
  if (total != n) throw std::domain_error("symmetric_eigenspaces: operator has non-rational eigenvalues");
  return out;
}

template Matrix<Rational> nullspace(const Matrix<Rational>&, const ToleranceProfile&);
template Matrix<double> nullspace(const Matrix<double>&, const ToleranceProfile&);
template Matrix<Rational> row_basis(const Matrix<Rational>&, const ToleranceProfile&);
template Matrix<double> row_basis(const Matrix<double>&, const ToleranceProfile&);
template Vector<Rational> min_norm_representative(const Vector<Rational>&, const Matrix<Rational>&,
                                                  const Matrix<Rational>&, const ToleranceProfile&);
template Vector<double> min_norm_representative(const Vector<double>&, const Matrix<double>&, const Matrix<double>&,
                                                const ToleranceProfile&);
template bool is_self_adjoint(const Matrix<Rational>&, const Matrix<Rational>&, const ToleranceProfile&);
template bool is_self_adjoint(const Matrix<double>&, const Matrix<double>&, const ToleranceProfile&);
template Matrix<Rational> orthogonal_projector(const Matrix<Rational>&, const Matrix<Rational>&,
                                               const ToleranceProfile&);
template Matrix<double> orthogonal_projector(const Matrix<double>&, const Matrix<double>&, const ToleranceProfile&);
template Matrix<Rational> reconstruct(const std::vector<Eigenspace<Rational>>&, const Matrix<Rational>&,
                                      const ToleranceProfile&);
template Matrix<double> reconstruct(const std::vector<Eigenspace<double>>&, const Matrix<double>&,
                                    const ToleranceProfile&);

}  // namespace gocheck
