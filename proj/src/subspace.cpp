#include "gocheck/subspace.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

namespace gocheck {

template <class T>
Subspace<T> Subspace<T>::from_basis(Matrix<T> rows, const ToleranceProfile& tol) {
  if (rank(rows, tol) != rows.rows()) throw std::invalid_argument("subspace basis rows are linearly dependent");
  return Subspace(std::move(rows));
}

template <>
Subspace<Rational> Subspace<Rational>::span(const Matrix<Rational>& rows, const ToleranceProfile& tol) {
  RowReducer<Rational> red(rows.cols(), tol);
  Matrix<Rational> kept(0, rows.cols());
  for (std::size_t i = 0; i < rows.rows(); ++i)
    if (red.add_row(rows.row(i))) kept.append_row(rows.row(i));
  return Subspace(std::move(kept));
}

template <>
Subspace<double> Subspace<double>::span(const Matrix<double>& rows, const ToleranceProfile& tol) {
  return Subspace(row_basis(rows, tol));
}

template <class T>
bool Subspace<T>::contains(const Vector<T>& v, const ToleranceProfile& tol) const {
  if (v.size() != ambient_dim()) throw std::invalid_argument("contains: dimension mismatch");
  if (is_zero_vector(v, tol)) return true;
  if (dim() == 0) return false;
  if constexpr (Field<T>::exact) {
    RowReducer<T> red(ambient_dim(), tol);
    for (std::size_t i = 0; i < dim(); ++i) red.add_row(basis_.row(i));
    return !red.add_row(v);
  } else {
    return std::holds_alternative<Solution<T>>(solve_linear(basis_.transpose(), v, tol));
  }
}

template <class T>
bool Subspace<T>::contains(const Subspace& other, const ToleranceProfile& tol) const {
  if (other.ambient_dim() != ambient_dim()) throw std::invalid_argument("contains: ambient mismatch");
  if (other.dim() > dim()) return false;
  Matrix<T> all = basis_;
  all.append_rows(other.basis_);
  return rank(all, tol) == dim();
}

template <class T>
bool Subspace<T>::same_span(const Subspace& other, const ToleranceProfile& tol) const {
  return dim() == other.dim() && contains(other, tol);
}

template <class T>
Subspace<T> Subspace<T>::operator+(const Subspace& other) const {
  Matrix<T> all = basis_;
  all.append_rows(other.basis_);
  return span(all);
}

template <class T>
Subspace<T> intersect(const Subspace<T>& a, const Subspace<T>& b, const ToleranceProfile& tol) {
  const std::size_t n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace<T>(n);
  // Solve sum_i s_i a_i - sum_j t_j b_j = 0.
  Matrix<T> sys(n, a.dim() + b.dim());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < a.dim(); ++i) sys(r, i) = a.basis()(i, r);
    for (std::size_t j = 0; j < b.dim(); ++j) sys(r, a.dim() + j) = -b.basis()(j, r);
  }
  const Matrix<T> ns = nullspace(sys, tol);
  Matrix<T> rows(0, n);
  for (std::size_t k = 0; k < ns.rows(); ++k) {
    Vector<T> coeff(ns.row(k).begin(), ns.row(k).begin() + static_cast<long>(a.dim()));
    rows.append_row(combine_rows(a.basis(), coeff));
  }
  return Subspace<T>::span(rows, tol);
}

template class Subspace<Rational>;
template class Subspace<double>;
template Subspace<Rational> intersect(const Subspace<Rational>&, const Subspace<Rational>&, const ToleranceProfile&);
template Subspace<double> intersect(const Subspace<double>&, const Subspace<double>&, const ToleranceProfile&);

std::string serialize_subspace(const Subspace<Rational>& s) {
  std::ostringstream out;
  out << "dim " << s.ambient_dim() << "\n";
  for (std::size_t i = 0; i < s.dim(); ++i) {
    out << "vector";
    for (const auto& v : s.basis().row(i)) out << " " << format_rational(v);
    out << "\n";
  }
  return out.str();
}

Subspace<Rational> parse_subspace(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  long dim = -1;
  Matrix<Rational> rows;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("subspace line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (dim < 0) {
      if (head != "dim" || !(ls >> dim) || dim < 0) fail("expected 'dim <d>' header");
      rows = Matrix<Rational>(0, static_cast<std::size_t>(dim));
      continue;
    }
    if (head != "vector") fail("expected 'vector'");
    Vector<Rational> v;
    std::string tok;
    while (ls >> tok) {
      try {
        v.push_back(parse_rational(tok));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    if (v.size() != static_cast<std::size_t>(dim)) fail("vector length differs from dim");
    rows.append_row(v);
  }
  if (dim < 0) throw std::invalid_argument("subspace: missing 'dim <d>' header");
  return Subspace<Rational>::from_basis(rows);
}

Subspace<Rational> parse_subspace(const std::string& text) {
  std::istringstream in(text);
  return parse_subspace(in);
}

}  // namespace gocheck
