#include "gocheck/lie.hpp"

#include <istream>
#include <sstream>

#include "gocheck/linalg.hpp"

namespace gocheck {

namespace {

template <class T>
const T& value_of(const StructureTerm& t);
template <>
const Rational& value_of<Rational>(const StructureTerm& t) {
  return t.value;
}
template <>
const double& value_of<double>(const StructureTerm& t) {
  return t.approx;
}

std::string index_list(const std::vector<std::size_t>& idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + ")";
}

}  // namespace

StructureAlgebra::StructureAlgebra(std::size_t dim, const Table& entries, std::vector<std::string> labels)
    : dim_(dim), terms_(dim * dim), labels_(std::move(labels)) {
  if (labels_.empty())
    for (std::size_t i = 0; i < dim; ++i) labels_.push_back("e" + std::to_string(i + 1));
  if (labels_.size() != dim) throw std::invalid_argument("StructureAlgebra: label count differs from dimension");
  for (const auto& [key, value] : entries) {
    const auto [i, j, k] = key;
    if (i >= dim || j >= dim || k >= dim) throw std::invalid_argument("StructureAlgebra: index out of range");
    if (sgn(value) == 0) continue;
    terms_[i * dim + j].push_back({k, value, value.get_d()});
  }
}

Rational StructureAlgebra::coefficient(std::size_t i, std::size_t j, std::size_t k) const {
  for (const auto& t : terms(i, j))
    if (t.k == k) return t.value;
  return Rational(0);
}

StructureAlgebra::Table StructureAlgebra::table() const {
  Table out;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (const auto& t : terms(i, j)) out[{i, j, t.k}] = t.value;
  return out;
}

bool StructureAlgebra::operator==(const StructureAlgebra& other) const {
  return dim_ == other.dim_ && table() == other.table();
}

template <class T>
Vector<T> StructureAlgebra::bracket(const Vector<T>& x, const Vector<T>& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw std::invalid_argument("bracket: dimension mismatch");
  Vector<T> z(dim_, T(0));
  const T zero(0);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i] == zero) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (y[j] == zero) continue;
      const auto& ts = terms(i, j);
      if (ts.empty()) continue;
      const T xy = x[i] * y[j];
      for (const auto& t : ts) z[t.k] += xy * value_of<T>(t);
    }
  }
  return z;
}

template <class T>
Matrix<T> StructureAlgebra::ad(const Vector<T>& x) const {
  if (x.size() != dim_) throw std::invalid_argument("ad: dimension mismatch");
  Matrix<T> m(dim_, dim_);
  const T zero(0);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i] == zero) continue;
    for (std::size_t j = 0; j < dim_; ++j)
      for (const auto& t : terms(i, j)) m(t.k, j) += x[i] * value_of<T>(t);
  }
  return m;
}

template <class T>
Matrix<T> StructureAlgebra::ad_basis(std::size_t i) const {
  Matrix<T> m(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j)
    for (const auto& t : terms(i, j)) m(t.k, j) = value_of<T>(t);
  return m;
}

template Vector<Rational> StructureAlgebra::bracket(const Vector<Rational>&, const Vector<Rational>&) const;
template Vector<double> StructureAlgebra::bracket(const Vector<double>&, const Vector<double>&) const;
template Matrix<Rational> StructureAlgebra::ad(const Vector<Rational>&) const;
template Matrix<double> StructureAlgebra::ad(const Vector<double>&) const;
template Matrix<Rational> StructureAlgebra::ad_basis(std::size_t) const;
template Matrix<double> StructureAlgebra::ad_basis(std::size_t) const;

namespace {

Matrix<long> commutator(const Matrix<long>& a, const Matrix<long>& b) { return a * b - b * a; }

// Coordinates of matrices in a fixed basis, via an invertible set of pivot entries.
class MatrixCoordinates {
 public:
  explicit MatrixCoordinates(const std::vector<Matrix<long>>& basis) : basis_(basis) {
    const std::size_t d = basis.size();
    const std::size_t n = basis.front().rows();
    RowReducer<Rational> red(n * n);
    for (const auto& b : basis) {
      SparseRow<Rational> row;
      for (std::size_t e = 0; e < n * n; ++e)
        if (b.data()[e] != 0) row.emplace_back(e, Rational(b.data()[e]));
      if (!red.add_sparse_row(row)) throw std::invalid_argument("matrix basis is linearly dependent");
    }
    positions_ = red.pivot_columns();
    std::sort(positions_.begin(), positions_.end());
    Matrix<Rational> st(d, d);  // st(p, a) = basis_a at position p
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t p = 0; p < d; ++p) st(p, a) = basis[a].data()[positions_[p]];
    inv_ = *inverse(st);
  }

  // Throws std::invalid_argument when m is outside the span.
  Vector<Rational> coordinates(const Matrix<long>& m) const {
    const std::size_t d = basis_.size();
    Vector<Rational> rhs(d);
    for (std::size_t p = 0; p < d; ++p) rhs[p] = m.data()[positions_[p]];
    Vector<Rational> c = inv_ * rhs;
    // Full check of the reconstruction.
    std::vector<Rational> acc(m.data().size());
    for (std::size_t a = 0; a < d; ++a) {
      if (sgn(c[a]) == 0) continue;
      for (std::size_t e = 0; e < acc.size(); ++e)
        if (basis_[a].data()[e] != 0) acc[e] += c[a] * basis_[a].data()[e];
    }
    for (std::size_t e = 0; e < acc.size(); ++e)
      if (acc[e] != m.data()[e]) throw std::invalid_argument("matrix basis is not closed under commutators");
    return c;
  }

 private:
  const std::vector<Matrix<long>>& basis_;
  std::vector<std::size_t> positions_;
  Matrix<Rational> inv_;
};

}  // namespace

std::optional<ValidationError> StructureAlgebra::find_violation() const {
  const std::size_t d = dim_;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        const Rational a = coefficient(i, j, k);
        const Rational b = coefficient(j, i, k);
        if (a + b != 0) {
          std::vector<std::size_t> idx{i + 1, j + 1, k + 1};
          return ValidationError("antisymmetry", idx,
                                 "antisymmetry violated at " + index_list(idx) + ": c[i][j][k] + c[j][i][k] = " +
                                     format_rational(a + b));
        }
      }
  // Jacobi on triples i < j < k (antisymmetry covers the rest).
  std::vector<Rational> acc(d);
  std::vector<std::size_t> touched;
  auto add_nested = [&](std::size_t a, std::size_t b, std::size_t c) {
    // [[e_a, e_b], e_c]
    for (const auto& t : terms(a, b))
      for (const auto& u : terms(t.k, c)) {
        if (sgn(acc[u.k]) == 0) touched.push_back(u.k);
        acc[u.k] += t.value * u.value;
      }
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = j + 1; k < d; ++k) {
        add_nested(i, j, k);
        add_nested(j, k, i);
        add_nested(k, i, j);
        std::optional<std::size_t> bad;
        for (std::size_t l : touched) {
          if (sgn(acc[l]) != 0 && (!bad || l < *bad)) bad = l;
        }
        for (std::size_t l : touched) acc[l] = 0;
        touched.clear();
        if (bad) {
          std::vector<std::size_t> idx{i + 1, j + 1, k + 1, *bad + 1};
          return ValidationError("jacobi", idx, "Jacobi identity violated at " + index_list(idx));
        }
      }
  if (realization_) {
    const auto& mats = *realization_;
    if (mats.size() != d) return ValidationError("realization", {}, "realization size differs from dimension");
    MatrixCoordinates coords(mats);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        Vector<Rational> c;
        try {
          c = coords.coordinates(commutator(mats[i], mats[j]));
        } catch (const std::invalid_argument&) {
          return ValidationError("realization", {i + 1, j + 1}, "realization commutator leaves the span");
        }
        for (std::size_t k = 0; k < d; ++k)
          if (c[k] != coefficient(i, j, k)) {
            std::vector<std::size_t> idx{i + 1, j + 1, k + 1};
            return ValidationError("realization", idx, "realization bracket differs at " + index_list(idx));
          }
      }
  }
  return std::nullopt;
}

void StructureAlgebra::validate() const {
  if (auto v = find_violation()) throw *v;
}

// ---------------------------------------------------------------------------

Family parse_family(const std::string& text) {
  if (text == "so") return Family::so;
  if (text == "su") return Family::su;
  if (text == "sp") return Family::sp;
  if (text == "abelian") return Family::abelian;
  throw std::invalid_argument("unsupported family '" + text + "' (expected so|su|sp|abelian)");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::so: return "so";
    case Family::su: return "su";
    case Family::sp: return "sp";
    case Family::abelian: return "abelian";
  }
  return "?";
}

StructureAlgebra algebra_from_matrices(const std::vector<Matrix<long>>& basis, std::vector<std::string> labels) {
  const std::size_t d = basis.size();
  if (d == 0) return StructureAlgebra(0, {}, {});
  MatrixCoordinates coords(basis);
  StructureAlgebra::Table table;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const auto c = coords.coordinates(commutator(basis[i], basis[j]));
      for (std::size_t k = 0; k < d; ++k)
        if (sgn(c[k]) != 0) {
          table[{i, j, k}] = c[k];
          table[{j, i, k}] = -c[k];
        }
    }
  StructureAlgebra g(d, table, std::move(labels));
  g.set_realization(basis);
  return g;
}

namespace {

std::string pair_label(const std::string& prefix, std::size_t i, std::size_t j, std::size_t n) {
  if (n <= 9) return prefix + std::to_string(i + 1) + std::to_string(j + 1);
  return prefix + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

// Complex n x n matrix with integer parts.
struct ComplexInt {
  Matrix<long> re, im;
  explicit ComplexInt(std::size_t n) : re(n, n), im(n, n) {}
};

// a + ib -> [[a, -b], [b, a]] blocks.
Matrix<long> realify(const ComplexInt& z) {
  const std::size_t n = z.re.rows();
  Matrix<long> m(2 * n, 2 * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const long a = z.re(r, c), b = z.im(r, c);
      m(2 * r, 2 * c) = a;
      m(2 * r, 2 * c + 1) = -b;
      m(2 * r + 1, 2 * c) = b;
      m(2 * r + 1, 2 * c + 1) = a;
    }
  return m;
}

StructureAlgebra build_so(std::size_t n) {
  std::vector<Matrix<long>> basis;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Matrix<long> a(n, n);
      a(i, j) = 1;
      a(j, i) = -1;
      basis.push_back(a);
      labels.push_back(pair_label("A", i, j, n));
    }
  return algebra_from_matrices(basis, labels);
}

StructureAlgebra build_su(std::size_t n) {
  std::vector<Matrix<long>> basis;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ComplexInt z(n);
      z.re(i, j) = 1;
      z.re(j, i) = -1;
      basis.push_back(realify(z));
      labels.push_back(pair_label("A", i, j, n));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ComplexInt z(n);
      z.im(i, j) = 1;
      z.im(j, i) = 1;
      basis.push_back(realify(z));
      labels.push_back(pair_label("S", i, j, n));
    }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    ComplexInt z(n);
    z.im(k, k) = 1;
    z.im(k + 1, k + 1) = -1;
    basis.push_back(realify(z));
    labels.push_back("H" + std::to_string(k + 1));
  }
  return algebra_from_matrices(basis, labels);
}

StructureAlgebra build_sp(std::size_t n) {
  std::vector<Matrix<long>> basis;
  std::vector<std::string> labels;
  // [[A, -conj B], [B, conj A]] as a complex 2n x 2n matrix.
  auto embed = [n](const ComplexInt& a, const ComplexInt& b) {
    ComplexInt z(2 * n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        z.re(r, c) = a.re(r, c);
        z.im(r, c) = a.im(r, c);
        z.re(n + r, n + c) = a.re(r, c);
        z.im(n + r, n + c) = -a.im(r, c);
        z.re(n + r, c) = b.re(r, c);
        z.im(n + r, c) = b.im(r, c);
        z.re(r, n + c) = -b.re(r, c);
        z.im(r, n + c) = b.im(r, c);
      }
    return realify(z);
  };
  const ComplexInt zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ComplexInt a(n);
      a.re(i, j) = 1;
      a.re(j, i) = -1;
      basis.push_back(embed(a, zero));
      labels.push_back(pair_label("A", i, j, n));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ComplexInt a(n);
      a.im(i, j) = 1;
      a.im(j, i) = 1;
      basis.push_back(embed(a, zero));
      labels.push_back(pair_label("S", i, j, n));
    }
  for (std::size_t k = 0; k < n; ++k) {
    ComplexInt a(n);
    a.im(k, k) = 1;
    basis.push_back(embed(a, zero));
    labels.push_back("D" + std::to_string(k + 1));
  }
  for (int part = 0; part < 2; ++part)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        ComplexInt b(n);
        Matrix<long>& target = part == 0 ? b.re : b.im;
        target(i, j) = 1;
        target(j, i) = 1;
        basis.push_back(embed(zero, b));
        labels.push_back(pair_label(part == 0 ? "R" : "I", i, j, n));
      }
  return algebra_from_matrices(basis, labels);
}

}  // namespace

StructureAlgebra build_classical(Family family, std::size_t n) {
  StructureAlgebra g;
  switch (family) {
    case Family::so:
      if (n < 2) throw std::invalid_argument("so(n) requires n >= 2");
      g = build_so(n);
      g.set_known_simple(n == 3 || n >= 5);
      break;
    case Family::su:
      if (n < 2) throw std::invalid_argument("su(n) requires n >= 2");
      g = build_su(n);
      g.set_known_simple(true);
      break;
    case Family::sp:
      if (n < 1) throw std::invalid_argument("sp(n) requires n >= 1");
      g = build_sp(n);
      g.set_known_simple(true);
      break;
    case Family::abelian:
      if (n < 1) throw std::invalid_argument("abelian(n) requires n >= 1");
      g = StructureAlgebra(n, {});
      break;
  }
  g.set_name(to_string(family) + "(" + std::to_string(n) + ")");
  return g;
}

StructureAlgebra build_classical(const std::string& family, std::size_t n) {
  return build_classical(parse_family(family), n);
}

// ---------------------------------------------------------------------------

StructureAlgebra ingest_structure_table(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> dim;
  StructureAlgebra::Table table;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("structure table line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (!dim) {
      if (first != "dim") fail("expected 'dim <d>' header");
      long d = -1;
      if (!(ls >> d) || d < 0) fail("malformed dimension");
      std::string extra;
      if (ls >> extra) fail("trailing tokens after dimension");
      dim = static_cast<std::size_t>(d);
      continue;
    }
    std::string tok[3];
    tok[0] = first;
    if (!(ls >> tok[1] >> tok[2])) fail("expected 'i j k value'");
    std::string value_text;
    if (!(ls >> value_text)) fail("missing value");
    std::string extra;
    if (ls >> extra) fail("trailing tokens");
    std::size_t idx[3];
    for (int t = 0; t < 3; ++t) {
      std::size_t pos = 0;
      long v = 0;
      try {
        v = std::stol(tok[t], &pos);
      } catch (const std::exception&) {
        fail("malformed index '" + tok[t] + "'");
      }
      if (pos != tok[t].size() || v < 1 || static_cast<std::size_t>(v) > *dim) fail("index out of range '" + tok[t] + "'");
      idx[t] = static_cast<std::size_t>(v - 1);
    }
    Rational value;
    try {
      value = parse_rational(value_text);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    const auto key = std::make_tuple(idx[0], idx[1], idx[2]);
    if (table.count(key)) fail("duplicate entry");
    table[key] = value;
  }
  if (!dim) throw std::invalid_argument("structure table: missing 'dim <d>' header");
  StructureAlgebra g(*dim, table);
  g.set_name("table(" + std::to_string(*dim) + ")");
  g.validate();
  return g;
}

StructureAlgebra ingest_structure_table(const std::string& text) {
  std::istringstream in(text);
  return ingest_structure_table(in);
}

std::string serialize_structure_table(const StructureAlgebra& g) {
  std::ostringstream out;
  out << "dim " << g.dim() << "\n";
  for (const auto& [key, value] : g.table()) {
    const auto [i, j, k] = key;
    out << i + 1 << " " << j + 1 << " " << k + 1 << " " << format_rational(value) << "\n";
  }
  return out.str();
}

StructureAlgebra direct_sum(const std::vector<StructureAlgebra>& parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.dim();
  StructureAlgebra::Table table;
  std::vector<std::string> labels;
  std::size_t offset = 0;
  for (std::size_t s = 0; s < parts.size(); ++s) {
    for (const auto& [key, value] : parts[s].table()) {
      const auto [i, j, k] = key;
      table[{i + offset, j + offset, k + offset}] = value;
    }
    for (const auto& l : parts[s].labels()) labels.push_back(std::to_string(s + 1) + ":" + l);
    offset += parts[s].dim();
  }
  StructureAlgebra g(total, table, labels);
  std::string name;
  for (const auto& p : parts) name += (name.empty() ? "" : "+") + p.name();
  g.set_name(name);
  if (parts.size() == 1) g.set_known_simple(parts[0].known_simple());
  return g;
}

SymmetricForm killing_form(const StructureAlgebra& g) {
  const std::size_t d = g.dim();
  SymmetricForm f;
  f.killing = Matrix<Rational>(d, d);
  // B(i, j) = sum_{k,l} c[i][k][l] c[j][l][k]
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (const auto& t : g.terms(i, k)) {
        const std::size_t l = t.k;
        for (std::size_t j = i; j < d; ++j)
          for (const auto& u : g.terms(j, l))
            if (u.k == k) f.killing(i, j) += t.value * u.value;
      }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) f.killing(i, j) = f.killing(j, i);
  f.q = scaled(f.killing, Rational(-1));
  f.degenerate = rank(f.killing) < d;
  f.q_positive_definite = is_positive_definite(f.q);
  return f;
}

template <class T>
std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> ad_invariance_violation(const StructureAlgebra& g,
                                                                                         const Matrix<T>& form,
                                                                                         const ToleranceProfile& tol) {
  const std::size_t d = g.dim();
  for (std::size_t k = 0; k < d; ++k) {
    // qa(i, j) = Q(e_i, [e_k, e_j])
    Matrix<T> qa(d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (const auto& t : g.terms(k, j)) {
        T c = Field<T>::from(t.value);
        for (std::size_t i = 0; i < d; ++i) qa(i, j) += form(i, t.k) * c;
      }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        T s = qa(i, j) + qa(j, i);
        if (!Field<T>::is_zero(s, tol)) return std::make_tuple(k, i, j);
      }
  }
  return std::nullopt;
}

template std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> ad_invariance_violation(
    const StructureAlgebra&, const Matrix<Rational>&, const ToleranceProfile&);
template std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> ad_invariance_violation(
    const StructureAlgebra&, const Matrix<double>&, const ToleranceProfile&);

// ---------------------------------------------------------------------------

template <class T>
LieContext<T>::LieContext(std::shared_ptr<const StructureAlgebra> g, const Matrix<Rational>& q, ToleranceProfile tol)
    : g_(std::move(g)), q_exact_(q), tol_(tol) {
  tol_.validate();
  const std::size_t d = g_->dim();
  if (q.rows() != d || q.cols() != d) throw std::invalid_argument("form has the wrong size");
  if (!is_positive_definite(q)) throw std::invalid_argument("form is not symmetric positive definite");
  if (auto bad = ad_invariance_violation(*g_, q)) {
    const auto [k, i, j] = *bad;
    throw std::invalid_argument("form is not ad-invariant at (" + std::to_string(k + 1) + "," + std::to_string(i + 1) +
                                "," + std::to_string(j + 1) + ")");
  }
  q_ = convert<T>(q);
  ad_.reserve(d);
  for (std::size_t i = 0; i < d; ++i) ad_.push_back(g_->ad_basis<T>(i));
}

template <class T>
LieContext<T> LieContext<T>::with_killing_form(std::shared_ptr<const StructureAlgebra> g, ToleranceProfile tol) {
  const SymmetricForm f = killing_form(*g);
  if (!f.q_positive_definite)
    throw std::invalid_argument("negative Killing form is not positive definite; supply an invariant form");
  return LieContext(std::move(g), f.q, tol);
}

template <class T>
Matrix<T> LieContext<T>::ad(const Vector<T>& x) const {
  return g_->ad(x);
}

template class LieContext<Rational>;
template class LieContext<double>;

}  // namespace gocheck
