#include "gocheck/metrics.hpp"

#include <istream>
#include <set>
#include <sstream>

#include "gocheck/linalg.hpp"
#include "gocheck/rep.hpp"

namespace gocheck {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw std::invalid_argument("blockspec line " + std::to_string(line) + ": " + what);
}

const Subspace<Rational>& lookup(const std::map<std::string, Subspace<Rational>>& named, const std::string& name,
                                 std::size_t line) {
  auto it = named.find(name);
  if (it == named.end()) parse_fail(line, "unknown subspace '" + name + "'");
  return it->second;
}

}  // namespace

BlockSpec parse_blockspec(std::istream& in, const std::map<std::string, Subspace<Rational>>& named) {
  BlockSpec spec;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string kind;
    if (!(ls >> kind)) continue;
    std::string name, word;
    if (!(ls >> name >> word)) parse_fail(line, "expected '<kind> <name> <scalar|matrix> ...'");
    if (!seen.insert(name).second) parse_fail(line, "duplicate block '" + name + "'");
    const auto& space = lookup(named, name, line);
    if (kind == "block") {
      if (word != "scalar") parse_fail(line, "expected 'scalar' after block name");
      std::string value, extra;
      if (!(ls >> value)) parse_fail(line, "missing scalar value");
      if (ls >> extra) parse_fail(line, "trailing token '" + extra + "'");
      Rational v;
      try {
        v = parse_rational(value);
      } catch (const std::invalid_argument& e) {
        parse_fail(line, e.what());
      }
      spec.blocks.push_back({name, space, v});
    } else if (kind == "centerblock") {
      if (word != "matrix") parse_fail(line, "expected 'matrix' after centerblock name");
      if (spec.center) parse_fail(line, "at most one centerblock");
      const std::size_t d = space.dim();
      Matrix<Rational> g(d, d);
      std::string tok;
      std::size_t count = 0;
      while (ls >> tok) {
        if (count >= d * d) parse_fail(line, "too many matrix entries");
        try {
          g(count / d, count % d) = parse_rational(tok);
        } catch (const std::invalid_argument& e) {
          parse_fail(line, e.what());
        }
        ++count;
      }
      if (count != d * d) parse_fail(line, "expected " + std::to_string(d * d) + " matrix entries");
      spec.center = CenterBlock{name, space, std::move(g)};
    } else {
      parse_fail(line, "unknown directive '" + kind + "'");
    }
  }
  return spec;
}

BlockSpec parse_blockspec(const std::string& text, const std::map<std::string, Subspace<Rational>>& named) {
  std::istringstream in(text);
  return parse_blockspec(in, named);
}

std::string serialize_blockspec(const BlockSpec& spec) {
  std::ostringstream out;
  for (const auto& b : spec.blocks) out << "block " << b.name << " scalar " << format_rational(b.value) << '\n';
  if (spec.center) {
    out << "centerblock " << spec.center->name << " matrix";
    for (const auto& x : spec.center->gram.data()) out << ' ' << format_rational(x);
    out << '\n';
  }
  return out.str();
}

BlockSpec partition_blockspec(const EmbeddingLayout& layout, const std::vector<Rational>& params) {
  const auto names = layout.names();
  if (params.size() != names.size())
    throw std::invalid_argument("partition_blockspec: expected " + std::to_string(names.size()) + " parameters, got " +
                                std::to_string(params.size()));
  const auto named = layout.named();
  BlockSpec spec;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& s = named.at(names[i]);
    if (s.dim() == 0) continue;
    spec.blocks.push_back({names[i], s, params[i]});
  }
  return spec;
}

void validate_blockspec(const LieContext<Rational>& ctx, const BlockSpec& spec) {
  validate_blockspec(ctx.form_exact(), spec);
}

void validate_blockspec(const Matrix<Rational>& q, const BlockSpec& spec) {
  const std::size_t dim = q.rows();
  std::vector<const Subspace<Rational>*> spaces;
  std::size_t total = 0;
  for (const auto& b : spec.blocks) {
    if (sgn(b.value) <= 0) throw std::invalid_argument("block '" + b.name + "' has a non-positive parameter");
    if (b.space.ambient_dim() != dim) throw std::invalid_argument("block '" + b.name + "' has wrong ambient dimension");
    spaces.push_back(&b.space);
    total += b.space.dim();
  }
  if (spec.center) {
    const auto& c = *spec.center;
    if (c.space.ambient_dim() != dim) throw std::invalid_argument("center block has wrong ambient dimension");
    if (!(c.gram == c.gram.transpose())) throw std::invalid_argument("center block Gram matrix is not symmetric");
    if (!is_positive_definite(c.gram)) throw std::invalid_argument("center block Gram matrix is not positive definite");
    spaces.push_back(&c.space);
    total += c.space.dim();
  }
  for (std::size_t i = 0; i < spaces.size(); ++i)
    for (std::size_t j = i + 1; j < spaces.size(); ++j)
      if (!is_zero_matrix(Matrix<Rational>(spaces[i]->basis() * q * spaces[j]->basis().transpose()), {}))
        throw std::invalid_argument("blocks " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                    " overlap (not Q-orthogonal)");
  if (total != dim)
    throw std::invalid_argument("blocks span dimension " + std::to_string(total) + " but the algebra has dimension " +
                                std::to_string(dim));
}

Matrix<Rational> lambda_from_blocks(const LieContext<Rational>& ctx, const BlockSpec& spec) {
  return lambda_from_blocks(ctx.form_exact(), spec);
}

Matrix<Rational> lambda_from_blocks(const Matrix<Rational>& q, const BlockSpec& spec) {
  validate_blockspec(q, spec);
  const std::size_t d = q.rows();
  Matrix<Rational> lambda(d, d);
  for (const auto& b : spec.blocks) lambda = lambda + scaled(orthogonal_projector(b.space.basis(), q), b.value);
  if (spec.center) {
    const auto& c = *spec.center;
    const Matrix<Rational>& bz = c.space.basis();
    const Matrix<Rational> bq = bz * q;
    const Matrix<Rational> gi = *inverse(Matrix<Rational>(bq * bz.transpose()));
    lambda = lambda + bz.transpose() * gi * c.gram * gi * bq;
  }
  return lambda;
}

template <class T>
MetricOperator<T>::MetricOperator(const LieContext<T>& ctx, Matrix<T> lambda, std::optional<Matrix<Rational>> exact,
                                  std::optional<BlockSpec> provenance)
    : lambda_(std::move(lambda)), exact_(std::move(exact)), provenance_(std::move(provenance)) {
  const std::size_t d = ctx.dim();
  if (lambda_.rows() != d || lambda_.cols() != d) throw std::invalid_argument("metric operator has wrong size");
  if (!is_self_adjoint(lambda_, ctx.form(), ctx.tol()))
    throw std::invalid_argument("metric operator is not Q-self-adjoint");
  gram_ = ctx.form() * lambda_;
  if (!is_positive_definite(gram_, ctx.tol())) throw std::invalid_argument("metric operator is not positive definite");
  try {
    eigen_ = symmetric_eigenspaces(lambda_, ctx.form(), ctx.tol());
    has_eigen_ = true;
  } catch (const std::domain_error&) {
    has_eigen_ = false;
  }
}

template <class T>
std::vector<Subspace<T>> MetricOperator<T>::invariant_pieces() const {
  std::vector<Subspace<T>> out;
  if (has_eigen_) {
    for (const auto& e : eigen_) out.push_back(Subspace<T>::from_basis(e.basis));
  } else if (provenance_) {
    for (const auto& b : provenance_->blocks) out.push_back(Subspace<T>::from_basis(convert<T>(b.space.basis())));
    if (provenance_->center)
      out.push_back(Subspace<T>::from_basis(convert<T>(provenance_->center->space.basis())));
  } else {
    out.push_back(Subspace<T>::whole(dim()));
  }
  return out;
}

template <class T>
MetricOperator<T> metric_from_blocks(const LieContext<T>& ctx, const BlockSpec& spec) {
  Matrix<Rational> l = lambda_from_blocks(ctx.form_exact(), spec);
  Matrix<T> lt = convert<T>(l);
  return MetricOperator<T>(ctx, std::move(lt), std::move(l), spec);
}

template <class T>
MetricOperator<T> metric_from_exact(const LieContext<T>& ctx, const Matrix<Rational>& lambda) {
  return MetricOperator<T>(ctx, convert<T>(lambda), lambda);
}

template <class T>
EquivarianceResult<T> equivariance_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                         const Subspace<T>& h) {
  EquivarianceResult<T> out;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    const Matrix<T> a = ctx.ad(h.vector(i));
    Matrix<T> r = a * lambda.matrix() - lambda.matrix() * a;
    if (!is_zero_matrix(r, ctx.tol())) {
      out.ok = false;
      out.failing_index = i;
      out.residual = std::move(r);
      return out;
    }
  }
  return out;
}

template <class T>
Subspace<T> isometry_subalgebra(const LieContext<T>& ctx, const MetricOperator<T>& lambda) {
  // Skewness of ad_X for <.,.> with Gram M: ad_X^T M + M ad_X = 0, linear in X.
  const std::size_t d = ctx.dim();
  const auto& g = ctx.algebra();
  const Matrix<T>& m = lambda.gram();
  auto coef = [](const StructureTerm& t) {
    if constexpr (Field<T>::exact) return t.value;
    else return t.approx;
  };
  std::vector<Matrix<T>> s(d, Matrix<T>(d, d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (const auto& t : g.terms(i, a)) {
        // ad_i(t.k, a) = coef; contributes to (ad_i^T M)(a, :) and (M ad_i)(:, a).
        const T c = coef(t);
        for (std::size_t b = 0; b < d; ++b) {
          if (Field<T>::is_zero(m(t.k, b), ctx.tol())) continue;
          const T v = c * m(t.k, b);
          s[i](a, b) += v;
          s[i](b, a) += v;
        }
      }
  RowReducer<T> red(d, ctx.tol());
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      SparseRow<T> row;
      for (std::size_t i = 0; i < d; ++i)
        if (!Field<T>::is_zero(s[i](a, b), ctx.tol())) row.emplace_back(i, s[i](a, b));
      if (!row.empty()) red.add_sparse_row(row);
    }
  Subspace<T> k = Subspace<T>::span(red.nullspace(), ctx.tol());
  if (!is_subalgebra(ctx, k).ok) throw std::logic_error("isometry_subalgebra: solution space is not a subalgebra");
  return k;
}

template <class T>
std::optional<Matrix<T>> restrict_to(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& s) {
  const std::size_t n = s.dim();
  Matrix<T> out(n, n);
  if (n == 0) return out;
  const SubspaceCoordinates<T> sc(ctx, s);
  for (std::size_t j = 0; j < n; ++j) {
    const Vector<T> img = lambda.apply(s.vector(j));
    if (!sc.contains(img)) return std::nullopt;
    const Vector<T> c = sc.coords(img);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = c[i];
  }
  return out;
}

template <class T>
std::optional<T> scalar_on(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& s) {
  if (s.dim() == 0) return std::nullopt;
  std::optional<T> c;
  for (std::size_t j = 0; j < s.dim(); ++j) {
    const Vector<T> v = s.vector(j);
    const Vector<T> img = lambda.apply(v);
    if (!c) {
      std::size_t p = 0;
      while (Field<T>::is_zero(v[p], ctx.tol())) ++p;
      c = T(img[p] / v[p]);
    }
    if (!is_zero_vector(sub(img, scale(v, *c)), ctx.tol())) return std::nullopt;
  }
  return c;
}

namespace {

template <class T>
DecomposedSubalgebra<T> decompose(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed) {
  if (k.dim() == ctx.dim() && ctx.algebra().known_simple()) {
    DecomposedSubalgebra<T> d;
    d.center = Subspace<T>(ctx.dim());
    d.ideals.push_back(k);
    return d;
  }
  return ideal_decomposition(ctx, k, seed);
}

}  // namespace

template <class T>
BiInvarianceReport bi_invariance_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                       const Subspace<T>& k, std::uint64_t seed) {
  BiInvarianceReport r;
  if (!restrict_to(ctx, lambda, k)) {
    r.reason = "Lambda does not preserve k";
    return r;
  }
  const auto dec = decompose(ctx, k, seed);
  if (!restrict_to(ctx, lambda, dec.center)) {
    r.reason = "Lambda does not preserve the center of k";
    return r;
  }
  for (std::size_t i = 0; i < dec.ideals.size(); ++i)
    if (!scalar_on(ctx, lambda, dec.ideals[i])) {
      r.reason = "Lambda is not scalar on simple ideal " + std::to_string(i + 1);
      return r;
    }
  r.ok = true;
  return r;
}

template <class T>
DaZiReport<T> dazi_structure_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda, std::uint64_t seed) {
  if (!is_simple(ctx, seed)) throw UnsupportedError("dazi_structure_check: ambient algebra is not simple");
  DaZiReport<T> r;
  r.isometry_subalgebra = isometry_subalgebra(ctx, lambda);
  r.decomposition = decompose(ctx, r.isometry_subalgebra, seed);
  r.m = orthogonal_complement(ctx, r.isometry_subalgebra);
  const auto& dec = r.decomposition;
  auto zblock = restrict_to(ctx, lambda, dec.center);
  if (!zblock) {
    r.reason = "Lambda does not preserve the center of k'";
    return r;
  }
  r.center_block = *zblock;
  for (std::size_t i = 0; i < dec.ideals.size(); ++i) {
    auto c = scalar_on(ctx, lambda, dec.ideals[i]);
    if (!c) {
      r.reason = "Lambda is not scalar on ideal " + std::to_string(i + 1) + " of k'";
      r.ideal_scalars.clear();
      return r;
    }
    r.ideal_scalars.push_back(*c);
  }
  if (r.m.dim() > 0) {
    r.m_scalar = scalar_on(ctx, lambda, r.m);
    if (!r.m_scalar) {
      r.reason = "Lambda is not a single scalar on m";
      r.ideal_scalars.clear();
      return r;
    }
  }
  // Rebuild from the reported blocks and compare.
  const std::size_t d = ctx.dim();
  Matrix<T> rebuilt(d, d);
  for (std::size_t i = 0; i < dec.ideals.size(); ++i)
    rebuilt = rebuilt + scaled(orthogonal_projector(dec.ideals[i].basis(), ctx.form(), ctx.tol()), r.ideal_scalars[i]);
  if (r.m_scalar) rebuilt = rebuilt + scaled(orthogonal_projector(r.m.basis(), ctx.form(), ctx.tol()), *r.m_scalar);
  if (dec.center.dim() > 0) {
    const Matrix<T>& bz = dec.center.basis();
    const SubspaceCoordinates<T> sc(ctx, dec.center);
    rebuilt = rebuilt + bz.transpose() * r.center_block * sc.map();
  }
  if (!is_zero_matrix(Matrix<T>(rebuilt - lambda.matrix()), ctx.tol()))
    throw std::logic_error("dazi_structure_check: rebuilt operator differs from Lambda");
  r.verdict = true;
  return r;
}

#define GOCHECK_INSTANTIATE(T)                                                                                     \
  template class MetricOperator<T>;                                                                                \
  template MetricOperator<T> metric_from_blocks(const LieContext<T>&, const BlockSpec&);                           \
  template MetricOperator<T> metric_from_exact(const LieContext<T>&, const Matrix<Rational>&);                     \
  template EquivarianceResult<T> equivariance_check(const LieContext<T>&, const MetricOperator<T>&,                \
                                                    const Subspace<T>&);                                           \
  template Subspace<T> isometry_subalgebra(const LieContext<T>&, const MetricOperator<T>&);                        \
  template std::optional<Matrix<T>> restrict_to(const LieContext<T>&, const MetricOperator<T>&, const Subspace<T>&); \
  template std::optional<T> scalar_on(const LieContext<T>&, const MetricOperator<T>&, const Subspace<T>&);         \
  template BiInvarianceReport bi_invariance_check(const LieContext<T>&, const MetricOperator<T>&, const Subspace<T>&, \
                                                  std::uint64_t);                                                  \
  template DaZiReport<T> dazi_structure_check(const LieContext<T>&, const MetricOperator<T>&, std::uint64_t);

GOCHECK_INSTANTIATE(Rational)
GOCHECK_INSTANTIATE(double)

}  // namespace gocheck
