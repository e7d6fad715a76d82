#include "gocheck/go.hpp"

#include <cmath>
#include <sstream>

#include "gocheck/linalg.hpp"
#include "gocheck/rep.hpp"

namespace gocheck {

std::string to_string(GoForm f) {
  switch (f) {
    case GoForm::group: return "group";
    case GoForm::coset: return "coset";
    case GoForm::geodesic_lemma: return "geodesic-lemma";
  }
  return "?";
}

std::string SamplingStrategy::describe() const {
  std::ostringstream out;
  out << "seed=" << seed << " random=" << random_count << " structured=" << (structured ? 1 : 0)
      << " basis=" << (basis_vectors ? 1 : 0) << " bound=" << coefficient_bound;
  return out.str();
}

namespace {

// Recover an exact subspace from a float one: reduced echelon form in floating
// point, entries rationalized, then checked against the float basis.
std::optional<Subspace<Rational>> exact_from_float(const Subspace<double>& s) {
  const std::size_t r = s.dim(), n = s.ambient_dim();
  if (r == 0) return Subspace<Rational>(n);
  Matrix<double> a = s.basis();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < r; ++col) {
    std::size_t piv = row;
    for (std::size_t i = row + 1; i < r; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (std::abs(a(piv, col)) < 1e-8) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(row, j), a(piv, j));
    const double p = a(row, col);
    for (std::size_t j = 0; j < n; ++j) a(row, j) /= p;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || a(i, col) == 0.0) continue;
      const double f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(row, j);
    }
    ++row;
  }
  if (row != r) return std::nullopt;
  Matrix<Rational> q(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      q(i, j) = rationalize(a(i, j));
      if (std::abs(q(i, j).get_d() - a(i, j)) > 1e-9) return std::nullopt;
    }
  return Subspace<Rational>::from_basis(q);
}

template <class T>
Vector<T> witness_in_k(const Subspace<T>& k, const Vector<T>& w) {
  if (k.dim() == 0) return Vector<T>(k.ambient_dim(), T(0));
  return combine_rows(k.basis(), w);
}

}  // namespace

template <class T>
struct GoSystem<T>::Exact {
  LieContext<Rational> ctx;
  MetricOperator<Rational> lambda;
  Subspace<Rational> k;
  Subspace<Rational> m;
  std::unique_ptr<GoSystem<Rational>> sys;
};

template <class T>
GoSystem<T>::GoSystem(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& k, GoForm form)
    : ctx_(ctx), lambda_(lambda), k_(k), form_(form) {
  if (!equivariance_check(ctx, lambda, k).ok)
    throw PreconditionError("go system: Lambda is not ad_k-equivariant");
  m_ = orthogonal_complement(ctx, k);
  domain_ = form == GoForm::group ? Subspace<T>::whole(ctx.dim()) : m_;
  gk_ = k.basis() * ctx.form() * k.basis().transpose();
  proj_m_ = orthogonal_projector(m_.basis(), ctx.form(), ctx.tol());
  if constexpr (!Field<T>::exact) {
    if (lambda.exact()) {
      auto ek = exact_from_float(k);
      if (ek) {
        LieContext<Rational> ectx(ctx.algebra_ptr(), ctx.form_exact(), ctx.tol());
        MetricOperator<Rational> elam(ectx, *lambda.exact(), *lambda.exact(), lambda.provenance());
        if (equivariance_check(ectx, elam, *ek).ok) {
          Subspace<Rational> em = orthogonal_complement(ectx, *ek);
          exact_ = std::make_unique<Exact>(Exact{std::move(ectx), std::move(elam), std::move(*ek), std::move(em), nullptr});
          exact_->sys = std::make_unique<GoSystem<Rational>>(exact_->ctx, exact_->lambda, exact_->k, form);
        }
      }
    }
  }
}

template <class T>
GoSystem<T>::~GoSystem() = default;
template <class T>
GoSystem<T>::GoSystem(GoSystem&&) noexcept = default;

template <class T>
GoSolveResult<T> GoSystem<T>::solve_at(const Vector<T>& x) const {
  const auto& tol = ctx_.tol();
  const std::size_t d = ctx_.dim();
  if (x.size() != d) throw std::invalid_argument("go_solve_at: direction has wrong length");
  if (form_ != GoForm::group && !m_.contains(x, tol))
    throw std::invalid_argument("go_solve_at: coset direction must lie in m");
  const std::size_t kd = k_.dim();
  Matrix<T> a;
  Vector<T> b;
  if (form_ == GoForm::geodesic_lemma) {
    // Row c: <[W, Y_c]_m, X> = -<[X, Y_c]_m, X>, with <u_m, X> = u . (P^T M X).
    const Vector<T> px = proj_m_.transpose() * (lambda_.gram() * x);
    const std::size_t md = m_.dim();
    a = Matrix<T>(md, kd);
    b = Vector<T>(md);
    std::vector<Vector<T>> u;
    for (std::size_t j = 0; j < kd; ++j) u.push_back(ctx_.ad(k_.vector(j)).transpose() * px);
    const Vector<T> ux = ctx_.ad(x).transpose() * px;
    for (std::size_t c = 0; c < md; ++c) {
      const auto yc = m_.basis().row(c);
      for (std::size_t j = 0; j < kd; ++j) a(c, j) = dot(yc, std::span<const T>(u[j]));
      b[c] = -dot(yc, std::span<const T>(ux));
    }
  } else {
    // [W, Lambda X] = [Lambda X, X]; column j is [k_j, Lambda X] = -ad(Lambda X) k_j.
    const Matrix<T> adl = ctx_.ad(lambda_.apply(x));
    a = scaled(adl * k_.basis().transpose(), T(-1));
    b = adl * x;
  }
  auto certificate = [&](const Vector<T>& w) {
    GoCertificate<T> c;
    c.direction = x;
    c.witness = witness_in_k(k_, w);
    const Vector<T> resid = kd ? sub(a * w, b) : scale(b, T(-1));
    c.residual = max_norm(resid);
    return c;
  };
  if (kd == 0) {
    if (is_zero_vector(b, tol)) return certificate(Vector<T>(0));
  } else {
    auto res = solve_linear(a, b, tol);
    if (auto* sol = std::get_if<Solution<T>>(&res)) {
      const Vector<T> w = min_norm_representative(sol->x, sol->nullspace, gk_, tol);
      return certificate(w);
    }
  }
  Unsolvable<T> u;
  u.direction = x;
  if constexpr (Field<T>::exact) {
    u.exact_direction = x;
    RowReducer<T> ra(kd, tol);
    for (std::size_t i = 0; i < a.rows(); ++i) ra.add_row(a.row(i));
    u.rank_matrix = ra.rank();
    u.rank_augmented = rank(kd ? [&] {
      Matrix<T> aug(a.rows(), kd + 1);
      for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < kd; ++j) aug(i, j) = a(i, j);
        aug(i, kd) = b[i];
      }
      return aug;
    }() : Matrix<T>::from_rows({b}, b.size()).transpose(), tol);
    return u;
  } else {
    if (!exact_) {
      u.confirmed = false;
      u.exact_direction = convert<Rational>(x);
      return u;
    }
    Vector<Rational> ex = convert<Rational>(x);
    if (form_ != GoForm::group) {
      const Matrix<Rational> p = orthogonal_projector(exact_->m.basis(), exact_->ctx.form());
      ex = p * ex;
    }
    auto er = exact_->sys->solve_at(ex);
    if (auto* eu = std::get_if<Unsolvable<Rational>>(&er)) {
      u.exact_direction = eu->exact_direction;
      u.rank_matrix = eu->rank_matrix;
      u.rank_augmented = eu->rank_augmented;
      return u;
    }
    // The float gap did not survive: report the exact witness.
    const auto& ec = std::get<GoCertificate<Rational>>(er);
    GoCertificate<T> c;
    c.direction = x;
    c.witness = convert<T>(ec.witness);
    const Vector<T> lx = lambda_.apply(x);
    c.residual = max_norm(ctx_.bracket(add(c.witness, x), lx));
    return c;
  }
}

template <class T>
bool GoSystem<T>::replay(const GoCertificate<T>& c) const {
  const auto& tol = ctx_.tol();
  if (!k_.contains(c.witness, tol)) return false;
  if (form_ != GoForm::group && !m_.contains(c.direction, tol)) return false;
  const Vector<T> wx = add(c.witness, c.direction);
  if (form_ == GoForm::geodesic_lemma) {
    const Vector<T> mx = lambda_.gram() * c.direction;
    for (std::size_t i = 0; i < m_.dim(); ++i) {
      const Vector<T> pm = proj_m_ * ctx_.bracket(wx, m_.vector(i));
      if (!Field<T>::is_zero(T(dot(std::span<const T>(pm), std::span<const T>(mx))), tol)) return false;
    }
    return true;
  }
  return is_zero_vector(ctx_.bracket(wx, lambda_.apply(c.direction)), tol);
}

template <class T>
bool GoSystem<T>::replay(const Unsolvable<T>& u) const {
  if (!u.confirmed) return false;
  if constexpr (Field<T>::exact) {
    auto r = solve_at(u.exact_direction);
    const auto* eu = std::get_if<Unsolvable<Rational>>(&r);
    return eu && eu->rank_matrix == u.rank_matrix && eu->rank_augmented == u.rank_augmented &&
           eu->rank_matrix < eu->rank_augmented;
  } else {
    if (!exact_) return false;
    Unsolvable<Rational> eu;
    eu.direction = u.exact_direction;
    eu.exact_direction = u.exact_direction;
    eu.rank_matrix = u.rank_matrix;
    eu.rank_augmented = u.rank_augmented;
    return exact_->sys->replay(eu);
  }
}

template <class T>
GoSolveResult<T> go_solve_at(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& k,
                             const Vector<T>& x, GoForm form) {
  return GoSystem<T>(ctx, lambda, k, form).solve_at(x);
}

template <class T>
std::vector<Direction<T>> sample_directions(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                            const Subspace<T>& domain, const SamplingStrategy& s) {
  std::vector<Direction<T>> out;
  if (domain.dim() == 0) return out;
  if (s.basis_vectors)
    for (std::size_t i = 0; i < domain.dim(); ++i) out.push_back({domain.vector(i), "basis " + std::to_string(i)});
  if (s.structured) {
    std::vector<Subspace<T>> pieces;
    const bool whole = domain.dim() == ctx.dim();
    for (const auto& p : lambda.invariant_pieces()) {
      Subspace<T> q = whole ? p : intersect(p, domain, ctx.tol());
      if (q.dim() > 0) pieces.push_back(std::move(q));
    }
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i)
      for (std::size_t j = i + 1; j < pieces.size(); ++j, ++idx) {
        Rng rng(derive_seed(s.seed, 1000 + idx));
        Vector<T> vi = random_combination(pieces[i].basis(), rng, s.coefficient_bound);
        Vector<T> vj = random_combination(pieces[j].basis(), rng, s.coefficient_bound);
        out.push_back({add(vi, vj), "pair " + std::to_string(i) + "," + std::to_string(j)});
      }
  }
  for (std::size_t r = 0; r < s.random_count; ++r) {
    Rng rng(derive_seed(s.seed, 100000 + r));
    out.push_back({random_combination(domain.basis(), rng, s.coefficient_bound), "random " + std::to_string(r)});
  }
  return out;
}

template <class T>
GoVerdict<T> go_verdict(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& k,
                        const SamplingStrategy& strategy, GoForm form) {
  GoSystem<T> sys(ctx, lambda, k, form);
  GoVerdict<T> v;
  v.backend = Field<T>::backend;
  v.form = form;
  v.strategy = strategy.describe();
  const auto dirs = sample_directions(ctx, lambda, sys.domain(), strategy);
  for (const auto& d : dirs) {
    if (d.source.rfind("basis", 0) == 0) ++v.basis_count;
    else if (d.source.rfind("pair", 0) == 0) ++v.pair_count;
    else ++v.random_count;
  }
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    ++v.evaluated;
    auto r = sys.solve_at(dirs[i].x);
    if (auto* c = std::get_if<GoCertificate<T>>(&r)) {
      v.certificates.push_back(std::move(*c));
      continue;
    }
    auto& u = std::get<Unsolvable<T>>(r);
    if (!u.confirmed) {
      ++v.unconfirmed;
      continue;
    }
    v.kind = GoVerdictKind::disproved;
    v.counterexample = std::move(u);
    v.counterexample_index = i;
    v.counterexample_source = dirs[i].source;
    break;
  }
  return v;
}

template <class T>
NatredReport<T> natred_condition_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                       const Subspace<T>& k, const Subspace<T>& m) {
  const auto& tol = ctx.tol();
  const std::size_t d = ctx.dim(), kd = k.dim(), md = m.dim();
  NatredReport<T> r;
  Matrix<T> c = k.basis();
  c.append_rows(m.basis());
  if (kd + md != d || rank(c, tol) != d) throw PreconditionError("natred: k + m is not a direct sum equal to g");
  for (std::size_t i = 0; i < kd; ++i)
    for (std::size_t a = 0; a < md; ++a)
      if (!m.contains(ctx.bracket(k.vector(i), m.vector(a)), tol))
        throw PreconditionError("natred: [k, m] is not contained in m");
  r.reductive = true;
  // Projection onto m along k: coordinates in the basis [k; m].
  const auto cinv = inverse(Matrix<T>(c.transpose()), tol);
  if (!cinv) throw std::logic_error("natred: basis matrix is singular");
  Matrix<T> pick(md, d);
  for (std::size_t a = 0; a < md; ++a)
    for (std::size_t j = 0; j < d; ++j) pick(a, j) = (*cinv)(kd + a, j);
  const Matrix<T> proj = m.basis().transpose() * pick;
  // N_b = M X_b so that <u, X_b> = u . N_b.
  std::vector<Vector<T>> nvec;
  for (std::size_t b = 0; b < md; ++b) nvec.push_back(lambda.gram() * m.vector(b));
  std::vector<std::vector<Vector<T>>> u(md, std::vector<Vector<T>>(md));
  for (std::size_t a = 0; a < md; ++a)
    for (std::size_t y = 0; y < md; ++y) u[a][y] = proj * ctx.bracket(m.vector(a), m.vector(y));
  r.holds = true;
  for (std::size_t a = 0; a < md; ++a)
    for (std::size_t b = a; b < md; ++b)
      for (std::size_t y = 0; y < md; ++y) {
        ++r.triples_checked;
        const T s = T(dot(std::span<const T>(u[a][y]), std::span<const T>(nvec[b]))) +
                    T(dot(std::span<const T>(u[b][y]), std::span<const T>(nvec[a])));
        if (!Field<T>::is_zero(s, tol)) {
          r.holds = false;
          r.witness = std::array<std::size_t, 3>{a, b, y};
          r.value = s;
          return r;
        }
      }
  return r;
}

template <class T>
NormalizerEquivarianceReport<T> normalizer_equivariance_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                                              const Subspace<T>& k, std::uint64_t) {
  NormalizerEquivarianceReport<T> r;
  const Subspace<T> n = normalizer(ctx, k);
  r.dim_normalizer = n.dim();
  r.self_normalizing = n.dim() == k.dim();
  r.semisimple = centralizer_in(ctx, k, k).dim() == 0;
  r.detail = equivariance_check(ctx, lambda, n);
  r.ok = r.detail.ok;
  return r;
}

template <class T>
TwoStepReport<T> two_step_identity_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                         const Subspace<T>& k, const Vector<T>& z, const Vector<T>& w) {
  if (!equivariance_check(ctx, lambda, k).ok) throw PreconditionError("two-step: Lambda is not ad_k-equivariant");
  if (!k.contains(w, ctx.tol())) throw PreconditionError("two-step: W is not in k");
  TwoStepReport<T> r;
  const Vector<T> x = sub(z, w);
  const Vector<T> lx = lambda.apply(x);
  r.first = sub(ctx.bracket(x, lx), lambda.apply(ctx.bracket(z, w)));
  r.second = ctx.bracket(add(w, x), lx);
  r.first_zero = is_zero_vector(r.first, ctx.tol());
  r.second_zero = is_zero_vector(r.second, ctx.tol());
  return r;
}

template <class T>
SplitReport<T> split_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& k,
                           const SamplingStrategy& strategy, std::uint64_t seed) {
  SplitReport<T> r;
  r.weakly_regular = is_weakly_regular(ctx, k, seed).weakly_regular;
  r.self_normalizing = normalizer(ctx, k).dim() == k.dim();
  r.semisimple = centralizer_in(ctx, k, k).dim() == 0;
  const Subspace<T> m = orthogonal_complement(ctx, k);
  r.preserves_k = restrict_to(ctx, lambda, k).has_value();
  r.preserves_m = restrict_to(ctx, lambda, m).has_value();
  if (r.preserves_k) {
    const auto bi = bi_invariance_check(ctx, lambda, k, seed);
    r.bi_invariant = bi.ok;
    r.bi_invariance_reason = bi.reason;
  } else {
    r.bi_invariance_reason = "Lambda does not preserve k";
  }
  if (r.preserves_m) {
    try {
      r.coset_go = go_verdict(ctx, lambda, k, strategy, GoForm::coset).kind;
    } catch (const PreconditionError&) {
      r.coset_go.reset();
    }
  }
  r.holds = r.preserves_k && r.preserves_m && r.bi_invariant && r.coset_go == GoVerdictKind::not_disproved;
  return r;
}

#define GOCHECK_INSTANTIATE(T)                                                                                      \
  template class GoSystem<T>;                                                                                       \
  template GoSolveResult<T> go_solve_at(const LieContext<T>&, const MetricOperator<T>&, const Subspace<T>&,         \
                                        const Vector<T>&, GoForm);                                                  \
  template std::vector<Direction<T>> sample_directions(const LieContext<T>&, const MetricOperator<T>&,              \
                                                       const Subspace<T>&, const SamplingStrategy&);                \
  template GoVerdict<T> go_verdict(const LieContext<T>&, const MetricOperator<T>&, const Subspace<T>&,              \
                                   const SamplingStrategy&, GoForm);                                                \
  template NatredReport<T> natred_condition_check(const LieContext<T>&, const MetricOperator<T>&,                   \
                                                  const Subspace<T>&, const Subspace<T>&);                          \
  template NormalizerEquivarianceReport<T> normalizer_equivariance_check(const LieContext<T>&,                      \
                                                                         const MetricOperator<T>&,                  \
                                                                         const Subspace<T>&, std::uint64_t);        \
  template TwoStepReport<T> two_step_identity_check(const LieContext<T>&, const MetricOperator<T>&,                 \
                                                    const Subspace<T>&, const Vector<T>&, const Vector<T>&);        \
  template SplitReport<T> split_check(const LieContext<T>&, const MetricOperator<T>&, const Subspace<T>&,           \
                                      const SamplingStrategy&, std::uint64_t);

GOCHECK_INSTANTIATE(Rational)
GOCHECK_INSTANTIATE(double)

}  // namespace gocheck
