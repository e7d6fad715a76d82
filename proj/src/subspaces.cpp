#include "gocheck/subspaces.hpp"

#include <stdexcept>

#include "gocheck/linalg.hpp"

namespace gocheck {

template <class T>
SubspaceCoordinates<T>::SubspaceCoordinates(const LieContext<T>& ctx, const Subspace<T>& s)
    : basis_(s.basis()), tol_(ctx.tol()) {
  const Matrix<T> bq = basis_ * ctx.form();
  gram_ = bq * basis_.transpose();
  if (s.dim() == 0) {
    map_ = Matrix<T>(0, s.ambient_dim());
    return;
  }
  const auto inv = inverse(gram_, tol_);
  if (!inv) throw std::logic_error("subspace Gram matrix is singular");
  map_ = (*inv) * bq;
}

template <class T>
Vector<T> SubspaceCoordinates<T>::project(const Vector<T>& w) const {
  if (basis_.rows() == 0) return Vector<T>(w.size(), T(0));
  return combine_rows(basis_, coords(w));
}

template <class T>
bool SubspaceCoordinates<T>::contains(const Vector<T>& w) const {
  return is_zero_vector(sub(project(w), w), tol_);
}

template <class T>
SubalgebraCheck<T> is_subalgebra(const LieContext<T>& ctx, const Subspace<T>& s) {
  SubalgebraCheck<T> out;
  if (s.dim() == 0) return out;
  const SubspaceCoordinates<T> sc(ctx, s);
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = i + 1; j < s.dim(); ++j) {
      Vector<T> b = ctx.bracket(s.vector(i), s.vector(j));
      if (!sc.contains(b)) {
        out.ok = false;
        out.witness = std::make_pair(i, j);
        out.bracket = std::move(b);
        return out;
      }
    }
  return out;
}

template <class T>
Subspace<T> orthogonal_complement_in(const LieContext<T>& ctx, const Subspace<T>& s, const Subspace<T>& within) {
  if (s.dim() == 0) return within;
  const Matrix<T> cond = s.basis() * ctx.form() * within.basis().transpose();  // dim s x dim within
  const Matrix<T> ns = nullspace(cond, ctx.tol());
  return Subspace<T>::span(ns * within.basis(), ctx.tol());
}

template <class T>
Subspace<T> orthogonal_complement(const LieContext<T>& ctx, const Subspace<T>& s) {
  const std::size_t n = ctx.dim();
  if (s.dim() == 0) return Subspace<T>::whole(n);
  const Matrix<T> cond = s.basis() * ctx.form();
  return Subspace<T>::span(nullspace(cond, ctx.tol()), ctx.tol());
}

template <class T>
Subspace<T> centralizer_in(const LieContext<T>& ctx, const Subspace<T>& a, const Subspace<T>& within) {
  if (a.dim() == 0 || within.dim() == 0) return within;
  RowReducer<T> red(within.dim(), ctx.tol());
  const Matrix<T> wt = within.basis().transpose();
  for (std::size_t s = 0; s < a.dim(); ++s) {
    const Matrix<T> block = ctx.ad(a.vector(s)) * wt;  // column r = [a_s, w_r]
    for (std::size_t r = 0; r < block.rows(); ++r) red.add_row(block.row(r));
  }
  return Subspace<T>::span(red.nullspace() * within.basis(), ctx.tol());
}

template <class T>
Subspace<T> normalizer(const LieContext<T>& ctx, const Subspace<T>& k) {
  const std::size_t n = ctx.dim();
  if (!is_subalgebra(ctx, k).ok) throw std::invalid_argument("normalizer: k is not a subalgebra");
  if (k.dim() == 0) return Subspace<T>::whole(n);
  const Subspace<T> m = orthogonal_complement(ctx, k);
  RowReducer<T> red(n, ctx.tol());
  const Matrix<T> mq = m.basis() * ctx.form();
  for (std::size_t j = 0; j < k.dim(); ++j) {
    // Row l: Q(m_l, [k_j, e_i]) = -Q(m_l, [e_i, k_j]) as i varies.
    const Matrix<T> block = mq * ctx.ad(k.vector(j));
    for (std::size_t l = 0; l < block.rows(); ++l) red.add_row(block.row(l));
  }
  Subspace<T> nk = Subspace<T>::span(red.nullspace(), ctx.tol());
  // Cross-check: n_g(k) = k + c_m(k), a Q-orthogonal sum.
  const Subspace<T> cm = centralizer_in(ctx, k, m);
  if (nk.dim() != k.dim() + cm.dim() || !nk.contains(k, ctx.tol()) || !nk.contains(cm, ctx.tol()))
    throw std::logic_error("normalizer cross-check n_g(k) = k + c_m(k) failed");
  return nk;
}

template <class T>
Subspace<T> bracket_span(const LieContext<T>& ctx, const Subspace<T>& a, const Subspace<T>& b) {
  Matrix<T> rows(0, ctx.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Matrix<T> ad = ctx.ad(a.vector(i));
    const Matrix<T> block = b.basis() * ad.transpose();  // row j = [a_i, b_j]
    rows.append_rows(block);
  }
  return Subspace<T>::span(rows, ctx.tol());
}

template <class T>
Subspace<T> generated_subalgebra(const LieContext<T>& ctx, const Matrix<T>& gens) {
  Subspace<T> s = Subspace<T>::span(gens, ctx.tol());
  while (true) {
    Matrix<T> all = s.basis();
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t j = i + 1; j < s.dim(); ++j) all.append_row(ctx.bracket(s.vector(i), s.vector(j)));
    Subspace<T> next = Subspace<T>::span(all, ctx.tol());
    if (next.dim() == s.dim()) return s;
    s = std::move(next);
  }
}

template <class T>
Matrix<T> lie_generators(const LieContext<T>& ctx, const Subspace<T>& h, std::uint64_t seed) {
  Matrix<T> gens(0, ctx.dim());
  if (h.dim() == 0) return gens;
  // Basis vectors first: sparse actions keep exact elimination cheap, where
  // two dense random elements blow up the rational coefficients.
  Subspace<T> gen(ctx.dim());
  for (std::size_t i = 0; i < h.dim() && gen.dim() < h.dim(); ++i) {
    if (gen.contains(h.vector(i), ctx.tol())) continue;
    gens.append_row(h.vector(i));
    gen = generated_subalgebra(ctx, gens);
  }
  if constexpr (!Field<T>::exact) {
    // Float elimination does not suffer from growth; prefer two generic elements.
    Rng rng(derive_seed(seed, 0x6e));
    Matrix<T> pair(0, ctx.dim());
    pair.append_row(random_combination(h.basis(), rng));
    if (h.dim() > 1) pair.append_row(random_combination(h.basis(), rng));
    if (generated_subalgebra(ctx, pair).dim() == h.dim() && pair.rows() < gens.rows()) return pair;
  } else {
    (void)seed;
  }
  return gens;
}

template <class T>
RankEstimate<T> rank_estimate(const LieContext<T>& ctx, const Subspace<T>& s, std::uint64_t seed,
                              std::size_t retries) {
  RankEstimate<T> best;
  best.witness.centralizer = Subspace<T>(ctx.dim());
  if (s.dim() == 0) return best;
  bool first = true;
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(retries, 1); ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    Vector<T> h = random_combination(s.basis(), rng);
    Matrix<T> hrow(0, ctx.dim());
    hrow.append_row(h);
    Subspace<T> c = centralizer_in(ctx, Subspace<T>::from_basis(hrow, ctx.tol()), s);
    if (first || c.dim() < best.rank) {
      best.rank = c.dim();
      best.witness.generic_element = std::move(h);
      best.witness.centralizer = std::move(c);
      best.witness.retry_count = attempt + 1;
      first = false;
    }
  }
  return best;
}

template <class T>
RegularityReport is_regular(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed) {
  RegularityReport r;
  r.dim_k = k.dim();
  r.rank_g = rank_estimate(ctx, Subspace<T>::whole(ctx.dim()), seed).rank;
  const Subspace<T> n = normalizer(ctx, k);
  r.dim_normalizer = n.dim();
  r.rank_normalizer = rank_estimate(ctx, n, derive_seed(seed, 1)).rank;
  r.rank_k = rank_estimate(ctx, k, derive_seed(seed, 2)).rank;
  r.maximal_rank = r.rank_k == r.rank_g;
  r.regular = k.dim() == 0 || r.rank_normalizer == r.rank_g;
  return r;
}

#define GOCHECK_INSTANTIATE(T)                                                                                    \
  template class SubspaceCoordinates<T>;                                                                          \
  template SubalgebraCheck<T> is_subalgebra(const LieContext<T>&, const Subspace<T>&);                            \
  template Subspace<T> orthogonal_complement(const LieContext<T>&, const Subspace<T>&);                           \
  template Subspace<T> orthogonal_complement_in(const LieContext<T>&, const Subspace<T>&, const Subspace<T>&);    \
  template Subspace<T> centralizer_in(const LieContext<T>&, const Subspace<T>&, const Subspace<T>&);              \
  template Subspace<T> normalizer(const LieContext<T>&, const Subspace<T>&);                                      \
  template Subspace<T> bracket_span(const LieContext<T>&, const Subspace<T>&, const Subspace<T>&);                \
  template Subspace<T> generated_subalgebra(const LieContext<T>&, const Matrix<T>&);                              \
  template Matrix<T> lie_generators(const LieContext<T>&, const Subspace<T>&, std::uint64_t);                     \
  template RankEstimate<T> rank_estimate(const LieContext<T>&, const Subspace<T>&, std::uint64_t, std::size_t);   \
  template RegularityReport is_regular(const LieContext<T>&, const Subspace<T>&, std::uint64_t);

GOCHECK_INSTANTIATE(Rational)
GOCHECK_INSTANTIATE(double)

}  // namespace gocheck
