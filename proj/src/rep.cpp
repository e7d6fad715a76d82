#include "gocheck/rep.hpp"

#include <algorithm>
#include <stdexcept>
#include <cstdio>
#include <cstdlib>

#include "gocheck/linalg.hpp"

namespace gocheck {

template <class T>
std::vector<Matrix<T>> action_matrices(const LieContext<T>& ctx, const Matrix<T>& elements, const Subspace<T>& v) {
  std::vector<Matrix<T>> out;
  if (v.dim() == 0) {
    out.assign(elements.rows(), Matrix<T>(0, 0));
    return out;
  }
  const SubspaceCoordinates<T> sc(ctx, v);
  const Matrix<T> bt = v.basis().transpose();
  for (std::size_t a = 0; a < elements.rows(); ++a) {
    const Matrix<T> images = ctx.ad(elements.row_vector(a)) * bt;  // column r = [x_a, v_r]
    Matrix<T> act = sc.map() * images;
    if (!is_zero_matrix(bt * act - images, ctx.tol()))
      throw std::invalid_argument("subspace is not invariant under the acting algebra");
    out.push_back(std::move(act));
  }
  return out;
}

template <class T>
AdRestriction<T> ad_restriction(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v) {
  AdRestriction<T> r{h, v, action_matrices(ctx, h.basis(), v)};
  return r;
}

namespace {

// Solutions of A2_t X = X A1_t for all t, X of size d2 x d1.
template <class T>
std::vector<Matrix<T>> intertwiners(const std::vector<Matrix<T>>& a1, const std::vector<Matrix<T>>& a2, std::size_t d1,
                                    std::size_t d2, const ToleranceProfile& tol) {
  std::vector<Matrix<T>> out;
  if (d1 == 0 || d2 == 0) return out;
  RowReducer<T> red(d1 * d2, tol);
  const T zero(0);
  for (std::size_t t = 0; t < a1.size(); ++t) {
    const Matrix<T>& x1 = a1[t];
    const Matrix<T>& x2 = a2[t];
    for (std::size_t r = 0; r < d2; ++r)
      for (std::size_t c = 0; c < d1; ++c) {
        SparseRow<T> row;
        for (std::size_t k = 0; k < d2; ++k)
          if (x2(r, k) != zero) row.emplace_back(k * d1 + c, x2(r, k));
        for (std::size_t k = 0; k < d1; ++k)
          if (x1(k, c) != zero) row.emplace_back(r * d1 + k, -x1(k, c));
        if (!row.empty()) red.add_sparse_row(row);
      }
  }
  const Matrix<T> ns = red.nullspace();
  for (std::size_t i = 0; i < ns.rows(); ++i) {
    Matrix<T> m(d2, d1);
    for (std::size_t r = 0; r < d2; ++r)
      for (std::size_t c = 0; c < d1; ++c) m(r, c) = ns(i, r * d1 + c);
    out.push_back(std::move(m));
  }
  return out;
}

template <class T>
Vector<T> flatten(const Matrix<T>& m) {
  return m.data();
}

template <class T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b - b * a;
}

template <class T>
Matrix<T> random_matrix_combination(const std::vector<Matrix<T>>& mats, Rng& rng) {
  Matrix<T> out(mats.front().rows(), mats.front().cols());
  for (const auto& m : mats) out = out + scaled(m, random_small<T>(rng));
  return out;
}

// Exact bases are brought to reduced echelon form so that outputs do not
// depend on the random choices that produced them.
template <class T>
Subspace<T> canonical(const Matrix<T>& rows, const ToleranceProfile& tol) {
  if constexpr (Field<T>::exact) {
    return Subspace<T>::from_basis(row_basis(rows, tol), tol);
  } else {
    return Subspace<T>::span(rows, tol);
  }
}

template <class T>
std::vector<std::size_t> leading_key(const Subspace<T>& s, const ToleranceProfile& tol) {
  std::vector<std::size_t> key;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    std::size_t p = 0;
    while (p < s.ambient_dim() && Field<T>::is_zero(s.basis()(i, p), tol)) ++p;
    key.push_back(p);
  }
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

template <class T>
IntertwinerSpace<T> intertwiner_space(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v1,
                                      const Subspace<T>& v2, std::uint64_t seed) {
  IntertwinerSpace<T> out;
  out.domain_dim = v1.dim();
  out.codomain_dim = v2.dim();
  // Closure is checked on the full basis of h, the system uses generators only.
  action_matrices(ctx, h.basis(), v1);
  action_matrices(ctx, h.basis(), v2);
  const Matrix<T> gens = lie_generators(ctx, h, seed);
  out.basis = intertwiners(action_matrices(ctx, gens, v1), action_matrices(ctx, gens, v2), v1.dim(), v2.dim(),
                           ctx.tol());
  return out;
}

template <class T>
bool modules_disjoint(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v1, const Subspace<T>& v2,
                      std::uint64_t seed) {
  return intertwiner_space(ctx, h, v1, v2, seed).dim() == 0;
}

template <class T>
std::vector<Matrix<T>> commutant(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v,
                                 std::uint64_t seed) {
  return intertwiner_space(ctx, h, v, v, seed).basis;
}

template <class T>
WeakRegularityReport is_weakly_regular(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed) {
  WeakRegularityReport r;
  r.dim_k = k.dim();
  const Subspace<T> n = normalizer(ctx, k);
  const Subspace<T> p = orthogonal_complement(ctx, n);
  r.dim_normalizer = n.dim();
  r.dim_cm = n.dim() - k.dim();
  r.dim_p = p.dim();
  if (k.dim() == 0) {
    r.weakly_regular = true;
    return r;
  }
  r.intertwiner_dim = intertwiner_space(ctx, n, k, p, seed).dim();
  r.weakly_regular = r.intertwiner_dim == 0;
  return r;
}

template <class T>
CriterionReport criterion_weak_regularity(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed) {
  CriterionReport r;
  const Subspace<T> m = orthogonal_complement(ctx, k);
  r.dim_m = m.dim();
  if (k.dim() == 0 || m.dim() == 0) {
    r.holds = true;
    return r;
  }
  r.intertwiner_dim = intertwiner_space(ctx, k, k, m, seed).dim();
  r.holds = r.intertwiner_dim == 0;
  return r;
}

template <class T>
IsotypicDecomposition<T> isotypic_decomposition(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v,
                                                std::uint64_t seed) {
  IsotypicDecomposition<T> out;
  const ToleranceProfile& tol = ctx.tol();
  if (v.dim() == 0) return out;
  action_matrices(ctx, h.basis(), v);  // invariance check
  const Matrix<T> gens = lie_generators(ctx, h, seed);

  // Fixed vectors: common kernel of the generator actions.
  const auto acts = action_matrices(ctx, gens, v);
  RowReducer<T> fixed_red(v.dim(), tol);
  for (const auto& a : acts)
    for (std::size_t r = 0; r < a.rows(); ++r) fixed_red.add_row(a.row(r));
  const Subspace<T> fixed = Subspace<T>::span(fixed_red.nullspace() * v.basis(), tol);
  struct Piece {
    Subspace<T> space;
    std::size_t count;
    std::string label;
  };
  std::vector<Piece> pieces;
  if (fixed.dim() > 0) pieces.push_back({canonical(fixed.basis(), tol), fixed.dim(), "trivial"});

  const Subspace<T> rest = orthogonal_complement_in(ctx, fixed, v);
  if (rest.dim() > 0) {
    const std::size_t d = rest.dim();
    const auto rest_acts = action_matrices(ctx, gens, rest);
    const auto comm = intertwiners(rest_acts, rest_acts, d, d, tol);
    const SubspaceCoordinates<T> sc(ctx, rest);
    const Matrix<T>& g = sc.gram();
    const Matrix<T> ginv = *inverse(g, tol);
    // Q-symmetric part of the commutant.
    Matrix<T> sym_rows(0, d * d);
    for (const auto& c : comm) sym_rows.append_row(flatten(Matrix<T>(c + ginv * c.transpose() * g)));
    const Matrix<T> sym_flat = row_basis(sym_rows, tol);
    std::vector<Matrix<T>> sym;
    for (std::size_t i = 0; i < sym_flat.rows(); ++i) {
      Matrix<T> m(d, d);
      for (std::size_t e = 0; e < d * d; ++e) m(e / d, e % d) = sym_flat(i, e);
      sym.push_back(std::move(m));
    }
    // Symmetric elements commuting with the commutant. Random commutant
    // elements first; the full basis if the result fails verification.
    auto central = [&](const std::vector<Matrix<T>>& probes) {
      RowReducer<T> red(sym.size(), tol);
      for (const auto& pr : probes) {
        std::vector<Matrix<T>> cols;
        for (const auto& s : sym) cols.push_back(commutator(s, pr));
        for (std::size_t e = 0; e < d * d; ++e) {
          Vector<T> row(sym.size());
          for (std::size_t b = 0; b < sym.size(); ++b) row[b] = cols[b].data()[e];
          red.add_row(row);
        }
      }
      std::vector<Matrix<T>> z;
      const Matrix<T> ns = red.nullspace();
      for (std::size_t i = 0; i < ns.rows(); ++i) {
        Matrix<T> m(d, d);
        for (std::size_t b = 0; b < sym.size(); ++b) m = m + scaled(sym[b], ns(i, b));
        z.push_back(std::move(m));
      }
      return z;
    };
    Rng rng(derive_seed(seed, 0x150));
    std::vector<Matrix<T>> probes;
    for (int t = 0; t < 3; ++t) probes.push_back(random_matrix_combination(comm, rng));
    std::vector<Matrix<T>> center = central(probes);
    bool verified = true;
    for (const auto& z : center)
      for (const auto& c : comm)
        if (!is_zero_matrix(commutator(z, c), tol)) verified = false;
    if (!verified) center = central(comm);

    const Matrix<T> zgen = random_matrix_combination(center, rng);
    const auto spaces = symmetric_eigenspaces(zgen, g, tol);
    const Matrix<T> sgen = random_matrix_combination(sym, rng);
    const Matrix<double> sgen_d = convert<double>(sgen);
    const Matrix<double> g_d = convert<double>(g);
    for (const auto& sp : spaces) {
      // Irreducible count: distinct eigenvalues of the generic symmetric
      // commutant element restricted to this component.
      const Matrix<double> e = convert<double>(sp.basis);
      const Matrix<double> gi = e * g_d * e.transpose();
      const Matrix<double> op = (*inverse(gi)) * e * g_d * sgen_d * e.transpose();
      std::size_t count = 0;
      try {
        count = symmetric_eigenspaces(op, gi).size();
      } catch (const std::exception&) {
        count = 0;
      }
      pieces.push_back({canonical(Matrix<T>(sp.basis * rest.basis()), tol), count,
                        count == 1 ? "irreducible" : "isotypic(" + std::to_string(count) + ")"});
    }
  }
  if constexpr (Field<T>::exact) {
    std::stable_sort(pieces.begin(), pieces.end(), [&](const Piece& a, const Piece& b) {
      return leading_key(a.space, tol) < leading_key(b.space, tol);
    });
  }
  for (auto& p : pieces) {
    out.components.push_back(std::move(p.space));
    out.irreducible_count.push_back(p.count);
    out.labels.push_back(std::move(p.label));
  }
  return out;
}

template <class T>
DecomposedSubalgebra<T> ideal_decomposition(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed) {
  if (!is_subalgebra(ctx, k).ok) throw std::invalid_argument("ideal_decomposition: k is not a subalgebra");
  DecomposedSubalgebra<T> out;
  const Subspace<T> center = centralizer_in(ctx, k, k);
  out.center = center.dim() ? canonical(center.basis(), ctx.tol()) : center;
  const Subspace<T> s = bracket_span(ctx, k, k);
  if (s.dim() == 0) return out;
  if (s.dim() + center.dim() != k.dim())
    throw std::logic_error("ideal_decomposition: k is not reductive (center + [k,k] != k)");
  const auto iso = isotypic_decomposition(ctx, s, s, seed);
  for (std::size_t i = 0; i < iso.components.size(); ++i) {
    if (iso.labels[i] == "trivial") throw std::logic_error("ideal_decomposition: [k,k] has a center");
    out.ideals.push_back(iso.components[i]);
  }
  return out;
}

template <class T>
bool is_simple(const LieContext<T>& ctx, std::uint64_t seed) {
  if (ctx.algebra().known_simple()) return true;
  if (ctx.dim() < 2) return false;
  const Subspace<T> g = Subspace<T>::whole(ctx.dim());
  if (centralizer_in(ctx, g, g).dim() != 0) return false;
  return commutant(ctx, g, g, seed).size() == 1;
}

#define GOCHECK_INSTANTIATE(T)                                                                                        \
  template std::vector<Matrix<T>> action_matrices(const LieContext<T>&, const Matrix<T>&, const Subspace<T>&);        \
  template AdRestriction<T> ad_restriction(const LieContext<T>&, const Subspace<T>&, const Subspace<T>&);             \
  template IntertwinerSpace<T> intertwiner_space(const LieContext<T>&, const Subspace<T>&, const Subspace<T>&,       \
                                                 const Subspace<T>&, std::uint64_t);                                 \
  template bool modules_disjoint(const LieContext<T>&, const Subspace<T>&, const Subspace<T>&, const Subspace<T>&,   \
                                 std::uint64_t);                                                                     \
  template std::vector<Matrix<T>> commutant(const LieContext<T>&, const Subspace<T>&, const Subspace<T>&,            \
                                            std::uint64_t);                                                          \
  template WeakRegularityReport is_weakly_regular(const LieContext<T>&, const Subspace<T>&, std::uint64_t);          \
  template CriterionReport criterion_weak_regularity(const LieContext<T>&, const Subspace<T>&, std::uint64_t);       \
  template IsotypicDecomposition<T> isotypic_decomposition(const LieContext<T>&, const Subspace<T>&,                 \
                                                           const Subspace<T>&, std::uint64_t);                       \
  template DecomposedSubalgebra<T> ideal_decomposition(const LieContext<T>&, const Subspace<T>&, std::uint64_t);     \
  template bool is_simple(const LieContext<T>&, std::uint64_t);

GOCHECK_INSTANTIATE(Rational)
GOCHECK_INSTANTIATE(double)

}  // namespace gocheck
