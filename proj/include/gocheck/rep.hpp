#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gocheck/subspaces.hpp"

namespace gocheck {

/// ad restricted to an invariant subspace V, written in V's basis.
/// action[a] is the dim V x dim V matrix of ad_{h_a} acting on V-coordinates.
template <class T>
struct AdRestriction {
  Subspace<T> acting;
  Subspace<T> space;
  std::vector<Matrix<T>> action;
};

/// Throws std::invalid_argument if [h, V] is not contained in V.
template <class T>
AdRestriction<T> ad_restriction(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v);

/// Action matrices of the given ambient vectors on V (closure checked).
template <class T>
std::vector<Matrix<T>> action_matrices(const LieContext<T>& ctx, const Matrix<T>& elements, const Subspace<T>& v);

template <class T>
struct IntertwinerSpace {
  std::size_t domain_dim = 0;
  std::size_t codomain_dim = 0;
  std::vector<Matrix<T>> basis;  // codomain_dim x domain_dim, in subspace coordinates
  std::size_t dim() const { return basis.size(); }
};

/// Maps T : V1 -> V2 with A2(X) T = T A1(X) for all X in h. Only a Lie
/// generating set of h enters the linear system. Throws std::invalid_argument
/// when V1 or V2 is not ad_h-invariant.
template <class T>
IntertwinerSpace<T> intertwiner_space(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v1,
                                      const Subspace<T>& v2, std::uint64_t seed = 7);

template <class T>
bool modules_disjoint(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v1, const Subspace<T>& v2,
                      std::uint64_t seed = 7);

struct WeakRegularityReport {
  bool weakly_regular = false;
  std::size_t dim_k = 0;
  std::size_t dim_normalizer = 0;
  std::size_t dim_cm = 0;  // c_m(k)
  std::size_t dim_p = 0;
  std::size_t intertwiner_dim = 0;
};

/// n = n_g(k), p = n^perp; weakly regular iff no nonzero n-intertwiner k -> p.
template <class T>
WeakRegularityReport is_weakly_regular(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed = 7);

struct CriterionReport {
  bool holds = false;
  std::size_t intertwiner_dim = 0;
  std::size_t dim_m = 0;
};

/// Sufficient condition: no k-intertwiner k -> m with m = k^perp.
template <class T>
CriterionReport criterion_weak_regularity(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed = 7);

template <class T>
struct IsotypicDecomposition {
  std::vector<Subspace<T>> components;
  /// Number of irreducible summands per component. Read off the spectrum of a
  /// generic symmetric commutant element in floating point: a label, not a proof.
  std::vector<std::size_t> irreducible_count;
  std::vector<std::string> labels;
};

/// Components are eigenspaces of a generic Q-symmetric element of the center
/// of the commutant; the fixed-vector part is split off first.
template <class T>
IsotypicDecomposition<T> isotypic_decomposition(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v,
                                                std::uint64_t seed = 7);

/// Commutant of the action of h on V (maps V -> V in V-coordinates).
template <class T>
std::vector<Matrix<T>> commutant(const LieContext<T>& ctx, const Subspace<T>& h, const Subspace<T>& v,
                                 std::uint64_t seed = 7);

/// Simple means: Q definite and the adjoint commutant is one-dimensional and
/// g is not abelian of dimension 1. Uses the builder flag when set.
template <class T>
bool is_simple(const LieContext<T>& ctx, std::uint64_t seed = 7);

}  // namespace gocheck
