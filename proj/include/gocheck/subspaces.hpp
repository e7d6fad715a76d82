#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gocheck/lie.hpp"
#include "gocheck/subspace.hpp"

namespace gocheck {

/// Q-orthogonal coordinate map onto a subspace: coords(w) = G_S^{-1} B Q w,
/// which returns the exact coordinates when w lies in S.
template <class T>
class SubspaceCoordinates {
 public:
  SubspaceCoordinates(const LieContext<T>& ctx, const Subspace<T>& s);
  Vector<T> coords(const Vector<T>& w) const { return map_ * w; }
  /// Q-orthogonal projection onto S in ambient coordinates.
  Vector<T> project(const Vector<T>& w) const;
  bool contains(const Vector<T>& w) const;
  const Matrix<T>& gram() const { return gram_; }  // B Q B^T
  const Matrix<T>& map() const { return map_; }

 private:
  Matrix<T> basis_;
  ToleranceProfile tol_;
  Matrix<T> gram_;
  Matrix<T> map_;
};

template <class T>
struct SubalgebraCheck {
  bool ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // basis indices with bracket outside
  Vector<T> bracket;
};

template <class T>
SubalgebraCheck<T> is_subalgebra(const LieContext<T>& ctx, const Subspace<T>& s);

template <class T>
Subspace<T> orthogonal_complement(const LieContext<T>& ctx, const Subspace<T>& s);
/// Q-orthogonal complement of s inside `within` (s must lie in `within`).
template <class T>
Subspace<T> orthogonal_complement_in(const LieContext<T>& ctx, const Subspace<T>& s, const Subspace<T>& within);

/// {X in within : [X, a] = 0 for all a in A}.
template <class T>
Subspace<T> centralizer_in(const LieContext<T>& ctx, const Subspace<T>& a, const Subspace<T>& within);

/// n_g(k). Throws std::invalid_argument when k is not a subalgebra and
/// std::logic_error if the cross-check n_g(k) = k + c_m(k) fails.
template <class T>
Subspace<T> normalizer(const LieContext<T>& ctx, const Subspace<T>& k);

/// span{[a, b] : a in A, b in B}.
template <class T>
Subspace<T> bracket_span(const LieContext<T>& ctx, const Subspace<T>& a, const Subspace<T>& b);

/// Smallest subalgebra containing the rows of `gens`.
template <class T>
Subspace<T> generated_subalgebra(const LieContext<T>& ctx, const Matrix<T>& gens);

/// A set of elements generating h as a Lie algebra. Exact: basis vectors
/// chosen greedily (sparse). Float: two random elements when they suffice.
template <class T>
Matrix<T> lie_generators(const LieContext<T>& ctx, const Subspace<T>& h, std::uint64_t seed);

template <class T>
struct CartanWitness {
  Vector<T> generic_element;
  Subspace<T> centralizer;
  std::size_t retry_count = 0;
};

template <class T>
struct RankEstimate {
  std::size_t rank = 0;
  CartanWitness<T> witness;
};

/// Minimum over `retries` seeded samples of dim c_S(H) for random H in S.
template <class T>
RankEstimate<T> rank_estimate(const LieContext<T>& ctx, const Subspace<T>& s, std::uint64_t seed,
                              std::size_t retries = 5);

struct RegularityReport {
  bool regular = false;
  bool maximal_rank = false;
  std::size_t rank_k = 0;
  std::size_t rank_normalizer = 0;
  std::size_t rank_g = 0;
  std::size_t dim_k = 0;
  std::size_t dim_normalizer = 0;
};

/// Regular iff rank n_g(k) = rank g; k = {0} counts as regular.
template <class T>
RegularityReport is_regular(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed);

template <class T>
struct DecomposedSubalgebra {
  Subspace<T> center;
  std::vector<Subspace<T>> ideals;
};

/// Center plus simple ideals of a compact subalgebra (isotypic components of
/// ad_s on s = [k, k]). Ideals are ordered by their leading coordinate.
template <class T>
DecomposedSubalgebra<T> ideal_decomposition(const LieContext<T>& ctx, const Subspace<T>& k, std::uint64_t seed = 1);

}  // namespace gocheck
