#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gocheck/metrics.hpp"

namespace gocheck {

/// A check was called with its hypotheses violated (e.g. Lambda not ad_k-equivariant).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Which linear system is solved for W in k at a direction X.
///   group:          [W + X, Lambda X] = 0, X in g
///   coset:          same bracket, X restricted to m = k^perp
///   geodesic_lemma: <[W + X, Y]_m, X> = 0 for all Y in m, X in m
enum class GoForm { group, coset, geodesic_lemma };
std::string to_string(GoForm f);

template <class T>
struct GoCertificate {
  Vector<T> direction;
  Vector<T> witness;  // ambient coordinates, lies in k
  double residual = 0.0;
};

/// Exact inconsistency at a direction: rank(A) < rank(A|b).
template <class T>
struct Unsolvable {
  Vector<T> direction;
  Vector<Rational> exact_direction;  // the direction that was confirmed exactly
  std::size_t rank_matrix = 0;
  std::size_t rank_augmented = 0;
  /// False only on the float backend when no exact data was available to
  /// confirm the gap. Unconfirmed gaps never produce a Disproved verdict.
  bool confirmed = true;
};

template <class T>
using GoSolveResult = std::variant<GoCertificate<T>, Unsolvable<T>>;

/// Prepared system for one (Lambda, k, form). Checks ad_k-equivariance once.
/// On the float backend every Unsolvable is re-confirmed in exact arithmetic;
/// float inconsistencies that do not survive are reported as solvable with the
/// float residual, never as Unsolvable.
template <class T>
class GoSystem {
 public:
  GoSystem(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& k, GoForm form = GoForm::group);
  ~GoSystem();
  GoSystem(GoSystem&&) noexcept;

  GoSolveResult<T> solve_at(const Vector<T>& x) const;
  /// Exact re-verification of a certificate (float: within residual_epsilon).
  bool replay(const GoCertificate<T>& c) const;
  /// Exact recomputation of the rank gap.
  bool replay(const Unsolvable<T>& u) const;

  GoForm form() const { return form_; }
  const Subspace<T>& k() const { return k_; }
  /// Directions are drawn from here: g for the group form, m otherwise.
  const Subspace<T>& domain() const { return domain_; }

 private:
  struct Exact;
  const LieContext<T>& ctx_;  // must outlive the system
  MetricOperator<T> lambda_;
  Subspace<T> k_;
  Subspace<T> m_;
  Subspace<T> domain_;
  GoForm form_;
  Matrix<T> gk_;      // Gram of Q on k
  Matrix<T> proj_m_;  // projection onto m along k
  std::unique_ptr<Exact> exact_;
};

/// One-shot convenience wrapper around GoSystem.
template <class T>
GoSolveResult<T> go_solve_at(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& k,
                             const Vector<T>& x, GoForm form = GoForm::group);

struct SamplingStrategy {
  std::uint64_t seed = 1;
  std::size_t random_count = 64;
  bool structured = true;     // v_i + v_j over pairs of distinct invariant pieces
  bool basis_vectors = true;  // every basis vector of the domain
  long coefficient_bound = 9;
  std::string describe() const;
};

enum class GoVerdictKind { disproved, not_disproved };

template <class T>
struct GoVerdict {
  GoVerdictKind kind = GoVerdictKind::not_disproved;
  Backend backend = Backend::exact;
  GoForm form = GoForm::group;
  std::string strategy;
  std::size_t basis_count = 0;
  std::size_t pair_count = 0;
  std::size_t random_count = 0;
  std::size_t evaluated = 0;  // directions actually solved (stops at the first Unsolvable)
  std::size_t unconfirmed = 0;  // float gaps that could not be confirmed exactly
  std::optional<Unsolvable<T>> counterexample;
  std::optional<std::size_t> counterexample_index;
  std::string counterexample_source;  // "basis", "pair i,j", "random"
  std::vector<GoCertificate<T>> certificates;
  bool disproved() const { return kind == GoVerdictKind::disproved; }
};

/// Direction list in evaluation order: basis, then pairs, then random.
template <class T>
struct Direction {
  Vector<T> x;
  std::string source;
};
template <class T>
std::vector<Direction<T>> sample_directions(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                            const Subspace<T>& domain, const SamplingStrategy& s);

/// Disproved at the first exact Unsolvable (lowest index), otherwise
/// NotDisproved. NotDisproved is a sampling statement, not a proof.
template <class T>
GoVerdict<T> go_verdict(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& k,
                        const SamplingStrategy& strategy = {}, GoForm form = GoForm::group);

template <class T>
struct NatredReport {
  bool reductive = false;  // [k, m] in m
  bool holds = false;
  std::size_t triples_checked = 0;
  std::optional<std::array<std::size_t, 3>> witness;  // (X1, X2, Y) indices in the m basis
  T value{};                                           // S at the witness
};

/// S(X1, X2, Y) = <[X1, Y]_m, X2> + <[X2, Y]_m, X1> = 0 on all basis triples of m.
/// Throws PreconditionError if [k, m] is not inside m or k + m != g.
template <class T>
NatredReport<T> natred_condition_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                       const Subspace<T>& k, const Subspace<T>& m);

template <class T>
struct NormalizerEquivarianceReport {
  bool ok = false;
  bool semisimple = false;        // k has trivial center
  bool self_normalizing = false;  // c_m(k) = 0
  std::size_t dim_normalizer = 0;
  EquivarianceResult<T> detail;
  bool hypotheses() const { return semisimple || self_normalizing; }
};

template <class T>
NormalizerEquivarianceReport<T> normalizer_equivariance_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                                              const Subspace<T>& k, std::uint64_t seed = 1);

template <class T>
struct TwoStepReport {
  Vector<T> first;   // [Z - W, Lambda(Z - W)] - Lambda [Z, W]
  Vector<T> second;  // [W + X, Lambda X], X = Z - W
  bool first_zero = false;
  bool second_zero = false;
  bool consistent() const { return first_zero == second_zero; }
};

/// Throws PreconditionError if Lambda is not ad_k-equivariant or W is not in k.
template <class T>
TwoStepReport<T> two_step_identity_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                         const Subspace<T>& k, const Vector<T>& z, const Vector<T>& w);

template <class T>
struct SplitReport {
  bool weakly_regular = false;
  bool semisimple = false;
  bool self_normalizing = false;
  bool preserves_k = false;
  bool preserves_m = false;
  bool bi_invariant = false;
  std::string bi_invariance_reason;
  std::optional<GoVerdictKind> coset_go;  // absent when Lambda does not preserve m
  bool holds = false;
  bool applicable() const { return weakly_regular && (semisimple || self_normalizing); }
  std::string label() const { return applicable() ? "theorem" : "exploratory"; }
};

/// Lambda k in k, Lambda m in m, Lambda|_k bi-invariant and the coset form
/// NotDisproved. Hypothesis flags are computed, not assumed.
template <class T>
SplitReport<T> split_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& k,
                           const SamplingStrategy& strategy = {}, std::uint64_t seed = 1);

}  // namespace gocheck
