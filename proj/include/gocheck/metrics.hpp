#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gocheck/embedding.hpp"
#include "gocheck/lie.hpp"
#include "gocheck/subspaces.hpp"

namespace gocheck {

/// Raised when a check is asked about an input outside its supported class.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScalarBlock {
  std::string name;
  Subspace<Rational> space;
  Rational value;
};

/// Free block on a designated subspace z: `gram(a, b)` is the metric
/// <z_a, z_b> on the basis of z. Must be symmetric positive definite.
struct CenterBlock {
  std::string name;
  Subspace<Rational> space;
  Matrix<Rational> gram;
};

struct BlockSpec {
  std::vector<ScalarBlock> blocks;
  std::optional<CenterBlock> center;
};

/// Lines `block <name> scalar <p/q>` and `centerblock <name> matrix <entries>`
/// (row-major, dim^2 rationals). `#` starts a comment. Names resolve against
/// `named`. Errors carry the 1-based line number.
BlockSpec parse_blockspec(std::istream& in, const std::map<std::string, Subspace<Rational>>& named);
BlockSpec parse_blockspec(const std::string& text, const std::map<std::string, Subspace<Rational>>& named);
std::string serialize_blockspec(const BlockSpec& spec);

/// Blocks for a partition layout in `layout.names()` order: so1..soS, then m_ij.
/// Zero-dimensional blocks (parts of size 1) take a parameter but are dropped.
BlockSpec partition_blockspec(const EmbeddingLayout& layout, const std::vector<Rational>& params);

/// Checks the BlockSpec invariants against the context: positive parameters,
/// pairwise Q-orthogonal blocks spanning g, PD center Gram. Throws std::invalid_argument.
void validate_blockspec(const LieContext<Rational>& ctx, const BlockSpec& spec);
void validate_blockspec(const Matrix<Rational>& q, const BlockSpec& spec);

/// Exact matrix of Lambda (column convention) for a validated BlockSpec.
Matrix<Rational> lambda_from_blocks(const LieContext<Rational>& ctx, const BlockSpec& spec);
Matrix<Rational> lambda_from_blocks(const Matrix<Rational>& q, const BlockSpec& spec);

/// Metric endomorphism: <x, y> = Q(Lambda x, y). Immutable.
template <class T>
class MetricOperator {
 public:
  /// Throws std::invalid_argument unless Lambda is Q-self-adjoint and positive definite.
  MetricOperator(const LieContext<T>& ctx, Matrix<T> lambda, std::optional<Matrix<Rational>> exact = std::nullopt,
                 std::optional<BlockSpec> provenance = std::nullopt);

  const Matrix<T>& matrix() const { return lambda_; }
  /// Gram matrix of the metric: M = Q Lambda.
  const Matrix<T>& gram() const { return gram_; }
  std::size_t dim() const { return lambda_.rows(); }
  Vector<T> apply(const Vector<T>& x) const { return lambda_ * x; }
  T inner(const Vector<T>& x, const Vector<T>& y) const { return bilinear(gram_, x, y); }

  /// Exact Lambda when the operator was built from exact data.
  const std::optional<Matrix<Rational>>& exact() const { return exact_; }
  const std::optional<BlockSpec>& provenance() const { return provenance_; }

  /// Eigenspaces, cached at construction. Empty when the exact spectrum is
  /// not rational; `has_eigenspaces()` tells the two apart.
  bool has_eigenspaces() const { return has_eigen_; }
  const std::vector<Eigenspace<T>>& eigenspaces() const { return eigen_; }

  /// Lambda-invariant pieces: eigenspaces when available, otherwise the
  /// provenance blocks, otherwise the whole algebra.
  std::vector<Subspace<T>> invariant_pieces() const;

 private:
  Matrix<T> lambda_;
  Matrix<T> gram_;
  std::optional<Matrix<Rational>> exact_;
  std::optional<BlockSpec> provenance_;
  std::vector<Eigenspace<T>> eigen_;
  bool has_eigen_ = false;
};

template <class T>
MetricOperator<T> metric_from_blocks(const LieContext<T>& ctx, const BlockSpec& spec);

/// Metric from an exact matrix (validated, then converted to T).
template <class T>
MetricOperator<T> metric_from_exact(const LieContext<T>& ctx, const Matrix<Rational>& lambda);

template <class T>
struct EquivarianceResult {
  bool ok = true;
  std::optional<std::size_t> failing_index;  // basis index in h
  Matrix<T> residual;                         // [ad_X, Lambda] at the failing vector
};

/// ad_X Lambda = Lambda ad_X for every basis vector X of h.
template <class T>
EquivarianceResult<T> equivariance_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                         const Subspace<T>& h);

/// Largest subalgebra whose ad operators are skew for <.,.>. Asserts the
/// solution space is a subalgebra (std::logic_error otherwise).
template <class T>
Subspace<T> isometry_subalgebra(const LieContext<T>& ctx, const MetricOperator<T>& lambda);

struct BiInvarianceReport {
  bool ok = false;
  std::string reason;  // empty when ok
};

/// Lambda restricted to the subalgebra k (Lambda k must lie in k): scalar on
/// every simple ideal and preserving the center.
template <class T>
BiInvarianceReport bi_invariance_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                       const Subspace<T>& k, std::uint64_t seed = 1);

template <class T>
struct DaZiReport {
  Subspace<T> isometry_subalgebra;
  DecomposedSubalgebra<T> decomposition;
  Subspace<T> m;
  bool verdict = false;
  std::string reason;                  // first failed requirement when false
  std::vector<T> ideal_scalars;        // one per ideal, when verdict is true
  std::optional<T> m_scalar;           // absent when m = {0}
  Matrix<T> center_block;              // Lambda on z in z-coordinates
};

/// Natural reductivity via the block form w.r.t. the isometry subalgebra.
/// Throws UnsupportedError when g is not simple.
template <class T>
DaZiReport<T> dazi_structure_check(const LieContext<T>& ctx, const MetricOperator<T>& lambda,
                                   std::uint64_t seed = 1);

/// Matrix of Lambda restricted to an invariant subspace, in its coordinates;
/// nullopt when Lambda s is not inside s.
template <class T>
std::optional<Matrix<T>> restrict_to(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& s);

/// Lambda x = c x for all x in s; returns c.
template <class T>
std::optional<T> scalar_on(const LieContext<T>& ctx, const MetricOperator<T>& lambda, const Subspace<T>& s);

}  // namespace gocheck
