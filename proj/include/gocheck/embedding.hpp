#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gocheck/subspace.hpp"

namespace gocheck {

/// Block layout of so(k_1) + ... + so(k_s) inside so(n), diagonal blocks in
/// the order given. Subspaces live in the A_ij basis of build_classical(so, n).
struct EmbeddingLayout {
  std::size_t n = 0;
  std::vector<std::size_t> partition;
  std::vector<Subspace<Rational>> factors;  // so(k_i); zero subspace when k_i = 1
  struct OffDiagonal {
    std::size_t i, j;  // 0-based block indices, i < j
    Subspace<Rational> space;
  };
  std::vector<OffDiagonal> offdiag;

  /// Named pieces: "so1".."soS" and "m12", "m13", ... (1-based block numbers).
  std::map<std::string, Subspace<Rational>> named() const;
  /// Sum of the factor subspaces.
  Subspace<Rational> subalgebra() const;
  /// Names in canonical order: so1..soS, then m_ij lexicographic.
  std::vector<std::string> names() const;
};

/// Index of A_ab (a < b, 0-based) in the so(n) basis.
std::size_t so_index(std::size_t n, std::size_t a, std::size_t b);

/// Throws std::invalid_argument if the parts are not positive or do not sum to n.
EmbeddingLayout embed_so_partition(std::size_t n, const std::vector<std::size_t>& partition);

}  // namespace gocheck
