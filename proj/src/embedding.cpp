#include "gocheck/embedding.hpp"

#include <numeric>
#include <stdexcept>

namespace gocheck {

std::size_t so_index(std::size_t n, std::size_t a, std::size_t b) {
  if (a >= b || b >= n) throw std::invalid_argument("so_index: need a < b < n");
  // Rows before a contribute (n-1) + (n-2) + ... + (n-a).
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

namespace {

Subspace<Rational> span_of_pairs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const std::size_t d = n * (n - 1) / 2;
  Matrix<Rational> rows(0, d);
  for (const auto& [a, b] : pairs) rows.append_row(unit_vector<Rational>(d, so_index(n, a, b)));
  return Subspace<Rational>::from_basis(rows);
}

}  // namespace

EmbeddingLayout embed_so_partition(std::size_t n, const std::vector<std::size_t>& partition) {
  if (partition.empty()) throw std::invalid_argument("partition must have at least one part");
  for (auto k : partition)
    if (k == 0) throw std::invalid_argument("partition parts must be positive");
  if (std::accumulate(partition.begin(), partition.end(), std::size_t{0}) != n)
    throw std::invalid_argument("partition does not sum to n");
  if (n < 2) throw std::invalid_argument("so(n) requires n >= 2");
  EmbeddingLayout out;
  out.n = n;
  out.partition = partition;
  std::vector<std::size_t> start(partition.size());
  for (std::size_t i = 1; i < partition.size(); ++i) start[i] = start[i - 1] + partition[i - 1];
  for (std::size_t i = 0; i < partition.size(); ++i) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = start[i]; a < start[i] + partition[i]; ++a)
      for (std::size_t b = a + 1; b < start[i] + partition[i]; ++b) pairs.emplace_back(a, b);
    out.factors.push_back(span_of_pairs(n, pairs));
  }
  for (std::size_t i = 0; i < partition.size(); ++i)
    for (std::size_t j = i + 1; j < partition.size(); ++j) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t a = start[i]; a < start[i] + partition[i]; ++a)
        for (std::size_t b = start[j]; b < start[j] + partition[j]; ++b) pairs.emplace_back(a, b);
      out.offdiag.push_back({i, j, span_of_pairs(n, pairs)});
    }
  return out;
}

std::vector<std::string> EmbeddingLayout::names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < factors.size(); ++i) out.push_back("so" + std::to_string(i + 1));
  for (const auto& o : offdiag) out.push_back("m" + std::to_string(o.i + 1) + std::to_string(o.j + 1));
  return out;
}

std::map<std::string, Subspace<Rational>> EmbeddingLayout::named() const {
  std::map<std::string, Subspace<Rational>> out;
  for (std::size_t i = 0; i < factors.size(); ++i) out["so" + std::to_string(i + 1)] = factors[i];
  for (const auto& o : offdiag) out["m" + std::to_string(o.i + 1) + std::to_string(o.j + 1)] = o.space;
  return out;
}

Subspace<Rational> EmbeddingLayout::subalgebra() const {
  Subspace<Rational> s(n * (n - 1) / 2);
  for (const auto& f : factors) s = s + f;
  return s;
}

}  // namespace gocheck
