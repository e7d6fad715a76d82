#include "gocheck/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "gocheck/scalar.hpp"

namespace gocheck {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::string strip_plus(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return std::string(s);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  mpz_class p(strip_plus(num), 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational rationalize(double value, long max_denominator) {
  if (!std::isfinite(value)) throw std::invalid_argument("rationalize: non-finite value");
  // Continued fraction convergents h/k.
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(value));
  mpz_class k_prev = 0, k = 1;
  double frac = value - std::floor(value);
  for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
    const double inv = 1.0 / frac;
    const long a = static_cast<long>(std::floor(inv));
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > max_denominator) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    frac = inv - std::floor(inv);
    const Rational approx(h, k);
    if (std::abs(approx.get_d() - value) <= 1e-12 * std::max(1.0, std::abs(value))) break;
  }
  Rational r(h, k);
  r.canonicalize();
  return r;
}

void ToleranceProfile::validate() const {
  if (!(rank_epsilon > 0.0) || !(residual_epsilon > 0.0) || !(eigen_gap_epsilon > 0.0))
    throw std::invalid_argument("tolerance thresholds must be strictly positive");
}

std::string to_string(Backend b) { return b == Backend::exact ? "exact" : "float"; }

Backend parse_backend(const std::string& text) {
  if (text == "exact") return Backend::exact;
  if (text == "float") return Backend::floating;
  throw std::invalid_argument("unknown backend '" + text + "' (expected exact|float)");
}

std::string Field<double>::format(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace gocheck
