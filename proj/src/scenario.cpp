#include "gocheck/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "gocheck/rep.hpp"

namespace gocheck {

namespace {

constexpr const char* kVersion = "1.0.0";

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }
std::string tf(bool b) { return b ? "true" : "false"; }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
std::string format_vector(const Vector<T>& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) parts.push_back(Field<T>::format(x));
  return join(parts, " ");
}

Vector<Rational> parse_vector(const std::string& text) {
  Vector<Rational> v;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) v.push_back(parse_rational(tok));
  return v;
}

// ---------------------------------------------------------------------------
// Algebra, named pieces and metric shapes

struct Setup {
  std::shared_ptr<const StructureAlgebra> g;
  std::map<std::string, Subspace<Rational>> named;
  std::vector<std::string> param_names;  // one per parameter, in order
  Subspace<Rational> base_k;
  std::vector<std::vector<std::size_t>> merges;  // partition/flag merge patterns
};

std::size_t label_index(const StructureAlgebra& g, const std::string& label) {
  const auto& ls = g.labels();
  auto it = std::find(ls.begin(), ls.end(), label);
  if (it == ls.end()) throw std::invalid_argument("unknown basis label '" + label + "'");
  return static_cast<std::size_t>(it - ls.begin());
}

Subspace<Rational> label_span(const StructureAlgebra& g, const std::vector<std::string>& labels) {
  Matrix<Rational> rows(0, g.dim());
  for (const auto& l : labels) rows.append_row(unit_vector<Rational>(g.dim(), label_index(g, l)));
  return Subspace<Rational>::span(rows);
}

std::shared_ptr<const StructureAlgebra> load_algebra(const ScenarioSpec& spec) {
  if (!spec.table_path.empty()) {
    std::ifstream in(spec.table_path);
    if (!in) throw std::invalid_argument("cannot read structure table " + spec.table_path);
    return std::make_shared<const StructureAlgebra>(ingest_structure_table(in));
  }
  return std::make_shared<const StructureAlgebra>(build_classical(spec.family, spec.n));
}

Setup build_setup(const ScenarioSpec& spec) {
  Setup s;
  s.g = load_algebra(spec);
  const auto& g = *s.g;
  const std::size_t d = g.dim();
  if (spec.shape == Shape::partition) {
    if (!spec.table_path.empty() || parse_family(spec.family) != Family::so)
      throw std::invalid_argument("partition shape needs the so family");
    auto layout = embed_so_partition(spec.n, spec.partition);
    s.named = layout.named();
    s.param_names = layout.names();
    s.base_k = layout.subalgebra();
    const std::size_t parts = spec.partition.size();
    for (std::size_t i = 0; i < parts; ++i)
      for (std::size_t j = i + 1; j < parts; ++j) s.merges.push_back({i, j});
  } else if (spec.shape == Shape::flag) {
    if (!spec.table_path.empty() || parse_family(spec.family) != Family::su)
      throw std::invalid_argument("flag shape needs the su family");
    const std::size_t n = spec.n;
    // Q-orthogonal torus basis by exact Gram-Schmidt on H1..H_{n-1}.
    LieContext<Rational> ctx = LieContext<Rational>::with_killing_form(s.g);
    std::vector<Vector<Rational>> ortho;
    Matrix<Rational> torus(0, d);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      Vector<Rational> v = unit_vector<Rational>(d, label_index(g, "H" + std::to_string(k + 1)));
      for (const auto& u : ortho) {
        const Rational c = ctx.q(v, u) / ctx.q(u, u);
        axpy(v, Rational(-c), u);
      }
      ortho.push_back(v);
      torus.append_row(v);
      const std::string name = "t" + std::to_string(k + 1);
      s.named[name] = Subspace<Rational>::from_basis(Matrix<Rational>::from_rows({v}, d));
      s.param_names.push_back(name);
    }
    s.named["t"] = Subspace<Rational>::from_basis(torus);
    s.base_k = s.named["t"];
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j) {
        const std::string ij = std::to_string(i) + std::to_string(j);
        const std::string name = "m" + ij;
        s.named[name] = label_span(g, {"A" + ij, "S" + ij});
        s.param_names.push_back(name);
      }
    s.merges.push_back({0, 1});  // su(2) on the first two indices; t1 lies in it
  } else if (spec.shape == Shape::subspace) {
    LieContext<Rational> ctx = LieContext<Rational>::with_killing_form(s.g);
    auto k = parse_subspace(read_file(spec.subspace_path));
    if (k.ambient_dim() != d) throw std::invalid_argument("subspace file: ambient dimension differs from the algebra");
    if (!is_subalgebra(ctx, k).ok) throw std::invalid_argument("subspace file: not a subalgebra");
    s.named["k"] = k;
    s.named["m"] = orthogonal_complement(ctx, k);
    s.param_names = {"k", "m"};
    s.base_k = k;
  } else {
    if (spec.h_labels.empty() || spec.k_labels.empty())
      throw std::invalid_argument("triple shape needs h and k label lists");
    LieContext<Rational> ctx = LieContext<Rational>::with_killing_form(s.g);
    auto h = label_span(g, spec.h_labels);
    auto k = label_span(g, spec.k_labels);
    if (!k.contains(h)) throw std::invalid_argument("triple shape: h is not inside k");
    if (!is_subalgebra(ctx, h).ok || !is_subalgebra(ctx, k).ok)
      throw std::invalid_argument("triple shape: h and k must be subalgebras");
    s.named["h"] = h;
    s.named["u"] = orthogonal_complement_in(ctx, h, k);
    s.named["p"] = orthogonal_complement(ctx, k);
    s.named["k"] = k;
    s.param_names = {"u", "p"};
    s.base_k = h;
  }
  return s;
}

BlockSpec blockspec_for(const Setup& s, const ScenarioSpec& spec, const std::vector<Rational>& params_in) {
  if (!spec.blockspec_text.empty()) return parse_blockspec(spec.blockspec_text, s.named);
  std::vector<Rational> params = params_in;
  if (params.empty()) params.assign(s.param_names.size(), Rational(1));
  if (params.size() != s.param_names.size())
    throw std::invalid_argument("expected " + std::to_string(s.param_names.size()) + " metric parameters, got " +
                                std::to_string(params.size()));
  BlockSpec b;
  if (spec.shape == Shape::triple) b.blocks.push_back({"h", s.named.at("h"), Rational(1)});
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& space = s.named.at(s.param_names[i]);
    if (sgn(params[i]) <= 0) throw std::invalid_argument("metric parameter " + s.param_names[i] + " must be positive");
    if (space.dim() > 0) b.blocks.push_back({s.param_names[i], space, params[i]});
  }
  return b;
}

// ---------------------------------------------------------------------------
// Grid

std::vector<std::string> shape_patterns(const ScenarioSpec& spec, const Setup& s) {
  std::vector<std::string> p{"k-form"};
  if (spec.shape == Shape::triple) return {"bi-invariant", "k-form", "h-form"};
  if (spec.shape == Shape::subspace) return {"bi-invariant", "k-form"};
  for (const auto& m : s.merges) p.push_back("merge" + std::to_string(m[0] + 1) + std::to_string(m[1] + 1));
  p.push_back("bi-invariant");
  return p;
}

long draw(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

std::vector<Rational> pattern_tuple(const ScenarioSpec& spec, const Setup& s, const std::string& pattern, Rng& rng) {
  const long top = spec.grid.max_param;
  const std::size_t np = s.param_names.size();
  std::vector<Rational> x(np);
  for (auto& v : x) v = draw(rng, 1, top);
  if (spec.shape == Shape::triple) {
    if (pattern == "bi-invariant") x = {Rational(1), Rational(1)};
    if (pattern == "k-form") x[0] = 1;
    if (pattern == "h-form") x[1] = x[0];
    return x;
  }
  if (spec.shape == Shape::subspace) {
    if (pattern == "bi-invariant") x[1] = x[0];
    return x;
  }
  if (pattern == "bi-invariant") {
    const long c = draw(rng, 1, top);
    std::fill(x.begin(), x.end(), Rational(c));
    return x;
  }
  // Off-diagonal (or root-space) parameters follow the diagonal ones.
  const std::size_t diag = spec.shape == Shape::partition ? spec.partition.size() : spec.n - 1;
  const long b = draw(rng, 1, top);
  for (std::size_t i = diag; i < np; ++i) x[i] = b;
  if (pattern == "k-form") return x;
  const std::size_t i = static_cast<std::size_t>(pattern[5] - '1');
  const std::size_t j = static_cast<std::size_t>(pattern[6] - '1');
  long a = draw(rng, 1, top);
  if (a == b) a = a % top + 1;
  const std::string mij = "m" + std::to_string(i + 1) + std::to_string(j + 1);
  for (std::size_t p = 0; p < np; ++p) {
    const auto& name = s.param_names[p];
    if (name == mij) x[p] = a;
    if (spec.shape == Shape::partition && (p == i || p == j)) x[p] = a;
    if (spec.shape == Shape::flag && name == "t1") x[p] = a;
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Small public helpers

std::string to_string(Shape s) {
  switch (s) {
    case Shape::partition: return "partition";
    case Shape::flag: return "flag";
    case Shape::triple: return "triple";
    case Shape::subspace: return "subspace";
  }
  return "?";
}

Shape parse_shape(const std::string& s) {
  if (s == "partition") return Shape::partition;
  if (s == "flag") return Shape::flag;
  if (s == "triple") return Shape::triple;
  if (s == "subspace") return Shape::subspace;
  throw std::invalid_argument("unknown metric shape '" + s + "'");
}

std::string to_string(Check c) {
  switch (c) {
    case Check::validate: return "validate";
    case Check::regular: return "regular";
    case Check::weakly_regular: return "weakly-regular";
    case Check::equivariance: return "equivariance";
    case Check::go: return "go";
    case Check::natred: return "natred";
    case Check::split: return "split";
    case Check::sweep: return "sweep";
  }
  return "?";
}

Check parse_check(const std::string& s) {
  for (Check c : {Check::validate, Check::regular, Check::weakly_regular, Check::equivariance, Check::go, Check::natred,
                  Check::split, Check::sweep})
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown check '" + s + "'");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::negative: return "negative";
    case Status::error: return "error";
  }
  return "?";
}

int exit_code(Status s) {
  switch (s) {
    case Status::pass: return 0;
    case Status::negative: return 2;
    case Status::error: return 1;
  }
  return 1;
}

std::vector<std::size_t> parse_partition(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& p : split_list(text, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(p, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != p.size() || v == 0) throw std::invalid_argument("bad partition entry '" + p + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty partition");
  return out;
}

std::vector<Rational> parse_params(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& p : split_list(text, ',')) out.push_back(parse_rational(p));
  return out;
}

std::string format_params(const std::vector<Rational>& p) {
  std::vector<std::string> parts;
  for (const auto& x : p) parts.push_back(format_rational(x));
  return join(parts, ",");
}

std::optional<std::string> Report::get(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonical spec

std::vector<std::pair<std::string, std::string>> canonical_spec(const ScenarioSpec& spec) {
  std::map<std::string, std::string> f;
  f["name"] = spec.name;
  if (spec.table_path.empty()) {
    f["algebra.family"] = spec.family;
    f["algebra.n"] = std::to_string(spec.n);
  } else {
    f["algebra.table"] = spec.table_path;
    f["algebra.table.hash"] = hex64(fnv1a(read_file(spec.table_path)));
  }
  f["shape"] = to_string(spec.shape);
  if (spec.shape == Shape::partition) {
    std::vector<std::string> p;
    for (auto v : spec.partition) p.push_back(std::to_string(v));
    f["partition"] = join(p, ",");
  } else if (spec.shape == Shape::flag) {
    f["n"] = std::to_string(spec.n);
  } else if (spec.shape == Shape::triple) {
    f["h_labels"] = join(spec.h_labels, ",");
    f["k_labels"] = join(spec.k_labels, ",");
  } else {
    f["subspace"] = spec.subspace_path;
    f["subspace.hash"] = hex64(fnv1a(read_file(spec.subspace_path)));
  }
  if (!spec.params.empty()) f["params"] = format_params(spec.params);
  if (!spec.blockspec_text.empty()) {
    std::vector<std::string> lines;
    for (auto& l : split_list(spec.blockspec_text, '\n'))
      if (l[0] != '#') lines.push_back(l);
    f["blockspec"] = join(lines, ";");
  }
  std::vector<std::string> checks;
  for (auto c : spec.checks) checks.push_back(to_string(c));
  f["checks"] = join(checks, ",");
  if (std::find(spec.checks.begin(), spec.checks.end(), Check::sweep) != spec.checks.end()) {
    f["grid.tuples"] = std::to_string(spec.grid.tuples);
    f["grid.max_param"] = std::to_string(spec.grid.max_param);
  }
  f["backend"] = to_string(spec.backend);
  f["seed"] = std::to_string(spec.seed);
  f["samples"] = std::to_string(spec.samples);
  f["tol.rank"] = fmt_double(spec.tol.rank_epsilon);
  f["tol.residual"] = fmt_double(spec.tol.residual_epsilon);
  f["tol.eigen"] = fmt_double(spec.tol.eigen_gap_epsilon);
  for (const auto& [k, v] : spec.expect) f["expect." + k] = v;
  return {f.begin(), f.end()};
}

ScenarioSpec spec_from_fields(const std::map<std::string, std::string>& f) {
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = f.find(k);
    if (it == f.end()) return std::nullopt;
    return it->second;
  };
  auto need = [&](const std::string& k) {
    auto v = get(k);
    if (!v) throw std::invalid_argument("spec field '" + k + "' missing");
    return *v;
  };
  ScenarioSpec s;
  s.name = need("name");
  if (auto t = get("algebra.table")) {
    s.table_path = *t;
  } else {
    s.family = need("algebra.family");
    s.n = std::stoul(need("algebra.n"));
  }
  s.shape = parse_shape(need("shape"));
  if (auto p = get("partition")) s.partition = parse_partition(*p);
  if (auto v = get("h_labels")) s.h_labels = split_list(*v, ',');
  if (auto v = get("k_labels")) s.k_labels = split_list(*v, ',');
  if (auto v = get("subspace")) s.subspace_path = *v;
  if (auto v = get("params")) s.params = parse_params(*v);
  if (auto v = get("blockspec")) {
    s.blockspec_text.clear();
    for (const auto& l : split_list(*v, ';')) s.blockspec_text += l + "\n";
  }
  s.checks.clear();
  for (const auto& c : split_list(get("checks").value_or(""), ',')) s.checks.push_back(parse_check(c));
  if (auto v = get("grid.tuples")) s.grid.tuples = std::stoul(*v);
  if (auto v = get("grid.max_param")) s.grid.max_param = std::stol(*v);
  s.backend = parse_backend(need("backend"));
  s.seed = std::stoull(need("seed"));
  s.samples = std::stoul(need("samples"));
  s.tol.rank_epsilon = std::stod(need("tol.rank"));
  s.tol.residual_epsilon = std::stod(need("tol.residual"));
  s.tol.eigen_gap_epsilon = std::stod(need("tol.eigen"));
  for (const auto& [k, v] : f)
    if (k.rfind("expect.", 0) == 0) s.expect[k.substr(7)] = v;
  return s;
}

std::string spec_hash(const ScenarioSpec& spec) {
  std::string text;
  for (const auto& [k, v] : canonical_spec(spec)) text += k + "=" + v + "\n";
  return hex64(fnv1a(text));
}

// ---------------------------------------------------------------------------
// Grid tuples

std::vector<std::pair<std::vector<Rational>, std::string>> grid_tuples(const ScenarioSpec& spec) {
  const Setup s = build_setup(spec);
  const auto patterns = shape_patterns(spec, s);
  const std::size_t np = s.param_names.size();
  const std::size_t total = spec.grid.tuples;
  const std::size_t generic = total / 2;
  std::vector<std::pair<std::vector<Rational>, std::string>> out;
  for (std::size_t i = 0; i < total; ++i) {
    Rng rng(derive_seed(spec.seed, 500000 + i));
    if (i < generic && i % 2 == 0) {
      // Distinct values when the range allows it.
      std::vector<long> pool(static_cast<std::size_t>(spec.grid.max_param));
      std::iota(pool.begin(), pool.end(), 1L);
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<Rational> x(np);
      for (std::size_t p = 0; p < np; ++p)
        x[p] = np <= pool.size() ? pool[p] : draw(rng, 1, spec.grid.max_param);
      if (spec.shape == Shape::triple && x[0] == 1) x[0] = 2;  // keep off the k-form line
      out.emplace_back(x, "generic");
    } else if (i < generic) {
      const auto& pat = patterns[draw(rng, 0, static_cast<long>(patterns.size()) - 1)];
      auto x = pattern_tuple(spec, s, pat, rng);
      const std::size_t at = static_cast<std::size_t>(draw(rng, 0, static_cast<long>(np) - 1));
      x[at] += (x[at] > 1 && draw(rng, 0, 1) == 0) ? Rational(-1) : Rational(1);
      out.emplace_back(x, "near-" + pat);
    } else {
      const auto& pat = patterns[(i - generic) % patterns.size()];
      out.emplace_back(pattern_tuple(spec, s, pat, rng), pat);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

SamplingStrategy strategy_of(const ScenarioSpec& spec, std::uint64_t salt) {
  SamplingStrategy st;
  st.seed = derive_seed(spec.seed, salt);
  st.random_count = spec.samples;
  return st;
}

template <class T>
TupleResult evaluate_tuple(const LieContext<T>& ctx, const Setup& s, const ScenarioSpec& spec,
                           const std::vector<Rational>& params, std::size_t index) {
  TupleResult r;
  r.params = params;
  const auto bs = blockspec_for(s, spec, params);
  const auto lambda = metric_from_blocks<T>(ctx, bs);
  const auto kp = isometry_subalgebra(ctx, lambda);
  r.kprime_dim = kp.dim();
  const auto dz = dazi_structure_check(ctx, lambda, spec.seed);
  r.dazi = dz.verdict;

  const auto st = strategy_of(spec, 700000 + index);
  const auto v = go_verdict(ctx, lambda, kp, st, GoForm::group);
  r.go = v.kind;
  r.evaluated = v.evaluated;
  r.certificates = v.certificates.size();
  GoSystem<T> sys(ctx, lambda, kp, GoForm::group);
  for (const auto& c : v.certificates)
    if (!sys.replay(c)) r.certificates_replay = false;
  if (v.counterexample) {
    r.counterexample = v.counterexample->exact_direction;
    r.rank_matrix = v.counterexample->rank_matrix;
    r.rank_augmented = v.counterexample->rank_augmented;
    r.counterexample_source = v.counterexample_source;
    r.counterexample_replays = sys.replay(*v.counterexample);
  }

  // Coset forms on the same directions must agree with each other.
  const auto vc = go_verdict(ctx, lambda, kp, st, GoForm::coset);
  const auto vl = go_verdict(ctx, lambda, kp, st, GoForm::geodesic_lemma);
  r.forms_agree = vc.kind == vl.kind;

  if (!v.disproved()) {
    r.normalizer_equivariant = normalizer_equivariance_check(ctx, lambda, kp, spec.seed).ok;
    const auto sp = split_check(ctx, lambda, kp, st, spec.seed);
    r.split_holds = sp.holds;
    r.split_label = sp.label();
  }
  if (dz.verdict) r.natred_condition = natred_condition_check(ctx, lambda, kp, dz.m).holds;
  return r;
}

template <class T>
void sweep_impl(const ScenarioSpec& spec, const Setup& s, SweepResult& out) {
  const auto ctx = LieContext<T>::with_killing_form(s.g, spec.tol);
  const auto tuples = grid_tuples(spec);
  out.tuples.assign(tuples.size(), TupleResult{});
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tuples.size(); i = next++) {
      TupleResult r;
      try {
        r = evaluate_tuple(ctx, s, spec, tuples[i].first, i);
      } catch (const std::exception& e) {
        r.params = tuples[i].first;
        r.error = e.what();
      }
      r.pattern = tuples[i].second;
      out.tuples[i] = std::move(r);
    }
  };
  std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, tuples.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace

SweepResult run_sweep(const ScenarioSpec& spec) {
  const Setup s = build_setup(spec);
  SweepResult out;
  if (spec.backend == Backend::exact)
    sweep_impl<Rational>(spec, s, out);
  else
    sweep_impl<double>(spec, s, out);
  auto& sum = out.summary;
  for (const auto& r : out.tuples) {
    ++sum.tuples;
    if (!r.error.empty()) {
      ++sum.errors;
      continue;
    }
    (r.go == GoVerdictKind::disproved ? sum.disproved : sum.not_disproved) += 1;
    if (r.dazi) ++sum.dazi_true;
    if (!r.agree()) ++sum.disagreements;
    if (!r.counterexample_replays || !r.certificates_replay) ++sum.replay_failures;
    if (r.normalizer_equivariant == false) ++sum.normalizer_violations;
    if (r.split_holds == false) ++sum.split_violations;
    if (r.natred_condition == false) ++sum.natred_violations;
    if (r.forms_agree == false) ++sum.form_disagreements;
    if (r.counterexample && r.counterexample_source.rfind("random", 0) == 0) ++sum.pair_misses;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-metric checks

namespace {

std::string criterion(const std::string& text) { return "   criterion: " + text; }

template <class T>
bool is_scalar_operator(const MetricOperator<T>& lambda, const ToleranceProfile& tol) {
  const auto& m = lambda.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const T expect = i == j ? m(0, 0) : T(0);
      if (!Field<T>::is_zero(T(m(i, j) - expect), tol)) return false;
    }
  return true;
}

void note(Report& rep, bool negative) {
  if (negative) rep.status = Status::negative;
}

template <class T>
void single_checks(const ScenarioSpec& spec, const Setup& s, const std::vector<Check>& checks, Report& rep) {
  const auto ctx = LieContext<T>::with_killing_form(s.g, spec.tol);
  const auto k = Subspace<T>::from_basis(convert<T>(s.base_k.basis()), spec.tol);
  auto has = [&](Check c) { return std::find(checks.begin(), checks.end(), c) != checks.end(); };
  const bool need_metric = has(Check::equivariance) || has(Check::go) || has(Check::natred) || has(Check::split);

  rep.add("algebra.name", s.g->name());
  rep.add("algebra.dim", std::to_string(s.g->dim()));
  rep.add("subgroup.dim", std::to_string(s.base_k.dim()));
  rep.human.push_back("algebra: " + s.g->name() + ", dim " + std::to_string(s.g->dim()) +
                      ", Q = -Killing form; base subalgebra k of dim " + std::to_string(s.base_k.dim()));

  if (has(Check::validate)) {
    s.g->validate();  // throws ValidationError with indices
    rep.add("validate.antisymmetry", "ok");
    rep.add("validate.jacobi", "ok");
    rep.add("validate.ad_invariance", "ok");
    rep.human.push_back("algebra valid: yes (antisymmetry, Jacobi identity, ad-invariance of Q)");
  }
  if (has(Check::regular)) {
    const auto r = is_regular(ctx, k, spec.seed);
    rep.add("regular", tf(r.regular));
    rep.add("regular.rank_g", std::to_string(r.rank_g));
    rep.add("regular.rank_normalizer", std::to_string(r.rank_normalizer));
    rep.add("regular.dim_normalizer", std::to_string(r.dim_normalizer));
    rep.add("regular.maximal_rank", tf(r.maximal_rank));
    rep.human.push_back("regular: " + yes_no(r.regular) + " (rank n_g(k) = " + std::to_string(r.rank_normalizer) +
                        ", rank g = " + std::to_string(r.rank_g) + ")");
    rep.human.push_back(criterion("k is normalized by a Cartan subalgebra iff rank n_g(k) = rank g"));
    note(rep, !r.regular);
  }
  if (has(Check::weakly_regular)) {
    const auto r = is_weakly_regular(ctx, k, spec.seed);
    rep.add("weakly_regular", tf(r.weakly_regular));
    rep.add("weakly_regular.intertwiner_dim", std::to_string(r.intertwiner_dim));
    rep.add("self_normalizing", tf(r.dim_cm == 0));
    rep.add("weakly_regular.dim_cm", std::to_string(r.dim_cm));
    rep.human.push_back("weakly regular: " + yes_no(r.weakly_regular) + " (n_g(k)-intertwiners k -> p: " +
                        std::to_string(r.intertwiner_dim) + "); self-normalizing: " + yes_no(r.dim_cm == 0));
    rep.human.push_back(criterion("no n_g(k)-submodule of k is equivalent to one of p = n_g(k)^perp"));
    note(rep, !r.weakly_regular);
  }
  if (!need_metric) return;

  const auto bs = blockspec_for(s, spec, spec.params);
  const auto lambda = metric_from_blocks<T>(ctx, bs);
  rep.add("metric.blockspec", [&] {
    std::vector<std::string> lines = split_list(serialize_blockspec(bs), '\n');
    return join(lines, ";");
  }());
  const auto kp = isometry_subalgebra(ctx, lambda);
  rep.add("kprime.dim", std::to_string(kp.dim()));

  if (has(Check::equivariance)) {
    const auto e = equivariance_check(ctx, lambda, k);
    rep.add("equivariance", tf(e.ok));
    if (e.failing_index) rep.add("equivariance.failing_index", std::to_string(*e.failing_index + 1));
    rep.human.push_back("ad_k-equivariant: " + yes_no(e.ok));
    rep.human.push_back(criterion("ad_X Lambda = Lambda ad_X for every X in k"));
    note(rep, !e.ok);
  }
  std::optional<GoVerdictKind> go_kind;
  if (has(Check::go)) {
    const auto st = strategy_of(spec, 700000);
    const auto v = go_verdict(ctx, lambda, kp, st, GoForm::group);
    go_kind = v.kind;
    GoSystem<T> sys(ctx, lambda, kp, GoForm::group);
    bool replay_ok = true;
    for (const auto& c : v.certificates) replay_ok = replay_ok && sys.replay(c);
    rep.add("go.verdict", v.disproved() ? "disproved" : "not_disproved");
    rep.add("go.k", "isometry");
    rep.add("go.strategy", v.strategy);
    rep.add("go.directions.basis", std::to_string(v.basis_count));
    rep.add("go.directions.pairs", std::to_string(v.pair_count));
    rep.add("go.directions.random", std::to_string(v.random_count));
    rep.add("go.evaluated", std::to_string(v.evaluated));
    rep.add("go.certificates", std::to_string(v.certificates.size()));
    rep.add("go.certificates.replay", replay_ok ? "ok" : "failed");
    if (v.counterexample) {
      rep.add("go.counterexample.form", to_string(GoForm::group));
      rep.add("go.counterexample.source", v.counterexample_source);
      rep.add("go.counterexample.direction", format_vector(v.counterexample->exact_direction));
      rep.add("go.counterexample.ranks",
              std::to_string(v.counterexample->rank_matrix) + "/" + std::to_string(v.counterexample->rank_augmented));
      rep.human.push_back("geodesic orbit: no (exact counterexample at a " + v.counterexample_source +
                          " direction, rank " + std::to_string(v.counterexample->rank_matrix) + " < " +
                          std::to_string(v.counterexample->rank_augmented) + ")");
    } else {
      rep.human.push_back("geodesic orbit: not disproved (" + std::to_string(v.evaluated) +
                          " sampled directions solved, certificates " + (replay_ok ? "replay" : "FAIL") + ")");
    }
    rep.human.push_back(criterion("for every X some W in k' satisfies [W + X, Lambda X] = 0"));
    note(rep, v.disproved() || !replay_ok);
    if (!v.disproved()) {
      const auto ne = normalizer_equivariance_check(ctx, lambda, kp, spec.seed);
      rep.add("go.normalizer_equivariant", tf(ne.ok));
      rep.human.push_back("Lambda commutes with ad of n_g(k'): " + yes_no(ne.ok));
      note(rep, !ne.ok);
    }
  }
  if (has(Check::natred)) {
    try {
      const auto dz = dazi_structure_check(ctx, lambda, spec.seed);
      const bool bi = is_scalar_operator(lambda, spec.tol);
      rep.add("natred", tf(dz.verdict));
      rep.add("natred.bi_invariant", tf(bi));
      if (!dz.verdict) rep.add("natred.reason", dz.reason);
      if (dz.verdict) {
        const auto nc = natred_condition_check(ctx, lambda, kp, dz.m);
        rep.add("natred.condition", tf(nc.holds));
        note(rep, !nc.holds);
      }
      if (bi)
        rep.human.push_back("naturally reductive: yes (bi-invariant)");
      else if (dz.verdict)
        rep.human.push_back("naturally reductive: yes (block form with respect to k' of dim " +
                            std::to_string(kp.dim()) + ")");
      else
        rep.human.push_back("naturally reductive: no (" + dz.reason + ")");
      rep.human.push_back(criterion("Lambda = scalars on the ideals of k', free on its center, one scalar on m"));
      if (go_kind) {
        const bool agree = (*go_kind == GoVerdictKind::not_disproved) == dz.verdict;
        rep.add("equivalence.agree", tf(agree));
        note(rep, !agree);
      }
      note(rep, !dz.verdict);
    } catch (const UnsupportedError& e) {
      rep.add("natred", "unsupported");
      rep.add("natred.reason", e.what());
      rep.human.push_back(std::string("naturally reductive: not decided (") + e.what() + ")");
    }
  }
  if (has(Check::split)) {
    const auto sp = split_check(ctx, lambda, kp, strategy_of(spec, 800000), spec.seed);
    rep.add("split.holds", tf(sp.holds));
    rep.add("split.label", sp.label());
    rep.add("split.weakly_regular", tf(sp.weakly_regular));
    rep.add("split.semisimple", tf(sp.semisimple));
    rep.add("split.self_normalizing", tf(sp.self_normalizing));
    rep.add("split.preserves_k", tf(sp.preserves_k));
    rep.add("split.preserves_m", tf(sp.preserves_m));
    rep.add("split.bi_invariant", tf(sp.bi_invariant));
    if (sp.coset_go) rep.add("split.coset_go", *sp.coset_go == GoVerdictKind::disproved ? "disproved" : "not_disproved");
    rep.human.push_back("splits over k' + m: " + yes_no(sp.holds) + " (" + sp.label() + ")");
    rep.human.push_back(criterion("Lambda k' in k', Lambda m in m, Lambda|k' bi-invariant, Lambda|m geodesic orbit on G/K'"));
    note(rep, !sp.holds);
  }
}

void sweep_report(const ScenarioSpec& spec, Report& rep) {
  const auto sw = run_sweep(spec);
  const auto& sum = sw.summary;
  for (std::size_t i = 0; i < sw.tuples.size(); ++i) {
    const auto& r = sw.tuples[i];
    const std::string p = "tuple." + std::to_string(i);
    rep.add(p + ".pattern", r.pattern);
    rep.add(p + ".params", format_params(r.params));
    if (!r.error.empty()) {
      rep.add(p + ".error", r.error);
      continue;
    }
    rep.add(p + ".kprime_dim", std::to_string(r.kprime_dim));
    rep.add(p + ".dazi", tf(r.dazi));
    rep.add(p + ".go", r.go == GoVerdictKind::disproved ? "disproved" : "not_disproved");
    rep.add(p + ".evaluated", std::to_string(r.evaluated));
    rep.add(p + ".certificates", std::to_string(r.certificates));
    rep.add(p + ".agree", tf(r.agree()));
    if (r.counterexample) {
      rep.add(p + ".counterexample.form", to_string(GoForm::group));
      rep.add(p + ".counterexample.source", r.counterexample_source);
      rep.add(p + ".counterexample.direction", format_vector(*r.counterexample));
      rep.add(p + ".counterexample.ranks", std::to_string(r.rank_matrix) + "/" + std::to_string(r.rank_augmented));
      rep.add(p + ".counterexample.replay", r.counterexample_replays ? "ok" : "failed");
    }
    if (r.normalizer_equivariant) rep.add(p + ".normalizer_equivariant", tf(*r.normalizer_equivariant));
    if (r.split_holds) {
      rep.add(p + ".split", tf(*r.split_holds));
      rep.add(p + ".split.label", r.split_label);
    }
    if (r.natred_condition) rep.add(p + ".natred_condition", tf(*r.natred_condition));
    if (r.forms_agree) rep.add(p + ".coset_forms_agree", tf(*r.forms_agree));
  }
  rep.add("sweep.tuples", std::to_string(sum.tuples));
  rep.add("sweep.not_disproved", std::to_string(sum.not_disproved));
  rep.add("sweep.disproved", std::to_string(sum.disproved));
  rep.add("sweep.dazi_true", std::to_string(sum.dazi_true));
  rep.add("sweep.disagreements", std::to_string(sum.disagreements));
  rep.add("sweep.replay_failures", std::to_string(sum.replay_failures));
  rep.add("sweep.normalizer_violations", std::to_string(sum.normalizer_violations));
  rep.add("sweep.split_violations", std::to_string(sum.split_violations));
  rep.add("sweep.natred_violations", std::to_string(sum.natred_violations));
  rep.add("sweep.coset_form_disagreements", std::to_string(sum.form_disagreements));
  rep.add("sweep.pair_misses", std::to_string(sum.pair_misses));
  rep.add("sweep.errors", std::to_string(sum.errors));

  rep.human.push_back("equivalence sweep: " + std::to_string(sum.tuples) + " tuples, " +
                      std::to_string(sum.not_disproved) + " not disproved, " + std::to_string(sum.disproved) +
                      " disproved, " + std::to_string(sum.dazi_true) + " in block form");
  rep.human.push_back(criterion("geodesic orbit (sampled, w.r.t. k') iff block form w.r.t. k'"));
  rep.human.push_back("  disagreements " + std::to_string(sum.disagreements) + ", replay failures " +
                      std::to_string(sum.replay_failures) + ", normalizer violations " +
                      std::to_string(sum.normalizer_violations) + ", split violations " +
                      std::to_string(sum.split_violations) + ", natred violations " +
                      std::to_string(sum.natred_violations) + ", errors " + std::to_string(sum.errors));
  rep.human.push_back("  #    pattern          k'  block  go             params");
  for (std::size_t i = 0; i < sw.tuples.size(); ++i) {
    const auto& r = sw.tuples[i];
    char line[160];
    std::snprintf(line, sizeof(line), "  %-4zu %-16s %-3zu %-6s %-14s %s", i, r.pattern.c_str(), r.kprime_dim,
                  r.error.empty() ? (r.dazi ? "yes" : "no") : "error",
                  r.go == GoVerdictKind::disproved ? "disproved" : "not disproved", format_params(r.params).c_str());
    rep.human.push_back(line + std::string(r.agree() ? "" : "   <-- DISAGREE"));
  }
  note(rep, !sum.clean());
}

}  // namespace

Report run_check(const ScenarioSpec& spec) {
  spec.tol.validate();
  Report rep;
  rep.add("format", "gocheck-report/1");
  rep.add("version", kVersion);
  rep.add("spec.hash", spec_hash(spec));
  for (const auto& [k, v] : canonical_spec(spec)) rep.add("spec." + k, v);
  rep.human.push_back("gocheck " + std::string(kVersion) + " report for scenario '" + spec.name + "' (spec " +
                      spec_hash(spec) + ", seed " + std::to_string(spec.seed) + ", backend " +
                      to_string(spec.backend) + ")");
  if (!spec.description.empty()) rep.human.push_back(spec.description);

  const Setup s = build_setup(spec);
  std::vector<Check> checks = spec.checks;
  if (checks.empty())
    checks = {Check::validate, Check::regular, Check::weakly_regular, Check::equivariance, Check::go, Check::natred,
              Check::split};
  std::sort(checks.begin(), checks.end());  // enum order is dependency order
  checks.erase(std::unique(checks.begin(), checks.end()), checks.end());

  if (spec.backend == Backend::exact)
    single_checks<Rational>(spec, s, checks, rep);
  else
    single_checks<double>(spec, s, checks, rep);
  if (std::find(checks.begin(), checks.end(), Check::sweep) != checks.end()) sweep_report(spec, rep);

  if (!spec.expect.empty()) {
    bool all = true;
    for (const auto& [key, want] : spec.expect) {
      const auto got = rep.get(key);
      const bool ok = got && *got == want;
      all = all && ok;
      rep.add("expect." + key, ok ? "met" : "unmet (got " + got.value_or("nothing") + ")");
      rep.human.push_back("expected " + key + " = " + want + ": " + (ok ? "met" : "UNMET"));
    }
    // Expectations decide the scenario outcome; sweep violations still count.
    const bool sweep_clean = rep.get("sweep.disagreements").value_or("0") == "0" &&
                             rep.get("sweep.replay_failures").value_or("0") == "0" &&
                             rep.get("sweep.errors").value_or("0") == "0";
    rep.status = all && sweep_clean ? Status::pass : Status::negative;
  }
  rep.add("status", to_string(rep.status));
  rep.human.push_back("status: " + to_string(rep.status));
  return rep;
}

// ---------------------------------------------------------------------------
// Report text

std::string emit_report(const Report& report, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::machine) {
    for (const auto& [k, v] : report.fields) out << k << "=" << v << "\n";
  } else {
    for (const auto& l : report.human) out << l << "\n";
  }
  return out.str();
}

std::vector<std::pair<std::string, std::string>> parse_machine_report(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("report line " + std::to_string(n) + ": expected key=value");
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  if (out.empty() || out.front() != std::pair<std::string, std::string>{"format", "gocheck-report/1"})
    throw std::invalid_argument("report: missing format=gocheck-report/1 header");
  return out;
}

ReplayResult replay_report(const std::string& machine_text) {
  const auto fields = parse_machine_report(machine_text);
  std::map<std::string, std::string> all(fields.begin(), fields.end());
  std::map<std::string, std::string> specf;
  for (const auto& [k, v] : fields)
    if (k.rfind("spec.", 0) == 0 && k != "spec.hash") specf[k.substr(5)] = v;
  const ScenarioSpec spec = spec_from_fields(specf);
  ReplayResult res;
  if (auto h = all.find("spec.algebra.table.hash"); h != all.end())
    if (hex64(fnv1a(read_file(spec.table_path))) != h->second)
      res.failures.push_back("structure table " + spec.table_path + " changed since the report was written");
  if (auto h = all.find("spec.subspace.hash"); h != all.end())
    if (hex64(fnv1a(read_file(spec.subspace_path))) != h->second)
      res.failures.push_back("subspace file " + spec.subspace_path + " changed since the report was written");
  if (spec_hash(spec) != all["spec.hash"]) res.failures.push_back("spec.hash does not match the spec fields");
  if (!res.failures.empty()) return res;

  const Setup s = build_setup(spec);
  const auto ctx = LieContext<Rational>::with_killing_form(s.g);
  const std::string suffix = ".counterexample.direction";
  for (const auto& [key, value] : fields) {
    if (key.size() <= suffix.size() || key.compare(key.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    const std::string prefix = key.substr(0, key.size() - suffix.size());
    ++res.counterexamples;
    try {
      std::vector<Rational> params = spec.params;
      ScenarioSpec local = spec;
      if (prefix.rfind("tuple.", 0) == 0) {
        params = parse_params(all.at(prefix + ".params"));
        local.blockspec_text.clear();
      }
      const auto lambda = metric_from_blocks<Rational>(ctx, blockspec_for(s, local, params));
      const auto kp = isometry_subalgebra(ctx, lambda);
      const auto form_it = all.find(prefix + ".counterexample.form");
      GoForm form = GoForm::group;
      if (form_it != all.end() && form_it->second != to_string(GoForm::group))
        form = form_it->second == to_string(GoForm::coset) ? GoForm::coset : GoForm::geodesic_lemma;
      GoSystem<Rational> sys(ctx, lambda, kp, form);
      const auto x = parse_vector(value);
      if (x.size() != ctx.dim()) throw std::invalid_argument("direction has wrong length");
      const auto r = sys.solve_at(x);
      const auto* u = std::get_if<Unsolvable<Rational>>(&r);
      if (!u) {
        res.failures.push_back(prefix + ": system is solvable at the recorded direction");
        continue;
      }
      const std::string ranks = std::to_string(u->rank_matrix) + "/" + std::to_string(u->rank_augmented);
      if (all.at(prefix + ".counterexample.ranks") != ranks) {
        res.failures.push_back(prefix + ": rank gap " + ranks + " differs from the recorded one");
        continue;
      }
      ++res.verified;
    } catch (const std::exception& e) {
      res.failures.push_back(prefix + ": " + e.what());
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Catalog

std::vector<ScenarioSpec> scenario_catalog() {
  std::vector<ScenarioSpec> out;
  auto grid = [&](std::string name, std::size_t n, std::vector<std::size_t> part, std::size_t tuples, double budget,
                  std::string desc) {
    ScenarioSpec s;
    s.name = std::move(name);
    s.description = std::move(desc);
    s.family = "so";
    s.n = n;
    s.partition = std::move(part);
    s.checks = {Check::sweep};
    s.grid.tuples = tuples;
    s.time_budget_seconds = budget;
    out.push_back(s);
  };
  grid("so6-222-grid", 6, {2, 2, 2}, 200, 600,
       "SO(6) with K = SO(2)xSO(2)xSO(2): metrics x_i on so(k_i), x_ij on m_ij; geodesic orbit vs block form");
  grid("so7-223-grid", 7, {2, 2, 3}, 200, 600,
       "SO(7) with K = SO(2)xSO(2)xSO(3): metrics x_i on so(k_i), x_ij on m_ij; geodesic orbit vs block form");
  grid("so8-233-grid", 8, {2, 3, 3}, 200, 600,
       "SO(8) with K = SO(2)xSO(3)xSO(3): metrics x_i on so(k_i), x_ij on m_ij; geodesic orbit vs block form");
  {
    ScenarioSpec s;
    s.name = "so9-333-regularity";
    s.description = "SO(9) with K = SO(3)xSO(3)xSO(3): not regular, yet weakly regular and self-normalizing";
    s.family = "so";
    s.n = 9;
    s.partition = {3, 3, 3};
    s.checks = {Check::regular, Check::weakly_regular};
    s.expect = {{"regular", "false"}, {"weakly_regular", "true"}, {"self_normalizing", "true"}};
    s.time_budget_seconds = 10;
    out.push_back(s);
  }
  grid("so12-partition4-genmet1", 12, {3, 3, 3, 3}, 40, 600,
       "SO(12) with K = 4 SO(3): four diagonal blocks and six off-diagonal submodules");
  {
    ScenarioSpec s;
    s.name = "su3-torus-flag";
    s.description = "SU(3) over its maximal torus: free metric on t, x_ij on m_ij; verdict must equal the block form";
    s.family = "su";
    s.n = 3;
    s.shape = Shape::flag;
    s.partition.clear();
    s.checks = {Check::sweep};
    s.grid.tuples = 40;
    s.time_budget_seconds = 120;
    out.push_back(s);
  }
  {
    ScenarioSpec s;
    s.name = "triple-shape-demo";
    s.description = "Q|h + x Q|u + y Q|p for so(3) in so(4) in so(5), read from a structure table file";
    s.table_path = GOCHECK_DATA_DIR "/so5.table";
    s.shape = Shape::triple;
    s.partition.clear();
    // so(5) table labels e1..e10 follow A12, A13, A14, A15, A23, A24, A25, A34, A35, A45.
    s.h_labels = {"e1", "e2", "e5"};
    s.k_labels = {"e1", "e2", "e3", "e5", "e6", "e8"};
    s.checks = {Check::sweep};
    s.grid.tuples = 24;
    s.grid.max_param = 12;
    s.time_budget_seconds = 120;
    out.push_back(s);
  }
  return out;
}

std::optional<ScenarioSpec> find_scenario(const std::string& name) {
  for (auto& s : scenario_catalog())
    if (s.name == name) return s;
  return std::nullopt;
}

}  // namespace gocheck
