#pragma once

// Completeness and separability constructions: pointwise limits of fast
// Cauchy sequences with tail certificates, and the countable family of
// almost simple alterations of a constant base mapping together with an
// exact nearest-member probe.

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lph/fixtures.hpp"

namespace lph {

// ---------------------------------------------------------------------------
// Cauchy sequences

/// f_1, f_2, ... produced on demand. `term(n)` must be deterministic.
struct CauchySequence {
  std::function<MeasurableMap(std::size_t)> term;
  Exponent p = 2.0;
  std::string label;
};

struct GapRecord {
  std::vector<double> gaps;  // gaps[n-1] = D_p(f_{n+1}, f_n)
  bool fast = false;         // gaps[n-1] <= 2^-n for every recorded n
};

inline GapRecord record_gaps(const CauchySequence& seq, std::size_t count) {
  GapRecord r;
  r.fast = true;
  std::optional<MeasurableMap> prev;
  for (std::size_t n = 1; n <= count + 1; ++n) {
    auto cur = seq.term(n);
    if (prev) {
      const double g = dp_distance(cur, *prev, seq.p);
      r.gaps.push_back(g);
      r.fast &= g <= std::ldexp(1.0, -static_cast<int>(n - 1));
    }
    prev.emplace(std::move(cur));
  }
  return r;
}

/// Indices n_1 < n_2 < ... of a finite list with D_p(f_m, f_{n_k}) <= 2^-k for
/// every later m in the list, so consecutive picks satisfy the fast condition.
inline std::vector<std::size_t> fast_subsequence(const std::vector<MeasurableMap>& terms, Exponent p) {
  std::vector<std::size_t> picks;
  std::size_t start = 0;
  for (int k = 1; start < terms.size(); ++k) {
    const double bound = std::ldexp(1.0, -k);
    std::optional<std::size_t> pick;
    for (std::size_t n = start; n < terms.size() && !pick; ++n) {
      bool ok = true;
      for (std::size_t m = n + 1; m < terms.size() && ok; ++m) ok = dp_distance(terms[m], terms[n], p) <= bound;
      if (ok) pick = n;
    }
    if (!pick) break;
    picks.push_back(*pick);
    start = *pick + 1;
  }
  return picks;
}

struct LimitOptions {
  std::size_t window = 8;
  double tail_tolerance = 1e-10;
  std::size_t iteration_cap = 200;
  std::size_t certified_terms = 30;
  double certificate_slack = 1e-9;
};

struct LimitReport {
  std::size_t terms_used = 0;
  std::vector<double> tail_distance;  // D_p(f_n, limit), n = 1..certified
  double worst_margin = 0;            // max of D_p(f_n, limit) - 2^-(n-1)
  bool fast = false;
  bool certified = false;
};

/// Pointwise limit of a fast Cauchy sequence: each atom's values are iterated
/// until the last `window` of them have diameter below the tolerance, and the
/// space resolves the limit point. Throws non_convergence when an atom's tail
/// never shrinks within the cap or its limit is not a point of the space.
inline std::pair<MeasurableMap, LimitReport> riesz_fischer_limit(const CauchySequence& seq,
                                                                 const LimitOptions& opt = {}) {
  seq.p.check();
  require(opt.window >= 2 && opt.iteration_cap >= opt.window, ErrorKind::invalid_argument,
          "bad limit options");
  std::deque<MeasurableMap> terms;  // stable references while growing
  auto term = [&](std::size_t n) -> const MeasurableMap& {
    while (terms.size() < n) terms.push_back(seq.term(terms.size() + 1));
    return terms[n - 1];
  };

  LimitReport rep;
  rep.fast = true;
  for (std::size_t n = 1; n <= opt.certified_terms; ++n)
    rep.fast &= dp_distance(term(n + 1), term(n), seq.p) <= std::ldexp(1.0, -static_cast<int>(n));
  require(rep.fast, ErrorKind::invalid_argument,
          "sequence is not fast; extract a fast subsequence first");

  const MeasurableMap& first = term(1);
  const MetricSpace& N = *first.space;
  std::vector<Point> limit(first.size());
  for (std::size_t a = 0; a < first.size(); ++a) {
    std::deque<Point> tail;
    bool done = false;
    for (std::size_t n = 1; n <= opt.iteration_cap && !done; ++n) {
      tail.push_back(term(n)[a]);
      if (tail.size() > opt.window) tail.pop_front();
      if (tail.size() < opt.window) continue;
      double diam = 0;
      for (std::size_t i = 0; i < tail.size(); ++i)
        for (std::size_t j = i + 1; j < tail.size(); ++j) diam = std::max(diam, N.distance(tail[i], tail[j]));
      if (!(diam < opt.tail_tolerance)) continue;
      const std::vector<Point> window(tail.begin(), tail.end());
      auto lim = N.limit_of(window, opt.tail_tolerance);
      if (!lim)
        fail(ErrorKind::non_convergence, N.tag() + ": atom " + std::to_string(a) +
                                             " has a Cauchy tail without a limit in the space");
      limit[a] = std::move(*lim);
      done = true;
    }
    if (!done)
      fail(ErrorKind::non_convergence, N.tag() + ": atom " + std::to_string(a) + " tail did not shrink below " +
                                           std::to_string(opt.tail_tolerance) + " within " +
                                           std::to_string(opt.iteration_cap) + " terms");
  }
  MeasurableMap L(first.domain, first.space, std::move(limit));

  rep.certified = true;
  rep.worst_margin = -kInf;
  for (std::size_t n = 1; n <= opt.certified_terms; ++n) {
    const double d = dp_distance(term(n), L, seq.p);
    const double bound = std::ldexp(1.0, -static_cast<int>(n - 1));
    rep.tail_distance.push_back(d);
    rep.worst_margin = std::max(rep.worst_margin, d - bound);
    rep.certified &= d <= bound + opt.certificate_slack;
  }
  rep.terms_used = terms.size();
  return {std::move(L), std::move(rep)};
}

/// Seeded fast Cauchy sequence: f_1 random, then f_{n+1} moves along the
/// geodesic from f_n toward a fresh random map by a step chosen so that
/// D_p(f_{n+1}, f_n) = u_n 2^-n with u_n uniform in [0.1, 0.9].
inline CauchySequence seeded_cauchy(DomainHandle d, SpaceHandle s, Exponent p, std::uint64_t seed) {
  require(s->capabilities().geodesic, ErrorKind::capability_absent, "seeded sequences need geodesics");
  struct State {
    std::vector<MeasurableMap> terms;
    std::mt19937_64 rng;
  };
  auto st = std::make_shared<State>(State{{}, seeded_rng(seed, 0xcac4)});
  st->terms.push_back(random_map(d, s, st->rng));
  CauchySequence seq;
  seq.p = p;
  seq.label = s->tag() + "/seed" + std::to_string(seed);
  seq.term = [st, d, s, p](std::size_t n) {
    require(n >= 1, ErrorKind::invalid_argument, "terms are indexed from 1");
    std::uniform_real_distribution<double> u(0.1, 0.9);
    while (st->terms.size() < n) {
      const std::size_t k = st->terms.size();  // extending f_k to f_{k+1}
      const auto& cur = st->terms.back();
      const auto target = random_map(d, s, st->rng);
      const double D = dp_distance(cur, target, p);
      const double step = u(st->rng) * std::ldexp(1.0, -static_cast<int>(k));
      const double t = D > 0.0 ? std::min(1.0, step / D) : 0.0;
      std::vector<Point> v;
      v.reserve(cur.size());
      for (std::size_t a = 0; a < cur.size(); ++a) v.push_back(s->geodesic_point(cur[a], target[a], t));
      st->terms.emplace_back(d, s, std::move(v));
    }
    return st->terms[n - 1];
  };
  return seq;
}

/// Constant maps at the given points (term n uses values(n)).
inline CauchySequence constant_sequence(DomainHandle d, SpaceHandle s, Exponent p,
                                        std::function<Point(std::size_t)> values, std::string label) {
  CauchySequence seq;
  seq.p = p;
  seq.label = std::move(label);
  seq.term = [d, s, values = std::move(values)](std::size_t n) { return constant_embed(d, s, values(n)); };
  return seq;
}

// ---------------------------------------------------------------------------
// Dense family

/// Almost simple alterations of a constant base h: choose at most `max_terms`
/// distinct cells of the algebra generated by the first generators and give
/// each a value from the dense prefix.
struct DenseFamily {
  DomainHandle domain;
  SpaceHandle space;
  std::shared_ptr<const MeasurableMap> base;
  std::vector<AtomSet> generators;
  std::vector<AtomSet> cells;  // atoms of the generated algebra
  std::vector<Point> values;   // dense prefix Q
  std::size_t max_terms = 0;

  /// Number of members: sum_{n <= max_terms} C(|cells|, n) |Q|^n.
  double size() const {
    double total = 0, binom = 1;
    const double c = static_cast<double>(cells.size()), q = static_cast<double>(values.size());
    for (std::size_t n = 0; n <= std::min(max_terms, cells.size()); ++n) {
      total += binom * std::pow(q, static_cast<double>(n));
      binom = binom * (c - static_cast<double>(n)) / static_cast<double>(n + 1);
    }
    return total;
  }

  /// Member altering `cells[cell]` to `values[value]` for each pair.
  SimpleMap member(const std::vector<std::pair<std::size_t, std::size_t>>& alterations) const {
    require(alterations.size() <= max_terms, ErrorKind::invalid_argument, "too many alterations");
    SimpleMap g{domain, space, std::vector<std::int64_t>(domain->atom_count(), -1), values, std::int64_t{-1}, base};
    std::vector<bool> used(cells.size(), false);
    for (auto [c, v] : alterations) {
      require(c < cells.size() && v < values.size() && !used[c], ErrorKind::invalid_argument,
              "bad family alteration");
      used[c] = true;
      for (auto a : cells[c]) g.labels[a] = static_cast<std::int64_t>(v);
    }
    return g;
  }
};

/// Dyadic half-spaces {x_axis < k / 2^level}, ordered by (level, axis, odd k).
inline std::vector<AtomSet> dyadic_generators(const Domain& d, std::size_t budget) {
  std::vector<AtomSet> gens;
  if (!d.geometry()) {
    for (std::size_t a = 0; a < d.atom_count() && gens.size() < budget; ++a) gens.push_back(AtomSet({a}));
    return gens;
  }
  const auto& geo = *d.geometry();
  for (int level = 1; gens.size() < budget && (std::size_t{1} << (level - 1)) < geo.side(); ++level)
    for (std::size_t axis = 0; axis < geo.dim && gens.size() < budget; ++axis)
      for (std::int64_t k = 1; k < (std::int64_t{1} << level) && gens.size() < budget; k += 2) {
        const double cut = std::ldexp(static_cast<double>(k), -level);
        std::vector<double> lo(geo.dim, 0.0), hi(geo.dim, 1.0);
        hi[axis] = cut;
        gens.push_back(box_atoms(d, lo, hi));
      }
  return gens;
}

/// Atoms of the algebra generated by `gens`: atoms grouped by membership
/// signature, ordered by their first atom.
inline std::vector<AtomSet> algebra_cells(const Domain& d, const std::vector<AtomSet>& gens) {
  std::vector<std::vector<bool>> masks;
  for (const auto& g : gens) masks.push_back(g.mask(d.atom_count()));
  std::map<std::vector<bool>, std::size_t> index;
  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t a = 0; a < d.atom_count(); ++a) {
    std::vector<bool> sig(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) sig[i] = masks[i][a];
    auto [it, inserted] = index.emplace(sig, cells.size());
    if (inserted) cells.emplace_back();
    cells[it->second].push_back(a);
  }
  std::vector<AtomSet> out;
  for (auto& c : cells) out.emplace_back(std::move(c));
  return out;
}

inline DenseFamily build_dense_family(DomainHandle d, SpaceHandle s, const Point& h_value,
                                      std::size_t generator_budget, std::size_t value_budget,
                                      std::size_t max_terms = std::numeric_limits<std::size_t>::max()) {
  require(generator_budget > 0 && value_budget > 0, ErrorKind::invalid_argument, "budgets must be positive");
  require(s->capabilities().dense_enumerator, ErrorKind::capability_absent,
          s->tag() + ": dense family needs a dense enumeration");
  DenseFamily fam;
  fam.base = std::make_shared<const MeasurableMap>(constant_embed(d, s, h_value));
  fam.domain = std::move(d);
  fam.space = std::move(s);
  fam.generators = dyadic_generators(*fam.domain, generator_budget);
  fam.cells = algebra_cells(*fam.domain, fam.generators);
  fam.values = fam.space->dense_sequence(value_budget);
  fam.max_terms = std::min(max_terms, fam.cells.size());
  return fam;
}

/// Calls `visit` on every member in enumeration order (number of altered
/// cells, then cell indices, then value indices) until it returns false.
inline void enumerate_members(const DenseFamily& fam,
                              const std::function<bool(const std::vector<std::pair<std::size_t, std::size_t>>&)>& visit) {
  std::vector<std::pair<std::size_t, std::size_t>> cur;
  bool go = true;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t next_cell, std::size_t remaining) {
    if (!go) return;
    if (remaining == 0) {
      go = visit(cur);
      return;
    }
    for (std::size_t c = next_cell; c < fam.cells.size() && go; ++c)
      for (std::size_t v = 0; v < fam.values.size() && go; ++v) {
        cur.emplace_back(c, v);
        rec(c + 1, remaining - 1);
        cur.pop_back();
      }
  };
  for (std::size_t n = 0; n <= fam.max_terms && go; ++n) rec(0, n);
}

struct ProbeReport {
  bool success = false;
  double distance = kInf;
  std::vector<std::pair<std::size_t, std::size_t>> member;  // (cell, value) alterations
  std::size_t generator_budget = 0;
  std::size_t value_budget = 0;
  std::size_t cells = 0;
  double family_size = 0;
  std::size_t attempts = 0;
};

/// Exact nearest member of the family in D_p: per cell, the best of keeping h
/// or taking the closest prefix value (lowest index on ties); when more cells
/// would profit than max_terms allows, the largest savings win.
inline ProbeReport separability_probe(const MeasurableMap& f, const DenseFamily& fam, Exponent p, double eps) {
  require(!p.is_infinite(), ErrorKind::invalid_argument, "separability probe needs finite p");
  p.check();
  require(eps > 0.0, ErrorKind::invalid_argument, "separability probe needs eps > 0");
  check_compatible(f, *fam.base);
  require(is_member(f, *fam.base, p), ErrorKind::membership_violated, "f is not in L^p_h");
  const double pv = p.value();
  const auto& w = f.domain->weights();
  const MetricSpace& N = *f.space;
  // Per cell: distinct values with their total weight; quantized fields have few.
  std::vector<std::vector<std::pair<Point, double>>> groups(fam.cells.size());
  for (std::size_t c = 0; c < fam.cells.size(); ++c) {
    std::map<Point, double> m;
    for (auto a : fam.cells[c])
      if (w[a] > 0.0) m[f[a]] += w[a];
    groups[c].assign(m.begin(), m.end());
  }
  auto cost = [&](std::size_t cell, const Point& y) {
    double s = 0;
    for (const auto& [v, wt] : groups[cell]) {
      const double d = N.distance(v, y);
      if (d == 0.0) continue;
      if (std::isinf(wt)) return kInf;
      s += wt * std::pow(d, pv);
    }
    return s;
  };
  const Point& h = (*fam.base)[0];
  struct Option {
    double saving;
    std::size_t cell, value;
  };
  std::vector<Option> options;
  for (std::size_t c = 0; c < fam.cells.size(); ++c) {
    const double keep = cost(c, h);
    double best = kInf;
    std::size_t arg = 0;
    for (std::size_t v = 0; v < fam.values.size(); ++v) {
      const double cv = cost(c, fam.values[v]);
      if (cv < best) best = cv, arg = v;
    }
    if (best < keep) options.push_back({keep - best, c, arg});
  }
  std::stable_sort(options.begin(), options.end(), [](const Option& a, const Option& b) { return a.saving > b.saving; });
  if (options.size() > fam.max_terms) options.resize(fam.max_terms);
  ProbeReport rep;
  for (const auto& o : options) rep.member.emplace_back(o.cell, o.value);
  std::sort(rep.member.begin(), rep.member.end());
  // Report the distance of the realized member so it matches dp_distance exactly.
  rep.distance = dp_distance(f, fam.member(rep.member).to_map(), p);
  rep.success = rep.distance < eps;
  rep.generator_budget = fam.generators.size();
  rep.value_budget = fam.values.size();
  rep.cells = fam.cells.size();
  rep.family_size = fam.size();
  rep.attempts = 1;
  return rep;
}

struct ProbeBudgets {
  std::size_t generators = 1;
  std::size_t values = 1;
  std::size_t generator_cap = 256;
  std::size_t value_cap = 4096;
};

/// Doubles both budgets until the probe succeeds or the caps are reached.
/// Exhaustion is reported through success = false, not thrown.
inline ProbeReport separability_search(const MeasurableMap& f, const Point& h_value, Exponent p, double eps,
                                       const ProbeBudgets& b = {}) {
  std::size_t g = b.generators, v = b.values, attempts = 0;
  ProbeReport rep;
  while (true) {
    const auto fam = build_dense_family(f.domain, f.space, h_value, g, v);
    rep = separability_probe(f, fam, p, eps);
    rep.attempts = ++attempts;
    if (rep.success || (g >= b.generator_cap && v >= b.value_cap)) return rep;
    g = std::min(b.generator_cap, 2 * g);
    v = std::min(b.value_cap, 2 * v);
  }
}

// ---------------------------------------------------------------------------
// Mutation hook

/// Wraps a space and negates its distance. Only for self-tests of the checks.
class BrokenMetric final : public MetricSpace {
 public:
  explicit BrokenMetric(SpaceHandle inner) : inner_(std::move(inner)) {}
  SpaceDescriptor descriptor() const override {
    auto d = inner_->descriptor();
    d.tag = "broken_" + d.tag;
    return d;
  }
  Capabilities capabilities() const override { return {false, false, false}; }
  std::size_t dimension() const override { return inner_->dimension(); }
  Point sample(std::mt19937_64& rng) const override { return inner_->sample(rng); }

 protected:
  void check_point(const Point& p) const override { inner_->validate(p); }
  double raw_distance(const Point& a, const Point& b) const override { return -inner_->distance(a, b); }

 private:
  SpaceHandle inner_;
};

}  // namespace lph
