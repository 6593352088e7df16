#pragma once

// Property checks over the whole library and the suite runner that turns them
// into a pass/fail ledger. Every check is sized by parameters so the same code
// runs at suite scale and at acceptance scale.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lph/interpolation.hpp"
#include "lph/verify.hpp"

namespace lph {

struct CheckResult {
  std::string check_id;
  std::string paper_ref;  // descriptive name of the property
  bool passed = false;
  std::map<std::string, double> metrics;
  std::string detail;
};

namespace detail {

// Running maxima and counters for a check.
struct Tally {
  std::map<std::string, double> m;
  void max(const std::string& k, double v) {
    auto [it, fresh] = m.emplace(k, v);
    if (!fresh) it->second = std::max(it->second, v);
  }
  void add(const std::string& k, double v = 1.0) { m[k] += v; }
  double get(const std::string& k) const {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  }
};

inline CheckResult finish(std::string id, std::string ref, bool ok, Tally t, std::string detail = {}) {
  return {std::move(id), std::move(ref), ok, std::move(t.m), std::move(detail)};
}

// a <= b up to a relative slack.
inline bool le_rel(double a, double b, double tol = 1e-12) { return a <= b + tol * std::max(std::abs(a), std::abs(b)); }

inline double rel_excess(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : (a - b) / s;
}

inline AtomSet random_subset(std::size_t n, double frac, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(frac);
  std::vector<std::size_t> v;
  for (std::size_t a = 0; a < n; ++a)
    if (keep(rng)) v.push_back(a);
  return AtomSet(std::move(v));
}

// Union of a few random boxes on a grid domain.
inline AtomSet random_boxes(const Domain& d, std::size_t boxes, std::mt19937_64& rng) {
  const auto& geo = d.require_geometry();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  AtomSet out;
  for (std::size_t b = 0; b < boxes; ++b) {
    std::vector<double> lo(geo.dim), hi(geo.dim);
    for (std::size_t i = 0; i < geo.dim; ++i) {
      const double x = u(rng), len = 0.1 + 0.4 * u(rng);
      lo[i] = x * (1.0 - len);
      hi[i] = lo[i] + len;
    }
    out = out.unite(box_atoms(d, lo, hi));
  }
  return out;
}

inline const std::vector<Exponent>& axiom_exponents() {
  static const std::vector<Exponent> ps{1.0, 1.5, 2.0, 4.0, Exponent::infinity()};
  return ps;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Target spaces

/// Metric axioms of d_N on random triples: d(a,a) = 0, positivity, exact
/// symmetry and the triangle inequality up to 1e-12 relative.
inline CheckResult check_metric_axioms(const SpaceHandle& s, std::size_t triples, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x101);
  detail::Tally t;
  for (std::size_t i = 0; i < triples; ++i) {
    const Point a = s->sample(rng), b = s->sample(rng), c = s->sample(rng);
    const double ab = s->distance(a, b), ba = s->distance(b, a), bc = s->distance(b, c), ac = s->distance(a, c);
    if (s->distance(a, a) != 0.0) t.add("identity_failures");
    if (ab != ba) t.add("symmetry_failures");
    if (ab < 0.0 || (a != b && !(ab > 0.0))) t.add("positivity_failures");
    if (!detail::le_rel(ac, ab + bc)) t.add("triangle_failures");
    t.max("max_triangle_excess", detail::rel_excess(ac, ab + bc));
  }
  t.m["triples"] = static_cast<double>(triples);
  const bool ok = t.get("identity_failures") + t.get("symmetry_failures") + t.get("positivity_failures") +
                      t.get("triangle_failures") == 0.0;
  return detail::finish("metric.axioms." + s->tag(), "metric axioms of the target space", ok, std::move(t));
}

/// Constant speed, exact endpoints and swap symmetry of geodesic paths.
inline CheckResult check_geodesics(const SpaceHandle& s, std::size_t pairs, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x102);
  detail::Tally t;
  const std::vector<double> ts{0.0, 0.125, 0.25, 0.4, 0.5, 0.75, 0.9, 1.0};
  for (std::size_t i = 0; i < pairs; ++i) {
    const Point a = s->sample(rng), b = s->sample(rng);
    const double D = s->distance(a, b);
    std::vector<Point> g;
    for (double x : ts) g.push_back(s->geodesic_point(a, b, x));
    if (g.front() != a || g.back() != b) t.add("endpoint_failures");
    for (std::size_t k = 0; k < ts.size(); ++k)
      if (s->geodesic_point(b, a, 1.0 - ts[k]) != g[k]) t.add("swap_failures");
    for (std::size_t j = 0; j < ts.size(); ++j)
      for (std::size_t k = j + 1; k < ts.size(); ++k) {
        const double err = std::abs(s->distance(g[j], g[k]) - (ts[k] - ts[j]) * D);
        t.max("max_speed_error", err / std::max(D, 1e-300));
        if (err > 1e-9 * D + 1e-12) t.add("speed_failures");
      }
  }
  t.m["pairs"] = static_cast<double>(pairs);
  const bool ok = t.get("endpoint_failures") + t.get("swap_failures") + t.get("speed_failures") == 0.0;
  return detail::finish("metric.geodesic." + s->tag(), "constant-speed geodesic paths", ok, std::move(t));
}

/// The dense enumeration is deterministic, prefix-stable and its covering
/// radius over sampled points shrinks as the prefix grows.
inline CheckResult check_dense_sequence(const SpaceHandle& s, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x103);
  detail::Tally t;
  const auto big = s->dense_sequence(256);
  const auto again = s->dense_sequence(256);
  const auto small = s->dense_sequence(16);
  bool ok = big == again && std::equal(small.begin(), small.end(), big.begin());
  std::vector<Point> probes;
  for (int i = 0; i < 200; ++i) probes.push_back(s->sample(rng));
  double prev = kInf;
  for (std::size_t k : {4, 16, 64, 256}) {
    double cover = 0;
    for (const auto& q : probes) {
      double best = kInf;
      for (std::size_t i = 0; i < k; ++i) best = std::min(best, s->distance(q, big[i]));
      cover = std::max(cover, best);
    }
    t.m["cover_radius_" + std::to_string(k)] = cover;
    ok &= cover <= prev;
    prev = cover;
  }
  ok &= t.get("cover_radius_256") < t.get("cover_radius_4");
  return detail::finish("metric.dense_sequence." + s->tag(), "countable dense enumeration of the target",
                        ok, std::move(t));
}

/// epsilon_net covers the ball with open eps-balls, checked on points drawn
/// independently of the probe grid. Spaces without the capability must refuse.
inline CheckResult check_epsilon_net(const SpaceHandle& s, std::uint64_t seed) {
  const std::string id = "metric.epsilon_net." + s->tag();
  const std::string ref = "finite eps-nets of closed balls in boundedly compact targets";
  detail::Tally t;
  auto rng = seeded_rng(seed, 0x104);
  const Point c = s->sample(rng);
  if (!s->capabilities().epsilon_net) {
    bool refused = false;
    try {
      s->epsilon_net(c, 1.0, 0.3);
    } catch (const Error& e) {
      refused = e.kind() == ErrorKind::capability_absent;
    }
    t.m["refused"] = refused;
    return detail::finish(id, ref, refused, std::move(t));
  }
  const std::string tag = s->tag();
  const double radius = tag == "circle" ? kPi : tag == "spd" ? 0.8 : 1.0;
  const double eps = tag == "spd" ? 0.5 : 0.3;
  const auto net = s->epsilon_net(c, radius, eps);
  bool ok = !net.empty() && net.front() == c && s->epsilon_net(c, 0.0, eps) == std::vector<Point>{c};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 2000; ++i) {
    Point y = s->sample(rng);
    const double d = s->distance(c, y);
    if (d > radius) y = s->geodesic_point(c, y, u(rng) * radius / d);
    double best = kInf;
    for (const auto& z : net) best = std::min(best, s->distance(y, z));
    worst = std::max(worst, best);
  }
  for (const auto& z : net) ok &= s->distance(c, z) <= radius + eps;
  t.m["net_size"] = static_cast<double>(net.size());
  t.m["worst_cover_over_eps"] = worst / eps;
  ok &= worst < eps;
  return detail::finish(id, ref, ok, std::move(t));
}

// ---------------------------------------------------------------------------
// Measure space

/// Finite additivity on random disjoint sets, and measure of a random partition.
inline CheckResult check_measure_additivity(std::size_t cases, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x201);
  detail::Tally t;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto d = random_domain(64, rng, 0.2);
    const auto a = detail::random_subset(64, 0.4, rng);
    const auto b = detail::random_subset(64, 0.4, rng).minus(a);
    const double lhs = measure(*d, a.unite(b)), rhs = measure(*d, a) + measure(*d, b);
    t.max("max_relative_error", std::abs(lhs - rhs) / std::max(rhs, 1e-300));
    if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, rhs)) t.add("failures");
    // Partition into three pieces.
    const auto c = d->all().minus(a).minus(b);
    const double total = measure(*d, a) + measure(*d, b) + measure(*d, c);
    if (std::abs(total - total_measure(*d)) > 1e-12 * std::max(1.0, total)) t.add("failures");
  }
  Domain inf_dom(std::vector<double>{1.0, kInf, 0.0});
  if (measure(inf_dom, AtomSet({1})) != kInf || measure(inf_dom, AtomSet({0, 2})) != 1.0) t.add("failures");
  t.m["cases"] = static_cast<double>(cases);
  return detail::finish("measure.additivity", "additivity of the atomic measure", t.get("failures") == 0.0,
                        std::move(t));
}

/// Inner closed and outer open approximations: inclusions, the one-cell
/// separations the continuous construction relies on, gaps under budget when
/// unflagged, and identical results across unflagged budgets.
inline CheckResult check_regularity(std::size_t cases, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x202);
  detail::Tally t;
  std::uniform_real_distribution<double> lu(std::log(1e-3), std::log(0.3));
  for (std::size_t i = 0; i < cases; ++i) {
    const auto d = grid_domain(2, 32);
    const auto& geo = *d->geometry();
    const std::size_t n = d->atom_count();
    const auto b = detail::random_boxes(*d, 1 + i % 3, rng);
    double d1 = std::exp(lu(rng)), d2 = std::exp(lu(rng));
    if (d1 > d2) std::swap(d1, d2);
    const auto c1 = inner_closed_approx(*d, b, d1), c2 = inner_closed_approx(*d, b, d2);
    for (const auto* c : {&c1, &c2}) {
      if (!c->set.subset_of(b)) t.add("inner_not_subset");
      if (!c->over_budget && !(c->gap < (c == &c1 ? d1 : d2))) t.add("inner_gap_over");
      if (!c->over_budget && c->set.size() < n &&
          !AtomSet::from_mask(detail::morph(geo, c->set.mask(n), 1, false)).subset_of(b))
        t.add("inner_not_separated");
      t.add(c->over_budget ? "inner_flagged" : "inner_unflagged");
    }
    if (!c1.over_budget && !c2.over_budget && !(c1.set == c2.set)) t.add("inner_not_monotone");

    const auto u1 = outer_open_approx(*d, b, d1), u2 = outer_open_approx(*d, b, d2);
    for (const auto* u : {&u1, &u2}) {
      if (!b.subset_of(u->set)) t.add("outer_not_superset");
      if (u->over_budget == (u->gap < (u == &u1 ? d1 : d2))) t.add("outer_flag_wrong");
      if (!AtomSet::from_mask(detail::morph(geo, b.mask(n), 1, false)).subset_of(u->set))
        t.add("outer_not_separated");
    }
    if (!u1.over_budget && !u2.over_budget && !(u1.set == u2.set)) t.add("outer_not_monotone");
  }
  t.m["cases"] = static_cast<double>(cases);
  const bool ok = t.get("inner_not_subset") + t.get("inner_gap_over") + t.get("inner_not_separated") +
                      t.get("inner_not_monotone") + t.get("outer_not_superset") + t.get("outer_flag_wrong") +
                      t.get("outer_not_separated") + t.get("outer_not_monotone") == 0.0;
  return detail::finish("measure.regularity", "inner closed / outer open regularity surrogates", ok, std::move(t));
}

/// Urysohn functions: range [0, 1], 1 on C, 0 off V, and the adjacent-cell
/// bound |I(x) - I(x')| <= h / d(C, M \ V).
inline CheckResult check_urysohn(std::size_t cases, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x203);
  detail::Tally t;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto d = grid_domain(1 + i % 2, i % 2 ? 32 : 256);
    const auto& geo = *d->geometry();
    const std::size_t n = d->atom_count();
    const auto v = detail::random_boxes(*d, 2, rng);
    const auto c = AtomSet::from_mask(detail::morph(geo, v.mask(n), 1 + i % 3, true));
    const auto I = urysohn(*d, c, v);
    const auto cm = c.mask(n), vm = v.mask(n);
    for (std::size_t a = 0; a < n; ++a) {
      if (!(I[a] >= 0.0 && I[a] <= 1.0)) t.add("range_failures");
      if ((cm[a] && I[a] != 1.0) || (!vm[a] && I[a] != 0.0)) t.add("boundary_failures");
    }
    if (c.empty() || v.size() == n) continue;
    const double gap = set_gap(*d, c, d->all().minus(v));
    for (auto [a, b] : detail::grid_edges(geo)) {
      const double r = std::abs(I[a] - I[b]) / (geo.cell_size / gap);
      t.max("max_modulus_ratio", r);
      if (r > 1.0 + 1e-9) t.add("modulus_failures");
    }
  }
  t.m["cases"] = static_cast<double>(cases);
  const bool ok = t.get("range_failures") + t.get("boundary_failures") + t.get("modulus_failures") == 0.0;
  return detail::finish("measure.urysohn", "Urysohn function as a distance ratio", ok, std::move(t));
}

// ---------------------------------------------------------------------------
// L^p_h

/// D_p is a semimetric vanishing exactly on equivalent maps, for
/// p in {1, 1.5, 2, 4, inf}, on random domains with null atoms.
inline CheckResult check_dp_axioms(const SpaceHandle& s, std::size_t triples, std::size_t atoms,
                                   std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x301);
  detail::Tally t;
  DomainHandle d;
  std::vector<std::size_t> null_atoms;
  for (std::size_t i = 0; i < triples; ++i) {
    if (i % 100 == 0) {
      d = random_domain(atoms, rng, 0.25);
      null_atoms.clear();
      for (std::size_t a = 0; a < atoms; ++a)
        if (d->weight(a) == 0.0) null_atoms.push_back(a);
    }
    const auto f = random_map(d, s, rng), g = random_map(d, s, rng), k = random_map(d, s, rng);
    auto fv = f.values;
    for (auto a : null_atoms) fv[a] = s->sample(rng);
    const MeasurableMap f2(d, s, std::move(fv));
    const bool fg_equiv = equivalent(f, g);
    if (!equivalent(f, f2)) t.add("equivalence_failures");
    for (const auto& p : detail::axiom_exponents()) {
      const double fg = dp_distance(f, g, p), gf = dp_distance(g, f, p), gk = dp_distance(g, k, p),
                   fk = dp_distance(f, k, p);
      if (dp_distance(f, f, p) != 0.0 || dp_distance(f, f2, p) != 0.0) t.add("zero_failures");
      if (fg != gf) t.add("symmetry_failures");
      if (!(fg >= 0.0)) t.add("sign_failures");
      if ((fg == 0.0) != fg_equiv) t.add("zero_iff_equivalent_failures");
      if (!detail::le_rel(fk, fg + gk)) t.add("triangle_failures");
      t.max("max_triangle_excess", detail::rel_excess(fk, fg + gk));
    }
  }
  t.m["triples"] = static_cast<double>(triples);
  const bool ok = t.get("equivalence_failures") + t.get("zero_failures") + t.get("symmetry_failures") +
                      t.get("sign_failures") + t.get("zero_iff_equivalent_failures") + t.get("triangle_failures") ==
                  0.0;
  return detail::finish("lp.dp_axioms." + s->tag(), "D_p semimetric, zero exactly on equivalent maps", ok,
                        std::move(t));
}

/// D_p(const y, const y') = mu(M)^{1/p} d(y, y') within 1e-12 relative.
inline CheckResult check_constant_embedding(const SpaceHandle& s, std::size_t pairs, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x302);
  std::uniform_int_distribution<std::size_t> na(1, 16);
  detail::Tally t;
  const double mus[] = {0.5, 1.0, 4.0};
  for (std::size_t i = 0; i < pairs; ++i) {
    const double mu = mus[i % 3];
    const auto d = scaled_domain(na(rng), mu);
    const Point y = s->sample(rng), z = s->sample(rng);
    const double dyz = s->distance(y, z);
    const auto cy = constant_embed(d, s, y), cz = constant_embed(d, s, z);
    for (const auto& p : detail::axiom_exponents()) {
      const double expect = p.is_infinite() ? dyz : std::pow(mu, 1.0 / p.value()) * dyz;
      const double got = dp_distance(cy, cz, p);
      const double err = std::abs(got - expect) / std::max(expect, 1e-300);
      t.max("max_relative_error", err);
      if (err > 1e-12) t.add("failures");
    }
  }
  t.m["pairs"] = static_cast<double>(pairs);
  return detail::finish("lp.constant_embedding." + s->tag(), "constant maps embed N scaled by mu(M)^{1/p}",
                        t.get("failures") == 0.0, std::move(t));
}

/// Hoelder inclusion on finite measure: D_p <= mu(M)^{1/p - 1/p'} D_p' for p <= p'.
inline CheckResult check_holder(std::size_t cases, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x303);
  const auto spaces = concrete_spaces();
  const auto& ps = detail::axiom_exponents();
  detail::Tally t;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto& s = spaces[i % spaces.size()];
    const auto d = random_domain(12, rng, 0.2);
    const double mu = total_measure(*d);
    const auto f = random_map(d, s, rng), g = random_map(d, s, rng);
    std::vector<double> D;
    for (const auto& p : ps) D.push_back(dp_distance(f, g, p));
    for (std::size_t a = 0; a < ps.size(); ++a)
      for (std::size_t b = a + 1; b < ps.size(); ++b) {
        const double inv_b = ps[b].is_infinite() ? 0.0 : 1.0 / ps[b].value();
        const double bound = std::pow(mu, 1.0 / ps[a].value() - inv_b) * D[b];
        t.max("max_relative_excess", detail::rel_excess(D[a], bound));
        if (!detail::le_rel(D[a], bound)) t.add("failures");
      }
  }
  t.m["cases"] = static_cast<double>(cases);
  return detail::finish("lp.holder_inclusion", "Hoelder inclusion L^p' in L^p on finite measure",
                        t.get("failures") == 0.0, std::move(t));
}

/// Changing the base h to h' with D_inf(h, h') finite on a finite measure keeps
/// membership, with D_p(f, h')^p <= 2^{p-1}(D_p(f, h)^p + D_inf(h, h')^p mu(M)).
inline CheckResult check_base_invariance(std::size_t cases, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x304);
  const auto spaces = concrete_spaces();
  detail::Tally t;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto& s = spaces[i % spaces.size()];
    const auto d = random_domain(12, rng, 0.2);
    const double mu = total_measure(*d);
    const auto f = random_map(d, s, rng), h = random_map(d, s, rng), h2 = random_map(d, s, rng);
    const double dinf = dp_distance(h, h2, Exponent::infinity());
    for (const auto& p : detail::axiom_exponents()) {
      if (p.is_infinite()) continue;
      const double pv = p.value();
      if (is_member(f, h, p) != is_member(f, h2, p)) t.add("membership_failures");
      const double lhs = std::pow(dp_distance(f, h2, p), pv);
      const double rhs = std::pow(2.0, pv - 1.0) * (std::pow(dp_distance(f, h, p), pv) + std::pow(dinf, pv) * mu);
      t.max("max_relative_excess", detail::rel_excess(lhs, rhs));
      if (!detail::le_rel(lhs, rhs)) t.add("bound_failures");
    }
  }
  t.m["cases"] = static_cast<double>(cases);
  const bool ok = t.get("membership_failures") + t.get("bound_failures") == 0.0;
  return detail::finish("lp.base_invariance", "L^p_h = L^p_h' when h, h' are uniformly close", ok, std::move(t));
}

/// Restriction and the distance field x -> d(f(x), h(x)) are 1-Lipschitz.
inline CheckResult check_lipschitz(std::size_t cases, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x305);
  const auto spaces = concrete_spaces();
  detail::Tally t;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto& s = spaces[i % spaces.size()];
    const auto d = random_domain(16, rng, 0.2);
    const auto f = random_map(d, s, rng), g = random_map(d, s, rng), h = random_map(d, s, rng);
    const auto b = detail::random_subset(16, 0.5, rng);
    const auto sub = restrict_domain(*d, b);
    const auto fb = restrict(f, b, sub), gb = restrict(g, b, sub);
    const auto df = distance_to_base_field(f, h), dg = distance_to_base_field(g, h);
    for (Exponent p : {Exponent(1.0), Exponent(2.0), Exponent::infinity()}) {
      const double full = dp_distance(f, g, p);
      if (!detail::le_rel(dp_distance(fb, gb, p), full)) t.add("restriction_failures");
      if (!detail::le_rel(dp_distance(df, dg, p), full)) t.add("distance_field_failures");
    }
  }
  t.m["cases"] = static_cast<double>(cases);
  const bool ok = t.get("restriction_failures") + t.get("distance_field_failures") == 0.0;
  return detail::finish("lp.lipschitz", "restriction and distance fields are 1-Lipschitz", ok, std::move(t));
}

/// L^p_h is a single point exactly when mu is purely infinite or |N| = 1.
inline CheckResult check_triviality(std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x306);
  detail::Tally t;
  const auto r = make_space(parse_space_name("r2"));
  const auto point = make_space(parse_space_name("point"));
  // Purely infinite: members agree with h on every positive atom.
  const auto pinf = std::make_shared<const Domain>(std::vector<double>{0.0, kInf, kInf});
  const auto h = random_map(pinf, r, rng);
  bool ok = is_trivial(*pinf, *r);
  for (int i = 0; i < 50; ++i) {
    auto v = h.values;
    v[0] = r->sample(rng);
    if (i % 2) v[1] = r->sample(rng);
    const MeasurableMap f(pinf, r, std::move(v));
    if (is_member(f, h, 2.0) != equivalent(f, h)) t.add("failures");
  }
  // Single-point target: every pair of maps is equivalent.
  const auto d = random_domain(5, rng);
  ok &= is_trivial(*d, *point);
  ok &= equivalent(constant_embed(d, point, Point{}), constant_embed(d, point, Point{}));
  // Nontrivial: a finite positive atom lets a member differ from h.
  const auto mixed = std::make_shared<const Domain>(std::vector<double>{1.0, kInf});
  ok &= !is_trivial(*mixed, *r);
  const auto hm = random_map(mixed, r, rng);
  auto v = hm.values;
  v[0] = Point{v[0][0] + 1.0, v[0][1]};
  const MeasurableMap fm(mixed, r, std::move(v));
  ok &= is_member(fm, hm, 2.0) && !equivalent(fm, hm);
  ok &= t.get("failures") == 0.0;
  return detail::finish("lp.triviality", "trivial iff mu purely infinite or N a single point", ok, std::move(t));
}

/// differing_support covers {w > 0, f != h} exactly with disjoint finite-measure
/// pieces whose buckets match their deviations.
inline CheckResult check_differing_support(std::size_t cases, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x307);
  const auto spaces = concrete_spaces();
  detail::Tally t;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto& s = spaces[i % spaces.size()];
    const auto d = random_domain(24, rng, 0.2);
    const auto h = random_map(d, s, rng), g = random_map(d, s, rng);
    const auto keep = detail::random_subset(24, i % 7 == 0 ? 1.0 : 0.5, rng);
    auto v = g.values;
    for (auto a : keep) v[a] = h[a];
    const MeasurableMap f(d, s, std::move(v));
    const auto pieces = differing_support(f, h, 2.0);
    const Point z0 = reference_point(h);
    AtomSet seen;
    for (const auto& pc : pieces) {
      if (!seen.intersect(pc.atoms).empty()) t.add("overlap_failures");
      seen = seen.unite(pc.atoms);
      if (!std::isfinite(measure(*d, pc.atoms))) t.add("measure_failures");
      for (auto a : pc.atoms) {
        const double dev = s->distance(f[a], h[a]);
        const double lo = 1.0 / static_cast<double>(pc.n);
        const double hi = pc.n == 1 ? kInf : 1.0 / static_cast<double>(pc.n - 1);
        if (!(dev > lo && dev <= hi)) t.add("bucket_failures");
        const double r = s->distance(z0, h[a]);
        if (!(r <= static_cast<double>(pc.m) && (pc.m == 0 || r > static_cast<double>(pc.m) - 1.0)))
          t.add("bucket_failures");
      }
    }
    std::vector<std::size_t> expect;
    for (std::size_t a = 0; a < 24; ++a)
      if (d->weight(a) > 0.0 && f[a] != h[a]) expect.push_back(a);
    if (!(seen == AtomSet(std::move(expect)))) t.add("cover_failures");
    if (pieces.empty() != equivalent(f, h)) t.add("cover_failures");
  }
  t.m["cases"] = static_cast<double>(cases);
  const bool ok = t.get("overlap_failures") + t.get("measure_failures") + t.get("bucket_failures") +
                      t.get("cover_failures") == 0.0;
  return detail::finish("lp.differing_support", "members differ from h on a sigma-finite set", ok, std::move(t));
}

// ---------------------------------------------------------------------------
// Simple-map density

/// Countably-valued quantization: sup error < eps, range no larger than the
/// number of distinct values; sigma-finite mode reaches D_p < eps.
inline CheckResult check_quantize(const SpaceHandle& s, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0x401);
  detail::Tally t;
  bool ok = true;
  for (double eps : {0.3, 0.1}) {
    const auto d = random_domain(200, rng, 0.1);
    const auto f = random_map(d, s, rng);
    const auto [g, rep] = countable_quantize(f, eps);
    const auto distinct = detail::distinct_values(f, d->all()).size();
    ok &= rep.success && rep.range_size <= distinct && dp_distance(f, g.to_map(), Exponent::infinity()) < eps;
    t.max("max_sup_error_over_eps", rep.achieved_error / eps);
    const auto [g2, rep2] = countable_quantize(f, eps, QuantizeOptions{true, 2.0});
    ok &= rep2.success && dp_distance(f, g2.to_map(), 2.0) < eps;
    t.max("max_sigma_error_over_eps", rep2.achieved_error / eps);
  }
  return detail::finish("approx.quantize." + s->tag(), "countably-valued maps are dense", ok, std::move(t));
}

/// Almost-simple approximation of smooth fields on a side x side grid: total
/// error < eps and each of the three steps < eps / 3, for p in {1, 2} and
/// eps in {0.5, 0.1, 0.02}; the altered set has finite measure.
inline CheckResult check_almost_simple(const SpaceHandle& s, std::size_t side, std::uint64_t seed) {
  const auto d = grid_domain(2, side);
  const auto f = smooth_field(d, s, seed);
  auto rng = seeded_rng(seed, 0x402);
  const auto h = constant_embed(d, s, s->sample(rng));
  detail::Tally t;
  bool ok = true;
  for (double p : {1.0, 2.0})
    for (double eps : {0.5, 0.1, 0.02}) {
      const auto [g, rep] = almost_simple_approx(f, h, p, eps);
      bool step_ok = true;
      for (double e : rep.step_breakdown) step_ok &= e < eps / 3.0;
      ok &= rep.success && step_ok && rep.achieved_error < eps && std::isfinite(rep.altered_measure);
      t.max("max_error_over_eps", rep.achieved_error / eps);
      for (double e : rep.step_breakdown) t.max("max_step_over_third", e / (eps / 3.0));
      t.max("max_range_size", static_cast<double>(rep.range_size));
    }
  return detail::finish("approx.almost_simple." + s->tag(), "almost-simple maps are dense for finite p", ok,
                        std::move(t));
}

/// Halving eps never increases the achieved almost-simple error.
inline CheckResult check_almost_simple_halving(const SpaceHandle& s, std::size_t side, std::uint64_t seed) {
  const auto d = grid_domain(2, side);
  const auto f = smooth_field(d, s, seed);
  auto rng = seeded_rng(seed, 0x403);
  const auto h = constant_embed(d, s, s->sample(rng));
  detail::Tally t;
  bool ok = true;
  for (double p : {1.0, 2.0}) {
    double prev = kInf;
    for (double eps = 0.4; eps > 0.02; eps /= 2.0) {
      const double e = almost_simple_approx(f, h, p, eps).second.achieved_error;
      if (e > prev) t.add("increases");
      prev = e;
    }
  }
  ok &= t.get("increases") == 0.0;
  return detail::finish("approx.almost_simple_halving." + s->tag(), "approximation error tracks eps", ok,
                        std::move(t));
}

/// Simple maps are dense in L^inf_h for boundedly compact targets; the circle
/// range stays within ceil(2 pi / eps) + 1.
inline CheckResult check_sup_density(const SpaceHandle& s, std::size_t side, std::uint64_t seed) {
  const auto d = grid_domain(2, side);
  const auto f = smooth_field(d, s, seed);
  const auto h = constant_embed(d, s, f[0]);
  detail::Tally t;
  bool ok = true;
  for (double eps : {0.3, 0.1}) {
    const auto [g, rep] = simple_approx_sup(f, h, eps);
    ok &= rep.success && dp_distance(f, g.to_map(), Exponent::infinity()) < eps;
    if (s->tag() == "circle") ok &= static_cast<double>(rep.range_size) <= std::ceil(kTwoPi / eps) + 1.0;
    t.max("max_error_over_eps", rep.achieved_error / eps);
    t.m["range_size_eps_" + Exponent(eps).str()] = static_cast<double>(rep.range_size);
  }
  return detail::finish("approx.sup_density." + s->tag(), "simple maps dense in L^inf for boundedly compact N",
                        ok, std::move(t));
}

/// Targets without finite eps-nets refuse the sup construction.
inline CheckResult check_sup_refusal(const SpaceHandle& s, std::uint64_t seed) {
  const auto d = grid_domain(2, 8);
  const auto f = smooth_field(d, s, seed);
  const auto h = constant_embed(d, s, f[0]);
  bool refused = false;
  try {
    simple_approx_sup(f, h, 0.1);
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::capability_absent;
  }
  detail::Tally t;
  t.m["refused"] = refused;
  return detail::finish("approx.sup_refusal." + s->tag(), "sup density needs a boundedly compact target", refused,
                        std::move(t));
}

/// Orthonormal fixture in a Hilbert space: every simple map with k < n values
/// is at least sqrt(2)/2 away in D_inf.
inline CheckResult check_hilbert(std::size_t n, std::size_t k) {
  const auto rep = hilbert_counterexample(n, k, n);
  detail::Tally t;
  t.m["min_max_error"] = rep.min_max_error;
  t.m["partitions_checked"] = static_cast<double>(rep.partitions_checked);
  const bool ok = rep.certified && rep.min_max_error >= std::sqrt(2.0) / 2.0 - 1e-12;
  return detail::finish("approx.hilbert.n" + std::to_string(n) + "_k" + std::to_string(k),
                        "simple maps not dense in L^inf for a non-boundedly-compact N", ok, std::move(t));
}

/// Best constant and best k-valued errors strictly increase with refinement.
inline CheckResult check_divergence(DivergenceKind kind, const std::vector<std::size_t>& refinements, double p) {
  const auto tr = divergence_trend(kind, refinements, p, 3);
  detail::Tally t;
  for (const auto& l : tr.levels) {
    t.m["best_constant_r" + std::to_string(l.refinement)] = l.best_constant_error;
    t.m["best_k_r" + std::to_string(l.refinement)] = l.best_k_error;
  }
  const bool ok = refinements.size() >= 5 && tr.constant_strictly_increasing && tr.k_strictly_increasing;
  return detail::finish("approx.divergence." + to_string(kind), "simple approximants of h diverge on refinement",
                        ok, std::move(t));
}

// ---------------------------------------------------------------------------
// Continuous and smooth relaxation

struct RelaxCase {
  std::string space;
  std::size_t dim = 1, side = 1024, regions = 2;
  double eps = 0.2;
};

inline std::vector<RelaxCase> relax_cases(std::size_t side_1d, std::size_t side_2d) {
  std::vector<RelaxCase> out;
  for (const char* s : {"r2", "spd2", "simplex3", "circle"})
    for (auto [dim, side] : {std::pair<std::size_t, std::size_t>{1, side_1d}, {2, side_2d}})
      for (std::size_t k : {2, 5})
        for (double eps : {0.2, 0.05}) out.push_back({s, dim, side, k, eps});
  return out;
}

/// Simple -> continuous (order 0) or smooth (order >= 1) relaxation with p = 1:
/// D_p < eps, z0 and the region values exact, adjacent-cell modulus within the
/// bound, values on the geodesics. Order 0 of the smooth path must reproduce
/// the continuous field bit for bit; order >= 1 must keep boundary finite
/// differences within 10 h^2.
inline CheckResult check_relaxation(int order, std::size_t side_1d, std::size_t side_2d, std::uint64_t seed) {
  detail::Tally t;
  const Exponent p = 1.0;
  bool ok = true;
  std::size_t idx = 0;
  for (const auto& c : relax_cases(side_1d, side_2d)) {
    const auto d = grid_domain(c.dim, c.side);
    const auto s = make_space(parse_space_name(c.space));
    const auto g = striped_simple_map(d, s, c.regions, seed * 131 + idx++);
    const auto [field, rep] = order == 0 ? continuous_from_simple(g, p, c.eps) : smooth_from_simple(g, p, c.eps, order);
    const double mod = modulus_ratio(field), defect = range_defect(field);
    const bool exact = endpoints_exact(field);
    const bool case_ok = rep.success && rep.achieved_error < c.eps && exact && mod <= 1.0 && defect <= 1e-9;
    if (!case_ok) t.add("case_failures");
    ok &= case_ok;
    t.max("max_error_over_eps", rep.achieved_error / c.eps);
    t.max("max_modulus_ratio", mod);
    t.max("max_range_defect", defect);
    if (order == 0) {
      const auto [f0, r0] = smooth_from_simple(g, p, c.eps, 0);
      if (f0.values != field.values) t.add("order0_mismatch");
    } else {
      const double h = d->geometry()->cell_size;
      const auto bd = boundary_differences(order, h);
      t.max("max_boundary_diff_over_10h2", std::max(bd.first, bd.second) / (10.0 * h * h));
      if (bd.first > 10.0 * h * h || bd.second > 10.0 * h * h) t.add("boundary_failures");
    }
  }
  ok &= t.get("order0_mismatch") + t.get("boundary_failures") == 0.0;
  t.m["cases"] = static_cast<double>(idx);
  return detail::finish(order == 0 ? "interp.continuous" : "interp.smooth_order" + std::to_string(order),
                        order == 0 ? "simple maps relax to continuous maps within eps"
                                   : "simple maps relax to smooth maps within eps",
                        ok, std::move(t));
}

/// Doubling the grid resolution never increases the relaxation error.
inline CheckResult check_relaxation_refinement(std::uint64_t seed) {
  detail::Tally t;
  for (const char* name : {"r2", "circle"}) {
    const auto s = make_space(parse_space_name(name));
    double prev = kInf;
    for (std::size_t side : {32, 64, 128}) {
      const auto d = grid_domain(2, side);
      const auto g = striped_simple_map(d, s, 2, seed);
      const double e = continuous_from_simple(g, 1.0, 0.2).second.achieved_error;
      if (e > prev) t.add("increases");
      prev = e;
    }
  }
  return detail::finish("interp.refinement", "finer grids give closer relaxations", t.get("increases") == 0.0,
                        std::move(t));
}

// ---------------------------------------------------------------------------
// Completeness and separability

/// Seeded fast Cauchy sequences converge with D_p(f_n, limit) <= 2^{-(n-1)} + 1e-9.
inline CheckResult check_riesz_fischer(const SpaceHandle& s, std::size_t sequences, std::size_t atoms,
                                       std::uint64_t seed) {
  detail::Tally t;
  auto rng = seeded_rng(seed, 0x601);
  const Exponent ps[] = {1.0, 2.0, Exponent::infinity()};
  for (std::size_t i = 0; i < sequences; ++i) {
    const auto d = random_domain(atoms, rng, 0.1);
    const auto seq = seeded_cauchy(d, s, ps[i % 3], seed * 1000 + i);
    try {
      const auto [L, rep] = riesz_fischer_limit(seq);
      if (!rep.certified) t.add("uncertified");
      t.max("worst_margin", rep.worst_margin);
      t.max("max_terms_used", static_cast<double>(rep.terms_used));
    } catch (const Error&) {
      t.add("errors");
    }
  }
  t.m["sequences"] = static_cast<double>(sequences);
  const bool ok = t.get("uncertified") + t.get("errors") == 0.0;
  return detail::finish("verify.riesz_fischer." + s->tag(), "L^p_h is complete when N is complete", ok,
                        std::move(t));
}

/// Rationals-only target: the constant Pell sequence towards sqrt 2 has no
/// limit and must end in non_convergence, while 1/2^n converges to 0.
inline CheckResult check_incomplete_target() {
  const auto q = make_space(parse_space_name("rational"));
  const auto d = scaled_domain(4, 1.0);
  detail::Tally t;
  bool diverged = false;
  try {
    riesz_fischer_limit(constant_sequence(d, q, 1.0, [](std::size_t n) { return pell_convergent(n); }, "pell"));
  } catch (const Error& e) {
    diverged = e.kind() == ErrorKind::non_convergence;
  }
  bool control = false;
  try {
    const auto [L, rep] = riesz_fischer_limit(constant_sequence(
        d, q, 1.0,
        [](std::size_t n) { return RationalLineSpace::fraction(1, std::int64_t{1} << std::min<std::size_t>(n, 52)); },
        "dyadic"));
    control = rep.certified && L[0] == RationalLineSpace::fraction(0, 1);
  } catch (const Error&) {
  }
  t.m["pell_non_convergence"] = diverged;
  t.m["dyadic_converged"] = control;
  return detail::finish("verify.incomplete_target", "completeness of L^p_h requires a complete N",
                        diverged && control, std::move(t));
}

/// Fast Cauchy sequences of constant maps have constant limits.
inline CheckResult check_constant_closure(std::uint64_t seed) {
  detail::Tally t;
  bool ok = true;
  auto rng = seeded_rng(seed, 0x602);
  for (const auto& s : concrete_spaces()) {
    const auto d = random_domain(6, rng);
    const Point a = s->sample(rng), b = s->sample(rng);
    // Geodesic steps toward b with geometric decay; scaled to stay fast.
    const double D = s->distance(a, b) * std::pow(total_measure(*d), 1.0);
    const double scale = D > 0.25 ? 0.25 / D : 1.0;
    const Point start = s->geodesic_point(b, a, scale);
    auto seq = constant_sequence(
        d, s, 1.0,
        [s, start, b](std::size_t n) { return s->geodesic_point(start, b, 1.0 - std::ldexp(1.0, -static_cast<int>(n))); },
        s->tag());
    try {
      const auto [L, rep] = riesz_fischer_limit(seq);
      bool constant = true;
      for (const auto& v : L.values) constant &= v == L[0];
      ok &= rep.certified && constant && s->distance(L[0], b) < 1e-9;
    } catch (const Error&) {
      ok = false;
      t.add("errors");
    }
  }
  return detail::finish("verify.constant_closure", "constant maps form a closed subset", ok, std::move(t));
}

/// Dense-family probes: quantized fields are reached within eps = 0.05 under
/// the documented budgets, and family-native simple maps at distance exactly 0.
inline CheckResult check_separability(std::size_t fixtures, std::uint64_t seed) {
  detail::Tally t;
  const auto spaces = concrete_spaces();
  auto rng = seeded_rng(seed, 0x603);
  std::size_t hits = 0, exact = 0;
  for (std::size_t i = 0; i < fixtures; ++i) {
    const auto& s = spaces[i % spaces.size()];
    const bool two_d = (i / spaces.size()) % 2 == 1;
    const auto d = two_d ? grid_domain(2, 32) : grid_domain(1, 1024);
    const Exponent p = i % 3 == 2 ? 2.0 : 1.0;
    const auto f = quantized_field(d, s, seed * 7919 + i);
    const auto h = s->dense_sequence(1)[0];
    const auto rep = separability_search(f, h, p, 0.05);
    hits += rep.success;
    t.max("max_generators", static_cast<double>(rep.generator_budget));
    t.max("max_values", static_cast<double>(rep.value_budget));
    t.max("max_distance", rep.distance);

    const auto fam = build_dense_family(d, s, h, 16, 16);
    std::vector<std::pair<std::size_t, std::size_t>> alt;
    std::uniform_int_distribution<std::size_t> uc(0, fam.cells.size() - 1), uv(0, fam.values.size() - 1);
    for (std::size_t c : {uc(rng), uc(rng), uc(rng)})
      if (std::none_of(alt.begin(), alt.end(), [&](auto& x) { return x.first == c; })) alt.emplace_back(c, uv(rng));
    std::sort(alt.begin(), alt.end());
    const auto native = fam.member(alt).to_map();
    const auto nrep = separability_probe(native, fam, p, 0.05);
    exact += nrep.distance == 0.0;
  }
  t.m["fixtures"] = static_cast<double>(fixtures);
  t.m["success_rate"] = fixtures ? static_cast<double>(hits) / static_cast<double>(fixtures) : 0.0;
  t.m["exact_native"] = static_cast<double>(exact);
  const bool ok = hits == fixtures && exact == fixtures;
  return detail::finish("verify.separability", "L^p_h is separable when N is separable", ok, std::move(t));
}

// ---------------------------------------------------------------------------
// Suite

struct SuiteSizes {
  std::size_t metric_triples = 2000;
  std::size_t geodesic_pairs = 200;
  std::size_t measure_cases = 200;
  std::size_t dp_triples = 2000;
  std::size_t dp_atoms = 8;
  std::size_t embed_pairs = 1000;
  std::size_t holder_cases = 1000;
  std::size_t lp_cases = 300;
  std::size_t almost_simple_side = 64;
  std::size_t sup_side = 32;
  std::size_t relax_side_1d = 1024;
  std::size_t relax_side_2d = 256;
  std::size_t rf_sequences = 20;
  std::size_t rf_atoms = 8;
  std::size_t separability_fixtures = 20;
};

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::string suite = "all";  // all, metric, measure, lp, approx, interp, verify
  SuiteSizes sizes;
  bool mutate_metric = false;  // adds a deliberately broken metric; its checks must fail
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n{"all", "metric", "measure", "lp", "approx", "interp", "verify"};
  return n;
}

inline std::vector<CheckResult> run_theorem_suite(const SuiteConfig& cfg) {
  require(std::find(suite_names().begin(), suite_names().end(), cfg.suite) != suite_names().end(),
          ErrorKind::invalid_argument, "unknown suite '" + cfg.suite + "'");
  const auto& z = cfg.sizes;
  const std::uint64_t seed = cfg.seed;
  auto on = [&](const char* name) { return cfg.suite == "all" || cfg.suite == name; };
  std::vector<CheckResult> out;
  auto run = [&](const std::string& id, const std::function<CheckResult()>& fn) {
    try {
      out.push_back(fn());
    } catch (const Error& e) {
      out.push_back({id, "uncaught error", false, {}, std::string(to_string(e.kind())) + ": " + e.what()});
    }
  };
  const auto spaces = concrete_spaces();

  if (on("metric")) {
    for (const auto& s : spaces) {
      run("metric.axioms." + s->tag(), [&] { return check_metric_axioms(s, z.metric_triples, seed); });
      run("metric.geodesic." + s->tag(), [&] { return check_geodesics(s, z.geodesic_pairs, seed); });
      run("metric.dense_sequence." + s->tag(), [&] { return check_dense_sequence(s, seed); });
      run("metric.epsilon_net." + s->tag(), [&] { return check_epsilon_net(s, seed); });
    }
    if (cfg.mutate_metric) {
      const SpaceHandle broken = std::make_shared<BrokenMetric>(spaces[0]);
      run("metric.axioms." + broken->tag(), [&] { return check_metric_axioms(broken, z.metric_triples, seed); });
    }
  }
  if (on("measure")) {
    run("measure.additivity", [&] { return check_measure_additivity(z.measure_cases, seed); });
    run("measure.regularity", [&] { return check_regularity(z.measure_cases, seed); });
    run("measure.urysohn", [&] { return check_urysohn(z.measure_cases / 4 + 1, seed); });
  }
  if (on("lp")) {
    for (const auto& s : spaces) {
      run("lp.dp_axioms." + s->tag(), [&] { return check_dp_axioms(s, z.dp_triples, z.dp_atoms, seed); });
      run("lp.constant_embedding." + s->tag(), [&] { return check_constant_embedding(s, z.embed_pairs, seed); });
    }
    run("lp.holder_inclusion", [&] { return check_holder(z.holder_cases, seed); });
    run("lp.base_invariance", [&] { return check_base_invariance(z.holder_cases, seed); });
    run("lp.lipschitz", [&] { return check_lipschitz(z.lp_cases, seed); });
    run("lp.triviality", [&] { return check_triviality(seed); });
    run("lp.differing_support", [&] { return check_differing_support(z.lp_cases, seed); });
  }
  if (on("approx")) {
    for (const auto& s : spaces) run("approx.quantize." + s->tag(), [&] { return check_quantize(s, seed); });
    for (const char* name : {"spd2", "simplex3"}) {
      const auto s = make_space(parse_space_name(name));
      run("approx.almost_simple." + s->tag(), [&] { return check_almost_simple(s, z.almost_simple_side, seed); });
      run("approx.almost_simple_halving." + s->tag(),
          [&] { return check_almost_simple_halving(s, z.almost_simple_side, seed); });
    }
    for (const char* name : {"circle", "r2"}) {
      const auto s = make_space(parse_space_name(name));
      run("approx.sup_density." + s->tag(), [&] { return check_sup_density(s, z.sup_side, seed); });
    }
    const auto hist = make_space(parse_space_name("hist8"));
    run("approx.sup_refusal." + hist->tag(), [&] { return check_sup_refusal(hist, seed); });
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{2, 1}, {4, 3}, {8, 7}})
      run("approx.hilbert", [&] { return check_hilbert(n, k); });
    run("approx.divergence.unbounded_base_p",
        [&] { return check_divergence(DivergenceKind::unbounded_base_p, {4, 5, 6, 7, 8, 9, 10}, 2.0); });
    run("approx.divergence.exponential_base",
        [&] { return check_divergence(DivergenceKind::exponential_base, {1, 2, 3, 4, 5}, 1.0); });
  }
  if (on("interp")) {
    run("interp.continuous", [&] { return check_relaxation(0, z.relax_side_1d, z.relax_side_2d, seed); });
    run("interp.smooth_order2", [&] { return check_relaxation(2, z.relax_side_1d, z.relax_side_2d, seed); });
    run("interp.refinement", [&] { return check_relaxation_refinement(seed); });
  }
  if (on("verify")) {
    for (const auto& s : spaces)
      run("verify.riesz_fischer." + s->tag(), [&] { return check_riesz_fischer(s, z.rf_sequences, z.rf_atoms, seed); });
    run("verify.incomplete_target", [&] { return check_incomplete_target(); });
    run("verify.constant_closure", [&] { return check_constant_closure(seed); });
    run("verify.separability", [&] { return check_separability(z.separability_fixtures, seed); });
  }
  std::sort(out.begin(), out.end(), [](const CheckResult& a, const CheckResult& b) { return a.check_id < b.check_id; });
  return out;
}

inline bool all_passed(const std::vector<CheckResult>& ledger) {
  return !ledger.empty() &&
         std::all_of(ledger.begin(), ledger.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace lph
