#pragma once

// Continuous and smooth relaxation of simple maps on grid domains: every level
// set gets a closed core and an open neighbourhood, an Urysohn transition
// between them, and values along the geodesic from the background value z0.
// The smooth variant composes the transitions with a polynomial smoothstep.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lph/approximation.hpp"

namespace lph {

inline constexpr int kMaxSmoothOrder = 5;

/// Polynomial of degree 2 order + 1 with S(0) = 0, S(1) = 1 and derivatives
/// 1..order vanishing at both ends. Order 0 is the identity.
inline double smoothstep(double t, int order) {
  require(order >= 0 && order <= kMaxSmoothOrder, ErrorKind::invalid_argument,
          "smoothstep order must lie in [0, 5]");
  t = std::clamp(t, 0.0, 1.0);
  if (order == 0 || t == 0.0 || t == 1.0) return t;
  // S_N(t) = t^{N+1} sum_{k=0}^{N} C(N+k, k) C(2N+1, N-k) (-t)^k
  auto binom = [](int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  const int n = order;
  double s = 0, tk = 1;
  for (int k = 0; k <= n; ++k) {
    s += binom(n + k, k) * binom(2 * n + 1, n - k) * tk;
    tk *= -t;
  }
  return std::clamp(std::pow(t, n + 1) * s, 0.0, 1.0);
}

/// max_t S'(t), reached at t = 1/2.
inline double smoothstep_max_slope(int order) {
  if (order == 0) return 1.0;
  // S'(t) = C t^N (1-t)^N with C = (2N+1)! / (N!)^2.
  double c = 1;
  for (int i = order + 1; i <= 2 * order + 1; ++i) c *= i;
  for (int i = 1; i <= order; ++i) c /= i;
  return c * std::pow(0.25, order);
}

struct FieldPiece {
  AtomSet region;  // U_i
  AtomSet core;    // C_i
  Point endpoint;  // y_i
  std::vector<double> transition;  // I_i (or S(I_i)) on every atom; 0 outside U_i
  double width = 0;                // w_i = gap between C_i and the complement of U_i
  double length = 0;               // L_i = d(z0, y_i)
  bool inner_over_budget = false;
  bool outer_over_budget = false;
};

struct ContinuousField {
  DomainHandle domain;
  SpaceHandle space;
  Point anchor;  // z0
  std::vector<FieldPiece> pieces;
  std::vector<Point> values;  // evaluation cache
  int order = 0;

  MeasurableMap to_map() const { return MeasurableMap(domain, space, values); }
};

namespace detail {

// Face-neighbour pairs (a, b) with a < b.
inline std::vector<std::pair<std::size_t, std::size_t>> grid_edges(const GridGeometry& g) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  const std::size_t s = g.side(), n = g.cell_count();
  std::size_t stride = 1;
  for (std::size_t axis = 0; axis < g.dim; ++axis) {
    for (std::size_t a = 0; a < n; ++a)
      if ((a / stride) % s + 1 < s) e.emplace_back(a, a + stride);
    stride *= s;
  }
  return e;
}

// True when some cell of `a` is a Chebyshev neighbour of (or equal to) a cell of `b`.
inline bool touching(const Domain& d, const AtomSet& a, const AtomSet& b) {
  if (a.empty() || b.empty()) return false;
  const auto grown = morph(*d.geometry(), a.mask(d.atom_count()), 1, false);
  for (auto x : b)
    if (grown[x]) return true;
  return false;
}

}  // namespace detail

struct RelaxOptions {
  std::optional<Point> z0;  // background value when g has no constant base
  int order = 0;            // 0: continuous; >= 1: smoothstep of that order
};

/// Background value of g: the explicit z0, else the constant value of its base map.
inline Point relaxation_anchor(const SimpleMap& g, const std::optional<Point>& z0) {
  if (z0) {
    g.space->validate(*z0);
    return *z0;
  }
  require(g.base != nullptr && g.base->size() > 0, ErrorKind::invalid_argument,
          "relaxation needs z0 or a constant base map");
  const Point& c = (*g.base)[0];
  for (const auto& v : g.base->values)
    require(v == c, ErrorKind::invalid_argument, "relaxation needs a constant base map");
  return c;
}

/// Continuous (order 0) or smooth (order >= 1) relaxation of a simple map whose
/// background is the constant z0. Level sets are the labels with value != z0.
inline std::pair<ContinuousField, ApproxReport> relax_simple(const SimpleMap& g, Exponent p, double eps,
                                                             const RelaxOptions& opt = {}) {
  require(eps > 0.0 && std::isfinite(eps), ErrorKind::invalid_argument, "relaxation needs eps > 0");
  require(!p.is_infinite(), ErrorKind::invalid_argument, "relaxation needs finite p");
  p.check();
  g.validate();
  const Domain& dom = *g.domain;
  const GridGeometry& geo = dom.require_geometry();
  require(g.space->capabilities().geodesic, ErrorKind::capability_absent,
          g.space->tag() + ": relaxation needs geodesic paths");
  require(opt.order >= 0 && opt.order <= kMaxSmoothOrder, ErrorKind::invalid_argument,
          "smoothing order must lie in [0, 5]");
  const MetricSpace& N = *g.space;
  const double pv = p.value();
  const Point z0 = relaxation_anchor(g, opt.z0);
  const std::size_t n = dom.atom_count();

  // Level sets B_i, in value-table order.
  std::vector<std::vector<std::size_t>> level(g.values.size());
  for (std::size_t a = 0; a < n; ++a)
    if (!g.is_base(a)) level[static_cast<std::size_t>(g.labels[a])].push_back(a);
  std::vector<std::pair<AtomSet, Point>> sets;
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (!level[i].empty() && g.values[i] != z0) sets.emplace_back(AtomSet(std::move(level[i])), g.values[i]);

  ContinuousField field{g.domain, g.space, z0, {}, std::vector<Point>(n, z0), opt.order};
  ApproxReport rep;
  rep.target_eps = eps;
  rep.p = p;
  const double count = static_cast<double>(sets.size());
  rep.stats["pieces"] = count;
  if (sets.empty()) {
    rep.achieved_error = dp_distance(g.to_map(), field.to_map(), p);
    rep.success = rep.achieved_error < eps;
    rep.stats["modulus_ok"] = 1;
    rep.stats["range_ok"] = 1;
    return {std::move(field), std::move(rep)};
  }

  double R0 = 0;
  for (const auto& [b, y] : sets) R0 = std::max(R0, N.distance(z0, y));
  const double delta = std::pow(eps / (2.0 * std::pow(count, 1.0 / pv) * R0), pv);
  rep.stats["R0"] = R0;
  rep.stats["delta"] = delta;

  // Cores and raw neighbourhoods.
  std::size_t inner_flags = 0, outer_flags = 0;
  for (const auto& [b, y] : sets) {
    FieldPiece piece;
    const auto inner = inner_closed_approx(dom, b, delta);
    piece.core = inner.set;
    piece.inner_over_budget = inner.over_budget;
    const auto outer = outer_open_approx(dom, piece.core, delta);
    piece.region = outer.set;
    piece.outer_over_budget = outer.over_budget;
    piece.endpoint = y;
    piece.length = N.distance(z0, y);
    inner_flags += inner.over_budget;
    outer_flags += outer.over_budget;
    field.pieces.push_back(std::move(piece));
  }
  rep.stats["inner_over_budget"] = static_cast<double>(inner_flags);
  rep.stats["outer_over_budget"] = static_cast<double>(outer_flags);

  // Cores must be separated by at least one cell for the regions to be disjoint.
  for (std::size_t i = 0; i < field.pieces.size(); ++i)
    for (std::size_t j = i + 1; j < field.pieces.size(); ++j)
      if (detail::touching(dom, field.pieces[i].core, field.pieces[j].core)) {
        // Erosion gaps shrink like the cell size; find the refinement at which
        // both level sets admit a budgeted core.
        const double gi = measure(dom, sets[i].first) - measure(dom, inner_closed_approx(dom, sets[i].first, kInf).set);
        const double gj = measure(dom, sets[j].first) - measure(dom, inner_closed_approx(dom, sets[j].first, kInf).set);
        std::size_t side = geo.side();
        double gap = std::max(gi, gj);
        while (!(gap < delta) && side < (std::size_t{1} << 30)) {
          side *= 2;
          gap /= 2;
        }
        fail(ErrorKind::infeasible, "level sets " + std::to_string(i) + " and " + std::to_string(j) +
                                        " collide at " + std::to_string(geo.side()) +
                                        " cells per axis; minimal separating resolution is " +
                                        std::to_string(side) + " cells per axis");
      }

  // Priority disjointification: cores are protected, contested cells go to
  // the lowest index.
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < field.pieces.size(); ++i)
    for (auto a : field.pieces[i].core) owner[a] = static_cast<int>(i);
  for (std::size_t i = 0; i < field.pieces.size(); ++i)
    for (auto a : field.pieces[i].region)
      if (owner[a] == -1) owner[a] = static_cast<int>(i);
  for (std::size_t i = 0; i < field.pieces.size(); ++i) {
    std::vector<std::size_t> mine;
    for (auto a : field.pieces[i].region)
      if (owner[a] == static_cast<int>(i)) mine.push_back(a);
    field.pieces[i].region = AtomSet(std::move(mine));
  }

  // Transitions and evaluation.
  double max_slope = smoothstep_max_slope(opt.order);
  double ring_error_bound = 0;
  for (auto& piece : field.pieces) {
    auto I = urysohn(dom, piece.core, piece.region);
    piece.width = set_gap(dom, piece.core, dom.all().minus(piece.region));
    if (opt.order > 0)
      for (auto& v : I) v = smoothstep(v, opt.order);
    for (auto a : piece.region) field.values[a] = N.geodesic_point(z0, piece.endpoint, I[a]);
    piece.transition = std::move(I);
    ring_error_bound += measure(dom, sets[&piece - field.pieces.data()].first.minus(piece.core)) *
                        std::pow(piece.length, pv);
  }
  rep.stats["max_slope"] = max_slope;

  const auto gm = g.to_map();
  const auto fm = field.to_map();
  rep.achieved_error = dp_distance(gm, fm, p);
  rep.range_size = field.pieces.size() + 1;
  rep.altered_measure = 0;
  for (std::size_t a = 0; a < n; ++a)
    if (gm[a] != fm[a]) rep.altered_measure += dom.weight(a);
  rep.step_breakdown = {std::pow(ring_error_bound, 1.0 / pv)};
  rep.success = rep.achieved_error < eps;
  return {std::move(field), std::move(rep)};
}

inline std::pair<ContinuousField, ApproxReport> continuous_from_simple(
    const SimpleMap& g, Exponent p, double eps, std::optional<Point> z0 = std::nullopt) {
  return relax_simple(g, p, eps, RelaxOptions{std::move(z0), 0});
}

/// Smooth relaxation. Besides the D_p budget, checks the sup distance between
/// the smoothed and raw transitions against the per-piece budget
/// eps / (3 L_i (|I| mu(U_i \ C_i))^{1/p}).
inline std::pair<ContinuousField, ApproxReport> smooth_from_simple(
    const SimpleMap& g, Exponent p, double eps, int order, std::optional<Point> z0 = std::nullopt) {
  auto [field, rep] = relax_simple(g, p, eps, RelaxOptions{z0, order});
  if (order == 0) return {std::move(field), std::move(rep)};
  auto [raw, raw_rep] = relax_simple(g, p, eps, RelaxOptions{z0, 0});
  const double pv = p.value();
  const double count = static_cast<double>(field.pieces.size());
  bool within = true;
  double worst_ratio = 0;
  for (std::size_t i = 0; i < field.pieces.size(); ++i) {
    const auto& sm = field.pieces[i];
    const double ring = measure(*field.domain, sm.region.minus(sm.core));
    const double budget = ring > 0.0 && sm.length > 0.0
                              ? eps / (3.0 * sm.length * std::pow(count * ring, 1.0 / pv))
                              : kInf;
    double gap = 0;
    for (auto a : sm.region) gap = std::max(gap, std::abs(sm.transition[a] - raw.pieces[i].transition[a]));
    within &= gap <= budget;
    if (std::isfinite(budget)) worst_ratio = std::max(worst_ratio, gap / budget);
  }
  rep.stats["smoothing_within_budget"] = within;
  rep.stats["smoothing_budget_ratio"] = worst_ratio;
  rep.success = rep.success && within;
  return {std::move(field), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Checks on a relaxed field.

/// Largest violation ratio of the adjacent-cell modulus bound
/// d(val(x), val(x')) <= slope * h * (sum of L_i / w_i over pieces containing x or x').
/// Values <= 1 mean the bound holds.
inline double modulus_ratio(const ContinuousField& f) {
  const auto& geo = f.domain->require_geometry();
  const double h = geo.cell_size;
  const double slope = smoothstep_max_slope(f.order);
  std::vector<int> owner(f.values.size(), -1);
  for (std::size_t i = 0; i < f.pieces.size(); ++i)
    for (auto a : f.pieces[i].region) owner[a] = static_cast<int>(i);
  auto piece_bound = [&](int i) {
    if (i < 0) return 0.0;
    const auto& pc = f.pieces[static_cast<std::size_t>(i)];
    return std::isinf(pc.width) ? 0.0 : slope * pc.length * h / pc.width;
  };
  double worst = 0;
  for (auto [a, b] : detail::grid_edges(geo)) {
    const double d = f.space->distance(f.values[a], f.values[b]);
    if (d == 0.0) continue;
    double bound = owner[a] == owner[b] ? piece_bound(owner[a]) : piece_bound(owner[a]) + piece_bound(owner[b]);
    bound = bound * (1 + 1e-9) + 1e-12;
    worst = std::max(worst, d / bound);
  }
  return worst;
}

/// Every value lies on the geodesic from z0 to the endpoint of its piece:
/// max over atoms of d(z0, v) + d(v, y_i) - d(z0, y_i).
inline double range_defect(const ContinuousField& f) {
  double worst = 0;
  for (const auto& pc : f.pieces)
    for (auto a : pc.region) {
      const auto& v = f.values[a];
      worst = std::max(worst, f.space->distance(f.anchor, v) + f.space->distance(v, pc.endpoint) - pc.length);
    }
  return worst;
}

/// Exactness at the ends of the transitions: z0 outside the regions, y_i on
/// the cores, bit for bit.
inline bool endpoints_exact(const ContinuousField& f) {
  std::vector<bool> inside(f.values.size(), false);
  for (const auto& pc : f.pieces) {
    for (auto a : pc.region) inside[a] = true;
    for (auto a : pc.core)
      if (f.values[a] != pc.endpoint) return false;
  }
  for (std::size_t a = 0; a < f.values.size(); ++a)
    if (!inside[a] && f.values[a] != f.anchor) return false;
  return true;
}

/// First and second one-sided differences of the transition profile
/// S(t) sampled at step h, at both ends of [0, 1].
struct BoundaryDifferences {
  double first = 0;
  double second = 0;
};

inline BoundaryDifferences boundary_differences(int order, double h) {
  auto S = [&](double t) { return smoothstep(t, order); };
  BoundaryDifferences d;
  d.first = std::max(std::abs(S(h) - S(0)), std::abs(S(1) - S(1 - h)));
  d.second = std::max(std::abs(S(2 * h) - 2 * S(h) + S(0)), std::abs(S(1) - 2 * S(1 - h) + S(1 - 2 * h)));
  return d;
}

}  // namespace lph
