#pragma once

// Simple and almost simple approximation: first-cover quantization, the
// three-step almost simple construction, sup-norm quantization through
// epsilon nets, and the two families of counterexample fixtures.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lph/lp_space.hpp"

namespace lph {

inline constexpr std::size_t kStepSearchCap = 1'000'000;

/// Finite partition of the atoms plus a value table. Atoms labeled
/// `base_flag` take the base mapping's value.
struct SimpleMap {
  DomainHandle domain;
  SpaceHandle space;
  std::vector<std::int64_t> labels;
  std::vector<Point> values;
  std::optional<std::int64_t> base_flag;
  std::shared_ptr<const MeasurableMap> base;  // required iff base_flag is used

  void validate() const {
    require(domain && space, ErrorKind::invalid_argument, "simple map needs a domain and a space");
    require(labels.size() == domain->atom_count(), ErrorKind::dimension_mismatch,
            "simple map label count != atom count");
    for (const auto& v : values) space->validate(v);
    const auto n = static_cast<std::int64_t>(values.size());
    for (auto l : labels) {
      if (base_flag && l == *base_flag) {
        require(base != nullptr, ErrorKind::invalid_argument, "base-labeled atoms need a base map");
        continue;
      }
      require(l >= 0 && l < n, ErrorKind::invalid_argument, "simple map label out of range");
    }
  }

  bool is_base(std::size_t a) const { return base_flag && labels[a] == *base_flag; }

  MeasurableMap to_map() const {
    validate();
    std::vector<Point> v;
    v.reserve(labels.size());
    for (std::size_t a = 0; a < labels.size(); ++a)
      v.push_back(is_base(a) ? (*base)[a] : values[static_cast<std::size_t>(labels[a])]);
    return MeasurableMap(domain, space, std::move(v));
  }

  /// Atoms not labeled base.
  AtomSet non_base() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < labels.size(); ++a)
      if (!is_base(a)) out.push_back(a);
    return AtomSet(std::move(out));
  }
};

struct ApproxReport {
  double target_eps = 0;
  ExtendedReal achieved_error = 0;
  Exponent p = Exponent::infinity();
  std::size_t range_size = 0;
  double altered_measure = 0;
  std::vector<double> step_breakdown;
  bool success = false;
  std::map<std::string, double> stats;
};

namespace detail {

// Keeps only the value-table entries some atom uses (table order preserved)
// and normalizes the base label to -1.
inline void compact_values(SimpleMap& g) {
  for (std::size_t a = 0; a < g.labels.size(); ++a)
    if (g.is_base(a)) g.labels[a] = -1;
  if (g.base_flag) g.base_flag = -1;
  std::vector<std::int64_t> remap(g.values.size(), -1);
  std::vector<bool> used(g.values.size(), false);
  for (auto l : g.labels)
    if (l >= 0) used[static_cast<std::size_t>(l)] = true;
  std::vector<Point> kept;
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (used[i]) {
      remap[i] = static_cast<std::int64_t>(kept.size());
      kept.push_back(g.values[i]);
    }
  for (auto& l : g.labels)
    if (l >= 0) l = remap[static_cast<std::size_t>(l)];
  g.values = std::move(kept);
}

// Distinct values of f over `atoms`, in atom order.
inline std::vector<Point> distinct_values(const MeasurableMap& f, const AtomSet& atoms) {
  std::vector<Point> out;
  std::map<Point, std::size_t> seen;
  for (auto a : atoms)
    if (seen.emplace(f[a], out.size()).second) out.push_back(f[a]);
  return out;
}

// First-cover queries over a fixed list: the first index k with
// d(list[k], y) < radius. Pivot distances give the lower bound
// |d(list[k], q) - d(y, q)| <= d(list[k], y), which skips most entries without
// changing the answer.
class FirstCoverIndex {
 public:
  FirstCoverIndex(const MetricSpace& s, const std::vector<Point>& list, std::size_t pivots = 3)
      : space_(s), list_(list) {
    if (list.size() < 64) return;
    std::vector<double> nearest(list.size(), kInf);
    std::size_t next = 0;
    for (std::size_t p = 0; p < pivots; ++p) {
      pivots_.push_back(list[next]);
      keys_.emplace_back(list.size());
      for (std::size_t k = 0; k < list.size(); ++k) {
        keys_.back()[k] = s.distance(list[k], list[next]);
        nearest[k] = std::min(nearest[k], keys_.back()[k]);
      }
      next = static_cast<std::size_t>(std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
    }
  }

  std::size_t query(const Point& y, double radius) const {
    std::vector<double> qk(pivots_.size());
    for (std::size_t p = 0; p < pivots_.size(); ++p) qk[p] = space_.distance(y, pivots_[p]);
    const double margin = radius * (1.0 + 1e-9) + 1e-12;
    for (std::size_t k = 0; k < list_.size(); ++k) {
      bool skip = false;
      for (std::size_t p = 0; p < pivots_.size() && !skip; ++p) skip = std::abs(keys_[p][k] - qk[p]) > margin;
      if (!skip && space_.distance(list_[k], y) < radius) return k;
    }
    return list_.size();
  }

 private:
  const MetricSpace& space_;
  const std::vector<Point>& list_;
  std::vector<Point> pivots_;
  std::vector<std::vector<double>> keys_;
};

inline std::size_t first_cover(const MetricSpace& s, const std::vector<Point>& list, const Point& y,
                               double radius) {
  return FirstCoverIndex(s, list, 0).query(y, radius);
}

inline double finite_measure_of(const Domain& d, const AtomSet& s) {
  const double m = measure(d, s);
  require(std::isfinite(m), ErrorKind::invalid_argument, "set has infinite measure");
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct QuantizeOptions {
  /// Countably-valued L^p mode: dyadic atom blocks M_n = [2^n - 1, 2^{n+1} - 1)
  /// each quantized in sup norm with budget eps / (2^{n+1} mu(M_n))^{1/p}.
  bool sigma_finite = false;
  Exponent p = Exponent::infinity();
};

/// First-cover quantization: the dense list is f's distinct values in atom
/// order, each atom takes the first list point strictly within eps.
/// D_inf(f, result) < eps (sup mode), D_p(f, result) < eps (sigma-finite mode).
inline std::pair<SimpleMap, ApproxReport> countable_quantize(const MeasurableMap& f, double eps,
                                                             const QuantizeOptions& opt = {}) {
  require(eps > 0.0 && std::isfinite(eps), ErrorKind::invalid_argument, "quantize needs eps > 0");
  SimpleMap g{f.domain, f.space, std::vector<std::int64_t>(f.size(), 0), {}, std::nullopt, nullptr};
  ApproxReport rep;
  rep.target_eps = eps;

  auto quantize_block = [&](const AtomSet& block, double radius) {
    const auto list = detail::distinct_values(f, block);
    const detail::FirstCoverIndex index(*f.space, list);
    const auto offset = static_cast<std::int64_t>(g.values.size());
    for (auto a : block) {
      const auto k = index.query(f[a], radius);
      g.labels[a] = offset + static_cast<std::int64_t>(k);
    }
    g.values.insert(g.values.end(), list.begin(), list.end());
  };

  if (!opt.sigma_finite) {
    quantize_block(f.domain->all(), eps);
    rep.p = Exponent::infinity();
  } else {
    require(!opt.p.is_infinite(), ErrorKind::invalid_argument, "sigma-finite mode needs finite p");
    opt.p.check();
    const double p = opt.p.value();
    std::size_t blocks = 0;
    for (std::size_t n = 0, lo = 0; lo < f.size(); ++n, lo = 2 * lo + 1) {
      const AtomSet block = AtomSet::range(lo, std::min(f.size(), 2 * lo + 1));
      const double mu = detail::finite_measure_of(*f.domain, block);
      const double budget = mu > 0.0 ? eps / std::pow(std::ldexp(mu, static_cast<int>(n) + 1), 1.0 / p) : kInf;
      quantize_block(block, budget);
      ++blocks;
    }
    rep.p = opt.p;
    rep.stats["blocks"] = static_cast<double>(blocks);
  }

  detail::compact_values(g);
  const auto gm = g.to_map();
  rep.achieved_error = dp_distance(f, gm, rep.p);
  rep.range_size = g.values.size();
  rep.altered_measure = 0;
  for (std::size_t a = 0; a < f.size(); ++a)
    if (f[a] != gm[a]) rep.altered_measure += f.domain->weight(a);
  rep.success = rep.achieved_error < eps;
  return {std::move(g), std::move(rep)};
}

// ---------------------------------------------------------------------------

/// Three-step almost simple approximation of f in L^p_h:
///  1. revert atoms with d(f, h) < 1/n0 to h (smallest n0 with error < eps/3);
///  2. on the altered set A, keep the first n1 covering balls of radius
///     R = eps / (3 mu(A)^{1/p}) (smallest n1 with error < eps/3);
///  3. replace f by the ball centers there.
/// Each step contributes < eps/3 to D_p(f, result).
inline std::pair<SimpleMap, ApproxReport> almost_simple_approx(const MeasurableMap& f,
                                                               const MeasurableMap& h, Exponent p,
                                                               double eps) {
  require(eps > 0.0 && std::isfinite(eps), ErrorKind::invalid_argument, "almost_simple needs eps > 0");
  require(!p.is_infinite(), ErrorKind::invalid_argument, "almost_simple needs finite p");
  p.check();
  require(is_member(f, h, p), ErrorKind::membership_violated, "f is not in L^p_h");
  const double pv = p.value();
  const double third = eps / 3.0;
  const auto& w = f.domain->weights();
  auto hp = std::make_shared<const MeasurableMap>(h);

  // Step 1: deviations sorted ascending with prefix sums of w d^p.
  std::vector<std::pair<double, std::size_t>> dev;
  for (std::size_t a = 0; a < f.size(); ++a)
    if (w[a] > 0.0) dev.emplace_back(f.space->distance(f[a], h[a]), a);
  std::sort(dev.begin(), dev.end());
  std::vector<double> prefix(dev.size() + 1, 0.0);
  for (std::size_t i = 0; i < dev.size(); ++i)
    prefix[i + 1] = prefix[i] + w[dev[i].second] * std::pow(dev[i].first, pv);
  auto reverted_count = [&](std::size_t n) {
    const double thr = 1.0 / static_cast<double>(n);
    return static_cast<std::size_t>(
        std::lower_bound(dev.begin(), dev.end(), std::pair<double, std::size_t>{thr, 0}) - dev.begin());
  };
  std::size_t n0 = 1;
  for (;; ++n0) {
    require(n0 <= kStepSearchCap, ErrorKind::budget_exceeded, "step 1 search hit its cap");
    if (std::pow(prefix[reverted_count(n0)], 1.0 / pv) < third) break;
  }
  const std::size_t cut = reverted_count(n0);
  std::vector<std::size_t> altered;
  for (std::size_t i = cut; i < dev.size(); ++i)
    if (dev[i].first > 0.0) altered.push_back(dev[i].second);
  const AtomSet A(std::move(altered));

  std::vector<Point> f0v = h.values;
  for (auto a : A) f0v[a] = f[a];
  const MeasurableMap f0(f.domain, f.space, std::move(f0v));
  const double e1 = dp_distance(f0, f, p);

  SimpleMap g{f.domain, f.space, std::vector<std::int64_t>(f.size(), -1), {}, std::int64_t{-1}, hp};
  ApproxReport rep;
  rep.target_eps = eps;
  rep.p = p;
  rep.stats["n0"] = static_cast<double>(n0);

  const double muA = detail::finite_measure_of(*f.domain, A);
  if (muA == 0.0) {
    rep.achieved_error = dp_distance(f, g.to_map(), p);
    rep.step_breakdown = {e1, 0.0, 0.0};
    rep.range_size = 0;
    rep.success = rep.achieved_error < eps;
    rep.stats["n1"] = 0;
    return {std::move(g), std::move(rep)};
  }

  // Step 2: first-cover index k(x) over f's distinct values on A.
  const double R = third / std::pow(muA, 1.0 / pv);
  const auto list = detail::distinct_values(f, A);
  std::vector<std::size_t> k(f.size(), 0);
  std::vector<double> tail_mass(list.size() + 1, 0.0);  // mass of atoms with k(x) == idx
  const detail::FirstCoverIndex index(*f.space, list);
  for (auto a : A) {
    k[a] = index.query(f[a], R);
    tail_mass[k[a]] += w[a] * std::pow(f.space->distance(f[a], h[a]), pv);
  }
  // Error of g_n (f0 on atoms with k < n, h elsewhere) against f0.
  std::size_t n1 = 0;
  {
    std::vector<double> suffix(list.size() + 2, 0.0);
    for (std::size_t i = list.size() + 1; i-- > 0;)
      suffix[i] = suffix[i + 1] + (i < tail_mass.size() ? tail_mass[i] : 0.0);
    while (!(std::pow(suffix[n1], 1.0 / pv) < third)) {
      ++n1;
      require(n1 <= std::min(list.size(), kStepSearchCap), ErrorKind::budget_exceeded,
              "step 2 search hit its cap");
    }
  }
  std::vector<Point> gnv = h.values;
  for (auto a : A)
    if (k[a] < n1) gnv[a] = f[a];
  const MeasurableMap gn(f.domain, f.space, std::move(gnv));
  const double e2 = dp_distance(gn, f0, p);

  // Step 3: chi assigns the ball center list[k(x)].
  g.values = list;
  for (auto a : A)
    if (k[a] < n1) g.labels[a] = static_cast<std::int64_t>(k[a]);
  detail::compact_values(g);
  const auto gm = g.to_map();
  const double e3 = dp_distance(gm, gn, p);

  rep.achieved_error = dp_distance(f, gm, p);
  rep.step_breakdown = {e1, e2, e3};
  rep.range_size = g.values.size();
  rep.altered_measure = measure(*f.domain, g.non_base());
  rep.success = rep.achieved_error < eps && e1 < third && e2 < third && e3 < third;
  rep.stats["n1"] = static_cast<double>(n1);
  rep.stats["radius"] = R;
  rep.stats["list_size"] = static_cast<double>(list.size());
  return {std::move(g), std::move(rep)};
}

// ---------------------------------------------------------------------------

/// Sup-norm simple approximation through an eps-net of a ball containing f's
/// essential range. Needs a boundedly compact target (epsilon_net capability).
inline std::pair<SimpleMap, ApproxReport> simple_approx_sup(const MeasurableMap& f,
                                                            const MeasurableMap& h, double eps) {
  require(eps > 0.0 && std::isfinite(eps), ErrorKind::invalid_argument, "simple_approx_sup needs eps > 0");
  check_compatible(f, h);
  require(f.space->capabilities().epsilon_net, ErrorKind::capability_absent,
          f.space->tag() + ": target is not boundedly compact (no epsilon nets)");
  require(is_member(f, h, Exponent::infinity()), ErrorKind::membership_violated, "f is not in L^inf_h");
  const auto& w = f.domain->weights();

  std::optional<std::size_t> first;
  for (std::size_t a = 0; a < f.size() && !first; ++a)
    if (w[a] > 0.0) first = a;
  SimpleMap g{f.domain, f.space, std::vector<std::int64_t>(f.size(), 0), {}, std::nullopt, nullptr};
  ApproxReport rep;
  rep.target_eps = eps;
  rep.p = Exponent::infinity();
  if (!first) {  // null domain: any single value is exact
    if (f.size() > 0) g.values = {f[0]};
    rep.range_size = g.values.size();
    rep.success = true;
    return {std::move(g), std::move(rep)};
  }

  const Point center = f[*first];
  double radius = 0;
  for (std::size_t a = 0; a < f.size(); ++a)
    if (w[a] > 0.0) radius = std::max(radius, f.space->distance(center, f[a]));
  auto net = f.space->epsilon_net(center, radius, eps);
  const std::size_t net_size = net.size();

  std::size_t repairs = 0;
  for (std::size_t a = 0; a < f.size(); ++a) {
    auto k = detail::first_cover(*f.space, net, f[a], eps);
    if (k == net.size()) {
      if (w[a] > 0.0) ++repairs;
      net.push_back(f[a]);
    }
    g.labels[a] = static_cast<std::int64_t>(k);
  }
  g.values = std::move(net);
  detail::compact_values(g);
  const auto gm = g.to_map();
  rep.achieved_error = dp_distance(f, gm, rep.p);
  rep.range_size = g.values.size();
  rep.success = rep.achieved_error < eps;
  rep.stats["net_size"] = static_cast<double>(net_size);
  rep.stats["ball_radius"] = radius;
  rep.stats["net_repairs"] = static_cast<double>(repairs);
  return {std::move(g), std::move(rep)};
}

// ---------------------------------------------------------------------------

/// Piecewise orthonormal map: interval i (i + 1 unit atoms, i < n) carries
/// e_i in R^dim, so the first n intervals use n(n+1)/2 atoms.
inline MeasurableMap hilbert_fixture(std::size_t n, std::size_t dim) {
  require(n >= 1 && dim >= n, ErrorKind::invalid_argument, "hilbert fixture needs 1 <= n <= dim");
  const std::size_t atoms = n * (n + 1) / 2;
  auto d = std::make_shared<const Domain>(std::vector<double>(atoms, 1.0));
  auto s = std::make_shared<const EuclideanSpace>(dim);
  std::vector<Point> v;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      std::vector<double> e(dim, 0.0);
      e[i] = 1.0;
      v.emplace_back(std::move(e));
    }
  return MeasurableMap(d, s, std::move(v));
}

/// Radius of the smallest ball containing `pts` (Euclidean), by checking the
/// circumcenter of every subset. Exact up to round-off; fine for <= ~12 points.
inline double min_enclosing_radius(const std::vector<Eigen::VectorXd>& pts) {
  const std::size_t m = pts.size();
  if (m <= 1) return 0.0;
  double best = kInf;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) sub.push_back(i);
    // Circumcenter c = p0 + sum_j a_j (p_j - p0) with |c - p_j| = |c - p0|.
    const auto& p0 = pts[sub[0]];
    Eigen::VectorXd c = p0;
    if (sub.size() > 1) {
      const auto q = static_cast<Eigen::Index>(sub.size() - 1);
      Eigen::MatrixXd D(p0.size(), q);
      for (Eigen::Index j = 0; j < q; ++j) D.col(j) = pts[sub[static_cast<std::size_t>(j) + 1]] - p0;
      const Eigen::MatrixXd G = D.transpose() * D;
      const Eigen::VectorXd rhs = 0.5 * G.diagonal();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
      if (lu.rank() < q) continue;
      c = p0 + D * lu.solve(rhs);
    }
    double r = 0;
    for (auto i : sub) r = std::max(r, (pts[i] - c).norm());
    bool encloses = true;
    for (std::size_t i = 0; i < m && encloses; ++i) encloses = (pts[i] - c).norm() <= r * (1 + 1e-12) + 1e-15;
    if (encloses) best = std::min(best, r);
  }
  return best;
}

struct HilbertReport {
  std::size_t n = 0, k = 0, dim = 0;
  double min_max_error = 0;          // best D_inf over all k-valued simple maps
  double pigeonhole_bound = 0;       // sqrt(2)/2
  std::size_t partitions_checked = 0;
  bool certified = false;            // min_max_error > 1/2
  bool agrees_with_pigeonhole = false;
};

/// Best sup-error of a simple map with at most k values against the orthonormal
/// fixture, by exhaustive search over set partitions of the n basis vectors
/// into at most k blocks (each block served by its minimal enclosing ball center).
inline HilbertReport hilbert_counterexample(std::size_t n, std::size_t k, std::size_t dim) {
  require(n >= 2 && k >= 1 && k < n && dim >= n, ErrorKind::invalid_argument,
          "hilbert counterexample needs n >= 2, 1 <= k < n, dim >= n");
  require(n <= 12, ErrorKind::budget_exceeded, "partition search limited to n <= 12");
  const auto f = hilbert_fixture(n, dim);
  std::vector<Eigen::VectorXd> basis;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = f[i * (i + 1) / 2].payload;
    basis.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(dim)));
  }

  std::map<std::uint32_t, double> radius_cache;
  auto block_radius = [&](std::uint32_t mask) {
    auto it = radius_cache.find(mask);
    if (it != radius_cache.end()) return it->second;
    std::vector<Eigen::VectorXd> pts;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) pts.push_back(basis[i]);
    return radius_cache[mask] = min_enclosing_radius(pts);
  };

  HilbertReport rep{n, k, dim, kInf, std::sqrt(2.0) / 2.0, 0, false, false};
  // Restricted growth strings a[0..n-1], a[0] = 0, a[i] <= max(a[0..i-1]) + 1 < k.
  std::vector<std::size_t> a(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      std::vector<std::uint32_t> blocks(used, 0);
      for (std::size_t j = 0; j < n; ++j) blocks[a[j]] |= 1u << j;
      double worst = 0;
      for (auto b : blocks) worst = std::max(worst, block_radius(b));
      rep.min_max_error = std::min(rep.min_max_error, worst);
      ++rep.partitions_checked;
      return;
    }
    for (std::size_t b = 0; b <= used && b < k; ++b) {
      a[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(1, 1);
  rep.certified = rep.min_max_error > 0.5;
  rep.agrees_with_pigeonhole = rep.min_max_error >= rep.pigeonhole_bound - 1e-12;
  return rep;
}

// ---------------------------------------------------------------------------

enum class DivergenceKind { unbounded_base_p, exponential_base };

inline DivergenceKind parse_divergence_kind(const std::string& s) {
  if (s == "unbounded_base_p" || s == "unbounded-base") return DivergenceKind::unbounded_base_p;
  if (s == "exponential_base" || s == "exponential-base") return DivergenceKind::exponential_base;
  fail(ErrorKind::invalid_argument, "unknown divergence fixture '" + s + "'");
}

inline std::string to_string(DivergenceKind k) {
  return k == DivergenceKind::unbounded_base_p ? "unbounded_base_p" : "exponential_base";
}

struct DivergenceLevel {
  std::size_t refinement = 0;
  std::size_t atoms = 0;
  double best_constant_error = 0;
  double best_k_error = 0;  // NaN when the exact search is unavailable for this p
};

/// Real-valued base mapping of a divergence fixture:
///  unbounded_base_p: 2^r midpoint cells on (0,1], h(x) = x^{-1/p};
///  exponential_base: cells of width 1/16 on [-2^r, 2^r], h(x) = e^{-|x|}.
inline MeasurableMap divergence_base(DivergenceKind kind, std::size_t refinement, double p) {
  require(refinement >= 1 && refinement <= 20, ErrorKind::invalid_argument,
          "refinement must lie in [1, 20]");
  require(p >= 1.0 && std::isfinite(p), ErrorKind::invalid_argument, "divergence fixture needs finite p >= 1");
  std::vector<double> w;
  std::vector<Point> v;
  if (kind == DivergenceKind::unbounded_base_p) {
    const std::size_t n = std::size_t{1} << refinement;
    const double cell = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      w.push_back(cell);
      v.push_back(Point{std::pow((static_cast<double>(i) + 0.5) * cell, -1.0 / p)});
    }
  } else {
    const double cell = 1.0 / 16.0;
    const std::size_t n = std::size_t{32} << refinement;  // 2T / cell
    const double T = std::ldexp(1.0, static_cast<int>(refinement));
    for (std::size_t i = 0; i < n; ++i) {
      const double x = -T + (static_cast<double>(i) + 0.5) * cell;
      w.push_back(cell);
      v.push_back(Point{std::exp(-std::abs(x))});
    }
  }
  return MeasurableMap(std::make_shared<const Domain>(std::move(w)), real_line(), std::move(v));
}

namespace detail {

// sum_i w |x_i - c|^p, minimized over c (convex in c).
inline double best_constant_power(const std::vector<double>& x, double w, double p) {
  if (x.empty()) return 0.0;
  auto cost = [&](double c) {
    double s = 0;
    for (double xi : x) s += w * std::pow(std::abs(xi - c), p);
    return s;
  };
  if (p == 2.0) {
    double m = 0;
    for (double xi : x) m += xi;
    return cost(m / static_cast<double>(x.size()));
  }
  if (p == 1.0) {
    auto y = x;
    std::nth_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(y.size() / 2), y.end());
    return cost(y[y.size() / 2]);
  }
  double lo = *std::min_element(x.begin(), x.end()), hi = *std::max_element(x.begin(), x.end());
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (cost(m1) < cost(m2)) hi = m2;
    else lo = m1;
  }
  return cost(0.5 * (lo + hi));
}

// Optimal k-level quantization of sorted values with equal weights w: groups
// are contiguous in sorted order; O(k n^2) dynamic program for p in {1, 2}.
inline double best_k_power(std::vector<double> x, double w, double p, std::size_t k) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    s1[i + 1] = s1[i] + x[i];
    s2[i + 1] = s2[i] + x[i] * x[i];
  }
  auto group = [&](std::size_t i, std::size_t j) {  // atoms [i, j)
    const double cnt = static_cast<double>(j - i);
    if (p == 2.0) {
      const double sum = s1[j] - s1[i];
      return std::max(0.0, w * ((s2[j] - s2[i]) - sum * sum / cnt));
    }
    const std::size_t m = i + (j - i) / 2;
    const double below = static_cast<double>(m - i), above = static_cast<double>(j - m - 1);
    return w * ((s1[j] - s1[m + 1]) - above * x[m] + below * x[m] - (s1[m] - s1[i]));
  };
  std::vector<double> prev(n + 1, kInf), cur(n + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t level = 1; level <= k; ++level) {
    std::fill(cur.begin(), cur.end(), kInf);
    cur[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (std::isfinite(prev[i])) cur[j] = std::min(cur[j], prev[i] + group(i, j));
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace detail

/// Best constant and best k-valued simple approximation errors (D_p) of a
/// divergence fixture's base mapping at one refinement.
inline DivergenceLevel divergence_fixture(DivergenceKind kind, std::size_t refinement, double p,
                                          std::size_t k = 3) {
  require(k >= 1, ErrorKind::invalid_argument, "k must be >= 1");
  const auto h = divergence_base(kind, refinement, p);
  std::vector<double> x;
  for (const auto& v : h.values) x.push_back(v[0]);
  const double w = h.domain->weight(0);
  DivergenceLevel lvl{refinement, x.size(), 0, std::numeric_limits<double>::quiet_NaN()};
  lvl.best_constant_error = std::pow(detail::best_constant_power(x, w, p), 1.0 / p);
  if ((p == 1.0 || p == 2.0) && x.size() <= 4096)
    lvl.best_k_error = std::pow(detail::best_k_power(x, w, p, k), 1.0 / p);
  return lvl;
}

struct DivergenceTrend {
  DivergenceKind kind{};
  double p = 1;
  std::size_t k = 3;
  std::vector<DivergenceLevel> levels;
  bool constant_strictly_increasing = false;
  bool k_strictly_increasing = false;  // false also when best-k errors are unavailable
};

inline DivergenceTrend divergence_trend(DivergenceKind kind, const std::vector<std::size_t>& refinements,
                                        double p, std::size_t k = 3) {
  DivergenceTrend t{kind, p, k, {}, true, true};
  for (auto r : refinements) t.levels.push_back(divergence_fixture(kind, r, p, k));
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    if (std::isnan(t.levels[i].best_k_error)) t.k_strictly_increasing = false;
    if (i == 0) continue;
    t.constant_strictly_increasing &=
        t.levels[i].best_constant_error > t.levels[i - 1].best_constant_error;
    t.k_strictly_increasing &= t.levels[i].best_k_error > t.levels[i - 1].best_k_error;
  }
  if (t.levels.size() < 2) t.constant_strictly_increasing = t.k_strictly_increasing = false;
  return t;
}

}  // namespace lph
