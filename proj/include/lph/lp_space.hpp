#pragma once

// Measurable maps over a Domain, the D_p metrics and the structural
// operations of L^p_h(M, N): membership, equivalence, restriction, distance
// fields, constant embeddings, triviality and the differing-support
// decomposition.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "lph/measure_space.hpp"
#include "lph/metric_space.hpp"
#include "lph/spaces.hpp"

namespace lph {

/// Nonnegative double that may be +inf; never NaN.
using ExtendedReal = double;

/// p in [1, inf].
class Exponent {
 public:
  constexpr Exponent(double p = 2.0) : p_(p) {}  // NOLINT: implicit from double is intended
  static constexpr Exponent infinity() { return Exponent(kInf); }

  constexpr bool is_infinite() const { return p_ == kInf; }
  constexpr double value() const { return p_; }
  void check() const {
    require(!std::isnan(p_) && p_ >= 1.0, ErrorKind::invalid_argument,
            "exponent p must be >= 1 or inf");
  }
  std::string str() const {
    if (is_infinite()) return "inf";
    std::string s = std::to_string(p_);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s;
  }
  static Exponent parse(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return infinity();
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      require(used == s.size(), ErrorKind::parse_error, "bad exponent '" + s + "'");
      Exponent e(v);
      e.check();
      return e;
    } catch (const std::logic_error&) {
      fail(ErrorKind::parse_error, "bad exponent '" + s + "'");
    }
  }

  friend constexpr bool operator==(Exponent, Exponent) = default;

 private:
  double p_;
};

using DomainHandle = std::shared_ptr<const Domain>;

/// Atom-indexed array of target-space points.
struct MeasurableMap {
  DomainHandle domain;
  SpaceHandle space;
  std::vector<Point> values;

  MeasurableMap(DomainHandle d, SpaceHandle s, std::vector<Point> v)
      : domain(std::move(d)), space(std::move(s)), values(std::move(v)) {
    require(domain && space, ErrorKind::invalid_argument, "map needs a domain and a space");
    require(values.size() == domain->atom_count(), ErrorKind::dimension_mismatch,
            "map has " + std::to_string(values.size()) + " values for " +
                std::to_string(domain->atom_count()) + " atoms");
    for (const auto& v : values) space->validate(v);
  }

  std::size_t size() const { return values.size(); }
  const Point& operator[](std::size_t a) const { return values[a]; }
};

inline void check_compatible(const MeasurableMap& f, const MeasurableMap& g) {
  require(f.domain == g.domain || *f.domain == *g.domain, ErrorKind::dimension_mismatch,
          "maps live on different domains");
  require(same_space(*f.space, *g.space), ErrorKind::dimension_mismatch,
          "maps take values in different spaces");
}

namespace detail {

// Per-atom w * d^p terms, or +inf when an infinite-weight atom deviates.
inline ExtendedReal dp_power_sum(const MeasurableMap& f, const MeasurableMap& g, double p) {
  std::vector<double> terms;
  terms.reserve(f.size());
  const auto& w = f.domain->weights();
  for (std::size_t a = 0; a < f.size(); ++a) {
    if (w[a] == 0.0) continue;
    const double d = f.space->distance(f[a], g[a]);
    if (d == 0.0) continue;  // 0 * inf = 0
    if (std::isinf(w[a])) return kInf;
    terms.push_back(w[a] * (p == 1.0 ? d : std::pow(d, p)));
  }
  return pairwise_sum(terms);
}

}  // namespace detail

/// D_p(f, g): the p-norm of the pointwise distance field; the max over
/// positive-weight atoms for p = inf.
inline ExtendedReal dp_distance(const MeasurableMap& f, const MeasurableMap& g, Exponent p) {
  check_compatible(f, g);
  p.check();
  if (p.is_infinite()) {
    double m = 0;
    const auto& w = f.domain->weights();
    for (std::size_t a = 0; a < f.size(); ++a)
      if (w[a] > 0.0) m = std::max(m, f.space->distance(f[a], g[a]));
    return m;
  }
  const double s = detail::dp_power_sum(f, g, p.value());
  if (std::isinf(s) || s == 0.0 || p.value() == 1.0) return s;
  return std::pow(s, 1.0 / p.value());
}

inline bool is_member(const MeasurableMap& f, const MeasurableMap& h, Exponent p) {
  return std::isfinite(dp_distance(f, h, p));
}

/// Exact agreement on every atom of positive weight.
inline bool equivalent(const MeasurableMap& f, const MeasurableMap& g) {
  check_compatible(f, g);
  const auto& w = f.domain->weights();
  for (std::size_t a = 0; a < f.size(); ++a)
    if (w[a] > 0.0 && f[a] != g[a]) return false;
  return true;
}

/// Agreement within `tol` in d_N on every atom of positive weight.
inline bool nearly_equivalent(const MeasurableMap& f, const MeasurableMap& g, double tol = 1e-12) {
  check_compatible(f, g);
  const auto& w = f.domain->weights();
  for (std::size_t a = 0; a < f.size(); ++a)
    if (w[a] > 0.0 && f.space->distance(f[a], g[a]) > tol) return false;
  return true;
}

/// Sub-domain induced by b (weights inherited, no geometry).
inline DomainHandle restrict_domain(const Domain& d, const AtomSet& b) {
  d.check(b);
  std::vector<double> w;
  w.reserve(b.size());
  for (auto a : b) w.push_back(d.weight(a));
  return std::make_shared<Domain>(std::move(w));
}

inline MeasurableMap restrict(const MeasurableMap& f, const AtomSet& b, DomainHandle sub = nullptr) {
  if (!sub) sub = restrict_domain(*f.domain, b);
  std::vector<Point> v;
  v.reserve(b.size());
  for (auto a : b) v.push_back(f[a]);
  return MeasurableMap(std::move(sub), f.space, std::move(v));
}

inline const SpaceHandle& real_line() {
  static const SpaceHandle r = std::make_shared<EuclideanSpace>(1);
  return r;
}

/// x -> d_N(f(x), h(x)) as a real-valued map.
inline MeasurableMap distance_to_base_field(const MeasurableMap& f, const MeasurableMap& h) {
  check_compatible(f, h);
  std::vector<Point> v;
  v.reserve(f.size());
  for (std::size_t a = 0; a < f.size(); ++a) v.push_back(Point{f.space->distance(f[a], h[a])});
  return MeasurableMap(f.domain, real_line(), std::move(v));
}

inline MeasurableMap constant_embed(DomainHandle d, SpaceHandle s, const Point& y) {
  s->validate(y);
  std::vector<Point> v(d->atom_count(), y);
  return MeasurableMap(std::move(d), std::move(s), std::move(v));
}

/// L^p_h(M, N) is a single point iff mu is purely infinite or |N| = 1.
inline bool is_trivial(const Domain& d, const MetricSpace& s) {
  return is_purely_infinite(d) || s.is_single_point();
}

/// A piece of the sigma-finite decomposition of {f != h}: atoms with
/// 1/n < d_N(f, h) <= 1/(n-1) and m-1 < d_N(z0, h) <= m.
struct SupportPiece {
  std::size_t n = 0;
  std::size_t m = 0;
  AtomSet atoms;
};

/// Smallest n >= 1 with d > 1/n.
inline std::size_t deviation_bucket(double d) {
  require(d > 0.0, ErrorKind::invalid_argument, "deviation bucket needs d > 0");
  if (d > 1.0) return 1;
  auto n = static_cast<std::size_t>(std::floor(1.0 / d)) + 1;
  while (!(d > 1.0 / static_cast<double>(n))) ++n;
  while (n > 1 && d > 1.0 / static_cast<double>(n - 1)) --n;
  return n;
}

/// Reference point z0 used by the H_m filtration: the first dense point when
/// the space enumerates one, otherwise h at the first atom.
inline Point reference_point(const MeasurableMap& h) {
  if (h.space->capabilities().dense_enumerator) return h.space->dense_sequence(1).front();
  require(h.size() > 0, ErrorKind::invalid_argument, "empty map has no reference point");
  return h[0];
}

/// Disjoint finite-measure pieces B_n intersected with H_m covering exactly the
/// positive-weight atoms where f != h, ordered by (n, m).
inline std::vector<SupportPiece> differing_support(const MeasurableMap& f, const MeasurableMap& h,
                                                   Exponent p) {
  require(!p.is_infinite(), ErrorKind::invalid_argument, "differing_support needs finite p");
  require(is_member(f, h, p), ErrorKind::membership_violated, "f is not in L^p_h");
  const Point z0 = reference_point(h);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> keyed;
  const auto& w = f.domain->weights();
  for (std::size_t a = 0; a < f.size(); ++a) {
    if (!(w[a] > 0.0) || f[a] == h[a]) continue;
    const double d = f.space->distance(f[a], h[a]);
    // Distinct payloads at distance 0 only arise from round-off; they go to
    // the last bucket so the cover stays exact.
    const std::size_t n = d > 0.0 ? deviation_bucket(d) : std::numeric_limits<std::size_t>::max();
    const auto m = static_cast<std::size_t>(std::ceil(f.space->distance(z0, h[a])));
    keyed.emplace_back(n, m, a);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<SupportPiece> out;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    const auto [n, m, a] = keyed[i];
    idx.push_back(a);
    if (i + 1 == keyed.size() || std::get<0>(keyed[i + 1]) != n || std::get<1>(keyed[i + 1]) != m) {
      out.push_back({n, m, AtomSet(std::move(idx))});
      idx.clear();
    }
  }
  return out;
}

}  // namespace lph
