#pragma once

// Discretized base measure spaces: weighted atoms with optional uniform grid
// geometry on [0,1]^dim, the erosion/dilation regularity surrogates and the
// distance-ratio Urysohn function.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lph/errors.hpp"

namespace lph {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Uniform grid: side = round(1 / cell_size) cells per axis, atoms in
/// row-major order (last axis fastest), atom centers at (i + 0.5) * cell_size.
struct GridGeometry {
  std::size_t dim = 1;
  double cell_size = 1.0;

  std::size_t side() const { return static_cast<std::size_t>(std::llround(1.0 / cell_size)); }
  std::size_t cell_count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < dim; ++i) n *= side();
    return n;
  }
  double cell_weight() const { return std::pow(cell_size, static_cast<double>(dim)); }

  std::vector<std::size_t> coords(std::size_t atom) const {
    std::vector<std::size_t> c(dim);
    const std::size_t s = side();
    for (std::size_t k = dim; k-- > 0;) {
      c[k] = atom % s;
      atom /= s;
    }
    return c;
  }
  std::size_t index(const std::vector<std::size_t>& c) const {
    std::size_t a = 0;
    for (auto ci : c) a = a * side() + ci;
    return a;
  }
  std::vector<double> center(std::size_t atom) const {
    auto c = coords(atom);
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = (static_cast<double>(c[k]) + 0.5) * cell_size;
    return x;
  }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Sorted, duplicate-free atom index list.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::vector<std::size_t> idx) : idx_(std::move(idx)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
  }
  static AtomSet range(std::size_t lo, std::size_t hi) {  // [lo, hi)
    std::vector<std::size_t> v;
    for (std::size_t i = lo; i < hi; ++i) v.push_back(i);
    return AtomSet(std::move(v));
  }
  static AtomSet from_mask(const std::vector<bool>& mask) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) v.push_back(i);
    AtomSet s;
    s.idx_ = std::move(v);
    return s;
  }

  const std::vector<std::size_t>& indices() const { return idx_; }
  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  bool contains(std::size_t a) const { return std::binary_search(idx_.begin(), idx_.end(), a); }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  std::vector<bool> mask(std::size_t n) const {
    std::vector<bool> m(n, false);
    for (auto a : idx_) m[a] = true;
    return m;
  }

  bool subset_of(const AtomSet& o) const {
    return std::includes(o.idx_.begin(), o.idx_.end(), idx_.begin(), idx_.end());
  }
  AtomSet unite(const AtomSet& o) const {
    AtomSet r;
    std::set_union(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(), std::back_inserter(r.idx_));
    return r;
  }
  AtomSet minus(const AtomSet& o) const {
    AtomSet r;
    std::set_difference(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                        std::back_inserter(r.idx_));
    return r;
  }
  AtomSet intersect(const AtomSet& o) const {
    AtomSet r;
    std::set_intersection(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                          std::back_inserter(r.idx_));
    return r;
  }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

 private:
  std::vector<std::size_t> idx_;
};

class Domain {
 public:
  explicit Domain(std::vector<double> weights, std::optional<GridGeometry> geometry = std::nullopt)
      : weights_(std::move(weights)), geometry_(geometry) {
    for (double w : weights_)
      require(!std::isnan(w) && w >= 0.0, ErrorKind::invalid_argument,
              "atom weights must be nonnegative and not NaN");
    if (geometry_) {
      require(geometry_->dim >= 1 && geometry_->cell_size > 0.0, ErrorKind::invalid_argument,
              "grid geometry needs dim >= 1 and cell_size > 0");
      require(std::abs(1.0 / geometry_->cell_size - static_cast<double>(geometry_->side())) < 1e-9,
              ErrorKind::invalid_argument, "cell_size must be 1/side for an integer side");
      require(geometry_->cell_count() == weights_.size(), ErrorKind::dimension_mismatch,
              "atom count does not match grid geometry");
      const double cw = geometry_->cell_weight();
      for (double w : weights_)
        require(std::abs(w - cw) <= 1e-12, ErrorKind::invalid_argument,
                "grid atom weight must equal cell_size^dim");
    }
  }

  /// Uniform grid on [0,1]^dim with `side` cells per axis.
  static Domain grid(std::size_t dim, std::size_t side) {
    require(dim >= 1 && side >= 1, ErrorKind::invalid_argument, "grid needs dim, side >= 1");
    GridGeometry g{dim, 1.0 / static_cast<double>(side)};
    return Domain(std::vector<double>(g.cell_count(), g.cell_weight()), g);
  }

  std::size_t atom_count() const { return weights_.size(); }
  double weight(std::size_t a) const { return weights_.at(a); }
  const std::vector<double>& weights() const { return weights_; }
  const std::optional<GridGeometry>& geometry() const { return geometry_; }
  const GridGeometry& require_geometry() const {
    require(geometry_.has_value(), ErrorKind::geometry_absent, "operation needs grid geometry");
    return *geometry_;
  }

  AtomSet all() const { return AtomSet::range(0, atom_count()); }

  void check(const AtomSet& s) const {
    if (!s.empty())
      require(s.indices().back() < atom_count(), ErrorKind::invalid_argument,
              "atom index out of range");
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::vector<double> weights_;
  std::optional<GridGeometry> geometry_;
};

/// Sum of the weights of s (+inf if any member weight is +inf).
inline double measure(const Domain& d, const AtomSet& s) {
  d.check(s);
  double total = 0;
  for (auto a : s) total += d.weight(a);
  return total;
}

inline double total_measure(const Domain& d) { return measure(d, d.all()); }

/// True iff mu takes only the values 0 and +inf.
inline bool is_purely_infinite(const Domain& d) {
  return std::all_of(d.weights().begin(), d.weights().end(),
                     [](double w) { return w == 0.0 || std::isinf(w); });
}

/// Result of an inner/outer regularity surrogate.
struct RegularApprox {
  AtomSet set;
  double gap = 0;  // |measure(input) - measure(set)|
  std::size_t radius = 0;
  bool over_budget = false;
};

namespace detail {

// Separable Chebyshev erosion/dilation by r cells. Cells beyond the domain
// boundary are ignored, so the boundary of [0,1]^dim is not complement.
inline std::vector<bool> morph(const GridGeometry& g, std::vector<bool> m, std::size_t r, bool erode) {
  const std::size_t s = g.side();
  const std::size_t n = m.size();
  std::size_t stride = 1;
  for (std::size_t axis = 0; axis < g.dim; ++axis) {
    std::vector<bool> out(n);
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t c = (a / stride) % s;
      const std::size_t lo = c >= r ? c - r : 0;
      const std::size_t hi = std::min(s - 1, c + r);
      bool acc = erode;
      for (std::size_t k = lo; k <= hi; ++k) {
        const bool v = m[a - c * stride + k * stride];
        if (erode ? !v : v) {
          acc = !erode;
          break;
        }
      }
      out[a] = acc;
    }
    m = std::move(out);
    stride *= s;
  }
  return m;
}

// Exact squared Euclidean distance transform (lower envelope of parabolas),
// in cell units, from the cells set in `seed`. Unreached cells get +inf.
inline void edt_1d(std::vector<double>& f, std::size_t n) {
  std::vector<double> d(n), z(n + 1);
  std::vector<std::size_t> v(n);
  std::size_t k = 0;
  std::size_t first = n;
  for (std::size_t q = 0; q < n; ++q)
    if (std::isfinite(f[q])) {
      first = q;
      break;
    }
  if (first == n) return;
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (std::size_t q = first + 1; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    while (true) {
      const double qd = static_cast<double>(q), vd = static_cast<double>(v[k]);
      const double s = ((f[q] + qd * qd) - (f[v[k]] + vd * vd)) / (2.0 * qd - 2.0 * vd);
      if (s <= z[k]) {
        if (k == 0) {
          v[0] = q;
          z[1] = kInf;
          break;
        }
        --k;
        continue;
      }
      ++k;
      v[k] = q;
      z[k] = s;
      z[k + 1] = kInf;
      break;
    }
  }
  k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    while (z[k + 1] < static_cast<double>(q)) ++k;
    const double diff = static_cast<double>(q) - static_cast<double>(v[k]);
    d[q] = diff * diff + f[v[k]];
  }
  f = std::move(d);
}

inline std::vector<double> squared_distance_transform(const GridGeometry& g, const std::vector<bool>& seed) {
  const std::size_t s = g.side();
  const std::size_t n = seed.size();
  std::vector<double> f(n);
  for (std::size_t a = 0; a < n; ++a) f[a] = seed[a] ? 0.0 : kInf;
  std::size_t stride = 1;
  std::vector<double> line(s);
  for (std::size_t axis = 0; axis < g.dim; ++axis) {
    for (std::size_t a = 0; a < n; ++a) {
      if ((a / stride) % s != 0) continue;
      for (std::size_t k = 0; k < s; ++k) line[k] = f[a + k * stride];
      edt_1d(line, s);
      for (std::size_t k = 0; k < s; ++k) f[a + k * stride] = line[k];
    }
    stride *= s;
  }
  return f;
}

}  // namespace detail

/// Euclidean distance (in [0,1]^dim units) from every cell center to the
/// nearest center in s; +inf everywhere when s is empty.
inline std::vector<double> distance_to_set(const Domain& d, const AtomSet& s) {
  const auto& g = d.require_geometry();
  auto sq = detail::squared_distance_transform(g, s.mask(d.atom_count()));
  for (auto& v : sq) v = std::sqrt(v) * g.cell_size;
  return sq;
}

/// Closed inner approximation C of b: erosion by the smallest radius r >= 1
/// whose measure gap is below delta. Gaps grow with r, so this is r = 1 when
/// feasible. Radius 0 would be the identity; r >= 1 separates C from the
/// complement of b, which the continuous construction needs. If even r = 1 misses the budget, b itself is returned
/// with over_budget set.
inline RegularApprox inner_closed_approx(const Domain& d, const AtomSet& b, double delta) {
  const auto& g = d.require_geometry();
  d.check(b);
  require(delta > 0.0, ErrorKind::invalid_argument, "inner_closed_approx needs delta > 0");
  const double mb = measure(d, b);
  require(std::isfinite(mb), ErrorKind::invalid_argument, "inner_closed_approx needs finite measure");
  if (b.empty() || b.size() == d.atom_count()) return {b, 0.0, 0, false};

  const AtomSet c = AtomSet::from_mask(detail::morph(g, b.mask(d.atom_count()), 1, true));
  const double gap = mb - measure(d, c);
  if (!(gap < delta)) return {b, 0.0, 0, true};
  return {c, gap, 1, false};
}

/// Open outer approximation U of c: dilation by one cell (so the open union of
/// U contains the closed union of c); radius 0 when c touches no outside cell.
inline RegularApprox outer_open_approx(const Domain& d, const AtomSet& c, double delta) {
  const auto& g = d.require_geometry();
  d.check(c);
  require(delta > 0.0, ErrorKind::invalid_argument, "outer_open_approx needs delta > 0");
  const double mc = measure(d, c);
  require(std::isfinite(mc), ErrorKind::invalid_argument, "outer_open_approx needs finite measure");
  if (c.empty()) return {c, 0.0, 0, false};
  const AtomSet u = AtomSet::from_mask(detail::morph(g, c.mask(d.atom_count()), 1, false));
  const double gap = measure(d, u) - mc;
  const std::size_t radius = u == c ? 0 : 1;
  return {u, gap, radius, !(gap < delta)};
}

/// I(x) = d(x, M \ V) / (d(x, C) + d(x, M \ V)) with Euclidean center
/// distances. I == 1 when V is everything, I == 0 when C is empty.
inline std::vector<double> urysohn(const Domain& d, const AtomSet& c, const AtomSet& v) {
  d.require_geometry();
  d.check(c);
  d.check(v);
  require(c.subset_of(v), ErrorKind::invalid_argument, "urysohn needs c inside v");
  const std::size_t n = d.atom_count();
  if (c.empty()) return std::vector<double>(n, 0.0);
  if (v.size() == n) return std::vector<double>(n, 1.0);
  const AtomSet outside = d.all().minus(v);
  const auto dc = distance_to_set(d, c);
  const auto df = distance_to_set(d, outside);
  std::vector<double> out(n);
  const auto cm = c.mask(n), vm = v.mask(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (cm[a]) out[a] = 1.0;
    else if (!vm[a]) out[a] = 0.0;
    else out[a] = df[a] / (dc[a] + df[a]);
  }
  return out;
}

/// Euclidean distance between the centers of two nonempty sets.
inline double set_gap(const Domain& d, const AtomSet& a, const AtomSet& b) {
  if (a.empty() || b.empty()) return kInf;
  const auto db = distance_to_set(d, b);
  double best = kInf;
  for (auto x : a) best = std::min(best, db[x]);
  return best;
}

}  // namespace lph
