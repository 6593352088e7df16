#pragma once

// Seeded synthetic data: random domains and maps, smooth fields built from
// chained geodesics, piecewise-constant simple maps on grid boxes, and named
// spaces used by the checks.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lph/approximation.hpp"

namespace lph {

/// The five concrete target spaces, in a fixed order.
inline std::vector<SpaceHandle> concrete_spaces() {
  return {make_space(parse_space_name("r2")), make_space(parse_space_name("spd2")),
          make_space(parse_space_name("simplex3")), make_space(parse_space_name("hist8")),
          make_space(parse_space_name("circle"))};
}

/// Stream-splitting seed: independent generators for (seed, stream) pairs.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// n atoms with weights uniform in (0, 2); each atom is null with
/// probability zero_fraction.
inline DomainHandle random_domain(std::size_t n, std::mt19937_64& rng, double zero_fraction = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng) < zero_fraction ? 0.0 : 2.0 * u(rng) + 1e-3;
  return std::make_shared<const Domain>(std::move(w));
}

inline DomainHandle scaled_domain(std::size_t n, double total) {
  return std::make_shared<const Domain>(std::vector<double>(n, total / static_cast<double>(n)));
}

inline MeasurableMap random_map(const DomainHandle& d, const SpaceHandle& s, std::mt19937_64& rng) {
  std::vector<Point> v;
  v.reserve(d->atom_count());
  for (std::size_t a = 0; a < d->atom_count(); ++a) v.push_back(s->sample(rng));
  return MeasurableMap(d, s, std::move(v));
}

inline DomainHandle grid_domain(std::size_t dim, std::size_t side) {
  return std::make_shared<const Domain>(Domain::grid(dim, side));
}

/// Smooth field: starting from an anchor, walk along geodesics toward `modes`
/// random points with low-frequency sinusoidal parameters of the cell center.
inline MeasurableMap smooth_field(const DomainHandle& d, const SpaceHandle& s, std::uint64_t seed,
                                  std::size_t modes = 3, double amplitude = 0.6) {
  const auto& geo = d->require_geometry();
  require(s->capabilities().geodesic, ErrorKind::capability_absent, "smooth fields need geodesics");
  auto rng = seeded_rng(seed, 0x5eed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Point anchor = s->sample(rng);
  struct Mode {
    Point target;
    std::vector<double> freq;
    double phase;
  };
  std::vector<Mode> ms;
  for (std::size_t k = 0; k < modes; ++k) {
    Mode m{s->sample(rng), std::vector<double>(geo.dim), kTwoPi * u(rng)};
    for (auto& f : m.freq) f = std::floor(3.0 * u(rng)) + 0.5 * u(rng);
    ms.push_back(std::move(m));
  }
  std::vector<Point> v;
  v.reserve(d->atom_count());
  for (std::size_t a = 0; a < d->atom_count(); ++a) {
    const auto x = geo.center(a);
    Point cur = anchor;
    for (const auto& m : ms) {
      double arg = m.phase;
      for (std::size_t i = 0; i < geo.dim; ++i) arg += kTwoPi * m.freq[i] * x[i];
      const double t = amplitude * (0.5 + 0.5 * std::sin(arg));
      cur = s->geodesic_point(cur, m.target, t);
    }
    v.push_back(std::move(cur));
  }
  return MeasurableMap(d, s, std::move(v));
}

/// Smooth field snapped to the nearest of the first `levels` dense points
/// (lowest index on ties).
inline MeasurableMap quantized_field(const DomainHandle& d, const SpaceHandle& s, std::uint64_t seed,
                                     std::size_t levels = 256) {
  const auto f = smooth_field(d, s, seed);
  const auto q = s->dense_sequence(levels);
  std::vector<Point> v;
  v.reserve(f.size());
  for (const auto& x : f.values) {
    std::size_t best = 0;
    double bd = kInf;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double dd = s->distance(x, q[i]);
      if (dd < bd) bd = dd, best = i;
    }
    v.push_back(q[best]);
  }
  return MeasurableMap(d, s, std::move(v));
}

/// Cells whose centers lie in the box [lo, hi) (per axis).
inline AtomSet box_atoms(const Domain& d, const std::vector<double>& lo, const std::vector<double>& hi) {
  const auto& geo = d.require_geometry();
  require(lo.size() == geo.dim && hi.size() == geo.dim, ErrorKind::dimension_mismatch, "box dimension");
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < d.atom_count(); ++a) {
    const auto x = geo.center(a);
    bool in = true;
    for (std::size_t i = 0; i < geo.dim && in; ++i) in = x[i] >= lo[i] && x[i] < hi[i];
    if (in) out.push_back(a);
  }
  return AtomSet(std::move(out));
}

/// Simple map equal to the constant base z0 except on the given disjoint
/// regions, where it takes the given values.
inline SimpleMap region_simple_map(const DomainHandle& d, const SpaceHandle& s, const Point& z0,
                                   const std::vector<AtomSet>& regions, const std::vector<Point>& values) {
  require(regions.size() == values.size(), ErrorKind::invalid_argument, "one value per region");
  SimpleMap g{d, s, std::vector<std::int64_t>(d->atom_count(), -1), values, std::int64_t{-1},
              std::make_shared<const MeasurableMap>(constant_embed(d, s, z0))};
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (auto a : regions[i]) {
      require(g.labels[a] == -1, ErrorKind::invalid_argument, "regions overlap");
      g.labels[a] = static_cast<std::int64_t>(i);
    }
  g.validate();
  return g;
}

/// k disjoint regions: intervals on a 1-D grid, or side-by-side boxes in the
/// lower half of a 2-D grid, separated by background; values sampled from s.
inline SimpleMap striped_simple_map(const DomainHandle& d, const SpaceHandle& s, std::size_t k,
                                    std::uint64_t seed) {
  const auto& geo = d->require_geometry();
  auto rng = seeded_rng(seed, 0x51e);
  const Point z0 = s->sample(rng);
  std::vector<AtomSet> regions;
  std::vector<Point> values;
  const double slot = 1.0 / static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> lo(geo.dim, 0.2), hi(geo.dim, 0.8);
    lo[0] = (static_cast<double>(i) + 0.2) * slot;
    hi[0] = (static_cast<double>(i) + 0.8) * slot;
    regions.push_back(box_atoms(*d, lo, hi));
    values.push_back(s->sample(rng));
  }
  return region_simple_map(d, s, z0, regions, values);
}

/// Partial sums of the continued fraction of sqrt 2: 1, 3/2, 7/5, 17/12, ...
/// (term n >= 1), constant on every atom. Its limit is not rational.
inline Point pell_convergent(std::size_t n) {
  std::int64_t p = 1, q = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const std::int64_t np = p + 2 * q, nq = p + q;
    p = np;
    q = nq;
  }
  return RationalLineSpace::fraction(p, q);
}

}  // namespace lph
