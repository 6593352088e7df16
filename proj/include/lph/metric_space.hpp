#pragma once

// Target metric spaces (N, d_N): the capability contract every concrete space
// implements, plus the shared greedy epsilon-net construction.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lph/errors.hpp"

namespace lph {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A point of a target space. The payload layout is owned by the space:
/// coordinates, a row-major symmetric matrix, simplex or histogram weights,
/// an angle, or a reduced fraction.
struct Point {
  std::vector<double> payload;

  Point() = default;
  explicit Point(std::vector<double> p) : payload(std::move(p)) {}
  Point(std::initializer_list<double> p) : payload(p) {}

  std::size_t size() const noexcept { return payload.size(); }
  double operator[](std::size_t i) const { return payload[i]; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point& a, const Point& b) { return a.payload <=> b.payload; }
};

struct Capabilities {
  bool geodesic = false;
  bool dense_enumerator = false;
  bool epsilon_net = false;
};

/// Serializable identity of a space. Two spaces are interchangeable iff their
/// descriptors compare equal.
struct SpaceDescriptor {
  std::string tag;
  std::size_t dim = 0;
  std::vector<double> grid;  // histogram support points; empty otherwise

  friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;
};

class MetricSpace {
 public:
  virtual ~MetricSpace() = default;

  virtual SpaceDescriptor descriptor() const = 0;
  virtual Capabilities capabilities() const = 0;
  /// Payload length of every valid point.
  virtual std::size_t dimension() const = 0;
  virtual bool is_single_point() const { return false; }

  std::string tag() const { return descriptor().tag; }

  /// Throws Error(invalid_point | dimension_mismatch) when `p` is not a point of this space.
  void validate(const Point& p) const {
    require(p.size() == dimension(), ErrorKind::dimension_mismatch,
            tag() + ": payload length " + std::to_string(p.size()) + ", expected " +
                std::to_string(dimension()));
    for (double v : p.payload)
      require(std::isfinite(v), ErrorKind::invalid_point, tag() + ": non-finite payload entry");
    check_point(p);
  }

  bool is_valid(const Point& p) const {
    try {
      validate(p);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  /// d_N(a, b). Arguments are put in canonical (lexicographic) order before
  /// evaluation, so symmetry holds bit-for-bit; equal payloads give exactly 0.
  double distance(const Point& a, const Point& b) const {
    require(a.size() == dimension() && b.size() == dimension(), ErrorKind::dimension_mismatch,
            tag() + ": distance between payloads of the wrong length");
    if (a == b) return 0.0;
    return b < a ? raw_distance(b, a) : raw_distance(a, b);
  }

  /// Constant-speed minimizing path from a (t = 0) to b (t = 1).
  Point geodesic_point(const Point& a, const Point& b, double t) const {
    require(capabilities().geodesic, ErrorKind::capability_absent, tag() + ": no geodesic paths");
    require(t >= 0.0 && t <= 1.0, ErrorKind::invalid_argument, "geodesic parameter outside [0,1]");
    require(a.size() == dimension() && b.size() == dimension(), ErrorKind::dimension_mismatch,
            tag() + ": geodesic between payloads of the wrong length");
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    if (a == b) return a;
    // Swapped endpoints evaluate the same expression, hence gamma_ab(t) == gamma_ba(1-t).
    return b < a ? raw_geodesic(b, a, 1.0 - t) : raw_geodesic(a, b, t);
  }

  /// First k points of the space's fixed countable dense enumeration.
  std::vector<Point> dense_sequence(std::size_t k) const {
    require(capabilities().dense_enumerator, ErrorKind::capability_absent,
            tag() + ": no dense enumeration");
    require(k > 0, ErrorKind::invalid_argument, "dense_sequence needs k > 0");
    auto out = raw_dense_prefix(k);
    if (out.size() > k) out.resize(k);
    return out;
  }

  /// Probe points of the closed ball B(center, radius): every point of the ball
  /// lies within `resolution` of some probe, and every probe lies within
  /// radius + resolution of the center.
  std::vector<Point> probe_ball(const Point& center, double radius, double resolution) const {
    require(capabilities().epsilon_net, ErrorKind::capability_absent,
            tag() + ": no probe grid (not boundedly compact here)");
    require(radius >= 0.0 && resolution > 0.0, ErrorKind::invalid_argument, "bad probe parameters");
    validate(center);
    return raw_probe_ball(center, radius, resolution);
  }

  /// Probe resolution used by epsilon_net for a given eps. One-dimensional
  /// spaces can afford a much finer grid than the default eps / 4.
  virtual double probe_resolution(double eps) const { return eps / 4.0; }

  /// Finite list whose open eps-balls cover the closed ball B(center, radius).
  ///
  /// Greedy farthest-point covering of the probe grid at threshold
  /// eps - resolution; since the probes are resolution-dense in the ball the
  /// result covers the ball itself with open eps-balls.
  std::vector<Point> epsilon_net(const Point& center, double radius, double eps) const {
    require(capabilities().epsilon_net, ErrorKind::capability_absent,
            tag() + ": epsilon nets unavailable (space not boundedly compact here)");
    require(eps > 0.0, ErrorKind::invalid_argument, "epsilon_net needs eps > 0");
    require(radius >= 0.0, ErrorKind::invalid_argument, "epsilon_net needs radius >= 0");
    validate(center);
    std::vector<Point> net{center};
    if (radius == 0.0) return net;

    const double res = probe_resolution(eps);
    const double threshold = eps - res;
    const auto probes = raw_probe_ball(center, radius, res);
    std::vector<double> nearest(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) nearest[i] = distance(center, probes[i]);

    while (!probes.empty()) {
      const auto far = std::max_element(nearest.begin(), nearest.end());
      if (*far < threshold) break;
      const Point& pick = probes[static_cast<std::size_t>(far - nearest.begin())];
      net.push_back(pick);
      for (std::size_t i = 0; i < probes.size(); ++i)
        nearest[i] = std::min(nearest[i], distance(pick, probes[i]));
    }
    return net;
  }

  /// Seeded random point, used by fixtures and property checks.
  virtual Point sample(std::mt19937_64& rng) const = 0;

  /// Limit of a pointwise Cauchy tail whose diameter is below `tol`, or
  /// nullopt when the limit is not a point of this space. Complete spaces
  /// return the last element.
  virtual std::optional<Point> limit_of(std::span<const Point> tail, double /*tol*/) const {
    if (tail.empty()) return std::nullopt;
    return tail.back();
  }

 protected:
  // Called with canonically ordered, unequal, correctly sized payloads.
  virtual double raw_distance(const Point& a, const Point& b) const = 0;
  virtual void check_point(const Point& p) const = 0;
  virtual Point raw_geodesic(const Point& a, const Point&, double) const { return a; }
  virtual std::vector<Point> raw_dense_prefix(std::size_t) const { return {}; }
  virtual std::vector<Point> raw_probe_ball(const Point& center, double, double) const {
    return {center};
  }
};

using SpaceHandle = std::shared_ptr<const MetricSpace>;

inline bool same_space(const MetricSpace& a, const MetricSpace& b) {
  return &a == &b || a.descriptor() == b.descriptor();
}

}  // namespace lph
