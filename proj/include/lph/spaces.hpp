#pragma once

// Concrete target spaces: Euclidean R^d, SPD(n) with the affine-invariant
// metric, the probability simplex with Fisher-Rao, histograms on a fixed 1-D
// grid with Wasserstein-1, and the circle with arc length. Two fixtures round
// it out: the rationals (an incomplete space) and a single-point space.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lph/metric_space.hpp"

namespace lph {

namespace detail {

inline constexpr double kSpdFloor = 1e-12;
inline constexpr double kSpdClampSlack = 1e-9;
inline constexpr double kSumTolerance = 1e-12;
// Largest dyadic level materialized by the enumerators.
inline constexpr std::size_t kMaxLevelPoints = std::size_t{1} << 24;

// Level L of the Euclidean dyadic enumeration: the grid of spacing 2^-L on
// the box [-2^L, 2^L]^d, minus the points already present at level L-1.
// New points are ordered by squared norm, then coordinatewise by (|x|, x < 0),
// so R^1 starts 0, 1, -1, 0.5, -0.5, 1.5, -1.5, 2, -2, ...
inline std::vector<std::vector<double>> dyadic_cube_level(std::size_t d, int level) {
  const std::int64_t half = std::int64_t{1} << (2 * level);  // 4^L indices per side
  const double step = std::ldexp(1.0, -level);
  const std::size_t side = static_cast<std::size_t>(2 * half + 1);
  double total = std::pow(static_cast<double>(side), static_cast<double>(d));
  require(total <= static_cast<double>(kMaxLevelPoints), ErrorKind::budget_exceeded,
          "dense enumeration level too large to materialize");

  std::vector<std::vector<double>> out;
  std::vector<std::int64_t> k(d, -half);
  const std::int64_t prev_half = level == 0 ? -1 : (std::int64_t{1} << (2 * level - 2)) * 2;
  while (true) {
    bool old = level > 0;
    if (old) {
      for (auto ki : k) {
        if (ki % 2 != 0 || std::llabs(ki) > prev_half) {
          old = false;
          break;
        }
      }
    }
    if (!old) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(k[i]) * step;
      out.push_back(std::move(x));
    }
    std::size_t i = 0;
    while (i < d && k[i] == half) k[i++] = -half;
    if (i == d) break;
    ++k[i];
  }

  auto norm2 = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    const double na = norm2(a), nb = norm2(b);
    if (na != nb) return na < nb;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double aa = std::abs(a[i]), ab = std::abs(b[i]);
      if (aa != ab) return aa < ab;
      if ((a[i] < 0) != (b[i] < 0)) return a[i] > 0;
    }
    return false;
  });
  return out;
}

inline std::vector<std::vector<double>> dyadic_cube_prefix(std::size_t d, std::size_t k) {
  std::vector<std::vector<double>> out;
  for (int level = 0; out.size() < k; ++level) {
    auto pts = dyadic_cube_level(d, level);
    for (auto& p : pts) {
      if (out.size() == k) break;
      out.push_back(std::move(p));
    }
  }
  return out;
}

// Level L of the simplex enumeration: compositions of 2^L into d parts, in
// descending lexicographic order, skipping the all-even ones (already listed at
// level L-1). Level 0 is the vertex list e_0, ..., e_{d-1}.
inline void simplex_compositions(std::size_t d, std::int64_t total, std::vector<std::int64_t>& cur,
                                 std::vector<std::vector<std::int64_t>>& out) {
  if (cur.size() + 1 == d) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::int64_t v = total; v >= 0; --v) {
    cur.push_back(v);
    simplex_compositions(d, total - v, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<double>> dyadic_simplex_prefix(std::size_t d, std::size_t k) {
  std::vector<std::vector<double>> out;
  for (int level = 0; out.size() < k; ++level) {
    const std::int64_t total = std::int64_t{1} << level;
    std::vector<std::vector<std::int64_t>> comps;
    std::vector<std::int64_t> cur;
    simplex_compositions(d, total, cur, comps);
    require(comps.size() <= kMaxLevelPoints, ErrorKind::budget_exceeded,
            "simplex enumeration level too large");
    for (const auto& c : comps) {
      if (out.size() == k) break;
      if (level > 0 && std::all_of(c.begin(), c.end(), [](auto v) { return v % 2 == 0; })) continue;
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = std::ldexp(static_cast<double>(c[i]), -level);
      out.push_back(std::move(x));
    }
  }
  return out;
}

inline void check_probability_vector(const Point& p, const std::string& tag) {
  double s = 0;
  for (double v : p.payload) {
    require(v >= 0.0, ErrorKind::invalid_point, tag + ": negative weight");
    s += v;
  }
  require(std::abs(s - 1.0) <= kSumTolerance, ErrorKind::invalid_point,
          tag + ": weights do not sum to 1");
}

inline Point random_probability_vector(std::size_t d, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(2.0, 1.0);
  std::vector<double> w(d);
  double s = 0;
  for (auto& v : w) s += (v = g(rng));
  for (auto& v : w) v /= s;
  return Point(std::move(w));
}

// Pairwise (cascade) summation in ascending index order.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t mid = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, mid)) + pairwise_sum(xs.subspan(mid));
}

}  // namespace detail

// ---------------------------------------------------------------------------

class EuclideanSpace final : public MetricSpace {
 public:
  explicit EuclideanSpace(std::size_t dim) : dim_(dim) {
    require(dim >= 1, ErrorKind::invalid_argument, "euclidean dimension must be >= 1");
  }

  SpaceDescriptor descriptor() const override { return {"euclidean", dim_, {}}; }
  Capabilities capabilities() const override { return {true, true, true}; }
  std::size_t dimension() const override { return dim_; }
  double probe_resolution(double eps) const override {
    return dim_ == 1 ? eps / 1024.0 : eps / 4.0;
  }

  Point sample(std::mt19937_64& rng) const override {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> x(dim_);
    for (auto& v : x) v = n(rng);
    return Point(std::move(x));
  }

 protected:
  void check_point(const Point&) const override {}

  double raw_distance(const Point& a, const Point& b) const override {
    double s = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }

  Point raw_geodesic(const Point& a, const Point& b, double t) const override {
    std::vector<double> x(dim_);
    for (std::size_t i = 0; i < dim_; ++i) x[i] = a[i] + t * (b[i] - a[i]);
    return Point(std::move(x));
  }

  std::vector<Point> raw_dense_prefix(std::size_t k) const override {
    std::vector<Point> out;
    for (auto& x : detail::dyadic_cube_prefix(dim_, k)) out.emplace_back(std::move(x));
    return out;
  }

  // Cubic lattice of spacing 2 res / sqrt(d) centered on `center`; its
  // covering radius is exactly res.
  std::vector<Point> raw_probe_ball(const Point& center, double radius, double res) const override {
    const double reach = radius + res;
    const double step = 2.0 * res / std::sqrt(static_cast<double>(dim_));
    const auto kmax = static_cast<std::int64_t>(std::ceil(reach / step));
    require(std::pow(2.0 * kmax + 1.0, static_cast<double>(dim_)) <= 4e7, ErrorKind::budget_exceeded,
            "euclidean probe grid too large; increase eps or reduce radius");
    std::vector<Point> out;
    std::vector<std::int64_t> k(dim_, -kmax);
    while (true) {
      std::vector<double> x(dim_);
      double r2 = 0;
      for (std::size_t i = 0; i < dim_; ++i) {
        const double off = static_cast<double>(k[i]) * step;
        x[i] = center[i] + off;
        r2 += off * off;
      }
      if (r2 <= reach * reach) out.emplace_back(std::move(x));
      std::size_t i = 0;
      while (i < dim_ && k[i] == kmax) k[i++] = -kmax;
      if (i == dim_) break;
      ++k[i];
    }
    return out;
  }

 private:
  std::size_t dim_;
};

// ---------------------------------------------------------------------------

/// SPD(n) with d(a, b) = || log(a^{-1/2} b a^{-1/2}) ||_F. Payload is the
/// row-major n x n matrix.
class SpdSpace final : public MetricSpace {
 public:
  explicit SpdSpace(std::size_t n) : n_(n) {
    require(n >= 1, ErrorKind::invalid_argument, "SPD size must be >= 1");
  }

  SpaceDescriptor descriptor() const override { return {"spd", n_, {}}; }
  Capabilities capabilities() const override { return {true, true, true}; }
  std::size_t dimension() const override { return n_ * n_; }
  std::size_t matrix_size() const { return n_; }
  /// Dimension of the manifold, n(n+1)/2.
  std::size_t tangent_dimension() const { return n_ * (n_ + 1) / 2; }

  Point sample(std::mt19937_64& rng) const override {
    std::normal_distribution<double> g(0.0, 0.5);
    std::vector<double> s(tangent_dimension());
    for (auto& v : s) v = g(rng);
    return from_tangent(identity(), s);
  }

  Point identity() const {
    std::vector<double> x(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) x[i * n_ + i] = 1.0;
    return Point(std::move(x));
  }

  /// c^{1/2} exp(S) c^{1/2}, where S is given in Frobenius-orthonormal
  /// coordinates (diagonal entries, then sqrt(2) * upper off-diagonals).
  /// The result lies at distance |s| from c.
  Point from_tangent(const Point& c, std::span<const double> s) const {
    Mat S = Mat::Zero(n_, n_);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_; ++i) S(i, i) = s[k++];
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        S(i, j) = S(j, i) = s[k++] / std::sqrt(2.0);
      }
    const Mat E = spectral(S, [](double l) { return std::exp(l); }, false);
    const Mat half = spectral(load(c), [](double l) { return std::sqrt(l); });
    return store(half * E * half);
  }

 protected:
  using Mat = Eigen::MatrixXd;

  void check_point(const Point& p) const override {
    double scale = 1.0;
    for (double v : p.payload) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        require(std::abs(p[i * n_ + j] - p[j * n_ + i]) <= 1e-12 * scale, ErrorKind::invalid_point,
                "spd: payload is not symmetric");
    const auto vals = eigenvalues(load(p));
    require(vals.minCoeff() > detail::kSpdFloor, ErrorKind::invalid_point,
            "spd: payload is not positive definite");
  }

  double raw_distance(const Point& a, const Point& b) const override {
    const Mat inv_half = spectral(load(a), [](double l) { return 1.0 / std::sqrt(l); });
    Mat m = inv_half * load(b) * inv_half;
    auto mu = eigenvalues(0.5 * (m + m.transpose()));
    clamp(mu);
    double s = 0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      const double l = std::log(mu[i]);
      s += l * l;
    }
    return std::sqrt(s);
  }

  Point raw_geodesic(const Point& a, const Point& b, double t) const override {
    const Mat A = load(a);
    const Mat half = spectral(A, [](double l) { return std::sqrt(l); });
    const Mat inv_half = spectral(A, [](double l) { return 1.0 / std::sqrt(l); });
    Mat m = inv_half * load(b) * inv_half;
    const Mat mt = spectral(0.5 * (m + m.transpose()), [t](double l) { return std::pow(l, t); });
    return store(half * mt * half);
  }

  std::vector<Point> raw_dense_prefix(std::size_t k) const override {
    std::vector<Point> out;
    const Point id = identity();
    for (const auto& s : detail::dyadic_cube_prefix(tangent_dimension(), k))
      out.push_back(from_tangent(id, s));
    return out;
  }

  // Lattice in normal coordinates at the center. The exponential map stretches
  // distances by at most sinh(kr)/(kr) on a ball of radius r (sectional
  // curvature >= -1/2, k = 1/sqrt 2), so the lattice spacing is shrunk by that
  // factor to keep the probe resolution.
  std::vector<Point> raw_probe_ball(const Point& center, double radius, double res) const override {
    const std::size_t m = tangent_dimension();
    const double reach = radius + res;
    const double kr = reach / std::sqrt(2.0);
    const double stretch = kr > 0 ? std::sinh(kr) / kr : 1.0;
    const double step = 2.0 * res / (std::sqrt(static_cast<double>(m)) * stretch);
    const auto kmax = static_cast<std::int64_t>(std::ceil(reach / step));
    require(std::pow(2.0 * kmax + 1.0, static_cast<double>(m)) <= 4e6, ErrorKind::budget_exceeded,
            "spd probe grid too large; increase eps or reduce radius");
    std::vector<Point> out;
    std::vector<std::int64_t> k(m, -kmax);
    std::vector<double> s(m);
    while (true) {
      double r2 = 0;
      for (std::size_t i = 0; i < m; ++i) {
        s[i] = static_cast<double>(k[i]) * step;
        r2 += s[i] * s[i];
      }
      if (r2 <= reach * reach) out.push_back(from_tangent(center, s));
      std::size_t i = 0;
      while (i < m && k[i] == kmax) k[i++] = -kmax;
      if (i == m) break;
      ++k[i];
    }
    return out;
  }

 private:
  Mat load(const Point& p) const {
    Mat m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = p[i * n_ + j];
    return 0.5 * (m + m.transpose());
  }

  Point store(const Mat& m) const {
    std::vector<double> x(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) x[i * n_ + j] = x[j * n_ + i] = 0.5 * (m(i, j) + m(j, i));
    return Point(std::move(x));
  }

  // Eigenvalues clamped below at 1e-12; clamping by more than 1e-9 relative
  // to the spectrum means the input is not numerically SPD.
  static void clamp(Eigen::VectorXd& vals) {
    const double scale = vals.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      if (vals[i] < detail::kSpdFloor) {
        require(detail::kSpdFloor - vals[i] <= detail::kSpdClampSlack * scale, ErrorKind::invalid_point,
                "spd: matrix is not positive definite");
        vals[i] = detail::kSpdFloor;
      }
    }
  }

  Eigen::VectorXd eigenvalues(const Mat& m) const {
    if (n_ == 2) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es;
      es.computeDirect(Eigen::Matrix2d(m), Eigen::EigenvaluesOnly);
      return es.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  // f applied to the spectrum of a symmetric matrix. Tangent vectors (exp)
  // are the only inputs that are not clamped.
  template <class F>
  Mat spectral(const Mat& m, F f, bool clamped = true) const {
    Eigen::VectorXd vals;
    Mat vecs;
    if (n_ == 2) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es;
      es.computeDirect(Eigen::Matrix2d(m));
      vals = es.eigenvalues();
      vecs = es.eigenvectors();
    } else {
      Eigen::SelfAdjointEigenSolver<Mat> es(m);
      vals = es.eigenvalues();
      vecs = es.eigenvectors();
    }
    if (clamped) clamp(vals);
    Eigen::VectorXd fv(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) fv[i] = f(vals[i]);
    return vecs * fv.asDiagonal() * vecs.transpose();
  }

  std::size_t n_;
};

// ---------------------------------------------------------------------------

/// Probability simplex with the Fisher-Rao distance 2 arccos(sum sqrt(p_i q_i)).
/// Evaluated as twice the angle between the square-root embeddings on the unit
/// sphere, via 2 atan2(|u - v|, |u + v|), which stays accurate for nearby points.
class SimplexSpace final : public MetricSpace {
 public:
  explicit SimplexSpace(std::size_t dim) : dim_(dim) {
    require(dim >= 2, ErrorKind::invalid_argument, "simplex needs at least 2 categories");
  }

  SpaceDescriptor descriptor() const override { return {"simplex", dim_, {}}; }
  Capabilities capabilities() const override { return {true, true, true}; }
  std::size_t dimension() const override { return dim_; }
  double probe_resolution(double eps) const override {
    return dim_ == 2 ? eps / 1024.0 : eps / 4.0;
  }

  Point sample(std::mt19937_64& rng) const override {
    return detail::random_probability_vector(dim_, rng);
  }

 protected:
  void check_point(const Point& p) const override { detail::check_probability_vector(p, "simplex"); }

  double raw_distance(const Point& a, const Point& b) const override {
    double diff = 0, sum = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double u = std::sqrt(a[i]), v = std::sqrt(b[i]);
      diff += (u - v) * (u - v);
      sum += (u + v) * (u + v);
    }
    return 4.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
  }

  // Great-circle interpolation of the square-root embeddings.
  Point raw_geodesic(const Point& a, const Point& b, double t) const override {
    const double theta = 0.5 * raw_distance(a, b);
    const double s = std::sin(theta);
    const double wa = std::sin((1.0 - t) * theta) / s, wb = std::sin(t * theta) / s;
    std::vector<double> x(dim_);
    double total = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double u = wa * std::sqrt(a[i]) + wb * std::sqrt(b[i]);
      total += (x[i] = u * u);
    }
    for (auto& v : x) v /= total;
    return Point(std::move(x));
  }

  std::vector<Point> raw_dense_prefix(std::size_t k) const override {
    std::vector<Point> out;
    for (auto& x : detail::dyadic_simplex_prefix(dim_, k)) out.emplace_back(std::move(x));
    return out;
  }

  // Grid of spacing 1/K on the faces {max_i u_i = 1} of the unit cube,
  // radially projected onto the sphere and squared. Radial projection is
  // 1-Lipschitz there and Fisher-Rao <= pi * chord, so the resolution is
  // pi * sqrt(d-1) / (2K).
  std::vector<Point> raw_probe_ball(const Point& center, double radius, double res) const override {
    const double chord = 2.0 * res / kPi;
    const auto K = static_cast<std::int64_t>(
        std::ceil(std::sqrt(static_cast<double>(dim_ - 1)) / chord));
    require(static_cast<double>(dim_) * std::pow(K + 1.0, static_cast<double>(dim_ - 1)) <= 4e7,
            ErrorKind::budget_exceeded, "simplex probe grid too large");
    const double reach = radius + res;
    std::vector<Point> out;
    std::vector<std::int64_t> k(dim_, 0);
    while (true) {
      if (*std::max_element(k.begin(), k.end()) == K) {
        double n2 = 0;
        for (auto ki : k) n2 += static_cast<double>(ki) * static_cast<double>(ki);
        std::vector<double> x(dim_);
        double total = 0;
        for (std::size_t i = 0; i < dim_; ++i)
          total += (x[i] = static_cast<double>(k[i]) * static_cast<double>(k[i]) / n2);
        for (auto& v : x) v /= total;
        Point p(std::move(x));
        if (distance(center, p) <= reach) out.push_back(std::move(p));
      }
      std::size_t i = 0;
      while (i < dim_ && k[i] == K) k[i++] = 0;
      if (i == dim_) break;
      ++k[i];
    }
    return out;
  }

 private:
  std::size_t dim_;
};

// ---------------------------------------------------------------------------

/// Probability histograms on a fixed sorted 1-D grid with the Wasserstein-1
/// distance sum_j |F_p(x_j) - F_q(x_j)| (x_{j+1} - x_j). Linear mixtures are
/// constant-speed geodesics since the distance is an L1 norm of CDFs.
///
/// No epsilon nets: this instance plays the non-boundedly-compact role.
class HistogramW1Space final : public MetricSpace {
 public:
  explicit HistogramW1Space(std::vector<double> grid) : grid_(std::move(grid)) {
    require(grid_.size() >= 2, ErrorKind::invalid_argument, "histogram grid needs >= 2 points");
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
      require(grid_[i] < grid_[i + 1], ErrorKind::invalid_argument, "histogram grid must increase");
  }

  static std::vector<double> uniform_grid(std::size_t m) {
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = static_cast<double>(i) / static_cast<double>(m - 1);
    return g;
  }

  SpaceDescriptor descriptor() const override { return {"hist_w1", grid_.size(), grid_}; }
  Capabilities capabilities() const override { return {true, true, false}; }
  std::size_t dimension() const override { return grid_.size(); }
  const std::vector<double>& grid() const { return grid_; }

  Point sample(std::mt19937_64& rng) const override {
    return detail::random_probability_vector(grid_.size(), rng);
  }

 protected:
  void check_point(const Point& p) const override { detail::check_probability_vector(p, "hist_w1"); }

  double raw_distance(const Point& a, const Point& b) const override {
    double fa = 0, fb = 0, s = 0;
    for (std::size_t j = 0; j + 1 < grid_.size(); ++j) {
      fa += a[j];
      fb += b[j];
      s += std::abs(fa - fb) * (grid_[j + 1] - grid_[j]);
    }
    return s;
  }

  Point raw_geodesic(const Point& a, const Point& b, double t) const override {
    std::vector<double> x(grid_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1.0 - t) * a[i] + t * b[i];
    return Point(std::move(x));
  }

  std::vector<Point> raw_dense_prefix(std::size_t k) const override {
    std::vector<Point> out;
    for (auto& x : detail::dyadic_simplex_prefix(grid_.size(), k)) out.emplace_back(std::move(x));
    return out;
  }

 private:
  std::vector<double> grid_;
};

// ---------------------------------------------------------------------------

/// Unit circle, payload = angle in [0, 2pi), arc-length distance.
class CircleSpace final : public MetricSpace {
 public:
  SpaceDescriptor descriptor() const override { return {"circle", 1, {}}; }
  Capabilities capabilities() const override { return {true, true, true}; }
  std::size_t dimension() const override { return 1; }
  double probe_resolution(double eps) const override { return eps / 1024.0; }

  static double wrap(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
  }

  Point sample(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    return Point{wrap(u(rng))};
  }

 protected:
  void check_point(const Point& p) const override {
    require(p[0] >= 0.0 && p[0] < kTwoPi, ErrorKind::invalid_point, "circle: angle outside [0, 2pi)");
  }

  double raw_distance(const Point& a, const Point& b) const override {
    const double d = std::abs(a[0] - b[0]);
    return std::min(d, kTwoPi - d);
  }

  // Shortest arc; antipodal pairs go counterclockwise from the smaller angle.
  Point raw_geodesic(const Point& a, const Point& b, double t) const override {
    double delta = b[0] - a[0];
    if (delta > kPi) delta -= kTwoPi;
    if (delta < -kPi) delta += kTwoPi;
    return Point{wrap(a[0] + t * delta)};
  }

  // 0, pi, pi/2, 3pi/2, pi/4, 3pi/4, ...
  std::vector<Point> raw_dense_prefix(std::size_t k) const override {
    std::vector<Point> out{Point{0.0}};
    for (int level = 1; out.size() < k; ++level) {
      const std::int64_t parts = std::int64_t{1} << level;
      for (std::int64_t j = 1; j < parts && out.size() < k; j += 2)
        out.push_back(Point{kTwoPi * static_cast<double>(j) / static_cast<double>(parts)});
    }
    return out;
  }

  std::vector<Point> raw_probe_ball(const Point& center, double radius, double res) const override {
    const double reach = std::min(radius + res, kPi);
    const auto kmax = static_cast<std::int64_t>(std::ceil(reach / (2.0 * res)));
    std::vector<Point> out;
    for (std::int64_t k = -kmax; k <= kmax; ++k) {
      const double off = std::clamp(static_cast<double>(k) * 2.0 * res, -reach, reach);
      out.push_back(Point{wrap(center[0] + off)});
    }
    return out;
  }
};

// ---------------------------------------------------------------------------

/// The rationals as reduced fractions [p, q], q >= 1. Incomplete: a Cauchy
/// sequence of fractions may converge to an irrational number.
class RationalLineSpace final : public MetricSpace {
 public:
  /// Limits are recognized only as fractions of height <= this bound; a
  /// tolerance window with no such fraction is treated as an irrational limit.
  static constexpr std::int64_t kLimitHeight = 4096;

  SpaceDescriptor descriptor() const override { return {"rational", 2, {}}; }
  Capabilities capabilities() const override { return {false, false, false}; }
  std::size_t dimension() const override { return 2; }

  static Point fraction(std::int64_t p, std::int64_t q) {
    require(q != 0, ErrorKind::invalid_argument, "zero denominator");
    if (q < 0) p = -p, q = -q;
    const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    return Point{static_cast<double>(p / g), static_cast<double>(q / g)};
  }

  static double value(const Point& p) { return p[0] / p[1]; }

  Point sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<std::int64_t> num(-1000, 1000), den(1, 100);
    return fraction(num(rng), den(rng));
  }

  std::optional<Point> limit_of(std::span<const Point> tail, double tol) const override {
    if (tail.empty()) return std::nullopt;
    const double x = value(tail.back());
    auto f = simplest_between(x - tol, x + tol);
    if (!f) return std::nullopt;
    return fraction(f->first, f->second);
  }

  // Fraction with the smallest denominator in [lo, hi], if its height stays
  // within kLimitHeight.
  static std::optional<std::pair<std::int64_t, std::int64_t>> simplest_between(double lo, double hi) {
    if (lo <= 0.0 && hi >= 0.0) return std::pair<std::int64_t, std::int64_t>{0, 1};
    if (hi < 0.0) {
      auto r = simplest_between(-hi, -lo);
      if (!r) return std::nullopt;
      return std::pair<std::int64_t, std::int64_t>{-r->first, r->second};
    }
    return simplest_positive(lo, hi, 0);
  }

 protected:
  void check_point(const Point& p) const override {
    constexpr double kMax = 9007199254740992.0;  // 2^53
    require(p[0] == std::floor(p[0]) && p[1] == std::floor(p[1]), ErrorKind::invalid_point,
            "rational: payload entries must be integers");
    require(p[1] >= 1.0 && std::abs(p[0]) <= kMax && p[1] <= kMax, ErrorKind::invalid_point,
            "rational: denominator must be positive and entries below 2^53");
    const auto a = static_cast<std::int64_t>(std::abs(p[0]));
    const auto b = static_cast<std::int64_t>(p[1]);
    require(std::gcd(a, b) == 1 || (a == 0 && b == 1), ErrorKind::invalid_point,
            "rational: fraction not reduced");
  }

  double raw_distance(const Point& a, const Point& b) const override {
    const __int128 num = static_cast<__int128>(static_cast<std::int64_t>(a[0])) *
                             static_cast<std::int64_t>(b[1]) -
                         static_cast<__int128>(static_cast<std::int64_t>(b[0])) *
                             static_cast<std::int64_t>(a[1]);
    const long double n = static_cast<long double>(num < 0 ? -num : num);
    return static_cast<double>(n / (static_cast<long double>(a[1]) * static_cast<long double>(b[1])));
  }

 private:
  static std::optional<std::pair<std::int64_t, std::int64_t>> simplest_positive(double lo, double hi,
                                                                                int depth) {
    if (depth > 64) return std::nullopt;
    const double fl = std::floor(lo);
    if (fl == lo || fl + 1.0 <= hi) {
      const auto n = static_cast<std::int64_t>(std::ceil(lo));
      return std::pair<std::int64_t, std::int64_t>{n, 1};
    }
    auto r = simplest_positive(1.0 / (hi - fl), 1.0 / (lo - fl), depth + 1);
    if (!r) return std::nullopt;
    const auto [p, q] = *r;  // lo - fl ~ q / p
    const auto f = static_cast<std::int64_t>(fl);
    if (p > kLimitHeight) return std::nullopt;
    return std::pair<std::int64_t, std::int64_t>{f * p + q, p};
  }
};

// ---------------------------------------------------------------------------

/// |N| = 1. The empty payload is its only point.
class SinglePointSpace final : public MetricSpace {
 public:
  SpaceDescriptor descriptor() const override { return {"point", 0, {}}; }
  Capabilities capabilities() const override { return {true, true, true}; }
  std::size_t dimension() const override { return 0; }
  bool is_single_point() const override { return true; }
  Point sample(std::mt19937_64&) const override { return Point{}; }

 protected:
  void check_point(const Point&) const override {}
  double raw_distance(const Point&, const Point&) const override { return 0.0; }
  std::vector<Point> raw_dense_prefix(std::size_t) const override { return {Point{}}; }
};

// ---------------------------------------------------------------------------

inline SpaceHandle make_space(const SpaceDescriptor& d) {
  if (d.tag == "euclidean") return std::make_shared<EuclideanSpace>(d.dim);
  if (d.tag == "spd") return std::make_shared<SpdSpace>(d.dim);
  if (d.tag == "simplex") return std::make_shared<SimplexSpace>(d.dim);
  if (d.tag == "hist_w1") {
    auto grid = d.grid.empty() ? HistogramW1Space::uniform_grid(d.dim) : d.grid;
    require(grid.size() == d.dim, ErrorKind::parse_error, "hist_w1: grid length != dim");
    return std::make_shared<HistogramW1Space>(std::move(grid));
  }
  if (d.tag == "circle") return std::make_shared<CircleSpace>();
  if (d.tag == "rational") return std::make_shared<RationalLineSpace>();
  if (d.tag == "point") return std::make_shared<SinglePointSpace>();
  fail(ErrorKind::parse_error, "unknown space tag '" + d.tag + "'");
}

/// Short names used on the command line: r<d>, spd<n>, simplex<d>, hist<m>,
/// circle, rational, point.
inline SpaceDescriptor parse_space_name(const std::string& name) {
  auto suffix = [&](const std::string& prefix) -> std::optional<std::size_t> {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return std::nullopt;
    const auto rest = name.substr(prefix.size());
    if (!std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
    return static_cast<std::size_t>(std::stoul(rest));
  };
  if (name == "circle") return {"circle", 1, {}};
  if (name == "rational") return {"rational", 2, {}};
  if (name == "point") return {"point", 0, {}};
  if (auto n = suffix("simplex")) return {"simplex", *n, {}};
  if (auto n = suffix("spd")) return {"spd", *n, {}};
  if (auto n = suffix("hist")) return {"hist_w1", *n, HistogramW1Space::uniform_grid(*n)};
  if (auto n = suffix("r")) return {"euclidean", *n, {}};
  fail(ErrorKind::parse_error, "unknown space name '" + name + "'");
}

}  // namespace lph
