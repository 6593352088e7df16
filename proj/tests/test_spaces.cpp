#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "lph/lph.hpp"

using namespace lph;

namespace {

SpaceHandle space(const char* name) { return make_space(parse_space_name(name)); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an lph::Error";
  return ErrorKind::invalid_argument;
}

// Affine-invariant distance straight from the generalized eigenproblem A v = l B v.
double spd_oracle(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(b, a);
  double s = 0;
  for (int i = 0; i < 2; ++i) s += std::pow(std::log(es.eigenvalues()[i]), 2);
  return std::sqrt(s);
}

Point spd_point(const Eigen::Matrix2d& m) { return Point{m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

}  // namespace

TEST(Euclidean, DistanceAndGeodesic) {
  const auto s = space("r2");
  EXPECT_EQ(s->distance(Point{0, 0}, Point{3, 4}), 5.0);
  const auto m = s->geodesic_point(Point{0, 0}, Point{2, -4}, 0.25);
  EXPECT_DOUBLE_EQ(m[0], 0.5);
  EXPECT_DOUBLE_EQ(m[1], -1.0);
}

TEST(Spd, ScaledIdentity) {
  const auto s = space("spd2");
  const double e2 = std::exp(2.0);
  EXPECT_NEAR(s->distance(Point{1, 0, 0, 1}, Point{e2, 0, 0, e2}), 2.828427124746190, 1e-13);
}

TEST(Spd, MatchesGeneralizedEigenOracle) {
  const auto s = space("spd2");
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Eigen::Matrix2d x, y;
    x << n(rng), n(rng), n(rng), n(rng);
    y << n(rng), n(rng), n(rng), n(rng);
    const Eigen::Matrix2d a = x * x.transpose() + 0.1 * Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d b = y * y.transpose() + 0.1 * Eigen::Matrix2d::Identity();
    const double want = spd_oracle(a, b);
    EXPECT_NEAR(s->distance(spd_point(a), spd_point(b)), want, 1e-9 * std::max(1.0, want));
  }
}

TEST(Spd, CongruenceInvariance) {
  const auto s = space("spd2");
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Point a = s->sample(rng), b = s->sample(rng);
    Eigen::Matrix2d g;
    g << 1.3, 0.4, -0.2, 0.9;
    auto congr = [&](const Point& p) {
      Eigen::Matrix2d m;
      m << p[0], p[1], p[2], p[3];
      Eigen::Matrix2d r = g * m * g.transpose();
      r = 0.5 * (r + r.transpose()).eval();
      return spd_point(r);
    };
    EXPECT_NEAR(s->distance(congr(a), congr(b)), s->distance(a, b), 1e-9);
  }
}

TEST(Spd, RejectsIndefinite) {
  const auto s = space("spd2");
  EXPECT_EQ(kind_of([&] { s->validate(Point{1, 2, 2, 1}); }), ErrorKind::invalid_point);
  EXPECT_EQ(kind_of([&] { s->validate(Point{1, 0, 0}); }), ErrorKind::dimension_mismatch);
}

TEST(Simplex, FisherRaoClosedForm) {
  const auto s = space("simplex3");
  EXPECT_NEAR(s->distance(Point{1, 0, 0}, Point{0, 1, 0}), std::acos(-1.0), 1e-15);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Point a = s->sample(rng), b = s->sample(rng);
    double bc = 0;
    for (int j = 0; j < 3; ++j) bc += std::sqrt(a[j] * b[j]);
    EXPECT_NEAR(s->distance(a, b), 2.0 * std::acos(std::min(1.0, bc)), 1e-7);
  }
}

TEST(Simplex, RejectsNonProbability) {
  const auto s = space("simplex3");
  EXPECT_EQ(kind_of([&] { s->validate(Point{0.5, 0.6, -0.1}); }), ErrorKind::invalid_point);
  EXPECT_EQ(kind_of([&] { s->validate(Point{0.5, 0.6, 0.1}); }), ErrorKind::invalid_point);
}

TEST(HistogramW1, PointMassesMoveByGridDistance) {
  const auto s = space("hist8");
  auto delta = [](int i) {
    std::vector<double> v(8, 0.0);
    v[static_cast<std::size_t>(i)] = 1.0;
    return Point(v);
  };
  EXPECT_NEAR(s->distance(delta(0), delta(7)), 1.0, 1e-15);
  EXPECT_NEAR(s->distance(delta(2), delta(5)), 3.0 / 7.0, 1e-15);
  // Half the mass travels two cells.
  EXPECT_NEAR(s->distance(Point{0.5, 0, 0.5, 0, 0, 0, 0, 0}, Point{0, 0, 0.5, 0, 0.5, 0, 0, 0}), 2.0 / 7.0, 1e-15);
}

TEST(HistogramW1, NoEpsilonNets) {
  const auto s = space("hist8");
  std::mt19937_64 rng(1);
  const Point c = s->sample(rng);
  EXPECT_EQ(kind_of([&] { s->epsilon_net(c, 0.5, 0.1); }), ErrorKind::capability_absent);
}

TEST(Circle, ArcLengthAndDenseOrder) {
  const auto s = space("circle");
  EXPECT_NEAR(s->distance(Point{0.1}, Point{kTwoPi - 0.1}), 0.2, 1e-15);
  EXPECT_NEAR(s->distance(Point{0.0}, Point{kPi}), kPi, 0.0);
  const auto q = s->dense_sequence(8);
  const double want[] = {0, kPi, kPi / 2, 3 * kPi / 2, kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4};
  ASSERT_EQ(q.size(), 8u);
  for (int i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(q[static_cast<std::size_t>(i)][0], want[i]);
}

TEST(Circle, GeodesicWrapsAroundZero) {
  const auto s = space("circle");
  const auto m = s->geodesic_point(Point{kTwoPi - 0.2}, Point{0.2}, 0.5);
  EXPECT_NEAR(s->distance(m, Point{0.0}), 0.0, 1e-15);
}

TEST(Rational, ReducedFractions) {
  EXPECT_EQ(RationalLineSpace::fraction(2, 4), (Point{1, 2}));
  EXPECT_EQ(RationalLineSpace::fraction(3, -6), (Point{-1, 2}));
  const auto q = space("rational");
  EXPECT_DOUBLE_EQ(q->distance(Point{1, 2}, Point{1, 3}), 1.0 / 6.0);
  EXPECT_EQ(kind_of([&] { q->validate(Point{2, 4}); }), ErrorKind::invalid_point);
}

TEST(SpaceNames, RoundTripAndErrors) {
  for (const char* n : {"r3", "spd2", "simplex4", "hist8", "circle"}) {
    const auto d = parse_space_name(n);
    EXPECT_EQ(make_space(d)->descriptor(), d);
  }
  EXPECT_EQ(kind_of([] { parse_space_name("torus"); }), ErrorKind::parse_error);
  EXPECT_EQ(kind_of([] { parse_space_name("spdx"); }), ErrorKind::parse_error);
}

TEST(Distance, SymmetricBitForBitAndZeroOnEqual) {
  for (const auto& s : concrete_spaces()) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
      const Point a = s->sample(rng), b = s->sample(rng);
      EXPECT_EQ(s->distance(a, b), s->distance(b, a)) << s->tag();
      EXPECT_EQ(s->distance(a, a), 0.0) << s->tag();
    }
  }
}

TEST(EpsilonNet, CoversSampledBallPoints) {
  for (const char* name : {"r2", "circle", "spd2", "simplex3"}) {
    const auto s = space(name);
    std::mt19937_64 rng(21);
    const Point c = s->sample(rng);
    const double radius = 0.6, eps = 0.25;
    const auto net = s->epsilon_net(c, radius, eps);
    int tested = 0;
    for (int i = 0; i < 4000 && tested < 300; ++i) {
      const Point y = s->geodesic_point(c, s->sample(rng), 0.3);
      if (s->distance(c, y) > radius) continue;
      ++tested;
      double best = kInf;
      for (const auto& z : net) best = std::min(best, s->distance(y, z));
      EXPECT_LT(best, eps) << name;
    }
    EXPECT_GT(tested, 50) << name;
  }
}

// Property checks at unit-test scale; the acceptance binary runs them larger.
TEST(MetricProperties, AxiomsGeodesicsDenseNets) {
  for (const auto& s : concrete_spaces()) {
    EXPECT_TRUE(check_metric_axioms(s, 500, 4).passed) << s->tag();
    EXPECT_TRUE(check_geodesics(s, 100, 4).passed) << s->tag();
    EXPECT_TRUE(check_dense_sequence(s, 4).passed) << s->tag();
    EXPECT_TRUE(check_epsilon_net(s, 4).passed) << s->tag();
  }
}

TEST(MetricProperties, BrokenMetricIsCaught) {
  const SpaceHandle broken = std::make_shared<BrokenMetric>(space("r2"));
  const auto r = check_metric_axioms(broken, 100, 1);
  EXPECT_FALSE(r.passed);
}
