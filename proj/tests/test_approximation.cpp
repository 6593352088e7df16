#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lph/lph.hpp"

using namespace lph;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an lph::Error";
  return ErrorKind::invalid_argument;
}

MeasurableMap line_map(const DomainHandle& d, std::vector<double> xs) {
  std::vector<Point> v;
  for (double x : xs) v.push_back(Point{x});
  return MeasurableMap(d, real_line(), std::move(v));
}

// Set partitions of n items into at most k blocks.
double partitions_at_most(int n, int k) {
  std::vector<std::vector<double>> s(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(n + 1), 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j)
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          j * s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] + s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
  double total = 0;
  for (int j = 1; j <= k; ++j) total += s[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
  return total;
}

}  // namespace

TEST(CountableQuantize, FirstCoverOnALine) {
  const auto d = scaled_domain(4, 4.0);
  const auto f = line_map(d, {0.0, 0.2, 1.0, 1.1});
  const auto [g, rep] = countable_quantize(f, 0.3);
  const auto gm = g.to_map();
  EXPECT_EQ(gm[0], Point{0.0});
  EXPECT_EQ(gm[1], Point{0.0});
  EXPECT_EQ(gm[2], Point{1.0});
  EXPECT_EQ(gm[3], Point{1.0});
  EXPECT_EQ(rep.range_size, 2u);
  EXPECT_NEAR(rep.achieved_error, 0.2, 1e-15);
  EXPECT_TRUE(rep.success);
}

TEST(CountableQuantize, SigmaFiniteBlocksStayWithinEps) {
  std::mt19937_64 rng(17);
  const auto s = make_space(parse_space_name("r2"));
  for (double p : {1.0, 2.0}) {
    const auto d = random_domain(300, rng);
    const auto f = random_map(d, s, rng);
    const auto [g, rep] = countable_quantize(f, 0.1, QuantizeOptions{true, p});
    EXPECT_LT(dp_distance(f, g.to_map(), p), 0.1);
    EXPECT_TRUE(rep.success);
  }
}

TEST(AlmostSimple, HandComputedSteps) {
  // p = 1, eps = 3: step 1 reverts the atoms below deviation 1 (cost 0.5),
  // step 2 serves {2, 2.2} from one ball of radius 1 / mu(A) = 0.5,
  // step 3 moves 2.2 to the center 2.
  const auto d = scaled_domain(4, 4.0);
  const auto f = line_map(d, {0.5, 2.0, 2.2, 0.0});
  const auto h = line_map(d, {0, 0, 0, 0});
  const auto [g, rep] = almost_simple_approx(f, h, 1.0, 3.0);
  ASSERT_EQ(rep.step_breakdown.size(), 3u);
  EXPECT_DOUBLE_EQ(rep.step_breakdown[0], 0.5);
  EXPECT_DOUBLE_EQ(rep.step_breakdown[1], 0.0);
  EXPECT_NEAR(rep.step_breakdown[2], 0.2, 1e-15);
  EXPECT_NEAR(rep.achieved_error, 0.7, 1e-15);
  EXPECT_EQ(rep.range_size, 1u);
  const auto gm = g.to_map();
  EXPECT_EQ(gm[0], Point{0.0});
  EXPECT_EQ(gm[1], Point{2.0});
  EXPECT_EQ(gm[2], Point{2.0});
  EXPECT_DOUBLE_EQ(rep.altered_measure, 2.0);
}

TEST(AlmostSimple, RefusesNonMembers) {
  const auto d = std::make_shared<const Domain>(std::vector<double>{1.0, kInf});
  const auto f = line_map(d, {0, 1}), h = line_map(d, {0, 0});
  EXPECT_EQ(kind_of([&] { almost_simple_approx(f, h, 2.0, 0.1); }), ErrorKind::membership_violated);
  EXPECT_EQ(kind_of([&] { almost_simple_approx(h, h, Exponent::infinity(), 0.1); }), ErrorKind::invalid_argument);
}

TEST(AlmostSimple, SmoothFieldsSmallGrid) {
  for (const char* name : {"spd2", "simplex3", "r2"}) {
    const auto s = make_space(parse_space_name(name));
    const auto d = grid_domain(2, 24);
    const auto f = smooth_field(d, s, 5);
    const auto h = constant_embed(d, s, f[0]);
    for (double p : {1.0, 2.0})
      for (double eps : {0.5, 0.1}) {
        const auto [g, rep] = almost_simple_approx(f, h, p, eps);
        EXPECT_LT(dp_distance(f, g.to_map(), p), eps) << name;
        for (double e : rep.step_breakdown) EXPECT_LT(e, eps / 3.0) << name;
      }
  }
}

TEST(SupApprox, CircleRangeBound) {
  const auto s = make_space(parse_space_name("circle"));
  const auto d = grid_domain(2, 16);
  const auto f = smooth_field(d, s, 2);
  const auto h = constant_embed(d, s, f[0]);
  for (double eps : {0.3, 0.1}) {
    const auto [g, rep] = simple_approx_sup(f, h, eps);
    EXPECT_LT(dp_distance(f, g.to_map(), Exponent::infinity()), eps);
    EXPECT_LE(static_cast<double>(rep.range_size), std::ceil(kTwoPi / eps) + 1.0);
  }
}

TEST(SupApprox, HistogramRefuses) {
  EXPECT_TRUE(check_sup_refusal(make_space(parse_space_name("hist8")), 1).passed);
}

TEST(Hilbert, PigeonholeValueAndPartitionCounts) {
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{2, 1}, {4, 3}, {8, 7}}) {
    const auto rep = hilbert_counterexample(n, k, n);
    EXPECT_NEAR(rep.min_max_error, std::sqrt(0.5), 1e-12) << n;
    EXPECT_EQ(static_cast<double>(rep.partitions_checked), partitions_at_most(static_cast<int>(n), static_cast<int>(k)));
    EXPECT_TRUE(rep.certified);
  }
  EXPECT_EQ(partitions_at_most(4, 3), 14.0);
  EXPECT_EQ(partitions_at_most(8, 7), 4139.0);
}

TEST(Hilbert, FewerValuesOnlyHelpsTheBound) {
  const auto rep = hilbert_counterexample(5, 2, 5);
  EXPECT_GE(rep.min_max_error, std::sqrt(0.5) - 1e-12);
}

TEST(Divergence, BestConstantMatchesVariance) {
  // p = 2: the best constant is the weighted mean, so the error is a standard deviation.
  for (std::size_t r : {4, 6, 8}) {
    const std::size_t n = std::size_t{1} << r;
    double mean = 0, sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = 1.0 / std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(n));
      mean += x / static_cast<double>(n);
      sq += x * x / static_cast<double>(n);
    }
    const auto lvl = divergence_fixture(DivergenceKind::unbounded_base_p, r, 2.0);
    EXPECT_NEAR(lvl.best_constant_error, std::sqrt(sq - mean * mean), 1e-9);
  }
}

TEST(Divergence, TrendsIncrease) {
  const auto a = divergence_trend(DivergenceKind::unbounded_base_p, {4, 5, 6, 7, 8}, 2.0);
  EXPECT_TRUE(a.constant_strictly_increasing);
  EXPECT_TRUE(a.k_strictly_increasing);
  const auto b = divergence_trend(DivergenceKind::exponential_base, {1, 2, 3, 4, 5}, 1.0);
  EXPECT_TRUE(b.constant_strictly_increasing);
  EXPECT_TRUE(b.k_strictly_increasing);
}

TEST(ApproxProperties, QuantizeAllSpaces) {
  for (const auto& s : concrete_spaces()) EXPECT_TRUE(check_quantize(s, 6).passed) << s->tag();
}
