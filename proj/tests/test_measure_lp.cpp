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

}  // namespace

TEST(Domain, GridGeometry) {
  const auto d = Domain::grid(2, 4);
  EXPECT_EQ(d.atom_count(), 16u);
  EXPECT_DOUBLE_EQ(total_measure(d), 1.0);
  const auto& g = d.require_geometry();
  EXPECT_EQ(g.index({2, 3}), 11u);
  EXPECT_EQ(g.coords(11), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(g.center(11), (std::vector<double>{0.625, 0.875}));
  EXPECT_EQ(kind_of([] { Domain d2(std::vector<double>{1.0, -1.0}); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([] { Domain({1.0}).require_geometry(); }), ErrorKind::geometry_absent);
}

TEST(Domain, MeasureAndPureInfinity) {
  const Domain d({0.5, 0.0, kInf, 2.0});
  EXPECT_DOUBLE_EQ(measure(d, AtomSet({0, 1, 3})), 2.5);
  EXPECT_TRUE(std::isinf(total_measure(d)));
  EXPECT_FALSE(is_purely_infinite(d));
  EXPECT_TRUE(is_purely_infinite(Domain({0.0, kInf, kInf})));
}

TEST(Regularity, ErosionAndDilationOnALine) {
  const Domain d = Domain::grid(1, 64);
  const auto inner = inner_closed_approx(d, AtomSet::range(16, 48), 0.05);
  EXPECT_FALSE(inner.over_budget);
  EXPECT_EQ(inner.radius, 1u);
  EXPECT_EQ(inner.set, AtomSet::range(17, 47));
  EXPECT_NEAR(inner.gap, 2.0 / 64.0, 1e-15);

  const auto outer = outer_open_approx(d, AtomSet::range(20, 30), 0.05);
  EXPECT_EQ(outer.set, AtomSet::range(19, 31));
  EXPECT_NEAR(outer.gap, 2.0 / 64.0, 1e-15);

  // Budget too small for one erosion step: the input comes back flagged.
  const auto tight = inner_closed_approx(d, AtomSet::range(16, 48), 0.01);
  EXPECT_TRUE(tight.over_budget);
  EXPECT_EQ(tight.set, AtomSet::range(16, 48));
}

TEST(Urysohn, HandComputedRamp) {
  // C = {4, 5}, V = {2..7} on 10 cells: atom 3 is one cell from C and two from
  // the outside, atom 2 the other way round.
  const Domain d = Domain::grid(1, 10);
  const auto u = urysohn(d, AtomSet({4, 5}), AtomSet::range(2, 8));
  EXPECT_NEAR(u[3], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(u[2], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(u[6], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(u[7], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(u[4], 1.0);
  EXPECT_EQ(u[1], 0.0);
  EXPECT_EQ(u[9], 0.0);
}

TEST(MeasureProperties, AdditivityRegularityUrysohn) {
  EXPECT_TRUE(check_measure_additivity(100, 2).passed);
  EXPECT_TRUE(check_regularity(50, 2).passed);
  EXPECT_TRUE(check_urysohn(20, 2).passed);
}

TEST(Exponent, Parsing) {
  EXPECT_TRUE(Exponent::parse("inf").is_infinite());
  EXPECT_EQ(Exponent::parse("1.5").value(), 1.5);
  EXPECT_EQ(Exponent(1.5).str(), "1.5");
  EXPECT_EQ(Exponent(2.0).str(), "2");
  EXPECT_EQ(kind_of([] { Exponent::parse("0.5"); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([] { Exponent::parse("two"); }), ErrorKind::parse_error);
}

TEST(Dp, HandComputedLineMaps) {
  // Weights 1, 2 and a null atom that must be ignored.
  const auto d = std::make_shared<const Domain>(std::vector<double>{1.0, 2.0, 0.0});
  const auto f = line_map(d, {0, 1, 5}), g = line_map(d, {3, 0, -7});
  EXPECT_DOUBLE_EQ(dp_distance(f, g, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(dp_distance(f, g, 2.0), std::sqrt(11.0));
  EXPECT_DOUBLE_EQ(dp_distance(f, g, 3.0), std::cbrt(29.0));
  EXPECT_DOUBLE_EQ(dp_distance(f, g, Exponent::infinity()), 3.0);
  EXPECT_TRUE(equivalent(f, line_map(d, {0, 1, 100})));
}

TEST(Dp, InfiniteWeightAtoms) {
  const auto d = std::make_shared<const Domain>(std::vector<double>{1.0, kInf});
  const auto f = line_map(d, {0, 4}), g = line_map(d, {1, 4}), k = line_map(d, {1, 5});
  EXPECT_DOUBLE_EQ(dp_distance(f, g, 2.0), 1.0);
  EXPECT_TRUE(std::isinf(dp_distance(f, k, 2.0)));
  EXPECT_FALSE(is_member(k, f, 1.0));
  EXPECT_DOUBLE_EQ(dp_distance(f, k, Exponent::infinity()), 1.0);
}

TEST(Dp, ConstantEmbeddingScale) {
  const auto s = make_space(parse_space_name("r2"));
  const auto d = scaled_domain(5, 4.0);
  const auto a = constant_embed(d, s, Point{0, 0}), b = constant_embed(d, s, Point{3, 4});
  EXPECT_NEAR(dp_distance(a, b, 2.0), 10.0, 1e-13);
  EXPECT_NEAR(dp_distance(a, b, 1.0), 20.0, 1e-13);
  EXPECT_EQ(dp_distance(a, b, Exponent::infinity()), 5.0);
}

TEST(Dp, MismatchedInputsThrow) {
  const auto d1 = scaled_domain(3, 1.0), d2 = scaled_domain(4, 1.0);
  const auto f = line_map(d1, {0, 0, 0}), g = line_map(d2, {0, 0, 0, 0});
  EXPECT_EQ(kind_of([&] { dp_distance(f, g, 2.0); }), ErrorKind::dimension_mismatch);
  const auto h = constant_embed(d1, make_space(parse_space_name("r2")), Point{0, 0});
  EXPECT_EQ(kind_of([&] { dp_distance(f, h, 2.0); }), ErrorKind::dimension_mismatch);
  EXPECT_EQ(kind_of([&] { dp_distance(f, f, 0.5); }), ErrorKind::invalid_argument);
}

TEST(Dp, TrivialityAndDifferingSupport) {
  EXPECT_TRUE(is_trivial(Domain({0.0, 0.0}), *make_space(parse_space_name("r2"))));
  EXPECT_TRUE(is_trivial(Domain({1.0}), SinglePointSpace()));
  EXPECT_FALSE(is_trivial(Domain({1.0}), *real_line()));
}

TEST(LpProperties, AxiomsEmbeddingHolderBase) {
  for (const auto& s : concrete_spaces()) {
    EXPECT_TRUE(check_dp_axioms(s, 300, 8, 3).passed) << s->tag();
    EXPECT_TRUE(check_constant_embedding(s, 150, 3).passed) << s->tag();
  }
  EXPECT_TRUE(check_holder(200, 3).passed);
  EXPECT_TRUE(check_base_invariance(200, 3).passed);
  EXPECT_TRUE(check_lipschitz(100, 3).passed);
  EXPECT_TRUE(check_triviality(3).passed);
  EXPECT_TRUE(check_differing_support(100, 3).passed);
}
