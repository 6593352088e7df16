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

// One block of four cells, value 1 on a zero background, on a 16-cell line.
SimpleMap block_map(double value = 1.0) {
  const auto d = grid_domain(1, 16);
  return region_simple_map(d, real_line(), Point{0.0}, {AtomSet::range(4, 8)}, {Point{value}});
}

}  // namespace

TEST(Smoothstep, Polynomials) {
  EXPECT_DOUBLE_EQ(smoothstep(0.25, 0), 0.25);
  EXPECT_DOUBLE_EQ(smoothstep(0.25, 1), 3 * 0.0625 - 2 * 0.015625);
  EXPECT_DOUBLE_EQ(smoothstep(0.25, 2), 0.103515625);
  EXPECT_DOUBLE_EQ(smoothstep(0.5, 3), 0.5);
  EXPECT_DOUBLE_EQ(smoothstep_max_slope(1), 1.5);
  EXPECT_DOUBLE_EQ(smoothstep_max_slope(2), 1.875);
  EXPECT_EQ(kind_of([] { smoothstep(0.5, 6); }), ErrorKind::invalid_argument);
}

TEST(Smoothstep, BoundaryDifferences) {
  for (double h : {1.0 / 64, 1.0 / 256, 1.0 / 1024}) {
    const auto d0 = boundary_differences(0, h);
    EXPECT_NEAR(d0.first, h, 1e-15);
    const auto d2 = boundary_differences(2, h);
    EXPECT_LE(d2.first, 10 * h * h);
    EXPECT_LE(d2.second, 10 * h * h);
  }
}

TEST(Continuous, HandComputedBlock) {
  // Core {5, 6}; region {4..7}; the two rim cells sit halfway along the ramp.
  const auto g = block_map();
  const auto [field, rep] = continuous_from_simple(g, 1.0, 0.5);
  ASSERT_EQ(field.pieces.size(), 1u);
  EXPECT_EQ(field.pieces[0].core, AtomSet::range(5, 7));
  EXPECT_EQ(field.pieces[0].region, AtomSet::range(4, 8));
  EXPECT_DOUBLE_EQ(field.values[4][0], 0.5);
  EXPECT_DOUBLE_EQ(field.values[7][0], 0.5);
  EXPECT_EQ(field.values[5], Point{1.0});
  EXPECT_EQ(field.values[3], Point{0.0});
  EXPECT_DOUBLE_EQ(rep.achieved_error, 0.0625);
  EXPECT_TRUE(endpoints_exact(field));
  EXPECT_LE(modulus_ratio(field), 1.0);
  EXPECT_LE(range_defect(field), 1e-15);
}

TEST(Continuous, TightBudgetIsReportedNotHidden) {
  // A tiny eps leaves no room for a one-cell erosion: the core is the whole
  // block, the ramp spills outside it and the report says so.
  const auto g = block_map();
  const auto [field, rep] = continuous_from_simple(g, 1.0, 0.01);
  EXPECT_TRUE(field.pieces[0].inner_over_budget);
  EXPECT_DOUBLE_EQ(rep.achieved_error, 0.0625);
  EXPECT_FALSE(rep.success);
}

TEST(Continuous, AdjacentRegionsAtCoarseResolution) {
  const auto d = grid_domain(1, 16);
  const auto g = region_simple_map(d, real_line(), Point{0.0}, {AtomSet::range(2, 5), AtomSet::range(5, 8)},
                                   {Point{1.0}, Point{2.0}});
  EXPECT_EQ(kind_of([&] { continuous_from_simple(g, 1.0, 0.01); }), ErrorKind::infeasible);
  EXPECT_NO_THROW(continuous_from_simple(g, 1.0, 10.0));
}

TEST(Continuous, NeedsGeometry) {
  const auto d = scaled_domain(4, 1.0);
  SimpleMap g{d, real_line(), {0, 0, -1, -1}, {Point{1.0}}, std::int64_t{-1},
              std::make_shared<const MeasurableMap>(constant_embed(d, real_line(), Point{0.0}))};
  EXPECT_EQ(kind_of([&] { continuous_from_simple(g, 1.0, 0.1); }), ErrorKind::geometry_absent);
}

TEST(Smooth, OrderZeroIsTheContinuousField) {
  const auto s = make_space(parse_space_name("spd2"));
  const auto d = grid_domain(2, 64);
  const auto g = striped_simple_map(d, s, 2, 4);
  const auto a = continuous_from_simple(g, 1.0, 0.2).first;
  const auto b = smooth_from_simple(g, 1.0, 0.2, 0).first;
  EXPECT_EQ(a.values, b.values);
  const auto [c, rep] = smooth_from_simple(g, 1.0, 0.2, 2);
  EXPECT_TRUE(endpoints_exact(c));
  EXPECT_LE(modulus_ratio(c), 1.0);
  EXPECT_LE(range_defect(c), 1e-9);
}

TEST(InterpProperties, RelaxationSmallGrids) {
  EXPECT_TRUE(check_relaxation_refinement(2).passed);
}

TEST(Cauchy, FastSubsequenceByHand) {
  const auto d = scaled_domain(1, 1.0);
  std::vector<MeasurableMap> terms;
  for (double x : {0.0, 1.0, 1.25, 1.3, 1.3}) terms.push_back(constant_embed(d, real_line(), Point{x}));
  EXPECT_EQ(fast_subsequence(terms, 1.0), (std::vector<std::size_t>{1, 2, 3, 4}));
}

TEST(Cauchy, SeededSequencesAreFastAndConverge) {
  const auto s = make_space(parse_space_name("r2"));
  std::mt19937_64 rng(8);
  const auto d = random_domain(6, rng);
  for (Exponent p : {Exponent(1.0), Exponent(2.0), Exponent::infinity()}) {
    const auto seq = seeded_cauchy(d, s, p, 99);
    EXPECT_TRUE(record_gaps(seq, 20).fast);
    const auto [L, rep] = riesz_fischer_limit(seq);
    EXPECT_TRUE(rep.certified);
    for (std::size_t n = 1; n <= rep.tail_distance.size(); ++n)
      EXPECT_LE(rep.tail_distance[n - 1], std::ldexp(1.0, -static_cast<int>(n - 1)) + 1e-9);
  }
}

TEST(Cauchy, PellConvergents) {
  EXPECT_EQ(pell_convergent(1), (Point{1, 1}));
  EXPECT_EQ(pell_convergent(2), (Point{3, 2}));
  EXPECT_EQ(pell_convergent(3), (Point{7, 5}));
  EXPECT_EQ(pell_convergent(4), (Point{17, 12}));
}

TEST(Cauchy, RationalsAreIncomplete) {
  const auto q = make_space(parse_space_name("rational"));
  const auto d = scaled_domain(2, 1.0);
  const auto seq = constant_sequence(d, q, 1.0, [](std::size_t n) { return pell_convergent(n); }, "pell");
  EXPECT_EQ(kind_of([&] { riesz_fischer_limit(seq); }), ErrorKind::non_convergence);
  EXPECT_TRUE(check_incomplete_target().passed);
}

TEST(Separability, NativeMembersAtDistanceZero) {
  const auto s = make_space(parse_space_name("circle"));
  const auto d = grid_domain(2, 16);
  const auto h = s->dense_sequence(1)[0];
  const auto fam = build_dense_family(d, s, h, 8, 8);
  const auto member = fam.member({{0, 3}, {2, 5}}).to_map();
  const auto rep = separability_probe(member, fam, 2.0, 0.05);
  EXPECT_EQ(rep.distance, 0.0);
  EXPECT_TRUE(rep.success);
}

TEST(Separability, QuantizedFieldsAreReached) {
  for (const char* name : {"r2", "simplex3"}) {
    const auto s = make_space(parse_space_name(name));
    const auto d = grid_domain(1, 256);
    const auto f = quantized_field(d, s, 12);
    const auto rep = separability_search(f, s->dense_sequence(1)[0], 1.0, 0.05);
    EXPECT_TRUE(rep.success) << name << " distance " << rep.distance;
  }
}

TEST(Separability, ProbeRefusesInfiniteP) {
  const auto s = make_space(parse_space_name("r2"));
  const auto d = grid_domain(1, 8);
  const auto fam = build_dense_family(d, s, Point{0, 0}, 2, 2);
  EXPECT_EQ(kind_of([&] { separability_probe(*fam.base, fam, Exponent::infinity(), 0.1); }),
            ErrorKind::invalid_argument);
}

TEST(VerifyProperties, ConstantClosure) { EXPECT_TRUE(check_constant_closure(5).passed); }
