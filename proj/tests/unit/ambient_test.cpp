#include "support.hpp"

#include <gtest/gtest.h>

namespace hopflab {
namespace {

using ambient::AmbientTangent;
using testing::Rng;

class AmbientCurvature : public ::testing::TestWithParam<double> {};

TEST_P(AmbientCurvature, HolomorphicAndTotallyRealPlanes) {
  const ambient::SpaceForm space(GetParam());
  const double c = space.c();
  Rng rng(11);
  for (int k = 0; k < 30; ++k) {
    const AmbientTangent x = testing::unit_tangent(space, testing::random_point(space, rng), rng);
    const AmbientTangent jx = ambient::complex_structure(x);
    const AmbientTangent y = testing::orthonormal_partner(space, x, rng, true);
    EXPECT_NEAR(ambient::curvature_form(space, x, jx, jx, x), c, 1e-10 * std::abs(c));
    EXPECT_NEAR(ambient::curvature_form(space, x, y, y, x), c / 4.0, 1e-10 * std::abs(c));
  }
}

// Any plane: K = c/4 (1 + 3 <JX, Y>^2), checked against the distance oracle.
TEST_P(AmbientCurvature, MatchesDistanceExpansionOnArbitraryPlanes) {
  const ambient::SpaceForm space(GetParam());
  const double c = space.c();
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const AmbientTangent x = testing::unit_tangent(space, testing::random_point(space, rng), rng);
    const AmbientTangent y = testing::orthonormal_partner(space, x, rng, false);
    const double tensor = ambient::curvature_form(space, x, y, y, x);
    const double mixing = ambient::metric(space, ambient::complex_structure(x), y);
    EXPECT_NEAR(tensor, c / 4.0 * (1.0 + 3.0 * mixing * mixing), 1e-9 * std::abs(c));
    const double t = 1e-2 * space.radius();
    EXPECT_NEAR(testing::distance_sectional(space, x, y, t), tensor, 1e-3 * std::abs(c));
  }
}

TEST_P(AmbientCurvature, DistanceOracleConvergesQuadratically) {
  const ambient::SpaceForm space(GetParam());
  Rng rng(13);
  const AmbientTangent x = testing::unit_tangent(space, testing::random_point(space, rng), rng);
  const AmbientTangent jx = ambient::complex_structure(x);
  const double t = 2e-2 * space.radius();
  const double coarse = std::abs(testing::distance_sectional(space, x, jx, t) - space.c());
  const double fine = std::abs(testing::distance_sectional(space, x, jx, t / 2.0) - space.c());
  EXPECT_NEAR(coarse / fine, 4.0, 0.2);
}

TEST_P(AmbientCurvature, ExponentialMapRealisesDistance) {
  const ambient::SpaceForm space(GetParam());
  Rng rng(14);
  for (int k = 0; k < 20; ++k) {
    const ambient::AmbientPoint p = testing::random_point(space, rng);
    const AmbientTangent v = testing::unit_tangent(space, p, rng);
    const double t = rng.uniform(0.05, 1.2) * space.radius();
    EXPECT_NEAR(ambient::distance(space, p, ambient::exp_map(space, p, v, t)), t, 1e-10 * space.radius());
    EXPECT_NEAR(ambient::norm(space, ambient::geodesic_velocity(space, p, v, t)), 1.0, 1e-12);
  }
}

TEST_P(AmbientCurvature, ComplexStructureIsParallelAndIsometric) {
  const ambient::SpaceForm space(GetParam());
  Rng rng(15);
  for (int k = 0; k < 10; ++k) {
    const ambient::AmbientPoint p = testing::random_point(space, rng);
    const AmbientTangent v = testing::unit_tangent(space, p, rng);
    const AmbientTangent w = testing::unit_tangent(space, p, rng);
    EXPECT_NEAR(ambient::metric(space, ambient::complex_structure(v), ambient::complex_structure(w)),
                ambient::metric(space, v, w), 1e-12);
    EXPECT_NEAR(ambient::metric(space, ambient::complex_structure(v), v), 0.0, 1e-12);
    const ambient::CurveFn curve = [&](double t) { return ambient::exp_map(space, p, v, t); };
    const ambient::FieldFn jvel = [&](double t) {
      return ambient::complex_structure(ambient::geodesic_velocity(space, p, v, t));
    };
    EXPECT_LT(ambient::norm(space, ambient::covariant_derivative(space, curve, jvel, 0.4 * space.radius(), 1e-4)), 1e-6);
  }
}

INSTANTIATE_TEST_SUITE_P(SpaceForms, AmbientCurvature, ::testing::Values(4.0, -4.0, 1.3, -0.7));

TEST(Ambient, ComplexFrameIsUnitaryAndAdapted) {
  const ambient::SpaceForm space(-4.0);
  Rng rng(16);
  const ambient::AmbientPoint p = testing::random_point(space, rng);
  const auto frame = ambient::complex_frame(space, p);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(ambient::metric(space, frame[i], frame[j]), i == j ? 1.0 : 0.0, 1e-12);
  }
  EXPECT_NEAR(ambient::metric(space, ambient::complex_structure(frame[0]), frame[1]), 1.0, 1e-12);
}

TEST(Ambient, RejectsInvalidInput) {
  try {
    ambient::SpaceForm bad(0.0);
    FAIL() << "zero curvature accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  const ambient::SpaceForm hyperbolic(-4.0);
  try {
    ambient::make_point(hyperbolic, CVec3(0.0, 1.0, 0.0));
    FAIL() << "point outside the ball accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  Rng rng(17);
  const AmbientTangent v = testing::unit_tangent(hyperbolic, testing::random_point(hyperbolic, rng), rng);
  const AmbientTangent w = testing::unit_tangent(hyperbolic, testing::random_point(hyperbolic, rng), rng);
  try {
    ambient::metric(hyperbolic, v, w);
    FAIL() << "tangents at different points paired";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BaseMismatch);
  }
}

TEST(Ambient, SectionChartRejectsComplexPlanes) {
  const ambient::SpaceForm space(4.0);
  const ambient::AmbientPoint origin = ambient::make_point(space, CVec3::UnitX());
  const auto frame = ambient::complex_frame(space, origin);
  try {
    ambient::section_chart(space, origin, frame[0], frame[1]);
    FAIL() << "complex plane accepted as a section";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTotallyReal);
  }
  const ambient::SectionChart chart = ambient::section_chart(space, origin, frame[0], frame[2]);
  const Vec2 u(0.3, -0.2);
  const Vec3 x = chart.model_point(u);
  EXPECT_LT((chart.coordinates(x) - u).norm(), 1e-12);
  EXPECT_NEAR(ambient::distance(space, chart.origin(), chart.point(u)), u.norm(), 1e-12);
}

}  // namespace
}  // namespace hopflab
