#include "support.hpp"

#include <gtest/gtest.h>

namespace hopflab {
namespace {

using actions::ActionLabel;
using testing::Rng;

class Action : public ::testing::TestWithParam<ActionLabel> {
 protected:
  actions::PolarActionSpec spec = actions::polar_action(GetParam());

  Vec3 regular_point(Rng& rng) const {
    const double r = spec.ambient.radius();
    for (;;) {
      const Vec2 u(rng.uniform(-0.7, 0.7) * r, rng.uniform(-0.7, 0.7) * r);
      const Vec3 x = spec.section.model_point(u);
      if (actions::is_regular_model(spec, x, 1e-4)) return x;
    }
  }
};

TEST_P(Action, GeneratorsAreCommutingIsometries) {
  const CMat3 form = spec.ambient.form_matrix();
  ASSERT_EQ(spec.generators.size(), 2u);
  for (const CMat3& g : spec.generators) EXPECT_LT((g.adjoint() * form + form * g).norm(), 1e-12);
  const CMat3& a = spec.generators[0];
  const CMat3& b = spec.generators[1];
  EXPECT_LT((a * b - b * a).norm(), 1e-12);
}

TEST_P(Action, GroupActsByIsometries) {
  Rng rng(21);
  for (int k = 0; k < 10; ++k) {
    const auto p = testing::random_point(spec.ambient, rng);
    const auto q = testing::random_point(spec.ambient, rng);
    const double s1 = rng.uniform(-1, 1), s2 = rng.uniform(-1, 1);
    EXPECT_NEAR(ambient::distance(spec.ambient, actions::act(spec, s1, s2, p), actions::act(spec, s1, s2, q)),
                ambient::distance(spec.ambient, p, q), 1e-10);
  }
}

// Killing fields against a central difference of the group action.
TEST_P(Action, KillingFieldsDifferentiateTheAction) {
  Rng rng(22);
  const auto p = testing::random_point(spec.ambient, rng);
  const double h = 1e-5;
  for (std::size_t i = 0; i < 2; ++i) {
    const double s = i == 0 ? 1.0 : 0.0;
    const auto plus = actions::act(spec, s * h, (1 - s) * h, p);
    const auto minus = actions::act(spec, -s * h, -(1 - s) * h, p);
    const ambient::AmbientTangent k = actions::killing_field(spec, i, p);
    // Compare lengths and the displacement distance; both are gauge free.
    EXPECT_NEAR(ambient::distance(spec.ambient, plus, minus) / (2 * h), ambient::norm(spec.ambient, k), 1e-6);
  }
}

TEST_P(Action, SectionMeetsOrbitsOrthogonally) {
  Rng rng(23);
  for (int k = 0; k < 20; ++k) {
    const Vec3 x = regular_point(rng);
    const auto frame = spec.section.tangent_frame(x);
    const auto e1 = spec.section.lift_tangent(x, frame[0]);
    const auto e2 = spec.section.lift_tangent(x, frame[1]);
    EXPECT_NEAR(ambient::metric(spec.ambient, ambient::complex_structure(e1), e2), 0.0, 1e-10);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto kf = actions::killing_field(spec, i, e1.base);
      EXPECT_NEAR(ambient::metric(spec.ambient, kf, e1), 0.0, 1e-10);
      EXPECT_NEAR(ambient::metric(spec.ambient, kf, e2), 0.0, 1e-10);
    }
  }
}

TEST_P(Action, HopfObstructionHasEvenStableZeros) {
  Rng rng(24);
  for (int k = 0; k < 3; ++k) {
    const Vec3 x = regular_point(rng);
    const auto coarse = actions::scan_hopf_directions(spec, x, 360, 1e-12);
    const auto fine = actions::scan_hopf_directions(spec, x, 720, 1e-12);
    EXPECT_GT(fine.max_abs, 1e-6);
    EXPECT_EQ(fine.zero_angles.size() % 2, 0u);
    EXPECT_EQ(coarse.zero_angles.size(), fine.zero_angles.size());
    for (const Vec3& w : fine.zero_directions) EXPECT_LT(std::abs(actions::phi_map_model(spec, x, w)), 1e-9);
    for (double value : fine.zero_values) EXPECT_LT(std::abs(value), 1e-9);
  }
}

TEST_P(Action, OrbitShapeOperatorIsSymmetricWithUnitHopfSplit) {
  Rng rng(25);
  for (int k = 0; k < 10; ++k) {
    const Vec3 x = regular_point(rng);
    const auto frame = spec.section.tangent_frame(x);
    const double theta = rng.uniform(0, 6.28);
    const auto xi = spec.section.lift_tangent(x, std::cos(theta) * frame[0] + std::sin(theta) * frame[1]);
    const actions::OrbitData orbit = actions::orbit_shape_operator(spec, xi.base, xi);
    EXPECT_NEAR(orbit.shape(0, 1), orbit.shape(1, 0), 1e-9);
    EXPECT_GE(orbit.principal[0], orbit.principal[1]);
    EXPECT_NEAR(orbit.hopf_components.squaredNorm(), 1.0, 1e-10);
    EXPECT_NEAR(orbit.principal.sum(), orbit.shape.trace(), 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(AllActions, Action, ::testing::ValuesIn(actions::all_labels().begin(), actions::all_labels().end()),
                         [](const auto& info) {
                           std::string name(actions::label_name(info.param));
                           for (char& ch : name) {
                             if (ch == '-') ch = '_';
                           }
                           return name;
                         });

TEST(Actions, LabelsRoundTrip) {
  for (ActionLabel l : actions::all_labels()) EXPECT_EQ(actions::parse_label(actions::label_name(l)), l);
  EXPECT_FALSE(actions::parse_label("cp3-torus").has_value());
}

TEST(Actions, CurvatureSignMustMatchTheAction) {
  EXPECT_NO_THROW(actions::polar_action(ActionLabel::Ch2G0, -1.5));
  try {
    actions::polar_action(ActionLabel::Ch2G0, 4.0);
    FAIL() << "positive curvature accepted for a hyperbolic action";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

}  // namespace
}  // namespace hopflab
