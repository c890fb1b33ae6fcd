#include "support.hpp"

#include "hopflab/constructor.hpp"

#include <gtest/gtest.h>

namespace hopflab {
namespace {

using actions::ActionLabel;
using constructor::CurveLaw;

TEST(Sigma, GeodesicLawTracesModelGeodesicsAtFourthOrder) {
  const auto spec = actions::polar_action(ActionLabel::Ch2Torus);
  const auto launch = constructor::make_launch(spec);
  const Vec3 exact = spec.section.model_exp(launch.point, launch.direction, 0.4);
  double errors[3];
  for (int k = 0; k < 3; ++k) {
    const auto g = constructor::integrate_sigma(spec, launch.point, launch.direction, CurveLaw::geodesic(), 0.1 / (1 << k), 4 << k);
    errors[k] = (g.samples().back().x - exact).norm();
  }
  EXPECT_NEAR(errors[0] / errors[1], 16.0, 2.0);
  EXPECT_NEAR(errors[1] / errors[2], 16.0, 2.0);
}

TEST(Sigma, SamplesStayUnitSpeedOnTheModel) {
  const auto spec = actions::polar_action(ActionLabel::Cp2Torus);
  const auto launch = constructor::make_launch(spec);
  const auto sigma = constructor::integrate_sigma(spec, launch.point, launch.direction, CurveLaw::cmc(0.5), 1e-3, 80, 80);
  ASSERT_EQ(sigma.samples().size(), 161u);
  const auto& h = spec.ambient;
  for (const auto& s : sigma.samples()) {
    EXPECT_NEAR(h.real_form(s.x, s.x), h.kappa(), 1e-12);
    EXPECT_NEAR(h.real_form(s.v, s.v), 1.0, 1e-12);
    EXPECT_NEAR(h.real_form(s.x, s.v), 0.0, 1e-12);
    EXPECT_NEAR(s.curvature, sigma.law().evaluate(s.orbit), 1e-9);
  }
  EXPECT_DOUBLE_EQ(sigma.t_min(), -0.08);
  // Hermite interpolation reproduces the nodes.
  const auto& mid = sigma.samples()[100];
  EXPECT_LT((sigma.position(mid.t) - mid.x).norm(), 1e-14);
}

TEST(Sigma, ReversedLaunchNeedsOppositeMeanCurvature) {
  const auto spec = actions::polar_action(ActionLabel::Ch2G0);
  const auto launch = constructor::make_launch(spec);
  const auto back = constructor::integrate_sigma(spec, launch.point, launch.direction, CurveLaw::cmc(1.0), 1e-3, 0, 40);
  const auto flipped = constructor::integrate_sigma(spec, launch.point, -launch.direction, CurveLaw::cmc(-1.0), 1e-3, 40, 0);
  const auto same = constructor::integrate_sigma(spec, launch.point, -launch.direction, CurveLaw::cmc(1.0), 1e-3, 40, 0);
  EXPECT_LT((back.position(-0.04) - flipped.position(0.04)).norm(), 1e-12);
  EXPECT_GT((back.position(-0.04) - same.position(0.04)).norm(), 1e-5);
}

TEST(Launch, SingularPointsAreRejected) {
  const auto spec = actions::polar_action(ActionLabel::Cp2Torus);
  try {
    constructor::make_launch(spec, Vec2(0.0, 0.0));
    FAIL() << "fixed point accepted as a launch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularOrbit);
  }
}

TEST(Launch, DefaultAngleAvoidsHopfDirections) {
  for (ActionLabel l : actions::all_labels()) {
    const auto spec = actions::polar_action(l);
    const auto launch = constructor::make_launch(spec);
    const auto frame = spec.section.tangent_frame(launch.point);
    EXPECT_LT((launch.direction - (std::cos(launch.angle) * frame[0] + std::sin(launch.angle) * frame[1])).norm(), 1e-12);
    EXPECT_GT(std::abs(actions::phi_map_model(spec, launch.point, launch.direction)), 0.1);
  }
}

TEST(Construction, CmcPatchCertifiesWithTargetMeanCurvature) {
  const auto spec = actions::polar_action(ActionLabel::Ch2K0G2a);
  const auto launch = constructor::make_launch(spec);
  const auto sigma = constructor::integrate_sigma(spec, launch.point, launch.direction, CurveLaw::cmc(1.0), 1e-3, 100, 100);
  const auto ehs = constructor::build_hypersurface(spec, sigma);
  constructor::CertifyOptions options;
  options.grid = {8, 3, 3};
  const auto cert = constructor::strongly_2hopf_certify(ehs, options);
  EXPECT_TRUE(cert.passed) << cert.failing;
  EXPECT_NEAR(cert.classification.mean_curvature, 1.0, 1e-3);
  EXPECT_LT(cert.residuals.at("leaf_curvature_intrinsic_max"), 1e-3);

  const auto& box = ehs.patch.box();
  const auto eq = constructor::equidistance_spot_check(ehs, box.lower[0] + 0.01, box.upper[0] - 0.01, 6);
  EXPECT_EQ(eq.failures, 0);
  EXPECT_LT(eq.spread, 1e-6);
  EXPECT_GT(eq.mean, 0.0);
}

TEST(Construction, CombinedLeviFlatCmcRejectsNonminimalCase) {
  const auto spec = actions::polar_action(ActionLabel::Cp2Torus);
  const auto launch = constructor::make_launch(spec);
  const auto sigma = constructor::integrate_sigma(spec, launch.point, launch.direction, CurveLaw::cmc(1.0), 1e-3, 100, 100);
  const auto report = constructor::levi_flat_cmc_certify(constructor::build_hypersurface(spec, sigma));
  EXPECT_FALSE(report.passed);
  EXPECT_FALSE(report.failing.empty());
}

TEST(Austere, NoCurveForTheK0Action) {
  const auto result = constructor::austere_search(actions::polar_action(ActionLabel::Ch2K0G2a));
  EXPECT_TRUE(result.curves.empty());
}

TEST(Austere, LineActionGivesLohnherr) {
  const auto result = constructor::austere_search(actions::polar_action(ActionLabel::Ch2LineG2a));
  ASSERT_FALSE(result.curves.empty());
  for (const auto& curve : result.curves) {
    EXPECT_EQ(curve.family, "lohnherr");
    EXPECT_LT(curve.alignment_residual, 1e-6);
  }
}

}  // namespace
}  // namespace hopflab
