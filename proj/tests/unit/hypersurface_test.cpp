#include "support.hpp"

#include "hopflab/catalog.hpp"
#include "hopflab/hypersurface.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

namespace hopflab {
namespace {

using hypersurface::Params;

// Largest deviation of the patch spectrum from the closed form, allowing the
// global sign flip that comes with the choice of unit normal.
double spectrum_deviation(const catalog::CatalogEntry& entry, std::vector<double> expected) {
  std::sort(expected.begin(), expected.end(), std::greater<>());
  std::vector<double> flipped;
  for (double v : expected) flipped.push_back(-v);
  std::sort(flipped.begin(), flipped.end(), std::greater<>());
  double worst = 0.0;
  for (const Params& q : hypersurface::grid_points(entry.patch.box(), {3, 3, 3})) {
    const Vec3 values = hypersurface::shape_operator(entry.patch, q).spectrum.values;
    double plain = 0.0, minus = 0.0;
    for (int k = 0; k < 3; ++k) {
      plain = std::max(plain, std::abs(values[k] - expected[k]));
      minus = std::max(minus, std::abs(values[k] - flipped[k]));
    }
    worst = std::max(worst, std::min(plain, minus));
  }
  return worst;
}

TEST(ClosedFormSpectra, GeodesicSphereInProjectivePlane) {
  const double r = 0.4;
  const ambient::SpaceForm space(4.0);
  const auto entry = catalog::geodesic_sphere(space, ambient::make_point(space, CVec3::UnitX()), r);
  EXPECT_LT(spectrum_deviation(entry, {2.0 / std::tan(2 * r), 1.0 / std::tan(r), 1.0 / std::tan(r)}), 1e-6);
}

// The usual closed form is stated for tubes of radius rho around the focal
// quadric; the tube at distance r from the real plane has rho = pi/4 - r.
TEST(ClosedFormSpectra, TubeAroundRealProjectivePlane) {
  const double r = 0.3;
  const double rho = std::numbers::pi / 4.0 - r;
  const double x = rho - std::numbers::pi / 4.0;
  const auto entry = catalog::tube_real_plane(ambient::SpaceForm(4.0), r);
  EXPECT_LT(spectrum_deviation(entry, {2.0 / std::tan(2 * rho), 1.0 / std::tan(x), -std::tan(x)}), 1e-6);
  // For a unit representative z, cos 2d = |z . z| where d is the distance to the real plane.
  for (const Params& q : hypersurface::grid_points(entry.patch.box(), {2, 2, 2})) {
    const CVec3 z = entry.patch.point(q).rep.normalized();
    EXPECT_NEAR(0.5 * std::acos(std::abs(z.cwiseProduct(z).sum())), r, 1e-12);
  }
}

TEST(ClosedFormSpectra, TubeAroundComplexHyperbolicLine) {
  const double r = 0.5;
  const auto entry = catalog::tube_complex_line(ambient::SpaceForm(-4.0), r);
  EXPECT_LT(spectrum_deviation(entry, {2.0 / std::tanh(2 * r), std::tanh(r), std::tanh(r)}), 1e-6);
}

TEST(ClosedFormSpectra, Horosphere) {
  EXPECT_LT(spectrum_deviation(catalog::horosphere(ambient::SpaceForm(-4.0)), {2.0, 1.0, 1.0}), 1e-6);
}

// Geodesic sphere points really lie at the prescribed distance from the centre.
TEST(Catalog, SpherePointsAreEquidistantFromTheCentre) {
  const ambient::SpaceForm space(4.0);
  const ambient::AmbientPoint centre = ambient::make_point(space, CVec3(1.0, 0.2, -0.1));
  const auto entry = catalog::geodesic_sphere(space, centre, 0.7);
  for (const Params& q : hypersurface::grid_points(entry.patch.box(), {3, 3, 3})) {
    EXPECT_NEAR(ambient::distance(space, entry.patch.point(q), centre), 0.7, 1e-12);
  }
}

TEST(Catalog, BisectorPointsAreEquidistant) {
  const ambient::SpaceForm space(-4.0);
  const ambient::AmbientPoint p1 = ambient::make_point(space, CVec3(1.0, 0.3, 0.0));
  const ambient::AmbientPoint p2 = ambient::make_point(space, CVec3(1.0, -0.1, cplx(0.2, 0.1)));
  const auto entry = catalog::bisector(space, p1, p2);
  for (const Params& q : hypersurface::grid_points(entry.patch.box(), {3, 3, 3})) {
    const auto p = entry.patch.point(q);
    EXPECT_NEAR(ambient::distance(space, p, p1), ambient::distance(space, p, p2), 1e-10);
  }
}

TEST(Catalog, EveryEntryMeetsItsExpectations) {
  for (const std::string& name : catalog::catalog_names()) {
    const auto entry = catalog::by_name(name);
    const auto report = hypersurface::classify(entry.patch, hypersurface::grid_points(entry.patch.box(), entry.grid));
    EXPECT_TRUE(catalog::expectation_mismatches(entry.expected, report).empty()) << name;
  }
  EXPECT_THROW(catalog::by_name("no-such-entry"), Error);
}

TEST(Classification, FlagImplicationsHoldOnTheCatalog) {
  const hypersurface::Tolerances tol;
  for (const std::string& name : catalog::catalog_names()) {
    const auto entry = catalog::by_name(name);
    const auto r = hypersurface::classify(entry.patch, hypersurface::grid_points(entry.patch.box(), entry.grid), tol);
    EXPECT_TRUE(!r.strongly_two_hopf || r.two_hopf) << name;
    EXPECT_TRUE(!r.two_hopf || r.h == 2) << name;
    EXPECT_TRUE(!r.ruled || r.levi_flat) << name;
    EXPECT_TRUE(!r.hopf || !r.two_hopf) << name;
  }
}

TEST(Structure, GaussCodazziAndCorruptedControl) {
  const auto entry = catalog::by_name("ruled-fixture");
  const Params q = entry.patch.box().center();
  const auto good = hypersurface::verify_gauss_codazzi(entry.patch, q, 20, 3);
  EXPECT_LT(good.gauss, 1e-4);
  EXPECT_LT(good.codazzi, 1e-4);
  auto g = hypersurface::second_order_geometry(entry.patch, q);
  g.shape_mixed *= 1.1;
  EXPECT_GT(hypersurface::gauss_codazzi_residuals(entry.ambient, g, 20, 3).gauss, 1e-2);
  auto h = hypersurface::second_order_geometry(entry.patch, q);
  h.d_shape_mixed[0](0, 1) += 0.5;
  h.d_shape_mixed[0](1, 0) += 0.5;
  EXPECT_GT(hypersurface::gauss_codazzi_residuals(entry.ambient, h, 20, 3).codazzi, 1e-2);
}

TEST(Structure, BracketTwoRoutesAgree) {
  const auto entry = catalog::by_name("ruled-fixture");
  using FJ = hypersurface::FrameJet;
  for (const Vec3& f : {Vec3(0.3, 0.5, 0.5), Vec3(0.6, 0.4, 0.7)}) {
    const Params q = entry.patch.box().at(f);
    const FJ jet = hypersurface::frame_jet(entry.patch, q);
    for (auto [x, y] : {std::pair{FJ::kU, FJ::kV}, std::pair{FJ::kU, FJ::kAField}, std::pair{FJ::kV, FJ::kAField}}) {
      // The fixture bends more than the certified patches, so the flows use a shorter step.
      const Vec3 diff = jet.bracket(x, y) - hypersurface::flow_bracket(entry.patch, q, x, y, 5e-3);
      EXPECT_LT(std::sqrt(jet.inner(diff, diff)), 1e-5);
      const Vec3 torsion = jet.bracket(x, y) - (jet.connection(x, y) - jet.connection(y, x));
      EXPECT_LT(std::sqrt(jet.inner(torsion, torsion)), 1e-6);
    }
  }
}

TEST(Structure, GenericConnectionOnRuledFixture) {
  const auto entry = catalog::by_name("ruled-fixture");
  const auto r = hypersurface::verify_connection_formulas(entry.patch, entry.patch.box().center(),
                                                          hypersurface::ConnectionMode::Generic);
  ASSERT_FALSE(r.skipped) << r.reason;
  EXPECT_LT(r.max_residual, 1e-3);
}

TEST(Frames, AdaptedFrameIdentities) {
  const auto entry = catalog::by_name("lohnherr");
  for (const Params& q : hypersurface::grid_points(entry.patch.box(), {2, 2, 2})) {
    const auto f = hypersurface::adapted_frame(entry.patch, q);
    for (double r : f.identity_residuals) EXPECT_LT(r, 1e-6);
    EXPECT_NEAR(f.a * f.a + f.b * f.b, 1.0, 1e-10);
    EXPECT_NEAR(f.a, std::numbers::sqrt2 / 2.0, 1e-6);
  }
}

TEST(Frames, LeviFormVanishesOnLohnherrAndNotOnTheSphere) {
  const auto lohnherr = catalog::by_name("lohnherr");
  const auto ruled = hypersurface::classify(lohnherr.patch, hypersurface::grid_points(lohnherr.patch.box(), {3, 2, 2}));
  EXPECT_LT(ruled.residuals.at("levi_max"), 1e-6);
  const auto sphere = catalog::by_name("geodesic-sphere");
  const auto round = hypersurface::classify(sphere.patch, hypersurface::grid_points(sphere.patch.box(), {2, 2, 2}));
  EXPECT_GT(round.residuals.at("levi_max"), 1e-1);
}

TEST(Hypersurface, HopfRelationNeedsAHopfPoint) {
  const auto entry = catalog::by_name("lohnherr");
  try {
    hypersurface::hopf_cmc_relation_check(entry.patch, entry.patch.box().center());
    FAIL() << "relation evaluated at an h = 2 point";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(Hypersurface, DegenerateMapIsNotAnImmersion) {
  const ambient::SpaceForm space(4.0);
  const hypersurface::HypersurfacePatch flat(
      space, [](const Params& q) { return CVec3(1.0, 0.1 * q[0], 0.0); }, {});
  try {
    hypersurface::point_geometry(flat, Params(0.5, 0.5, 0.5));
    FAIL() << "rank-one map accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Immersion);
  }
}

TEST(Hypersurface, GridPointsAreCellCentred) {
  const hypersurface::ParameterBox box{Params(0, -1, 2), Params(1, 1, 4)};
  const auto grid = hypersurface::grid_points(box, {2, 4, 1});
  ASSERT_EQ(grid.size(), 8u);
  for (const Params& q : grid) EXPECT_TRUE(box.contains(q));
  EXPECT_DOUBLE_EQ(grid.front()[2], 3.0);
  double t_min = 1.0;
  for (const Params& q : grid) t_min = std::min(t_min, q[0]);
  EXPECT_DOUBLE_EQ(t_min, 0.25);
}

}  // namespace
}  // namespace hopflab
