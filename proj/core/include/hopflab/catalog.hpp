#pragma once

#include "hopflab/actions.hpp"
#include "hopflab/constructor.hpp"
#include "hopflab/hypersurface.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Reference hypersurfaces with known geometry, each given as a parametrized
// patch together with the classification it is expected to produce.

namespace hopflab::catalog {

struct ExpectedClassification {
  std::optional<int> h;
  std::optional<bool> hopf, strongly_two_hopf, austere, levi_flat, ruled, cmc;
  std::optional<double> mean_curvature;
  // Principal curvatures in descending order, when known in closed form.
  std::vector<double> spectrum;
};

struct CatalogEntry {
  std::string name;
  ambient::SpaceForm ambient;
  std::map<std::string, double> parameters;
  hypersurface::HypersurfacePatch patch;
  ExpectedClassification expected;
  // Grid used by the tests and the CLI when none is given.
  std::array<int, 3> grid{6, 4, 4};
};

// Names of the expectations that the report violates (empty when all hold).
// Spectrum entries are compared against the grid extremes with spectrum_tol.
std::vector<std::string> expectation_mismatches(const ExpectedClassification& expected,
                                                const hypersurface::ClassificationReport& report,
                                                double spectrum_tol = 1e-4, double mean_tol = 1e-3);

// Distance sphere of radius r around center, swept by the unit tangent
// directions at the center. Requires 0 < r < pi/sqrt(c) when c > 0.
CatalogEntry geodesic_sphere(const ambient::SpaceForm& space, const ambient::AmbientPoint& center, double r);

// Orbit of the origin under the three-dimensional nilpotent group fixing a
// point at infinity. Requires c < 0.
CatalogEntry horosphere(const ambient::SpaceForm& space);

// Tube of radius r around the totally geodesic totally real plane (RP^2 or RH^2).
CatalogEntry tube_real_plane(const ambient::SpaceForm& space, double r);

// Tube of radius r around the totally geodesic complex line {z2 = 0}. Requires c < 0.
CatalogEntry tube_complex_line(const ambient::SpaceForm& space, double r);

// Sweep of a geodesic of the section by the line action. Requires c < 0.
CatalogEntry lohnherr(double c);

// Equidistant locus of p1 and p2, as the union of the complex slices through
// the real spine. Requires c < 0 and p1 != p2.
CatalogEntry bisector(const ambient::SpaceForm& space, const ambient::AmbientPoint& p1,
                      const ambient::AmbientPoint& p2);
CatalogEntry bisector(double c, double separation = 1.0);

// Cone of geodesic rays from the torus-fixed point e_vertex over the minimal
// torus orbit; the vertex itself is excluded from the box.
CatalogEntry clifford_cone(const ambient::SpaceForm& space, int vertex);
CatalogEntry clifford_cone(const ambient::SpaceForm& space, const ambient::AmbientPoint& vertex);

// Ruled hypersurface over a generic curve: the union of the totally geodesic
// complex lines orthogonal to the curve. Has h = 2 with three distinct
// principal curvatures and non-constant spectrum.
CatalogEntry ruled_fixture(const ambient::SpaceForm& space);

std::vector<std::string> catalog_names();

// Builds a catalog entry by its CLI name; recognised parameters are "c" and
// "r" (radius for spheres and tubes, separation for bisectors).
CatalogEntry by_name(std::string_view name, const std::map<std::string, double>& parameters = {});

}  // namespace hopflab::catalog
