#pragma once

#include "hopflab/ambient.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// The cohomogeneity-two polar actions on CP^2 and CH^2, given by commuting
// infinitesimal isometries (3x3 matrices G with G^* H + H G = 0) together with
// one totally geodesic totally real section.

namespace hopflab::actions {

enum class ActionLabel { Cp2Torus, Ch2Torus, Ch2G0, Ch2K0G2a, Ch2LineG2a };

std::string_view label_name(ActionLabel label) noexcept;
std::optional<ActionLabel> parse_label(std::string_view name) noexcept;
std::span<const ActionLabel> all_labels() noexcept;
// Default curvature used when none is given: +4 for the projective action, -4 otherwise.
double default_curvature(ActionLabel label) noexcept;

inline constexpr double kRegularityThreshold = 1e-10;
inline constexpr double kNormalityTol = 1e-8;

struct PolarActionSpec {
  ActionLabel label;
  ambient::SpaceForm ambient;
  std::vector<CMat3> generators;
  ambient::SectionChart section;
  std::string description;
};

int action_table_version();
PolarActionSpec polar_action(ActionLabel label, double c);
PolarActionSpec polar_action(ActionLabel label);

CMat3 group_element(const PolarActionSpec& spec, double s1, double s2);
ambient::AmbientPoint act(const PolarActionSpec& spec, double s1, double s2,
                          const ambient::AmbientPoint& p);
ambient::AmbientTangent push_forward(const PolarActionSpec& spec, double s1, double s2,
                                     const ambient::AmbientTangent& v);

ambient::AmbientTangent killing_field(const PolarActionSpec& spec, std::size_t index,
                                      const ambient::AmbientPoint& p);
Mat2 killing_gram(const PolarActionSpec& spec, const ambient::AmbientPoint& p);
bool is_regular(const PolarActionSpec& spec, const ambient::AmbientPoint& p,
                double threshold = kRegularityThreshold);
bool is_regular_model(const PolarActionSpec& spec, const Vec3& x,
                      double threshold = kRegularityThreshold);

struct OrbitData {
  ambient::AmbientPoint point;
  std::array<ambient::AmbientTangent, 2> tangent_basis;
  ambient::AmbientTangent normal;
  // Shape operator of the orbit with respect to normal, in tangent_basis.
  Mat2 shape;
  ambient::AmbientTangent mean_curvature_vector;
  // Orbit principal curvatures (alpha >= beta) and their unit directions.
  Vec2 principal;
  std::array<ambient::AmbientTangent, 2> principal_directions;
  // Norms of the projections of J(normal) onto the principal directions.
  Vec2 hopf_components;
  double gram_determinant;
};

OrbitData orbit_shape_operator(const PolarActionSpec& spec, const ambient::AmbientPoint& p,
                               const ambient::AmbientTangent& xi);
// Variant that skips the mean curvature vector (used inside ODE right-hand sides).
OrbitData orbit_shape_operator_fast(const PolarActionSpec& spec, const ambient::AmbientPoint& p,
                                    const ambient::AmbientTangent& xi);

// Mean curvature vector of the orbit through the section point with chart
// coordinates u, as an ambient tangent and as a model vector.
ambient::AmbientTangent mean_curvature_field(const PolarActionSpec& spec, const Vec2& u);
Vec3 mean_curvature_model(const PolarActionSpec& spec, const Vec3& x);

// Hopf obstruction at the section point x for the unit model tangent w.
double phi_map_model(const PolarActionSpec& spec, const Vec3& x, const Vec3& w);
double phi_map(const PolarActionSpec& spec, const ambient::AmbientPoint& p,
               const ambient::AmbientTangent& w);

struct HopfDirectionScan {
  Vec3 point;
  std::vector<double> angles;
  std::vector<double> profile;
  std::vector<double> zero_angles;
  std::vector<Vec3> zero_directions;
  std::vector<double> zero_values;
  double max_abs = 0.0;
};

// Samples the obstruction on the unit circle of the section tangent plane
// (angle measured from the radial parallel frame) and refines every sign
// change by bisection.
HopfDirectionScan scan_hopf_directions(const PolarActionSpec& spec, const Vec3& x, int n_samples,
                                       double tol);
std::vector<ambient::AmbientTangent> hopf_directions(const PolarActionSpec& spec,
                                                     const ambient::AmbientPoint& p,
                                                     int n_samples, double tol);

}  // namespace hopflab::actions
