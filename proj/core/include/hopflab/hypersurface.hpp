#pragma once

#include "hopflab/ambient.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

// Real hypersurfaces of CP^2 / CH^2 given by a three-parameter map, analysed
// through finite-difference jets: shape operator, principal curvatures, the
// adapted frame {U, V, A, xi} of a hypersurface with h = 2, classification
// predicates, and numerical checks of the structure equations.

namespace hopflab::hypersurface {

using Params = Vec3;

inline constexpr double kImmersionThreshold = 1e-10;
// Fourth-order stencils; see the decisions ledger for the choice of steps.
inline constexpr double kDefaultJetStep = 2e-3;
inline constexpr double kDefaultFrameStep = 1e-2;

struct ParameterBox {
  Params lower = Params::Zero();
  Params upper = Params::Ones();

  bool contains(const Params& q, double slack = 0.0) const;
  Params center() const { return 0.5 * (lower + upper); }
  // Affine point with the given fractions of each side (0 = lower, 1 = upper).
  Params at(const Vec3& fractions) const;
};

// Cell-centred grid with counts[i] points along parameter i.
std::vector<Params> grid_points(const ParameterBox& box, const std::array<int, 3>& counts);

class HypersurfacePatch {
 public:
  using Map = std::function<CVec3(const Params&)>;

  // orientation = +1 selects the unit normal xi for which (T1, T2, T3, xi)
  // is positively oriented with respect to the complex orientation; -1 the
  // opposite one.
  HypersurfacePatch(ambient::SpaceForm space, Map map, ParameterBox box,
                    double diff_step = kDefaultJetStep, int orientation = 1);

  const ambient::SpaceForm& space() const noexcept { return space_; }
  const Map& map() const noexcept { return map_; }
  const ParameterBox& box() const noexcept { return box_; }
  double diff_step() const noexcept { return diff_step_; }
  int orientation() const noexcept { return orientation_; }
  // Step used when differentiating frame-level quantities (Christoffel
  // symbols, adapted frame coefficients, principal curvatures).
  double frame_step() const noexcept { return frame_step_; }

  void set_frame_step(double step);
  HypersurfacePatch with_orientation(int orientation) const;

  ambient::AmbientPoint point(const Params& q) const;

 private:
  ambient::SpaceForm space_;
  Map map_;
  ParameterBox box_;
  double diff_step_;
  double frame_step_ = kDefaultFrameStep;
  int orientation_;
};

// First and second order extrinsic data at one parameter value.
struct PointGeometry {
  Params params;
  ambient::AmbientPoint point;
  std::array<CVec3, 3> tangents;
  // nabla[i][j]: ambient covariant derivative of tangent j along coordinate i.
  std::array<std::array<CVec3, 3>, 3> nabla;
  Mat3 gram;
  double gram_determinant = 0.0;
  CVec3 normal;
  // Second fundamental form in coordinates, II_ij = <nabla_i T_j, xi>.
  Mat3 second_fundamental;
  // Rows of frame_coefficients express the orthonormal frame E_a in the
  // coordinate tangents: E_a = sum_i frame_coefficients(a, i) T_i.
  Mat3 frame_coefficients;
  std::array<CVec3, 3> orthonormal;
  // Shape operator in the basis E (symmetric) and as a (1,1)-tensor in coordinates.
  Mat3 shape;
  Mat3 shape_mixed;
  double symmetry_defect = 0.0;
  // Tangential part of J in the basis E, complex_structure(a, b) = <J E_b, E_a>,
  // and the components of J xi in the same basis.
  Mat3 complex_structure;
  Vec3 hopf;
};

// Throws ErrorKind::Immersion when the Gram determinant is not above
// kImmersionThreshold.
PointGeometry point_geometry(const HypersurfacePatch& patch, const Params& q);

struct ShapeSpectrum {
  // Principal curvatures in descending order (alpha, beta, gamma slots of the
  // eigen-solver; not the adapted-frame labels).
  Vec3 values;
  std::array<ambient::AmbientTangent, 3> frames;
  // Columns: principal directions in the orthonormal basis E.
  Mat3 vectors;
  // Coordinate coefficients of each principal direction.
  std::array<Vec3, 3> coefficients;
  // cluster_of[k] = index of the eigenvalue cluster of values[k]; clusters
  // are numbered in descending order of eigenvalue.
  std::array<int, 3> cluster_of{};
  std::vector<int> multiplicities;
  double orthonormality_defect = 0.0;
  double eigen_residual = 0.0;
};

struct ShapeResult {
  ShapeSpectrum spectrum;
  ambient::AmbientTangent normal;
  PointGeometry geometry;
};

ShapeSpectrum spectrum_from_shape(const PointGeometry& geometry, double tau_mult);
ShapeResult shape_operator(const HypersurfacePatch& patch, const Params& q, double tau_mult = 1e-4);

struct HopfCount {
  int h = 0;
  // Norm of the projection of J xi onto each eigenvalue cluster.
  std::vector<double> projections;
  std::vector<double> cluster_values;
  // Smallest relative gap between distinct clusters (degeneracy indicator).
  double min_gap = 0.0;
};

HopfCount hopf_projection_count(const ShapeResult& shape, double tau_proj = 1e-4);
int hopf_projection_count(const HypersurfacePatch& patch, const Params& q, double tau_proj = 1e-4,
                          double tau_mult = 1e-4);

struct AdaptedFrame {
  ambient::AmbientTangent U, V, A, xi;
  // Coordinate coefficients of U, V, A.
  Vec3 coeff_U, coeff_V, coeff_A;
  double a = 0.0, b = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  // Residuals of J xi = aU + bV, JU = -bA - a xi, JV = aA - b xi, JA = bU - aV.
  std::array<double, 4> identity_residuals{};
};

AdaptedFrame adapted_frame(const ShapeResult& shape, double tau_proj = 1e-4);
AdaptedFrame adapted_frame(const HypersurfacePatch& patch, const Params& q, double tau_proj = 1e-4,
                           double tau_mult = 1e-4);

// L(X,Y) = <SX,Y> + <SJX,JY>; X and Y must be tangent and orthogonal to J xi.
double levi_form(const HypersurfacePatch& patch, const Params& q, const ambient::AmbientTangent& x,
                 const ambient::AmbientTangent& y);
double levi_form(const ambient::SpaceForm& space, const ShapeResult& shape,
                 const ambient::AmbientTangent& x, const ambient::AmbientTangent& y);

struct Tolerances {
  double tau_mult = 1e-4;
  double tau_proj = 1e-4;
  double integrability = 1e-5;
  double derivative = 1e-4;
  double austere = 1e-3;
  double levi = 1e-3;
  double ruled = 1e-4;
  double cmc = 1e-3;
  double spectrum = 1e-4;
  double frame = 1e-6;
};

// Christoffel symbols of the induced metric, christoffel[k](i, j) = Gamma^k_ij,
// from the tangential part of the ambient covariant derivatives.
std::array<Mat3, 3> christoffel_symbols(const ambient::SpaceForm& space, const PointGeometry& geometry);

// Adapted frame at a point together with first derivatives of its
// coordinate coefficients and of a, b, alpha, beta, gamma.
struct FrameJet {
  enum Scalar { kAlpha = 0, kBeta, kGamma, kA, kB };
  enum Field { kU = 0, kV, kAField };

  AdaptedFrame frame;
  PointGeometry geometry;
  // christoffel[k](i, j) = Gamma^k_ij.
  std::array<Mat3, 3> christoffel;
  // d_coefficients[f](k, i) = d/dq_i of the k-th coefficient of field f.
  std::array<Mat3, 3> d_coefficients;
  // d_scalars(s, i) = d/dq_i of scalar s.
  Eigen::Matrix<double, 5, 3> d_scalars;

  const Vec3& coefficients(int field) const;
  // Directional derivative of a scalar along a field.
  double derivative(int scalar, int field) const;
  // Coordinate coefficients of nabla_X Y for fields X, Y.
  Vec3 connection(int x, int y) const;
  // Coordinate coefficients of the Lie bracket [X, Y].
  Vec3 bracket(int x, int y) const;
  double inner(const Vec3& u, const Vec3& v) const;
};

FrameJet frame_jet(const HypersurfacePatch& patch, const Params& q, const Tolerances& tol = {});

// Lie bracket of two frame fields from the group commutator of their flows,
// symmetrized in the flow time and Richardson-extrapolated. Used as an
// independent route against FrameJet::bracket.
Vec3 flow_bracket(const HypersurfacePatch& patch, const Params& q, int x, int y, double epsilon,
                  const Tolerances& tol = {});

struct ClassificationReport {
  int h = 0;
  bool hopf = false;
  bool two_hopf = false;
  bool strongly_two_hopf = false;
  bool austere = false;
  bool levi_flat = false;
  bool ruled = false;
  bool cmc = false;
  double mean_curvature = 0.0;
  std::size_t grid_size = 0;
  // Every numeric quantity behind the flags.
  std::map<std::string, double> residuals;
};

ClassificationReport classify(const HypersurfacePatch& patch, const std::vector<Params>& grid,
                              const Tolerances& tol = {});

struct ResidualEntry {
  std::string name;
  double numeric = 0.0;
  double expected = 0.0;
  double residual = 0.0;
};

struct ResidualReport {
  std::string mode;
  bool skipped = false;
  std::string reason;
  std::vector<ResidualEntry> entries;
  double max_residual = 0.0;
  bool passed(double tol) const { return !skipped && max_residual < tol; }
};

enum class ConnectionMode { Auto, Generic, Strong };

// Compares the Levi-Civita connection in the adapted frame with the closed
// forms for h = 2 (Generic) or for strongly 2-Hopf hypersurfaces (Strong).
// Residuals are relative with a floor of one: |num - exp| / max(1, |exp|).
ResidualReport verify_connection_formulas(const HypersurfacePatch& patch, const Params& q,
                                          ConnectionMode mode = ConnectionMode::Auto,
                                          const Tolerances& tol = {});

// Intrinsic and extrinsic data up to first derivatives of the Christoffel
// symbols and of the shape operator, all in coordinates.
struct SecondOrderGeometry {
  PointGeometry center;
  std::array<Mat3, 3> christoffel;
  // d_christoffel[l][k](i, j) = d/dq_l Gamma^k_ij.
  std::array<std::array<Mat3, 3>, 3> d_christoffel;
  Mat3 shape_mixed;
  // d_shape_mixed[l] = d/dq_l of the (1,1) shape tensor.
  std::array<Mat3, 3> d_shape_mixed;
};

SecondOrderGeometry second_order_geometry(const HypersurfacePatch& patch, const Params& q);

struct GaussCodazziReport {
  double gauss = 0.0;
  double codazzi = 0.0;
  int probes = 0;
};

GaussCodazziReport gauss_codazzi_residuals(const ambient::SpaceForm& space,
                                           const SecondOrderGeometry& geometry, int probes,
                                           std::uint64_t seed);
GaussCodazziReport verify_gauss_codazzi(const HypersurfacePatch& patch, const Params& q,
                                        int probes = 20, std::uint64_t seed = 1);

// |2 alpha (beta + gamma) - 4 beta gamma + c| with alpha the Hopf principal
// curvature; throws ErrorKind::Precondition unless h = 1.
double hopf_cmc_relation_check(const HypersurfacePatch& patch, const Params& q,
                               const Tolerances& tol = {});

}  // namespace hopflab::hypersurface
