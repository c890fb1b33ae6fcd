#pragma once

#include "hopflab/actions.hpp"
#include "hopflab/hypersurface.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

// Equivariant hypersurfaces H.sigma: a curve sigma in the section with
// prescribed geodesic curvature, swept by the two-parameter group.

namespace hopflab::constructor {

enum class LawKind { Geodesic, Cmc, LeviFlat, AusterePregeodesic };

std::string_view law_name(LawKind kind) noexcept;
std::optional<LawKind> parse_law(std::string_view name) noexcept;

struct CurveLaw {
  LawKind kind = LawKind::Geodesic;
  double eta = 0.0;

  static CurveLaw geodesic() { return {LawKind::Geodesic, 0.0}; }
  static CurveLaw cmc(double eta) { return {LawKind::Cmc, eta}; }
  static CurveLaw levi_flat() { return {LawKind::LeviFlat, 0.0}; }
  static CurveLaw austere_pregeodesic() { return {LawKind::AusterePregeodesic, 0.0}; }

  // Target curvature of sigma with respect to xi, from the shape operator of
  // the orbit through sigma(t) in the direction xi.
  //   Cmc:      eta - alpha - beta
  //   LeviFlat: -b^2 alpha - a^2 beta  (= -<S J sigma', J sigma'>)
  //   others:   0
  double evaluate(const actions::OrbitData& orbit) const;
};

inline constexpr double kDefaultStep = 1e-3;

struct SigmaSample {
  double t = 0.0;
  // Model-space position, unit velocity, unit normal rotate(x, v) and
  // acceleration of the curve in the section.
  Vec3 x, v, xi, acceleration;
  double curvature = 0.0;
  actions::OrbitData orbit;
};

class SigmaCurve {
 public:
  SigmaCurve() = default;
  SigmaCurve(std::vector<SigmaSample> samples, double step, CurveLaw law);

  const std::vector<SigmaSample>& samples() const noexcept { return samples_; }
  double step() const noexcept { return step_; }
  const CurveLaw& law() const noexcept { return law_; }
  double t_min() const;
  double t_max() const;
  bool empty() const noexcept { return samples_.empty(); }

  bool truncated = false;
  std::string truncation_reason;

  // C^2 quintic Hermite interpolation of position and velocity between samples.
  Vec3 position(double t) const;
  Vec3 velocity(double t) const;

 private:
  std::vector<SigmaSample> samples_;
  double step_ = kDefaultStep;
  CurveLaw law_;
};

// Integrates sigma'' = -(h(v,v)/kappa) x + gamma(x, v) rotate(x, v) in the
// real model of the section with classical RK4 and per-step renormalization,
// n_forward steps forward and n_backward steps backward from t = 0.
// Integration stops with a truncation marker when the curve reaches a
// singular orbit.
SigmaCurve integrate_sigma(const actions::PolarActionSpec& spec, const Vec3& x0, const Vec3& w0,
                           const CurveLaw& law, double step, int n_forward, int n_backward = 0);

// Right-hand side used by integrate_sigma: target curvature at (x, v).
double law_curvature(const actions::PolarActionSpec& spec, const CurveLaw& law, const Vec3& x,
                     const Vec3& v);

// Initial condition of sigma in chart coordinates: the point u (model_point)
// and the angle of the unit velocity in the chart tangent frame at u.
struct Launch {
  Vec2 chart;
  double angle = 0.0;
  Vec3 point;
  Vec3 direction;
};

// Chart point used when none is given, as a fraction of the ambient radius.
inline constexpr double kDefaultLaunchU = 0.3;
inline constexpr double kDefaultLaunchV = 0.45;

// Resolves a launch. Without an angle, the velocity is chosen where the Hopf
// obstruction is largest in absolute value on a 720-sample circle, which keeps
// it as far as the sampling allows from the Hopf directions.
Launch make_launch(const actions::PolarActionSpec& spec, const std::optional<Vec2>& chart = std::nullopt,
                   std::optional<double> angle = std::nullopt);

struct BuildOptions {
  double s_extent = 0.2;
  // Room kept between the parameter box and the end of sigma for stencils.
  double t_margin = 0.03;
  double diff_step = hypersurface::kDefaultJetStep;
  double frame_step = hypersurface::kDefaultFrameStep;
  int injectivity_grid = 5;
  double injectivity_tol = 1e-6;
};

struct EquivariantHypersurface {
  actions::PolarActionSpec spec;
  std::shared_ptr<const SigmaCurve> sigma;
  hypersurface::HypersurfacePatch patch;
  BuildOptions options;
};

EquivariantHypersurface build_hypersurface(const actions::PolarActionSpec& spec, const SigmaCurve& sigma,
                                           const BuildOptions& options = {});

struct CertifyOptions {
  std::array<int, 3> grid{20, 5, 5};
  hypersurface::Tolerances tolerances;
  int leaf_points = 5;
  double leaf_curvature_tol = 1e-3;
  double totally_real_tol = 1e-6;
  double orbit_tangency_tol = 1e-6;
  double geodesic_tol = 1e-4;
  double orbit_spectrum_tol = 1e-5;
};

struct CertificationReport {
  bool passed = false;
  // Name of the first failing check, empty on success.
  std::string failing;
  hypersurface::ClassificationReport classification;
  hypersurface::ParameterBox box;
  std::map<std::string, double> residuals;
};

CertificationReport strongly_2hopf_certify(const EquivariantHypersurface& ehs,
                                           const CertifyOptions& options = {});

// Gaussian curvature of the orbit leaf through the patch point q, from the
// Gauss equation with the orbit's second fundamental form.
double leaf_curvature_extrinsic(const EquivariantHypersurface& ehs, const hypersurface::Params& q);
// Same quantity from finite differences of the leaf metric in (s1, s2).
double leaf_curvature_intrinsic(const EquivariantHypersurface& ehs, const hypersurface::Params& q,
                                double step = 2e-2);
// |<J E1, E2>| for an orthonormal basis of the leaf tangent plane.
double leaf_totally_real_defect(const EquivariantHypersurface& ehs, const hypersurface::Params& q);
// |nabla-bar_A A - gamma xi| along the integral curve of A through q.
double a_curve_geodesic_residual(const EquivariantHypersurface& ehs, const hypersurface::Params& q,
                                 const hypersurface::Tolerances& tol = {});

struct EquidistanceReport {
  std::vector<double> distances;
  std::vector<bool> converged;
  double spread = 0.0;
  double mean = 0.0;
  int failures = 0;
};

EquidistanceReport equidistance_spot_check(const EquivariantHypersurface& ehs, double t1, double t2,
                                           int n_points);

struct CombinedLawReport {
  double levi_max = 0.0;
  double mean_curvature = 0.0;
  double mean_curvature_spread = 0.0;
  // Deviations max |gamma - eta/4|, max |alpha + beta - 3 eta/4| and
  // max |a - b| over the points with h = 2, eta being the mean curvature.
  double gamma_max = 0.0;
  double alpha_plus_beta_max = 0.0;
  double a_minus_b_max = 0.0;
  bool levi_flat = false;
  bool cmc = false;
  bool passed = false;
  std::string failing;
};

// Checks a patch against the combined Levi-flat and constant mean curvature
// conditions and the relations they force: gamma = eta/4, alpha + beta =
// 3 eta/4 and, in the minimal case, a = b.
CombinedLawReport levi_flat_cmc_certify(const EquivariantHypersurface& ehs,
                                        const std::array<int, 3>& grid = {10, 3, 3},
                                        const hypersurface::Tolerances& tol = {});

struct AustereSearchOptions {
  int grid = 25;
  // Half-width of the chart square, in units of the curvature radius.
  double extent = 0.0;
  double line_half_length = 0.3;
  int line_samples = 31;
  double alignment_tol = 1e-6;
  double mean_zero_tol = 1e-8;
  double curve_step = kDefaultStep;
  int curve_steps = 150;
};

struct AustereCurve {
  // "clifford_cone", "lohnherr" or "bisector".
  std::string family;
  SigmaCurve sigma;
  // Normal of the line in the real model (h(normal, x) = 0 on the line).
  Vec3 line_normal;
  double alignment_residual = 0.0;
  double alpha = 0.0;
  // Index of the fixed point e_k the line passes through, or -1.
  int vertex = -1;
};

struct AustereSearchResult {
  std::vector<AustereCurve> curves;
  int lines_found = 0;
  std::map<std::string, int> family_counts;
  bool zero_locus = false;
};

AustereSearchResult austere_search(const actions::PolarActionSpec& spec,
                                   const AustereSearchOptions& options = {});

}  // namespace hopflab::constructor
