#include "hopflab/constructor.hpp"

#include "metric_helpers.hpp"

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopflab::constructor {

using ambient::AmbientTangent;
using hypersurface::Params;

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double spread() const { return hi >= lo ? hi - lo : 0.0; }
};

// Unit tangent of the hypersurface orthogonal to the orbit through the point.
CVec3 transversal_direction(const ambient::SpaceForm& space, const hypersurface::PointGeometry& g) {
  const CVec3& t0 = g.tangents[0];
  Mat2 gram;
  Vec2 rhs;
  for (int a = 0; a < 2; ++a) {
    rhs[a] = detail::inner(space, t0, g.tangents[a + 1]);
    for (int b = 0; b < 2; ++b) gram(a, b) = detail::inner(space, g.tangents[a + 1], g.tangents[b + 1]);
  }
  const Vec2 c = gram.ldlt().solve(rhs);
  CVec3 n = t0 - c[0] * g.tangents[1] - c[1] * g.tangents[2];
  return n / std::sqrt(detail::inner(space, n, n));
}

// Orthonormal basis of the orbit tangent plane.
std::array<CVec3, 2> orbit_basis(const ambient::SpaceForm& space, const hypersurface::PointGeometry& g) {
  CVec3 e1 = g.tangents[1] / std::sqrt(detail::inner(space, g.tangents[1], g.tangents[1]));
  CVec3 e2 = g.tangents[2] - detail::inner(space, g.tangents[2], e1) * e1;
  e2 /= std::sqrt(detail::inner(space, e2, e2));
  return {e1, e2};
}

}  // namespace

double leaf_curvature_extrinsic(const EquivariantHypersurface& ehs, const Params& q) {
  const auto& space = ehs.patch.space();
  const hypersurface::PointGeometry g = hypersurface::point_geometry(ehs.patch, q);
  const AmbientTangent xi{g.point, g.normal};
  const AmbientTangent nu{g.point, transversal_direction(space, g)};
  const actions::OrbitData o1 = actions::orbit_shape_operator_fast(ehs.spec, g.point, xi);
  const actions::OrbitData o2 = actions::orbit_shape_operator_fast(ehs.spec, g.point, nu);
  const AmbientTangent& e1 = o1.tangent_basis[0];
  const AmbientTangent& e2 = o1.tangent_basis[1];
  // Both shape operators are expressed in the same orbit basis.
  return ambient::curvature_form(space, e1, e2, e2, e1) + o1.shape.determinant() + o2.shape.determinant();
}

double leaf_curvature_intrinsic(const EquivariantHypersurface& ehs, const Params& q, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const auto& space = ehs.patch.space();
  const auto& map = ehs.patch.map();
  const double h = ehs.patch.diff_step();

  // Leaf metric (E, F, G) in the orbit coordinates (s1, s2) at fixed t.
  auto metric = [&](double s1, double s2) {
    std::array<CVec3, 2> tangents;
    const CVec3 z = space.normalize(map(Params(q[0], s1, s2)));
    for (int a = 0; a < 2; ++a) {
      const Vec2 e = Vec2::Unit(a) * h;
      auto at = [&](double f) { return space.normalize(map(Params(q[0], s1 + f * e[0], s2 + f * e[1]))); };
      const CVec3 d = (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * h);
      tangents[a] = space.horizontal(z, d);
    }
    return Vec3(detail::inner(space, tangents[0], tangents[0]), detail::inner(space, tangents[0], tangents[1]),
                detail::inner(space, tangents[1], tangents[1]));
  };

  const double u = q[1], v = q[2], k = step;
  const Vec3 m0 = metric(u, v);
  const Vec3 mu_p = metric(u + k, v), mu_m = metric(u - k, v);
  const Vec3 mv_p = metric(u, v + k), mv_m = metric(u, v - k);
  const Vec3 muv_pp = metric(u + k, v + k), muv_pm = metric(u + k, v - k);
  const Vec3 muv_mp = metric(u - k, v + k), muv_mm = metric(u - k, v - k);
  const Vec3 du = (mu_p - mu_m) / (2.0 * k);
  const Vec3 dv = (mv_p - mv_m) / (2.0 * k);
  const Vec3 duu = (mu_p - 2.0 * m0 + mu_m) / (k * k);
  const Vec3 dvv = (mv_p - 2.0 * m0 + mv_m) / (k * k);
  const Vec3 duv = (muv_pp - muv_pm - muv_mp + muv_mm) / (4.0 * k * k);

  const double E = m0[0], F = m0[1], G = m0[2];
  Mat3 m1;
  m1 << -0.5 * dvv[0] + duv[1] - 0.5 * duu[2], 0.5 * du[0], du[1] - 0.5 * dv[0],  //
      dv[1] - 0.5 * du[2], E, F,                                                  //
      0.5 * dv[2], F, G;
  Mat3 m2;
  m2 << 0.0, 0.5 * dv[0], 0.5 * du[2],  //
      0.5 * dv[0], E, F,                 //
      0.5 * du[2], F, G;
  const double det = E * G - F * F;
  return (m1.determinant() - m2.determinant()) / (det * det);
}

double leaf_totally_real_defect(const EquivariantHypersurface& ehs, const Params& q) {
  const auto& space = ehs.patch.space();
  const hypersurface::PointGeometry g = hypersurface::point_geometry(ehs.patch, q);
  const auto e = orbit_basis(space, g);
  return std::abs(detail::inner(space, cplx(0.0, 1.0) * e[0], e[1]));
}

double a_curve_geodesic_residual(const EquivariantHypersurface& ehs, const Params& q,
                                 const hypersurface::Tolerances& tol) {
  const auto& patch = ehs.patch;
  const auto& space = patch.space();
  constexpr double kStep = 1e-3;

  auto a_coefficients = [&](const Params& p) {
    return hypersurface::adapted_frame(patch, p, tol.tau_proj, tol.tau_mult).coeff_A;
  };
  // Integral curve of A through q in parameter space, one RK4 step each way.
  auto flow = [&](double tau) {
    const Vec3 k1 = a_coefficients(q);
    const Vec3 k2 = a_coefficients(q + 0.5 * tau * k1);
    const Vec3 k3 = a_coefficients(q + 0.5 * tau * k2);
    const Vec3 k4 = a_coefficients(q + tau * k3);
    return Params(q + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };
  const std::array<Params, 3> params{flow(-kStep), q, flow(kStep)};
  auto index = [&](double tau) { return tau < 0.0 ? 0 : (tau > 0.0 ? 2 : 1); };

  const ambient::CurveFn curve = [&](double tau) { return patch.point(params[index(tau)]); };
  const ambient::FieldFn field = [&](double tau) {
    return hypersurface::adapted_frame(patch, params[index(tau)], tol.tau_proj, tol.tau_mult).A;
  };
  const AmbientTangent acc = ambient::covariant_derivative(space, curve, field, 0.0, kStep);
  const hypersurface::AdaptedFrame f = hypersurface::adapted_frame(patch, q, tol.tau_proj, tol.tau_mult);
  const AmbientTangent xi = ambient::rebase(space, f.xi, acc.base);
  const AmbientTangent diff{acc.base, acc.vec - f.gamma * xi.vec};
  return ambient::norm(space, diff);
}

CertificationReport strongly_2hopf_certify(const EquivariantHypersurface& ehs, const CertifyOptions& options) {
  const auto& patch = ehs.patch;
  const auto& space = patch.space();
  const auto& tol = options.tolerances;
  if (options.leaf_points < 1) throw Error(ErrorKind::InvalidArgument, "leaf_points must be positive");

  CertificationReport report;
  report.box = patch.box();
  const std::vector<Params> grid = hypersurface::grid_points(patch.box(), options.grid);
  report.classification = hypersurface::classify(patch, grid, tol);
  auto& r = report.residuals;
  for (const auto& [name, value] : report.classification.residuals) r["classify." + name] = value;

  // Principal curvatures along each orbit (fixed t).
  std::map<double, std::array<Range, 3>> layers;
  for (const Params& q : grid) {
    const hypersurface::ShapeResult s = hypersurface::shape_operator(patch, q, tol.tau_mult);
    for (int k = 0; k < 3; ++k) layers[q[0]][k].add(s.spectrum.values[k]);
  }
  double orbit_spread = 0.0;
  for (const auto& [t, ranges] : layers) {
    for (const Range& range : ranges) orbit_spread = std::max(orbit_spread, range.spread());
  }
  r["orbit_spectrum_spread"] = orbit_spread;

  double tangency = 0.0, k_ext = 0.0, k_int = 0.0, totally_real = 0.0, a_geodesic = 0.0, nabla_aa = 0.0;
  bool frame_ok = true;
  for (int i = 0; i < options.leaf_points; ++i) {
    for (double sf : {0.3, 0.7}) {
      const Params q = patch.box().at(Vec3((i + 0.5) / options.leaf_points, sf, 1.0 - sf));
      k_ext = std::max(k_ext, std::abs(leaf_curvature_extrinsic(ehs, q)));
      k_int = std::max(k_int, std::abs(leaf_curvature_intrinsic(ehs, q)));
      totally_real = std::max(totally_real, leaf_totally_real_defect(ehs, q));
      try {
        const hypersurface::FrameJet jet = hypersurface::frame_jet(patch, q, tol);
        const CVec3 nu = transversal_direction(space, jet.geometry);
        const auto& f = jet.frame;
        tangency = std::max({tangency, std::abs(detail::inner(space, ambient::rebase(space, f.U, jet.geometry.point).vec, nu)),
                             std::abs(detail::inner(space, ambient::rebase(space, f.V, jet.geometry.point).vec, nu))});
        const Vec3 naa = jet.connection(hypersurface::FrameJet::kAField, hypersurface::FrameJet::kAField);
        nabla_aa = std::max(nabla_aa, std::sqrt(std::max(0.0, jet.inner(naa, naa))));
        a_geodesic = std::max(a_geodesic, a_curve_geodesic_residual(ehs, q, tol));
      } catch (const Error&) {
        frame_ok = false;
      }
    }
  }
  r["orbit_tangency_max"] = tangency;
  r["leaf_curvature_extrinsic_max"] = k_ext;
  r["leaf_curvature_intrinsic_max"] = k_int;
  r["leaf_totally_real_max"] = totally_real;
  r["a_curve_geodesic_max"] = a_geodesic;
  r["nabla_A_A_max"] = nabla_aa;
  r["box_t_min"] = report.box.lower[0];
  r["box_t_max"] = report.box.upper[0];
  r["box_s_extent"] = report.box.upper[1];

  const auto& c = report.classification;
  const std::vector<std::pair<std::string, bool>> checks = {
      {"h", c.residuals.at("h_min") == 2.0 && c.residuals.at("h_max") == 2.0},
      {"frame", frame_ok && c.residuals.at("frame_failures") == 0.0},
      {"integrability", c.residuals.at("integrability_max") < tol.integrability},
      {"d_alpha", c.residuals.at("d_alpha_max") < tol.derivative},
      {"d_beta", c.residuals.at("d_beta_max") < tol.derivative},
      {"orbit_tangency", tangency < options.orbit_tangency_tol},
      {"orbit_spectrum_spread", orbit_spread < options.orbit_spectrum_tol},
      {"leaf_curvature_extrinsic", k_ext < options.leaf_curvature_tol},
      {"leaf_curvature_intrinsic", k_int < options.leaf_curvature_tol},
      {"leaf_totally_real", totally_real < options.totally_real_tol},
      {"nabla_A_A", nabla_aa < options.geodesic_tol},
      {"a_curve_geodesic", a_geodesic < options.geodesic_tol},
  };
  report.passed = true;
  for (const auto& [name, ok] : checks) {
    if (!ok) {
      report.passed = false;
      report.failing = name;
      break;
    }
  }
  return report;
}

namespace {

struct LeafDistance {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const hypersurface::HypersurfacePatch* patch;
  ambient::AmbientPoint from;
  double t;

  int inputs() const { return 2; }
  int values() const { return 2; }
  int operator()(const Eigen::VectorXd& s, Eigen::VectorXd& f) const {
    f.resize(2);
    f[0] = ambient::distance(patch->space(), from, patch->point(Params(t, s[0], s[1])));
    f[1] = 0.0;
    return 0;
  }
};

}  // namespace

EquidistanceReport equidistance_spot_check(const EquivariantHypersurface& ehs, double t1, double t2,
                                           int n_points) {
  if (n_points < 1) throw Error(ErrorKind::InvalidArgument, "n_points must be positive");
  const auto& patch = ehs.patch;
  const auto& box = patch.box();
  for (double t : {t1, t2}) {
    if (t < box.lower[0] || t > box.upper[0]) {
      throw Error(ErrorKind::Domain, "leaf parameter lies outside the patch");
    }
  }

  EquidistanceReport report;
  Range range;
  double sum = 0.0;
  int converged = 0;
  for (int k = 0; k < n_points; ++k) {
    const double f = (k + 0.5) / n_points;
    const Vec2 s(box.lower[1] + f * (box.upper[1] - box.lower[1]),
                 box.lower[2] + (1.0 - f) * (box.upper[2] - box.lower[2]));
    if (t1 == t2) {
      // Same leaf: the distance vanishes at the point itself.
      report.distances.push_back(0.0);
      report.converged.push_back(true);
      range.add(0.0);
      ++converged;
      continue;
    }
    LeafDistance functor{&patch, patch.point(Params(t1, s[0], s[1])), t2};
    Eigen::NumericalDiff<LeafDistance, Eigen::Central> numeric(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<LeafDistance, Eigen::Central>> lm(numeric);
    lm.parameters.maxfev = 400;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    Eigen::VectorXd x(2);
    x << s[0] + 0.05, s[1] - 0.05;
    const auto status = lm.minimize(x);
    using namespace Eigen::LevenbergMarquardtSpace;
    const bool ok = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                    status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
                    status == FtolTooSmall || status == XtolTooSmall || status == GtolTooSmall;
    Eigen::VectorXd fvec(2);
    functor(x, fvec);
    report.distances.push_back(fvec[0]);
    report.converged.push_back(ok);
    if (ok) {
      range.add(fvec[0]);
      sum += fvec[0];
      ++converged;
    } else {
      ++report.failures;
    }
  }
  report.spread = range.spread();
  report.mean = converged > 0 ? sum / converged : 0.0;
  return report;
}

CombinedLawReport levi_flat_cmc_certify(const EquivariantHypersurface& ehs, const std::array<int, 3>& grid,
                                        const hypersurface::Tolerances& tol) {
  const auto& patch = ehs.patch;
  const std::vector<Params> points = hypersurface::grid_points(patch.box(), grid);

  CombinedLawReport report;
  Range trace;
  double trace_sum = 0.0;
  struct FrameValues {
    double gamma, alpha_plus_beta, a_minus_b;
  };
  std::vector<FrameValues> frames;
  int non_two = 0;
  for (const Params& q : points) {
    const hypersurface::ShapeResult shape = hypersurface::shape_operator(patch, q, tol.tau_mult);
    const double tr = shape.spectrum.values.sum();
    trace.add(tr);
    trace_sum += tr;

    const hypersurface::PointGeometry& g = shape.geometry;
    const Vec3 j = g.hopf.normalized();
    int k = 0;
    j.cwiseAbs().minCoeff(&k);
    const Vec3 x = (Vec3::Unit(k) - j[k] * j).normalized();
    const Vec3 jx = g.complex_structure * x;
    report.levi_max = std::max(report.levi_max, std::abs(x.dot(g.shape * x) + jx.dot(g.shape * jx)));

    if (hypersurface::hopf_projection_count(shape, tol.tau_proj).h == 2) {
      const hypersurface::AdaptedFrame f = hypersurface::adapted_frame(shape, tol.tau_proj);
      frames.push_back({f.gamma, f.alpha + f.beta, std::abs(f.a - f.b)});
    } else {
      ++non_two;
    }
  }
  report.mean_curvature = trace_sum / static_cast<double>(points.size());
  report.mean_curvature_spread = trace.spread();
  const double eta = report.mean_curvature;
  for (const FrameValues& f : frames) {
    report.gamma_max = std::max(report.gamma_max, std::abs(f.gamma - eta / 4.0));
    report.alpha_plus_beta_max = std::max(report.alpha_plus_beta_max, std::abs(f.alpha_plus_beta - 3.0 * eta / 4.0));
    report.a_minus_b_max = std::max(report.a_minus_b_max, f.a_minus_b);
  }
  report.levi_flat = report.levi_max < tol.levi;
  report.cmc = report.mean_curvature_spread < tol.cmc;

  const std::vector<std::pair<std::string, bool>> checks = {
      {"levi_form", report.levi_flat},
      {"mean_curvature_spread", report.cmc},
      {"h", non_two == 0},
      {"gamma", report.gamma_max < tol.cmc},
      {"alpha_plus_beta", report.alpha_plus_beta_max < tol.cmc},
      {"a_minus_b", std::abs(eta) >= tol.cmc || report.a_minus_b_max < tol.cmc},
  };
  report.passed = true;
  for (const auto& [name, ok] : checks) {
    if (!ok) {
      report.passed = false;
      report.failing = name;
      break;
    }
  }
  return report;
}

}  // namespace hopflab::constructor
