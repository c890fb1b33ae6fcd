#include "hopflab/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopflab::hypersurface {

namespace {

// Unit vector of the basis E orthogonal to the unit vector j.
Vec3 complement_direction(const Vec3& j) {
  int k = 0;
  j.cwiseAbs().minCoeff(&k);
  return (Vec3::Unit(k) - j[k] * j).normalized();
}

struct Extremes {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double spread() const { return hi >= lo ? hi - lo : 0.0; }
};

}  // namespace

ClassificationReport classify(const HypersurfacePatch& patch, const std::vector<Params>& grid,
                              const Tolerances& tol) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "classification grid is empty");
  for (const Params& q : grid) {
    if (!patch.box().contains(q, 1e-12)) {
      throw Error(ErrorKind::InvalidArgument, "grid point lies outside the parameter box");
    }
  }

  int h_min = 3, h_max = 0;
  double austere_sum = 0.0, austere_middle = 0.0, levi = 0.0, ruled = 0.0;
  double symmetry = 0.0, eigen_residual = 0.0, min_gap = std::numeric_limits<double>::infinity();
  double counted_projection_min = std::numeric_limits<double>::infinity();
  double excluded_projection_max = 0.0;
  double integrability = 0.0, d_alpha = 0.0, d_beta = 0.0, frame_identity = 0.0;
  double frame_failures = 0.0, frame_points = 0.0, hopf_balance = 0.0;
  double trace_sum = 0.0;
  Extremes trace;
  std::array<Extremes, 3> values;

  for (const Params& q : grid) {
    const ShapeResult shape = shape_operator(patch, q, tol.tau_mult);
    const HopfCount count = hopf_projection_count(shape, tol.tau_proj);
    const PointGeometry& g = shape.geometry;
    const Vec3& lambda = shape.spectrum.values;

    h_min = std::min(h_min, count.h);
    h_max = std::max(h_max, count.h);
    for (double p : count.projections) {
      if (p > tol.tau_proj) {
        counted_projection_min = std::min(counted_projection_min, p);
      } else {
        excluded_projection_max = std::max(excluded_projection_max, p);
      }
    }
    min_gap = std::min(min_gap, count.min_gap);
    symmetry = std::max(symmetry, g.symmetry_defect);
    eigen_residual = std::max(eigen_residual, shape.spectrum.eigen_residual);

    const double tr = lambda.sum();
    trace_sum += tr;
    trace.add(tr);
    for (int k = 0; k < 3; ++k) values[k].add(lambda[k]);
    austere_sum = std::max(austere_sum, std::abs(lambda[0] + lambda[2]));
    austere_middle = std::max(austere_middle, std::abs(lambda[1]));

    // Levi form and ruled residual on a unit vector X orthogonal to J xi.
    const Vec3 j = g.hopf.normalized();
    const Vec3 x = complement_direction(j);
    const Vec3 jx = g.complex_structure * x;
    levi = std::max(levi, std::abs(x.dot(g.shape * x) + jx.dot(g.shape * jx)));
    for (const Vec3& v : {x, jx}) {
      const Vec3 sv = g.shape * v;
      ruled = std::max(ruled, (sv - sv.dot(j) * j).norm());
    }

    if (count.h == 2) {
      frame_points += 1.0;
      try {
        const FrameJet jet = frame_jet(patch, q, tol);
        const Vec3 br = jet.bracket(FrameJet::kU, FrameJet::kV);
        integrability = std::max(integrability, std::abs(jet.inner(br, jet.frame.coeff_A)));
        d_alpha = std::max({d_alpha, std::abs(jet.derivative(FrameJet::kAlpha, FrameJet::kU)),
                            std::abs(jet.derivative(FrameJet::kAlpha, FrameJet::kV))});
        d_beta = std::max({d_beta, std::abs(jet.derivative(FrameJet::kBeta, FrameJet::kU)),
                           std::abs(jet.derivative(FrameJet::kBeta, FrameJet::kV))});
        for (double r : jet.frame.identity_residuals) frame_identity = std::max(frame_identity, r);
        hopf_balance = std::max(hopf_balance, std::abs(jet.frame.a - jet.frame.b));
      } catch (const Error&) {
        // The frame is not defined on the whole stencil (h changes nearby).
        frame_failures += 1.0;
      }
    }
  }

  const double n = static_cast<double>(grid.size());
  ClassificationReport report;
  report.grid_size = grid.size();
  report.h = h_min == h_max ? h_min : h_max;
  report.mean_curvature = trace_sum / n;
  report.hopf = h_max == 1;
  const bool frames_ok = h_min == 2 && h_max == 2 && frame_failures == 0.0;
  report.two_hopf = frames_ok && integrability < tol.integrability;
  report.strongly_two_hopf = report.two_hopf && d_alpha < tol.derivative && d_beta < tol.derivative;
  report.austere = austere_sum < tol.austere && austere_middle < tol.austere;
  report.levi_flat = levi < tol.levi;
  report.ruled = report.levi_flat && ruled < tol.ruled;
  report.cmc = trace.spread() < tol.cmc;

  double spectrum_spread = 0.0;
  for (const Extremes& e : values) spectrum_spread = std::max(spectrum_spread, e.spread());

  auto& r = report.residuals;
  r["h_min"] = h_min;
  r["h_max"] = h_max;
  r["hopf_projection_counted_min"] = std::isfinite(counted_projection_min) ? counted_projection_min : 0.0;
  r["hopf_projection_excluded_max"] = excluded_projection_max;
  r["min_eigenvalue_gap"] = min_gap;
  r["symmetry_defect_max"] = symmetry;
  r["eigen_residual_max"] = eigen_residual;
  r["frame_points"] = frame_points;
  r["frame_failures"] = frame_failures;
  r["integrability_max"] = integrability;
  r["d_alpha_max"] = d_alpha;
  r["d_beta_max"] = d_beta;
  r["frame_identity_max"] = frame_identity;
  r["hopf_balance_max"] = hopf_balance;
  r["austere_sum_max"] = austere_sum;
  r["austere_middle_max"] = austere_middle;
  r["levi_max"] = levi;
  r["ruled_max"] = ruled;
  r["mean_curvature_mean"] = report.mean_curvature;
  r["mean_curvature_spread"] = trace.spread();
  r["spectrum_spread"] = spectrum_spread;
  for (int k = 0; k < 3; ++k) {
    r["principal_" + std::to_string(k + 1) + "_min"] = values[k].lo;
    r["principal_" + std::to_string(k + 1) + "_max"] = values[k].hi;
  }
  r["tolerance_tau_mult"] = tol.tau_mult;
  r["tolerance_tau_proj"] = tol.tau_proj;
  r["tolerance_integrability"] = tol.integrability;
  r["tolerance_derivative"] = tol.derivative;
  r["tolerance_austere"] = tol.austere;
  r["tolerance_levi"] = tol.levi;
  r["tolerance_ruled"] = tol.ruled;
  r["tolerance_cmc"] = tol.cmc;
  return report;
}

}  // namespace hopflab::hypersurface
