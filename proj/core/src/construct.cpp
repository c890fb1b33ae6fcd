#include "hopflab/constructor.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopflab::constructor {

using hypersurface::HypersurfacePatch;
using hypersurface::ParameterBox;
using hypersurface::Params;

namespace {

HypersurfacePatch::Map sweep_map(const actions::PolarActionSpec& spec,
                                 std::shared_ptr<const SigmaCurve> sigma) {
  if (spec.generators.size() != 2) {
    throw Error(ErrorKind::InvalidArgument, "the sweep needs exactly two group generators");
  }
  const CMat3 g1 = spec.generators[0];
  const CMat3 g2 = spec.generators[1];
  const ambient::SectionChart chart = spec.section;
  return [g1, g2, chart, sigma](const Params& q) -> CVec3 {
    const CMat3 g = (q[1] * g1 + q[2] * g2).exp();
    return g * chart.lift(sigma->position(q[0]));
  };
}

// Smallest pairwise distance between patch points on a uniform grid.
double min_separation(const HypersurfacePatch& patch, int n) {
  std::vector<ambient::AmbientPoint> pts;
  for (const Params& q : hypersurface::grid_points(patch.box(), {n, n, n})) pts.push_back(patch.point(q));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::min(best, ambient::distance(patch.space(), pts[i], pts[j]));
    }
  }
  return best;
}

}  // namespace

EquivariantHypersurface build_hypersurface(const actions::PolarActionSpec& spec, const SigmaCurve& sigma,
                                           const BuildOptions& options) {
  if (sigma.samples().size() < 2) throw Error(ErrorKind::InvalidArgument, "sigma needs at least two samples");
  if (!(options.s_extent > 0.0)) throw Error(ErrorKind::InvalidArgument, "s_extent must be positive");
  if (options.injectivity_grid < 2) throw Error(ErrorKind::InvalidArgument, "injectivity grid needs two points per side");
  for (const SigmaSample& s : sigma.samples()) {
    if (!actions::is_regular_model(spec, s.x)) {
      throw Error(ErrorKind::SingularOrbit, "sigma passes through a singular orbit");
    }
  }

  const double t_lo = sigma.t_min() + options.t_margin;
  const double t_hi = sigma.t_max() - options.t_margin;
  if (!(t_hi > t_lo)) {
    throw Error(ErrorKind::InvalidArgument, "sigma is too short for the differentiation margin");
  }

  auto curve = std::make_shared<const SigmaCurve>(sigma);
  const HypersurfacePatch::Map map = sweep_map(spec, curve);
  const auto& chart = spec.section;

  double extent = options.s_extent;
  for (int attempt = 0;; ++attempt) {
    ParameterBox box{Params(t_lo, -extent, -extent), Params(t_hi, extent, extent)};
    HypersurfacePatch patch(spec.ambient, map, box, options.diff_step, 1);
    patch.set_frame_step(options.frame_step);

    if (min_separation(patch, options.injectivity_grid) <= options.injectivity_tol) {
      if (attempt >= 6) throw Error(ErrorKind::Degenerate, "orbit sweep is not injective on any tested box");
      extent *= 0.5;
      continue;
    }

    // Every orbit point through sigma must be an immersed point; the patch
    // normal there is compared with the section normal rotate(x, v).
    const int n_check = 5;
    int orientation = 1;
    for (int k = 0; k < n_check; ++k) {
      const double t = t_lo + (t_hi - t_lo) * k / (n_check - 1);
      const hypersurface::PointGeometry g = hypersurface::point_geometry(patch, Params(t, 0.0, 0.0));
      if (k == n_check / 2) {
        const Vec3 x = curve->position(t);
        const Vec3 xn = x * std::sqrt(spec.ambient.kappa() / spec.ambient.real_form(x, x));
        const Vec3 v = chart.model_tangent(xn, curve->velocity(t));
        const ambient::AmbientTangent xi =
            ambient::rebase(spec.ambient, chart.lift_tangent(xn, chart.rotate(xn, v)), g.point);
        orientation = ambient::metric(spec.ambient, xi, {g.point, g.normal}) >= 0.0 ? 1 : -1;
      }
    }
    EquivariantHypersurface out{spec, curve, patch.with_orientation(orientation), options};
    out.options.s_extent = extent;
    return out;
  }
}

}  // namespace hopflab::constructor
