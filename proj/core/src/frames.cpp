#include "hopflab/hypersurface.hpp"

#include "metric_helpers.hpp"

#include <Eigen/LU>

#include <cmath>

namespace hopflab::hypersurface {

using ambient::AmbientTangent;

AdaptedFrame adapted_frame(const ShapeResult& shape, double tau_proj) {
  const HopfCount count = hopf_projection_count(shape, tau_proj);
  if (count.h != 2) {
    throw Error(ErrorKind::Precondition,
                "adapted frame requires J xi to project onto exactly two principal spaces (h = " +
                    std::to_string(count.h) + ")");
  }
  const PointGeometry& g = shape.geometry;
  const ShapeSpectrum& spec = shape.spectrum;
  const Vec3& j = g.hopf;

  std::vector<int> projected;
  for (std::size_t c = 0; c < count.projections.size(); ++c) {
    if (count.projections[c] > tau_proj) projected.push_back(static_cast<int>(c));
  }
  // Projection of J xi onto a cluster, in the basis E.
  auto cluster_projection = [&](int cluster) {
    Vec3 out = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
      if (spec.cluster_of[k] == cluster) out += j.dot(spec.vectors.col(k)) * spec.vectors.col(k);
    }
    return out;
  };
  const Vec3 pu = cluster_projection(projected[0]);
  const Vec3 pv = cluster_projection(projected[1]);

  AdaptedFrame f;
  f.a = pu.norm();
  f.b = pv.norm();
  const Vec3 ue = pu / f.a;
  const Vec3 ve = pv / f.b;
  const Vec3 ae = (-(g.complex_structure * ue) / f.b).normalized();

  f.alpha = ue.dot(g.shape * ue);
  f.beta = ve.dot(g.shape * ve);
  f.gamma = ae.dot(g.shape * ae);

  auto ambient_vector = [&](const Vec3& e) {
    CVec3 v = CVec3::Zero();
    for (int a = 0; a < 3; ++a) v += e[a] * g.orthonormal[a];
    return AmbientTangent{g.point, v};
  };
  f.U = ambient_vector(ue);
  f.V = ambient_vector(ve);
  f.A = ambient_vector(ae);
  f.xi = AmbientTangent{g.point, g.normal};
  f.coeff_U = g.frame_coefficients.transpose() * ue;
  f.coeff_V = g.frame_coefficients.transpose() * ve;
  f.coeff_A = g.frame_coefficients.transpose() * ae;

  // Each identity splits into a tangential part (basis E) and a normal part.
  const Mat3& jm = g.complex_structure;
  auto residual = [](const Vec3& tangential, double normal) {
    return std::sqrt(tangential.squaredNorm() + normal * normal);
  };
  f.identity_residuals[0] = residual(j - f.a * ue - f.b * ve, 0.0);
  f.identity_residuals[1] = residual(jm * ue + f.b * ae, f.a - ue.dot(j));
  f.identity_residuals[2] = residual(jm * ve - f.a * ae, f.b - ve.dot(j));
  f.identity_residuals[3] = residual(jm * ae - f.b * ue + f.a * ve, -ae.dot(j));
  return f;
}

AdaptedFrame adapted_frame(const HypersurfacePatch& patch, const Params& q, double tau_proj,
                           double tau_mult) {
  return adapted_frame(shape_operator(patch, q, tau_mult), tau_proj);
}

std::array<Mat3, 3> christoffel_symbols(const ambient::SpaceForm& space, const PointGeometry& g) {
  const Mat3 inverse = g.gram.inverse();
  std::array<Mat3, 3> lowered;
  for (int l = 0; l < 3; ++l) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) lowered[l](i, j) = detail::inner(space, g.nabla[i][j], g.tangents[l]);
    }
  }
  std::array<Mat3, 3> out;
  for (int k = 0; k < 3; ++k) {
    out[k] = Mat3::Zero();
    for (int l = 0; l < 3; ++l) out[k] += inverse(k, l) * lowered[l];
  }
  return out;
}

const Vec3& FrameJet::coefficients(int field) const {
  switch (field) {
    case kU: return frame.coeff_U;
    case kV: return frame.coeff_V;
    case kAField: return frame.coeff_A;
    default: throw Error(ErrorKind::InvalidArgument, "unknown frame field");
  }
}

double FrameJet::derivative(int scalar, int field) const {
  if (scalar < 0 || scalar > 4) throw Error(ErrorKind::InvalidArgument, "unknown frame scalar");
  return d_scalars.row(scalar).dot(coefficients(field));
}

Vec3 FrameJet::connection(int x, int y) const {
  const Vec3& cx = coefficients(x);
  const Vec3& cy = coefficients(y);
  Vec3 out = d_coefficients[y] * cx;
  for (int k = 0; k < 3; ++k) out[k] += cx.dot(christoffel[k] * cy);
  return out;
}

Vec3 FrameJet::bracket(int x, int y) const {
  return d_coefficients[y] * coefficients(x) - d_coefficients[x] * coefficients(y);
}

double FrameJet::inner(const Vec3& u, const Vec3& v) const { return u.dot(geometry.gram * v); }

namespace {

struct FrameSample {
  std::array<Vec3, 3> coefficients;
  Eigen::Matrix<double, 5, 1> scalars;
};

FrameSample sample_frame(const HypersurfacePatch& patch, const Params& q, const Tolerances& tol) {
  const AdaptedFrame f = adapted_frame(shape_operator(patch, q, tol.tau_mult), tol.tau_proj);
  FrameSample s;
  s.coefficients = {f.coeff_U, f.coeff_V, f.coeff_A};
  s.scalars << f.alpha, f.beta, f.gamma, f.a, f.b;
  return s;
}

}  // namespace

FrameJet frame_jet(const HypersurfacePatch& patch, const Params& q, const Tolerances& tol) {
  const ShapeResult center = shape_operator(patch, q, tol.tau_mult);
  FrameJet jet;
  jet.frame = adapted_frame(center, tol.tau_proj);
  jet.geometry = center.geometry;
  jet.christoffel = christoffel_symbols(patch.space(), center.geometry);

  const double h = patch.frame_step();
  for (int i = 0; i < 3; ++i) {
    const Params e = Params::Unit(i) * h;
    const FrameSample p1 = sample_frame(patch, q + e, tol);
    const FrameSample m1 = sample_frame(patch, q - e, tol);
    const FrameSample p2 = sample_frame(patch, q + 2.0 * e, tol);
    const FrameSample m2 = sample_frame(patch, q - 2.0 * e, tol);
    for (int f = 0; f < 3; ++f) {
      jet.d_coefficients[f].col(i) =
          (8.0 * (p1.coefficients[f] - m1.coefficients[f]) - (p2.coefficients[f] - m2.coefficients[f])) /
          (12.0 * h);
    }
    jet.d_scalars.col(i) = (8.0 * (p1.scalars - m1.scalars) - (p2.scalars - m2.scalars)) / (12.0 * h);
  }
  return jet;
}

Vec3 flow_bracket(const HypersurfacePatch& patch, const Params& q, int x, int y, double epsilon,
                  const Tolerances& tol) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "flow time must be positive");
  if (x < 0 || x > 2 || y < 0 || y > 2) throw Error(ErrorKind::InvalidArgument, "unknown frame field");
  auto field = [&](const Params& p, int f) { return sample_frame(patch, p, tol).coefficients[f]; };
  auto flow = [&](Params p, int f, double t) {
    constexpr int kSubsteps = 4;
    const double h = t / kSubsteps;
    for (int n = 0; n < kSubsteps; ++n) {
      const Vec3 k1 = field(p, f);
      const Vec3 k2 = field(p + 0.5 * h * k1, f);
      const Vec3 k3 = field(p + 0.5 * h * k2, f);
      const Vec3 k4 = field(p + h * k3, f);
      p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return p;
  };
  // Flow along X, then Y, then back along X and Y: displacement t^2 [X, Y] + O(t^3).
  auto commutator = [&](double t) {
    Params p = flow(q, x, t);
    p = flow(p, y, t);
    p = flow(p, x, -t);
    p = flow(p, y, -t);
    return Vec3((p - q) / (t * t));
  };
  auto symmetric = [&](double t) { return Vec3(0.5 * (commutator(t) + commutator(-t))); };
  return (4.0 * symmetric(epsilon) - symmetric(2.0 * epsilon)) / 3.0;
}

}  // namespace hopflab::hypersurface
