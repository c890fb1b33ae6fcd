#include "hopflab/hypersurface.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>

namespace hopflab::hypersurface {

using ambient::AmbientTangent;

SecondOrderGeometry second_order_geometry(const HypersurfacePatch& patch, const Params& q) {
  const auto& space = patch.space();
  SecondOrderGeometry out;
  out.center = point_geometry(patch, q);
  out.christoffel = christoffel_symbols(space, out.center);
  out.shape_mixed = out.center.shape_mixed;

  const double h = patch.frame_step();
  for (int l = 0; l < 3; ++l) {
    const Params e = Params::Unit(l) * h;
    std::array<PointGeometry, 4> samples = {point_geometry(patch, q + e), point_geometry(patch, q - e),
                                            point_geometry(patch, q + 2.0 * e),
                                            point_geometry(patch, q - 2.0 * e)};
    std::array<std::array<Mat3, 3>, 4> gammas;
    for (int s = 0; s < 4; ++s) gammas[s] = christoffel_symbols(space, samples[s]);
    for (int k = 0; k < 3; ++k) {
      out.d_christoffel[l][k] =
          (8.0 * (gammas[0][k] - gammas[1][k]) - (gammas[2][k] - gammas[3][k])) / (12.0 * h);
    }
    out.d_shape_mixed[l] = (8.0 * (samples[0].shape_mixed - samples[1].shape_mixed) -
                            (samples[2].shape_mixed - samples[3].shape_mixed)) /
                           (12.0 * h);
  }
  return out;
}

GaussCodazziReport gauss_codazzi_residuals(const ambient::SpaceForm& space,
                                           const SecondOrderGeometry& geo, int probes,
                                           std::uint64_t seed) {
  if (probes < 1) throw Error(ErrorKind::InvalidArgument, "probe count must be positive");
  const PointGeometry& g = geo.center;
  const auto& gamma = geo.christoffel;
  const auto& dgamma = geo.d_christoffel;
  const Mat3& s = geo.shape_mixed;

  // Intrinsic curvature R(d_i, d_j) d_k = R[i][j](:, k).
  std::array<std::array<Mat3, 3>, 3> riemann;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Mat3 r = Mat3::Zero();
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          double v = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int m = 0; m < 3; ++m) v += gamma[m](j, k) * gamma[l](i, m) - gamma[m](i, k) * gamma[l](j, m);
          r(l, k) = v;
        }
      }
      riemann[i][j] = r;
    }
  }
  // Covariant derivative of the shape tensor along coordinate i.
  std::array<Mat3, 3> nabla_s;
  for (int i = 0; i < 3; ++i) {
    Mat3 gi;
    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 3; ++c) gi(a, c) = gamma[a](i, c);
    }
    nabla_s[i] = geo.d_shape_mixed[i] + gi * s - s * gi;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  auto random_unit = [&]() {
    Vec3 v(uniform(rng), uniform(rng), uniform(rng));
    while (v.norm() < 1e-3) v = Vec3(uniform(rng), uniform(rng), uniform(rng));
    return Vec3(v / std::sqrt(v.dot(g.gram * v)));
  };
  auto lift = [&](const Vec3& v) {
    CVec3 out = CVec3::Zero();
    for (int i = 0; i < 3; ++i) out += v[i] * g.tangents[i];
    return AmbientTangent{g.point, out};
  };
  auto ip = [&](const Vec3& u, const Vec3& v) { return u.dot(g.gram * v); };
  auto curvature_apply = [&](const Vec3& x, const Vec3& y, const Vec3& z) {
    Vec3 out = Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) out += x[i] * y[j] * (riemann[i][j] * z);
    }
    return out;
  };
  auto nabla_s_apply = [&](const Vec3& x, const Vec3& y) {
    Vec3 out = Vec3::Zero();
    for (int i = 0; i < 3; ++i) out += x[i] * (nabla_s[i] * y);
    return out;
  };
  const AmbientTangent xi{g.point, g.normal};

  GaussCodazziReport report;
  report.probes = probes;
  for (int p = 0; p < probes; ++p) {
    const Vec3 x = random_unit(), y = random_unit(), z = random_unit(), w = random_unit();
    const AmbientTangent xa = lift(x), ya = lift(y), za = lift(z), wa = lift(w);

    const double codazzi_lhs = ambient::curvature_form(space, xa, ya, za, xi);
    const double codazzi_rhs = ip(nabla_s_apply(x, y), z) - ip(nabla_s_apply(y, x), z);
    report.codazzi = std::max(report.codazzi, std::abs(codazzi_lhs - codazzi_rhs));

    const double gauss_lhs = ambient::curvature_form(space, xa, ya, za, wa);
    const double gauss_rhs =
        ip(curvature_apply(x, y, z), w) + ip(s * x, z) * ip(s * y, w) - ip(s * x, w) * ip(s * y, z);
    report.gauss = std::max(report.gauss, std::abs(gauss_lhs - gauss_rhs));
  }
  return report;
}

GaussCodazziReport verify_gauss_codazzi(const HypersurfacePatch& patch, const Params& q, int probes,
                                        std::uint64_t seed) {
  return gauss_codazzi_residuals(patch.space(), second_order_geometry(patch, q), probes, seed);
}

}  // namespace hopflab::hypersurface
