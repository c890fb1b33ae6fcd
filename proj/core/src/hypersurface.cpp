#include "hopflab/hypersurface.hpp"

#include "metric_helpers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace hopflab::hypersurface {

using ambient::AmbientPoint;
using ambient::AmbientTangent;

bool ParameterBox::contains(const Params& q, double slack) const {
  for (int i = 0; i < 3; ++i) {
    if (q[i] < lower[i] - slack || q[i] > upper[i] + slack) return false;
  }
  return true;
}

Params ParameterBox::at(const Vec3& fractions) const {
  return lower + fractions.cwiseProduct(upper - lower);
}

std::vector<Params> grid_points(const ParameterBox& box, const std::array<int, 3>& counts) {
  for (int n : counts) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "grid counts must be positive");
  }
  std::vector<Params> out;
  out.reserve(static_cast<std::size_t>(counts[0]) * counts[1] * counts[2]);
  for (int i = 0; i < counts[0]; ++i) {
    for (int j = 0; j < counts[1]; ++j) {
      for (int k = 0; k < counts[2]; ++k) {
        const Vec3 f((i + 0.5) / counts[0], (j + 0.5) / counts[1], (k + 0.5) / counts[2]);
        out.push_back(box.at(f));
      }
    }
  }
  return out;
}

HypersurfacePatch::HypersurfacePatch(ambient::SpaceForm space, Map map, ParameterBox box,
                                     double diff_step, int orientation)
    : space_(space), map_(std::move(map)), box_(box), diff_step_(diff_step), orientation_(orientation) {
  if (!map_) throw Error(ErrorKind::InvalidArgument, "patch map is empty");
  if (!(diff_step_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "diff_step must be positive");
  if (orientation_ != 1 && orientation_ != -1) {
    throw Error(ErrorKind::InvalidArgument, "orientation must be +1 or -1");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(box_.upper[i] >= box_.lower[i])) {
      throw Error(ErrorKind::InvalidArgument, "parameter box bounds are inverted");
    }
  }
}

void HypersurfacePatch::set_frame_step(double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "frame step must be positive");
  frame_step_ = step;
}

HypersurfacePatch HypersurfacePatch::with_orientation(int orientation) const {
  HypersurfacePatch out(space_, map_, box_, diff_step_, orientation);
  out.frame_step_ = frame_step_;
  return out;
}

AmbientPoint HypersurfacePatch::point(const Params& q) const {
  return ambient::make_point(space_, map_(q));
}

PointGeometry point_geometry(const HypersurfacePatch& patch, const Params& q) {
  const auto& space = patch.space();
  const auto& map = patch.map();
  const ambient::PointMap point_map = [&map](std::span<const double> s) {
    return map(Params(s[0], s[1], s[2]));
  };
  const std::array<double, 3> coords{q[0], q[1], q[2]};
  const ambient::CoordinateJet jet = ambient::coordinate_jet(space, point_map, coords, patch.diff_step());

  PointGeometry g;
  g.params = q;
  g.point = jet.point;
  for (int i = 0; i < 3; ++i) {
    g.tangents[i] = jet.tangents[i];
    for (int j = 0; j < 3; ++j) g.nabla[i][j] = jet.nabla[i][j];
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g.gram(i, j) = detail::inner(space, g.tangents[i], g.tangents[j]);
  }
  g.gram_determinant = g.gram.determinant();
  if (!(g.gram_determinant > kImmersionThreshold)) {
    throw Error(ErrorKind::Immersion, "coordinate velocities are linearly dependent");
  }
  const Mat3 lower = Eigen::LLT<Mat3>(g.gram).matrixL();
  g.frame_coefficients = lower.inverse();
  for (int a = 0; a < 3; ++a) {
    g.orthonormal[a] = CVec3::Zero();
    for (int i = 0; i < 3; ++i) g.orthonormal[a] += g.frame_coefficients(a, i) * g.tangents[i];
  }

  // Unit normal: the horizontal basis vector with the largest component
  // orthogonal to the tangent space.
  const auto basis = ambient::complex_frame(space, g.point);
  double best = -1.0;
  for (const AmbientTangent& e : basis) {
    CVec3 v = e.vec;
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVec3& t : g.orthonormal) v -= detail::inner(space, v, t) * t;
    }
    const double n = std::sqrt(std::max(0.0, detail::inner(space, v, v)));
    if (n > best) {
      best = n;
      g.normal = v / n;
    }
  }
  if (!(best > 1e-6)) throw Error(ErrorKind::Immersion, "normal direction is degenerate");

  Eigen::Matrix4d orient;
  for (int r = 0; r < 4; ++r) {
    const CVec3& v = r < 3 ? g.tangents[r] : g.normal;
    for (int col = 0; col < 4; ++col) orient(r, col) = detail::inner(space, v, basis[col].vec);
  }
  if (orient.determinant() * patch.orientation() < 0.0) g.normal = -g.normal;

  Mat3 second;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) second(i, j) = detail::inner(space, g.nabla[i][j], g.normal);
  }
  g.symmetry_defect = (second - second.transpose()).cwiseAbs().maxCoeff();
  g.second_fundamental = 0.5 * (second + second.transpose());
  g.shape = g.frame_coefficients * g.second_fundamental * g.frame_coefficients.transpose();
  g.shape = 0.5 * (g.shape + g.shape.transpose()).eval();
  g.shape_mixed = g.gram.inverse() * g.second_fundamental;

  const cplx unit(0.0, 1.0);
  for (int a = 0; a < 3; ++a) {
    g.hopf[a] = detail::inner(space, unit * g.normal, g.orthonormal[a]);
    for (int b = 0; b < 3; ++b) {
      g.complex_structure(a, b) = detail::inner(space, unit * g.orthonormal[b], g.orthonormal[a]);
    }
  }
  return g;
}

ShapeSpectrum spectrum_from_shape(const PointGeometry& geometry, double tau_mult) {
  if (!(tau_mult > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau_mult must be positive");
  Eigen::SelfAdjointEigenSolver<Mat3> eig(geometry.shape);
  ShapeSpectrum s;
  Mat3 vectors;
  for (int k = 0; k < 3; ++k) {
    s.values[k] = eig.eigenvalues()[2 - k];
    vectors.col(k) = eig.eigenvectors().col(2 - k);
  }
  for (int k = 0; k < 3; ++k) {
    CVec3 v = CVec3::Zero();
    for (int a = 0; a < 3; ++a) v += vectors(a, k) * geometry.orthonormal[a];
    s.frames[k] = AmbientTangent{geometry.point, v};
    s.coefficients[k] = geometry.frame_coefficients.transpose() * vectors.col(k);
  }
  s.vectors = vectors;
  s.orthonormality_defect = (vectors.transpose() * vectors - Mat3::Identity()).cwiseAbs().maxCoeff();
  s.eigen_residual = (geometry.shape * vectors - vectors * s.values.asDiagonal()).cwiseAbs().maxCoeff();

  const double scale = std::max(1.0, s.values[0] - s.values[2]);
  int cluster = 0;
  s.cluster_of[0] = 0;
  s.multiplicities = {1};
  for (int k = 1; k < 3; ++k) {
    if (s.values[k - 1] - s.values[k] > tau_mult * scale) {
      ++cluster;
      s.multiplicities.push_back(0);
    }
    s.cluster_of[k] = cluster;
    ++s.multiplicities.back();
  }
  return s;
}

ShapeResult shape_operator(const HypersurfacePatch& patch, const Params& q, double tau_mult) {
  ShapeResult out;
  out.geometry = point_geometry(patch, q);
  out.spectrum = spectrum_from_shape(out.geometry, tau_mult);
  out.normal = AmbientTangent{out.geometry.point, out.geometry.normal};
  return out;
}

HopfCount hopf_projection_count(const ShapeResult& shape, double tau_proj) {
  if (!(tau_proj > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau_proj must be positive");
  const ShapeSpectrum& spec = shape.spectrum;
  const Vec3& j = shape.geometry.hopf;
  HopfCount out;
  const std::size_t clusters = spec.multiplicities.size();
  out.projections.assign(clusters, 0.0);
  out.cluster_values.assign(clusters, 0.0);
  for (int k = 0; k < 3; ++k) {
    const int c = spec.cluster_of[k];
    const double comp = j.dot(spec.vectors.col(k));
    out.projections[c] += comp * comp;
    out.cluster_values[c] += spec.values[k] / spec.multiplicities[c];
  }
  for (std::size_t c = 0; c < clusters; ++c) {
    out.projections[c] = std::sqrt(out.projections[c]);
    if (out.projections[c] > tau_proj) ++out.h;
  }
  out.min_gap = std::min(spec.values[0] - spec.values[1], spec.values[1] - spec.values[2]);
  return out;
}

int hopf_projection_count(const HypersurfacePatch& patch, const Params& q, double tau_proj,
                          double tau_mult) {
  return hopf_projection_count(shape_operator(patch, q, tau_mult), tau_proj).h;
}

double levi_form(const ambient::SpaceForm& space, const ShapeResult& shape, const AmbientTangent& x,
                 const AmbientTangent& y) {
  const PointGeometry& g = shape.geometry;
  const cplx unit(0.0, 1.0);
  auto coords = [&](const AmbientTangent& v) {
    const AmbientTangent w = ambient::rebase(space, v, g.point);
    const double scale = std::max(1.0, std::sqrt(std::max(0.0, detail::inner(space, w.vec, w.vec))));
    if (std::abs(detail::inner(space, w.vec, g.normal)) > 1e-6 * scale) {
      throw Error(ErrorKind::InvalidArgument, "Levi form argument is not tangent");
    }
    if (std::abs(detail::inner(space, w.vec, unit * g.normal)) > 1e-6 * scale) {
      throw Error(ErrorKind::InvalidArgument, "Levi form argument is not orthogonal to J xi");
    }
    Vec3 e;
    for (int a = 0; a < 3; ++a) e[a] = detail::inner(space, w.vec, g.orthonormal[a]);
    return e;
  };
  const Vec3 xe = coords(x);
  const Vec3 ye = coords(y);
  const Vec3 jxe = g.complex_structure * xe;
  const Vec3 jye = g.complex_structure * ye;
  return xe.dot(g.shape * ye) + jxe.dot(g.shape * jye);
}

double levi_form(const HypersurfacePatch& patch, const Params& q, const AmbientTangent& x,
                 const AmbientTangent& y) {
  return levi_form(patch.space(), shape_operator(patch, q), x, y);
}

double hopf_cmc_relation_check(const HypersurfacePatch& patch, const Params& q, const Tolerances& tol) {
  const ShapeResult shape = shape_operator(patch, q, tol.tau_mult);
  const HopfCount count = hopf_projection_count(shape, tol.tau_proj);
  if (count.h != 1) throw Error(ErrorKind::Precondition, "hypersurface is not Hopf at this point");
  const PointGeometry& g = shape.geometry;
  const Vec3 j = g.hopf.normalized();
  const double alpha = j.dot(g.shape * j);
  // Restriction of S to the orthogonal complement of J xi.
  int k = 0;
  j.cwiseAbs().minCoeff(&k);
  Eigen::Matrix<double, 3, 2> comp;
  comp.col(0) = (Vec3::Unit(k) - j[k] * j).normalized();
  comp.col(1) = j.cross(comp.col(0)).normalized();
  const Mat2 restricted = comp.transpose() * g.shape * comp;
  Eigen::SelfAdjointEigenSolver<Mat2> eig(restricted);
  const double beta = eig.eigenvalues()[1];
  const double gamma = eig.eigenvalues()[0];
  return std::abs(2.0 * alpha * (beta + gamma) - 4.0 * beta * gamma + patch.space().c());
}

}  // namespace hopflab::hypersurface
