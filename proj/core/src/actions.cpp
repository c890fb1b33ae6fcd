#include "hopflab/actions.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <numbers>

namespace hopflab::actions {

using ambient::AmbientPoint;
using ambient::AmbientTangent;

namespace {

constexpr std::array<ActionLabel, 5> kLabels = {ActionLabel::Cp2Torus, ActionLabel::Ch2Torus,
                                                ActionLabel::Ch2G0, ActionLabel::Ch2K0G2a,
                                                ActionLabel::Ch2LineG2a};

}  // namespace

std::string_view label_name(ActionLabel label) noexcept {
  switch (label) {
    case ActionLabel::Cp2Torus: return "cp2-torus";
    case ActionLabel::Ch2Torus: return "ch2-torus";
    case ActionLabel::Ch2G0: return "ch2-g0";
    case ActionLabel::Ch2K0G2a: return "ch2-k0-g2a";
    case ActionLabel::Ch2LineG2a: return "ch2-line-g2a";
  }
  return "unknown";
}

std::optional<ActionLabel> parse_label(std::string_view name) noexcept {
  for (ActionLabel label : kLabels) {
    if (label_name(label) == name) return label;
  }
  return std::nullopt;
}

std::span<const ActionLabel> all_labels() noexcept { return kLabels; }

double default_curvature(ActionLabel label) noexcept {
  return label == ActionLabel::Cp2Torus ? 4.0 : -4.0;
}

CMat3 group_element(const PolarActionSpec& spec, double s1, double s2) {
  if (spec.generators.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "action needs two generators");
  }
  const CMat3 x = s1 * spec.generators[0] + s2 * spec.generators[1];
  return x.exp();
}

AmbientPoint act(const PolarActionSpec& spec, double s1, double s2, const AmbientPoint& p) {
  return AmbientPoint{spec.ambient.normalize(group_element(spec, s1, s2) * p.rep)};
}

AmbientTangent push_forward(const PolarActionSpec& spec, double s1, double s2, const AmbientTangent& v) {
  const CMat3 g = group_element(spec, s1, s2);
  const CVec3 z = g * v.base.rep;
  return ambient::make_tangent(spec.ambient, AmbientPoint{z}, g * v.vec);
}

AmbientTangent killing_field(const PolarActionSpec& spec, std::size_t index, const AmbientPoint& p) {
  if (index >= spec.generators.size()) {
    throw Error(ErrorKind::InvalidArgument, "generator index out of range");
  }
  return ambient::make_tangent(spec.ambient, p, spec.generators[index] * p.rep);
}

Mat2 killing_gram(const PolarActionSpec& spec, const AmbientPoint& p) {
  const AmbientTangent x0 = killing_field(spec, 0, p);
  const AmbientTangent x1 = killing_field(spec, 1, p);
  Mat2 gram;
  gram(0, 0) = ambient::metric(spec.ambient, x0, x0);
  gram(1, 1) = ambient::metric(spec.ambient, x1, x1);
  gram(0, 1) = gram(1, 0) = ambient::metric(spec.ambient, x0, x1);
  return gram;
}

bool is_regular(const PolarActionSpec& spec, const AmbientPoint& p, double threshold) {
  return killing_gram(spec, p).determinant() > threshold;
}

bool is_regular_model(const PolarActionSpec& spec, const Vec3& x, double threshold) {
  return is_regular(spec, AmbientPoint{spec.ambient.normalize(spec.section.lift(x))}, threshold);
}

namespace {

// Ambient covariant derivative of the Killing field of gy along the Killing
// field of gx, at the normalized representative z.
CVec3 killing_connection(const ambient::SpaceForm& space, const CMat3& gx, const CMat3& gy,
                         const CVec3& z) {
  const double kappa = space.kappa();
  const CVec3 gxz = gx * z;
  const CVec3 gyz = gy * z;
  return space.horizontal(z, gy * gxz) - (space.hermitian(gyz, z) / kappa) * space.horizontal(z, gxz) -
         (space.hermitian(gxz, z) / kappa) * space.horizontal(z, gyz);
}

struct OrbitFrame {
  CVec3 z;
  std::array<CVec3, 2> killing;
  std::array<CVec3, 2> orthonormal;
  Mat2 lower_inverse;
  double gram_det;
  // nabla[i][j] = covariant derivative of Killing field j along Killing field i
  std::array<std::array<CVec3, 2>, 2> nabla;
};

OrbitFrame orbit_frame(const PolarActionSpec& spec, const AmbientPoint& p) {
  const auto& space = spec.ambient;
  OrbitFrame f;
  f.z = space.normalize(p.rep);
  for (int i = 0; i < 2; ++i) f.killing[i] = space.horizontal(f.z, spec.generators[i] * f.z);
  Mat2 gram;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) gram(i, j) = space.hermitian(f.killing[i], f.killing[j]).real();
  }
  f.gram_det = gram.determinant();
  if (!(f.gram_det > kRegularityThreshold)) {
    throw Error(ErrorKind::SingularOrbit, "point lies on a singular orbit");
  }
  const Mat2 lower = Eigen::LLT<Mat2>(gram).matrixL();
  f.lower_inverse = lower.inverse();
  for (int a = 0; a < 2; ++a) {
    f.orthonormal[a] = f.lower_inverse(a, 0) * f.killing[0] + f.lower_inverse(a, 1) * f.killing[1];
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      f.nabla[i][j] = killing_connection(space, spec.generators[i], spec.generators[j], f.z);
    }
  }
  return f;
}

Mat2 shape_in_frame(const ambient::SpaceForm& space, const OrbitFrame& f, const CVec3& normal) {
  Mat2 b;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) b(i, j) = space.hermitian(f.nabla[i][j], normal).real();
  }
  b = 0.5 * (b + b.transpose()).eval();
  return f.lower_inverse * b * f.lower_inverse.transpose();
}

OrbitData orbit_data(const PolarActionSpec& spec, const AmbientPoint& p, const AmbientTangent& xi,
                     bool with_mean) {
  const auto& space = spec.ambient;
  const OrbitFrame f = orbit_frame(spec, p);
  const AmbientPoint base{f.z};
  const AmbientTangent normal = ambient::rebase(space, xi, base);
  const double xi_norm = std::sqrt(space.hermitian(normal.vec, normal.vec).real());
  if (std::abs(xi_norm - 1.0) > 1e-8) {
    throw Error(ErrorKind::NotNormal, "orbit normal must be a unit vector");
  }
  for (int i = 0; i < 2; ++i) {
    const double scale = std::sqrt(space.hermitian(f.killing[i], f.killing[i]).real());
    if (std::abs(space.hermitian(normal.vec, f.killing[i]).real()) > kNormalityTol * std::max(1.0, scale)) {
      throw Error(ErrorKind::NotNormal, "vector is not normal to the orbit");
    }
  }

  OrbitData out;
  out.point = base;
  out.normal = normal;
  out.gram_determinant = f.gram_det;
  for (int a = 0; a < 2; ++a) out.tangent_basis[a] = AmbientTangent{base, f.orthonormal[a]};
  out.shape = shape_in_frame(space, f, normal.vec);

  Eigen::SelfAdjointEigenSolver<Mat2> eig(out.shape);
  // Eigen sorts ascending; store alpha >= beta.
  out.principal = Vec2(eig.eigenvalues()[1], eig.eigenvalues()[0]);
  const CVec3 jxi = cplx(0.0, 1.0) * normal.vec;
  for (int k = 0; k < 2; ++k) {
    const Vec2 coeff = eig.eigenvectors().col(1 - k);
    const CVec3 dir = coeff[0] * f.orthonormal[0] + coeff[1] * f.orthonormal[1];
    out.principal_directions[k] = AmbientTangent{base, dir};
    out.hopf_components[k] = std::abs(space.hermitian(jxi, dir).real());
  }

  out.mean_curvature_vector = AmbientTangent{base, CVec3::Zero()};
  if (with_mean) {
    // Orthonormal basis of the orbit's normal space inside the horizontal space.
    std::vector<CVec3> basis = {f.orthonormal[0], f.orthonormal[1]};
    for (const AmbientTangent& e : ambient::complex_frame(space, base)) {
      CVec3 v = e.vec;
      for (int pass = 0; pass < 2; ++pass) {
        for (const CVec3& b : basis) v -= space.hermitian(v, b).real() * b;
      }
      const double n = std::sqrt(std::max(0.0, space.hermitian(v, v).real()));
      if (n > 1e-3 && basis.size() < 4) basis.push_back(v / n);
    }
    for (std::size_t k = 2; k < basis.size(); ++k) {
      out.mean_curvature_vector.vec += shape_in_frame(space, f, basis[k]).trace() * basis[k];
    }
  }
  return out;
}

}  // namespace

OrbitData orbit_shape_operator(const PolarActionSpec& spec, const AmbientPoint& p,
                               const AmbientTangent& xi) {
  return orbit_data(spec, p, xi, true);
}

OrbitData orbit_shape_operator_fast(const PolarActionSpec& spec, const AmbientPoint& p,
                                    const AmbientTangent& xi) {
  return orbit_data(spec, p, xi, false);
}

Vec3 mean_curvature_model(const PolarActionSpec& spec, const Vec3& x) {
  const auto& space = spec.ambient;
  const auto& chart = spec.section;
  const CVec3 z = chart.lift(x);
  const OrbitFrame f = orbit_frame(spec, AmbientPoint{z});
  const auto normals = chart.tangent_frame(x);
  Vec3 out = Vec3::Zero();
  for (const Vec3& n : normals) {
    const CVec3 lifted = space.horizontal(f.z, chart.lift(n));
    out += shape_in_frame(space, f, lifted).trace() * n;
  }
  return out;
}

AmbientTangent mean_curvature_field(const PolarActionSpec& spec, const Vec2& u) {
  const Vec3 x = spec.section.model_point(u);
  return spec.section.lift_tangent(x, mean_curvature_model(spec, x));
}

double phi_map_model(const PolarActionSpec& spec, const Vec3& x, const Vec3& w) {
  const auto& space = spec.ambient;
  const auto& chart = spec.section;
  const CVec3 z = chart.lift(x);
  const OrbitFrame f = orbit_frame(spec, AmbientPoint{z});
  const Vec3 xi_model = chart.rotate(x, w);
  const CVec3 xi = space.horizontal(f.z, chart.lift(xi_model));
  const CVec3 jxi = cplx(0.0, 1.0) * xi;
  const CVec3 jw = cplx(0.0, 1.0) * space.horizontal(f.z, chart.lift(w));
  const Mat2 s = shape_in_frame(space, f, xi);
  Vec2 c, d;
  for (int a = 0; a < 2; ++a) {
    c[a] = space.hermitian(jxi, f.orthonormal[a]).real();
    d[a] = space.hermitian(jw, f.orthonormal[a]).real();
  }
  return d.dot(s * c);
}

double phi_map(const PolarActionSpec& spec, const AmbientPoint& p, const AmbientTangent& w) {
  const Vec3 x = spec.section.to_model(p);
  const Vec3 wm = spec.section.tangent_to_model(w);
  const double n = std::sqrt(spec.ambient.real_form(wm, wm));
  if (std::abs(n - 1.0) > 1e-8) throw Error(ErrorKind::InvalidArgument, "direction must be a unit vector");
  return phi_map_model(spec, x, wm);
}

HopfDirectionScan scan_hopf_directions(const PolarActionSpec& spec, const Vec3& x, int n_samples,
                                       double tol) {
  if (n_samples < 90) throw Error(ErrorKind::InvalidArgument, "at least 90 circle samples are required");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (!is_regular_model(spec, x)) throw Error(ErrorKind::SingularOrbit, "point lies on a singular orbit");

  const auto frame = spec.section.tangent_frame(x);
  auto direction = [&](double theta) -> Vec3 {
    return std::cos(theta) * frame[0] + std::sin(theta) * frame[1];
  };
  auto phi = [&](double theta) { return phi_map_model(spec, x, direction(theta)); };

  HopfDirectionScan scan;
  scan.point = x;
  const double dtheta = 2.0 * std::numbers::pi / n_samples;
  scan.angles.resize(n_samples);
  scan.profile.resize(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    scan.angles[k] = k * dtheta;
    scan.profile[k] = phi(scan.angles[k]);
    scan.max_abs = std::max(scan.max_abs, std::abs(scan.profile[k]));
  }
  if (scan.max_abs < tol) {
    throw Error(ErrorKind::Degenerate, "obstruction map vanishes on every sample; inconclusive");
  }

  auto record = [&](double theta, double value) {
    for (double existing : scan.zero_angles) {
      double gap = std::abs(existing - theta);
      gap = std::min(gap, 2.0 * std::numbers::pi - gap);
      if (gap < 0.5 * dtheta) return;
    }
    scan.zero_angles.push_back(theta);
    scan.zero_directions.push_back(direction(theta));
    scan.zero_values.push_back(value);
  };

  for (int k = 0; k < n_samples; ++k) {
    const double fa = scan.profile[k];
    if (fa == 0.0) {
      record(scan.angles[k], 0.0);
      continue;
    }
    const int next = (k + 1) % n_samples;
    const double fb = scan.profile[next];
    if (fa * fb >= 0.0) continue;
    double lo = scan.angles[k];
    double hi = lo + dtheta;
    double flo = fa;
    double mid = 0.5 * (lo + hi);
    double fmid = phi(mid);
    for (int it = 0; it < 60 && std::abs(fmid) >= 0.01 * tol; ++it) {
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
      mid = 0.5 * (lo + hi);
      fmid = phi(mid);
    }
    if (std::abs(fmid) < tol) {
      record(std::fmod(mid, 2.0 * std::numbers::pi), fmid);
    }
  }
  return scan;
}

std::vector<AmbientTangent> hopf_directions(const PolarActionSpec& spec, const AmbientPoint& p,
                                            int n_samples, double tol) {
  const Vec3 x = spec.section.to_model(p);
  const HopfDirectionScan scan = scan_hopf_directions(spec, x, n_samples, tol);
  std::vector<AmbientTangent> out;
  for (const Vec3& w : scan.zero_directions) {
    out.push_back(ambient::rebase(spec.ambient, spec.section.lift_tangent(x, w), p));
  }
  return out;
}

}  // namespace hopflab::actions
