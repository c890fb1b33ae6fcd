#include "hopflab/ambient.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hopflab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::BaseMismatch: return "base-mismatch";
    case ErrorKind::NotTotallyReal: return "not-totally-real";
    case ErrorKind::SingularOrbit: return "singular-orbit";
    case ErrorKind::NotNormal: return "not-normal";
    case ErrorKind::Immersion: return "immersion";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace hopflab

namespace hopflab::ambient {

SpaceForm::SpaceForm(double c) : c_(c), radius_(0.0) {
  if (!std::isfinite(c) || c == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "holomorphic curvature must be finite and nonzero");
  }
  radius_ = std::sqrt(std::abs(4.0 / c));
}

CMat3 SpaceForm::form_matrix() const {
  return signature().cast<cplx>().asDiagonal();
}

cplx SpaceForm::hermitian(const CVec3& a, const CVec3& b) const noexcept {
  const double s = c_ > 0 ? 1.0 : -1.0;
  return s * a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

double SpaceForm::real_form(const Vec3& x, const Vec3& y) const noexcept {
  const double s = c_ > 0 ? 1.0 : -1.0;
  return s * x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

CVec3 SpaceForm::horizontal(const CVec3& z, const CVec3& v) const noexcept {
  return v - (hermitian(v, z) / kappa()) * z;
}

CVec3 SpaceForm::normalize(const CVec3& z) const {
  const double q = hermitian(z, z).real();
  const double scale2 = z.squaredNorm();
  if (!(scale2 > 0.0) || !std::isfinite(scale2) || q * kappa() <= 1e-14 * scale2 * std::abs(kappa())) {
    throw Error(ErrorKind::Domain, "representative is outside the model domain");
  }
  return z * std::sqrt(kappa() / q);
}

AmbientPoint make_point(const SpaceForm& space, const CVec3& rep) {
  return AmbientPoint{space.normalize(rep)};
}

AmbientTangent make_tangent(const SpaceForm& space, const AmbientPoint& p, const CVec3& vec) {
  return AmbientTangent{p, space.horizontal(p.rep, vec)};
}

namespace {

// Phase factor lambda with q ~ lambda p for normalized representatives.
cplx relative_phase(const SpaceForm& space, const CVec3& p, const CVec3& q) {
  return space.hermitian(q, p) / space.kappa();
}

}  // namespace

bool same_point(const SpaceForm& space, const AmbientPoint& p, const AmbientPoint& q, double tol) {
  const cplx lambda = relative_phase(space, p.rep, q.rep);
  const double scale = std::max(1.0, p.rep.cwiseAbs().maxCoeff());
  return (q.rep - lambda * p.rep).cwiseAbs().maxCoeff() <= tol * scale;
}

AmbientTangent rebase(const SpaceForm& space, const AmbientTangent& v, const AmbientPoint& p) {
  if (v.base.rep == p.rep) return v;
  if (!same_point(space, p, v.base)) {
    throw Error(ErrorKind::BaseMismatch, "tangent vectors are based at different points");
  }
  const cplx lambda = relative_phase(space, p.rep, v.base.rep);
  return AmbientTangent{p, v.vec / lambda};
}

double metric(const SpaceForm& space, const AmbientTangent& v, const AmbientTangent& w) {
  const AmbientTangent w_at_v = rebase(space, w, v.base);
  return kMetricScale * space.hermitian(v.vec, w_at_v.vec).real();
}

double norm(const SpaceForm& space, const AmbientTangent& v) {
  return std::sqrt(std::max(0.0, metric(space, v, v)));
}

AmbientTangent complex_structure(const AmbientTangent& v) {
  return AmbientTangent{v.base, cplx(0.0, 1.0) * v.vec};
}

double curvature_form(const SpaceForm& space, const AmbientTangent& x, const AmbientTangent& y,
                      const AmbientTangent& z, const AmbientTangent& w) {
  const AmbientTangent y0 = rebase(space, y, x.base);
  const AmbientTangent z0 = rebase(space, z, x.base);
  const AmbientTangent w0 = rebase(space, w, x.base);
  const AmbientTangent jx = complex_structure(x);
  const AmbientTangent jy = complex_structure(y0);
  const AmbientTangent jz = complex_structure(z0);
  auto g = [&](const AmbientTangent& a, const AmbientTangent& b) { return metric(space, a, b); };
  return space.c() / 4.0 *
         (g(y0, z0) * g(x, w0) - g(x, z0) * g(y0, w0) + g(jy, z0) * g(jx, w0) -
          g(jx, z0) * g(jy, w0) - 2.0 * g(jx, y0) * g(jz, w0));
}

AmbientTangent curvature_tensor(const SpaceForm& space, const AmbientTangent& x,
                                const AmbientTangent& y, const AmbientTangent& z) {
  AmbientTangent out{x.base, CVec3::Zero()};
  for (const AmbientTangent& e : complex_frame(space, x.base)) {
    out.vec += curvature_form(space, x, y, z, e) * e.vec;
  }
  return out;
}

std::array<AmbientTangent, 4> complex_frame(const SpaceForm& space, const AmbientPoint& p) {
  std::array<CVec3, 3> candidates;
  for (int k = 0; k < 3; ++k) {
    candidates[k] = space.horizontal(p.rep, CVec3::Unit(k));
  }
  auto hnorm = [&](const CVec3& v) { return std::sqrt(std::max(0.0, space.hermitian(v, v).real())); };
  int first = 0;
  for (int k = 1; k < 3; ++k) {
    if (hnorm(candidates[k]) > hnorm(candidates[first])) first = k;
  }
  const CVec3 e = candidates[first] / hnorm(candidates[first]);
  CVec3 best = CVec3::Zero();
  double best_norm = -1.0;
  for (int k = 0; k < 3; ++k) {
    if (k == first) continue;
    const CVec3 v = candidates[k] - space.hermitian(candidates[k], e) * e;
    const double n = hnorm(v);
    if (n > best_norm) {
      best_norm = n;
      best = v;
    }
  }
  const CVec3 f = best / best_norm;
  const cplx i(0.0, 1.0);
  return {AmbientTangent{p, e}, AmbientTangent{p, i * e}, AmbientTangent{p, f},
          AmbientTangent{p, i * f}};
}

AmbientPoint exp_map(const SpaceForm& space, const AmbientPoint& p, const AmbientTangent& v,
                     double t) {
  const AmbientTangent w = rebase(space, v, p);
  const double n = norm(space, w);
  if (n * std::abs(t) == 0.0) return p;
  const double r = space.radius();
  const double arg = n * t / r;
  CVec3 z;
  if (space.projective()) {
    z = std::cos(arg) * p.rep + (r * std::sin(arg) / n) * w.vec;
  } else {
    z = std::cosh(arg) * p.rep + (r * std::sinh(arg) / n) * w.vec;
  }
  return make_point(space, z);
}

AmbientTangent geodesic_velocity(const SpaceForm& space, const AmbientPoint& p,
                                 const AmbientTangent& v, double t) {
  const AmbientTangent w = rebase(space, v, p);
  const double n = norm(space, w);
  const AmbientPoint q = exp_map(space, p, w, t);
  if (n == 0.0) return AmbientTangent{q, CVec3::Zero()};
  const double r = space.radius();
  const double arg = n * t / r;
  CVec3 vel;
  if (space.projective()) {
    vel = -(n / r) * std::sin(arg) * p.rep + std::cos(arg) * w.vec;
  } else {
    vel = (n / r) * std::sinh(arg) * p.rep + std::cosh(arg) * w.vec;
  }
  // exp_map renormalizes by a factor 1 + O(eps); keep the velocity horizontal at q.
  return make_tangent(space, q, vel);
}

double distance(const SpaceForm& space, const AmbientPoint& p, const AmbientPoint& q) {
  const CVec3 a = space.normalize(p.rep);
  const CVec3 b = space.normalize(q.rep);
  const double kappa = space.kappa();
  const double r = space.radius();
  const cplx pairing = space.hermitian(b, a);
  const CVec3 w = b - (pairing / kappa) * a;
  const double w2 = std::max(0.0, space.hermitian(w, w).real());
  if (space.projective()) {
    return r * std::atan2(std::sqrt(w2) / r, std::abs(pairing) / kappa);
  }
  return r * std::asinh(std::sqrt(w2) / r);
}

AmbientTangent covariant_derivative(const SpaceForm& space, const CurveFn& curve,
                                    const FieldFn& field, double t0, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const AmbientPoint p0 = curve(t0);
  const CVec3 z0 = space.normalize(p0.rep);
  const AmbientPoint base{z0};
  const double kappa = space.kappa();

  // Gauge each sample so that its pairing with z0 is real with the sign of
  // kappa (as <z0, z0> is); the aligned curve of representatives is then
  // horizontal at t0 to first order.
  auto aligned = [&](double t, CVec3& z, CVec3& v) {
    const AmbientPoint pt = curve(t);
    const AmbientTangent ft = field(t);
    const CVec3 zt = space.normalize(pt.rep);
    const AmbientTangent ftr = rebase(space, ft, AmbientPoint{zt});
    const cplx pairing = space.hermitian(zt, z0);
    const double mag = std::abs(pairing);
    const double sign = kappa < 0.0 ? -1.0 : 1.0;
    const cplx phase = mag > 0.0 ? sign * std::conj(pairing) / mag : cplx(1.0, 0.0);
    z = zt * phase;
    v = ftr.vec * phase;
  };
  CVec3 zp, vp, zm, vm;
  aligned(t0 + step, zp, vp);
  aligned(t0 - step, zm, vm);
  const CVec3 dz = (zp - zm) / (2.0 * step);
  const CVec3 dv = (vp - vm) / (2.0 * step);
  const AmbientTangent v0 = rebase(space, field(t0), base);
  const double theta = space.hermitian(dz, z0).imag() / kappa;
  return AmbientTangent{base, space.horizontal(z0, dv) - cplx(0.0, theta) * v0.vec};
}

}  // namespace hopflab::ambient
