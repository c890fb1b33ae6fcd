#include "hopflab/ambient.hpp"

#include <cmath>

namespace hopflab::ambient {

namespace {

// Trigonometric or hyperbolic pair (cos, r sin(rho/r)/rho) with a safe limit at 0.
struct RadialPair {
  double cos_part;
  double sin_over_rho;
};

RadialPair radial(const SpaceForm& space, double rho) {
  const double r = space.radius();
  const double a = rho / r;
  if (space.projective()) {
    const double s = std::abs(a) < 1e-8 ? 1.0 - a * a / 6.0 : std::sin(a) / a;
    return {std::cos(a), s};
  }
  const double s = std::abs(a) < 1e-8 ? 1.0 + a * a / 6.0 : std::sinh(a) / a;
  return {std::cosh(a), s};
}

}  // namespace

SectionChart::SectionChart(SpaceForm space, const CMat3& frame) : space_(space), frame_(frame) {
  const CMat3 h = space_.form_matrix();
  const CMat3 check = frame_.adjoint() * h * frame_;
  if ((check - h).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "section frame is not unitary for the ambient form");
  }
  frame_inverse_ = h * frame_.adjoint() * h;
}

AmbientPoint SectionChart::origin() const { return point(Vec2::Zero()); }

std::array<AmbientTangent, 2> SectionChart::frame() const {
  const Vec3 x = model_point(Vec2::Zero());
  return {lift_tangent(x, Vec3::UnitY()), lift_tangent(x, Vec3::UnitZ())};
}

Vec3 SectionChart::model_point(const Vec2& u) const {
  const double rho = u.norm();
  const RadialPair rp = radial(space_, rho);
  const double r = space_.radius();
  return Vec3(r * rp.cos_part, rp.sin_over_rho * u[0], rp.sin_over_rho * u[1]);
}

Vec2 SectionChart::coordinates(const Vec3& x) const {
  const double r = space_.radius();
  const double tail = std::hypot(x[1], x[2]);
  if (tail == 0.0) return Vec2::Zero();
  double rho;
  if (space_.projective()) {
    rho = r * std::atan2(tail, x[0]);
  } else {
    rho = r * std::asinh(tail / r);
  }
  return Vec2(x[1], x[2]) * (rho / tail);
}

AmbientPoint SectionChart::point(const Vec2& u) const {
  return make_point(space_, lift(model_point(u)));
}

AmbientTangent SectionChart::lift_tangent(const Vec3& x, const Vec3& v) const {
  const AmbientPoint p = make_point(space_, lift(x));
  return make_tangent(space_, p, frame_ * model_tangent(x, v).cast<cplx>());
}

namespace {

// Phase and sign that turn frame_inverse * rep into a real model vector.
cplx model_phase(const SpaceForm& space, const CVec3& y) {
  int k = 0;
  y.cwiseAbs().maxCoeff(&k);
  cplx phase = std::conj(y[k]) / std::abs(y[k]);
  Vec3 x = (y * phase).real();
  const bool flip = space.projective() ? (x[0] < 0.0 || (x[0] == 0.0 && x[k] < 0.0)) : x[0] < 0.0;
  if (flip) phase = -phase;
  return phase;
}

}  // namespace

Vec3 SectionChart::to_model(const AmbientPoint& p) const {
  const CVec3 y = frame_inverse_ * space_.normalize(p.rep);
  const cplx phase = model_phase(space_, y);
  const CVec3 aligned = y * phase;
  if (aligned.imag().cwiseAbs().maxCoeff() > 1e-7 * std::max(1.0, aligned.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::InvalidArgument, "point does not lie in the section");
  }
  Vec3 x = aligned.real();
  return x * std::sqrt(space_.kappa() / space_.real_form(x, x));
}

Vec3 SectionChart::tangent_to_model(const AmbientTangent& v) const {
  const CVec3 y = frame_inverse_ * space_.normalize(v.base.rep);
  const double scale = std::sqrt(space_.kappa() / space_.hermitian(v.base.rep, v.base.rep).real());
  const cplx phase = model_phase(space_, y);
  const CVec3 w = frame_inverse_ * (v.vec * scale) * phase;
  if (w.imag().cwiseAbs().maxCoeff() > 1e-7 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::InvalidArgument, "vector is not tangent to the section");
  }
  const Vec3 x = to_model(v.base);
  return model_tangent(x, w.real());
}

Vec3 SectionChart::rotate(const Vec3& x, const Vec3& v) const {
  const Vec3 cross = x.cross(v);
  return space_.signature().cwiseProduct(cross) / space_.radius();
}

std::array<Vec3, 2> SectionChart::tangent_frame(const Vec3& x) const {
  const Vec2 u = coordinates(x);
  const double rho = u.norm();
  Vec3 f1 = Vec3::UnitY();
  if (rho > 1e-12) {
    const Vec2 dir = u / rho;
    const Vec3 radial_dir(0.0, dir[0], dir[1]);
    const double along = dir[0];
    const double a = rho / space_.radius();
    const Vec3 velocity = space_.projective()
                              ? Vec3(-std::sin(a), std::cos(a) * dir[0], std::cos(a) * dir[1])
                              : Vec3(std::sinh(a), std::cosh(a) * dir[0], std::cosh(a) * dir[1]);
    f1 = (Vec3::UnitY() - along * radial_dir) + along * velocity;
  }
  f1 = model_tangent(x, f1);
  f1 /= std::sqrt(space_.real_form(f1, f1));
  return {f1, rotate(x, f1)};
}

Vec3 SectionChart::model_exp(const Vec3& x, const Vec3& v, double t) const {
  const double n = std::sqrt(std::max(0.0, space_.real_form(v, v)));
  if (n * std::abs(t) == 0.0) return x;
  const double r = space_.radius();
  const double a = n * t / r;
  if (space_.projective()) return std::cos(a) * x + (r * std::sin(a) / n) * v;
  return std::cosh(a) * x + (r * std::sinh(a) / n) * v;
}

Vec3 SectionChart::model_exp_velocity(const Vec3& x, const Vec3& v, double t) const {
  const double n = std::sqrt(std::max(0.0, space_.real_form(v, v)));
  if (n == 0.0) return Vec3::Zero();
  const double r = space_.radius();
  const double a = n * t / r;
  if (space_.projective()) return -(n / r) * std::sin(a) * x + std::cos(a) * v;
  return (n / r) * std::sinh(a) * x + std::cosh(a) * v;
}

double SectionChart::model_distance(const Vec3& x, const Vec3& y) const {
  const double kappa = space_.kappa();
  const double r = space_.radius();
  const double pairing = space_.real_form(x, y);
  const Vec3 w = y - (pairing / kappa) * x;
  const double w2 = std::max(0.0, space_.real_form(w, w));
  if (space_.projective()) return r * std::atan2(std::sqrt(w2) / r, std::abs(pairing) / kappa);
  return r * std::asinh(std::sqrt(w2) / r);
}

Vec3 SectionChart::model_tangent(const Vec3& x, const Vec3& v) const {
  return v - (space_.real_form(v, x) / space_.kappa()) * x;
}

SectionChart section_chart(const SpaceForm& space, const AmbientPoint& p, const AmbientTangent& e1,
                           const AmbientTangent& e2, double tol) {
  const AmbientTangent a = rebase(space, e1, p);
  const AmbientTangent b = rebase(space, e2, p);
  if (std::abs(space.hermitian(a.vec, p.rep)) > tol || std::abs(space.hermitian(b.vec, p.rep)) > tol) {
    throw Error(ErrorKind::InvalidArgument, "section frame must be horizontal");
  }
  if (std::abs(metric(space, a, a) - 1.0) > tol || std::abs(metric(space, b, b) - 1.0) > tol ||
      std::abs(metric(space, a, b)) > tol) {
    throw Error(ErrorKind::InvalidArgument, "section frame must be orthonormal");
  }
  if (std::abs(metric(space, complex_structure(a), b)) > tol) {
    throw Error(ErrorKind::NotTotallyReal, "section frame spans a complex direction");
  }
  const CVec3 z = space.normalize(p.rep);
  CMat3 frame;
  frame.col(0) = z / space.radius();
  frame.col(1) = a.vec;
  frame.col(2) = b.vec;
  return SectionChart(space, frame);
}

}  // namespace hopflab::ambient
