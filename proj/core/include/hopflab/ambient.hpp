#pragma once

#include "hopflab/types.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

// Nonflat complex space forms of complex dimension two in the projective
// model. A point is a complex line in C^3 carrying the Hermitian form
// <z,w> = s z0 conj(w0) + z1 conj(w1) + z2 conj(w2) with s = +1 (CP^2) or
// s = -1 (CH^2). Representatives are scaled to <z,z> = kKappa(c) = 4/c, and
// tangent vectors are horizontal lifts (<v,z> = 0) with metric
// kMetricScale * Re<v,w>. With these constants the holomorphic sectional
// curvature equals c.

namespace hopflab::ambient {

enum class SpaceKind { ProjectivePlane, HyperbolicPlane };

inline constexpr double kMetricScale = 1.0;
inline constexpr double kNormalizationTol = 1e-8;
inline constexpr double kHorizontalTol = 1e-8;
inline constexpr double kDefaultCovariantStep = 1e-5;

class SpaceForm {
 public:
  explicit SpaceForm(double c);

  double c() const noexcept { return c_; }
  SpaceKind kind() const noexcept {
    return c_ > 0 ? SpaceKind::ProjectivePlane : SpaceKind::HyperbolicPlane;
  }
  bool projective() const noexcept { return c_ > 0; }
  // Hermitian square of a normalized representative.
  double kappa() const noexcept { return 4.0 / c_; }
  // Curvature radius sqrt|kappa|; geodesics are circles/hyperbolas of this scale.
  double radius() const noexcept { return radius_; }
  // Diagonal of the Hermitian form.
  Vec3 signature() const noexcept { return Vec3(c_ > 0 ? 1.0 : -1.0, 1.0, 1.0); }
  CMat3 form_matrix() const;

  cplx hermitian(const CVec3& a, const CVec3& b) const noexcept;
  double real_form(const Vec3& x, const Vec3& y) const noexcept;
  // Horizontal projection of v at the representative z.
  CVec3 horizontal(const CVec3& z, const CVec3& v) const noexcept;
  // Real rescaling of a representative to <z,z> = kappa; throws if the vector
  // lies outside the model domain.
  CVec3 normalize(const CVec3& z) const;

  bool operator==(const SpaceForm& other) const noexcept { return c_ == other.c_; }

 private:
  double c_;
  double radius_;
};

struct AmbientPoint {
  CVec3 rep;
};

struct AmbientTangent {
  AmbientPoint base;
  CVec3 vec;
};

AmbientPoint make_point(const SpaceForm& space, const CVec3& rep);
// Projects vec to the horizontal space at p.
AmbientTangent make_tangent(const SpaceForm& space, const AmbientPoint& p, const CVec3& vec);

bool same_point(const SpaceForm& space, const AmbientPoint& p, const AmbientPoint& q,
                double tol = 1e-9);
// Expresses v with respect to the representative of p (phase alignment);
// throws ErrorKind::BaseMismatch when v is based at a different point.
AmbientTangent rebase(const SpaceForm& space, const AmbientTangent& v, const AmbientPoint& p);

double metric(const SpaceForm& space, const AmbientTangent& v, const AmbientTangent& w);
double norm(const SpaceForm& space, const AmbientTangent& v);
AmbientTangent complex_structure(const AmbientTangent& v);

// <R(x,y)z,w> from the closed form for constant holomorphic curvature.
double curvature_form(const SpaceForm& space, const AmbientTangent& x, const AmbientTangent& y,
                      const AmbientTangent& z, const AmbientTangent& w);
AmbientTangent curvature_tensor(const SpaceForm& space, const AmbientTangent& x,
                                const AmbientTangent& y, const AmbientTangent& z);

// Real orthonormal basis (e, Je, f, Jf) of the tangent space at p.
std::array<AmbientTangent, 4> complex_frame(const SpaceForm& space, const AmbientPoint& p);

AmbientPoint exp_map(const SpaceForm& space, const AmbientPoint& p, const AmbientTangent& v,
                     double t = 1.0);
// Velocity of t -> exp_map(p, v, t), expressed at the returned representative.
AmbientTangent geodesic_velocity(const SpaceForm& space, const AmbientPoint& p,
                                 const AmbientTangent& v, double t);
double distance(const SpaceForm& space, const AmbientPoint& p, const AmbientPoint& q);

using CurveFn = std::function<AmbientPoint(double)>;
using FieldFn = std::function<AmbientTangent(double)>;

// Second-order central difference of the field along the curve, corrected by
// the connection term of the projective model.
AmbientTangent covariant_derivative(const SpaceForm& space, const CurveFn& curve,
                                    const FieldFn& field, double t0,
                                    double step = kDefaultCovariantStep);

// Map from n real parameters to representatives in C^3.
using PointMap = std::function<CVec3(std::span<const double>)>;

// First and second order data of a parametrized submanifold at one parameter:
// tangents[i] = horizontal part of the i-th coordinate velocity and
// nabla[i][j] = ambient covariant derivative of tangent j along coordinate i.
struct CoordinateJet {
  AmbientPoint point;
  std::vector<CVec3> tangents;
  std::vector<std::vector<CVec3>> nabla;
};

// Fourth-order central stencils with the given step.
CoordinateJet coordinate_jet(const SpaceForm& space, const PointMap& map,
                             std::span<const double> q, double step);

// Totally geodesic totally real surface exp_origin(u1 e1 + u2 e2), handled
// through its real model {x in R^3 : h(x,x) = kappa} mapped by a fixed
// H-unitary matrix (the frame): ambient point = frame * x.
class SectionChart {
 public:
  SectionChart(SpaceForm space, const CMat3& frame);

  const SpaceForm& space() const noexcept { return space_; }
  const CMat3& frame_matrix() const noexcept { return frame_; }
  AmbientPoint origin() const;
  std::array<AmbientTangent, 2> frame() const;
  double curvature() const noexcept { return space_.c() / 4.0; }

  Vec3 model_point(const Vec2& u) const;
  Vec2 coordinates(const Vec3& x) const;
  AmbientPoint point(const Vec2& u) const;
  CVec3 lift(const Vec3& x) const { return frame_ * x.cast<cplx>(); }
  AmbientTangent lift_tangent(const Vec3& x, const Vec3& v) const;
  // Recovers model coordinates of a point (or tangent) lying in the section.
  Vec3 to_model(const AmbientPoint& p) const;
  Vec3 tangent_to_model(const AmbientTangent& v) const;

  // Rotation by +90 degrees in T_x, mapping e1 to e2 at the origin.
  Vec3 rotate(const Vec3& x, const Vec3& v) const;
  // Orthonormal frame at x obtained by parallel transport of (e1, e2) along
  // the radial geodesic from the origin.
  std::array<Vec3, 2> tangent_frame(const Vec3& x) const;
  // Model-space geodesic from x with initial velocity v.
  Vec3 model_exp(const Vec3& x, const Vec3& v, double t) const;
  Vec3 model_exp_velocity(const Vec3& x, const Vec3& v, double t) const;
  double model_distance(const Vec3& x, const Vec3& y) const;
  // Projection of v onto the model tangent space at x.
  Vec3 model_tangent(const Vec3& x, const Vec3& v) const;

 private:
  SpaceForm space_;
  CMat3 frame_;
  CMat3 frame_inverse_;
};

// Builds the section through p spanned by the orthonormal totally real pair
// (e1, e2); throws ErrorKind::NotTotallyReal or InvalidArgument otherwise.
SectionChart section_chart(const SpaceForm& space, const AmbientPoint& p, const AmbientTangent& e1,
                           const AmbientTangent& e2, double tol = 1e-8);

}  // namespace hopflab::ambient
