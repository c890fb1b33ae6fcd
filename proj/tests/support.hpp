#pragma once

#include "hopflab/actions.hpp"
#include "hopflab/ambient.hpp"

#include <cmath>
#include <cstdint>
#include <random>

// Helpers shared by the unit and acceptance tests. The curvature oracle here
// only uses exp_map and distance, never the curvature tensor itself.

namespace hopflab::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  CVec3 complex_vector() {
    CVec3 v;
    for (int k = 0; k < 3; ++k) v[k] = cplx(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

inline ambient::AmbientTangent unit_tangent(const ambient::SpaceForm& space, const ambient::AmbientPoint& p, Rng& rng) {
  ambient::AmbientTangent v = ambient::make_tangent(space, p, rng.complex_vector());
  v.vec /= ambient::norm(space, v);
  return v;
}

inline ambient::AmbientPoint random_point(const ambient::SpaceForm& space, Rng& rng) {
  const ambient::AmbientPoint origin = ambient::make_point(space, CVec3::UnitX());
  return ambient::exp_map(space, origin, unit_tangent(space, origin, rng), rng.uniform(0.1, 1.0) * space.radius());
}

// Unit vector orthogonal to v (and to Jv when totally_real is set).
inline ambient::AmbientTangent orthonormal_partner(const ambient::SpaceForm& space, const ambient::AmbientTangent& v,
                                                   Rng& rng, bool totally_real) {
  ambient::AmbientTangent w = unit_tangent(space, v.base, rng);
  w.vec -= ambient::metric(space, w, v) * v.vec;
  if (totally_real) {
    const ambient::AmbientTangent jv = ambient::complex_structure(v);
    w.vec -= ambient::metric(space, w, jv) * jv.vec;
  }
  w.vec /= ambient::norm(space, w);
  return w;
}

// Sectional curvature of the plane of orthonormal x, y from the expansion
// d(exp tx, exp ty)^2 = 2t^2 - K t^4 / 3 + O(t^6).
inline double distance_sectional(const ambient::SpaceForm& space, const ambient::AmbientTangent& x,
                                  const ambient::AmbientTangent& y, double t) {
  const double d = ambient::distance(space, ambient::exp_map(space, x.base, x, t), ambient::exp_map(space, y.base, y, t));
  return 3.0 * (2.0 * t * t - d * d) / (t * t * t * t);
}

}  // namespace hopflab::testing
