#pragma once

#include "hopflab/ambient.hpp"

namespace hopflab::detail {

// Riemannian inner product of two horizontal vectors at the same representative.
inline double inner(const ambient::SpaceForm& space, const CVec3& a, const CVec3& b) {
  return ambient::kMetricScale * space.hermitian(a, b).real();
}

}  // namespace hopflab::detail
