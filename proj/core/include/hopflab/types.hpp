#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <complex>
#include <stdexcept>
#include <string>

namespace hopflab {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

enum class ErrorKind {
  InvalidArgument,
  BaseMismatch,
  NotTotallyReal,
  SingularOrbit,
  NotNormal,
  Immersion,
  Precondition,
  Degenerate,
  Domain,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hopflab
