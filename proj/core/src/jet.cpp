#include "hopflab/ambient.hpp"
#include "hopflab/finite_difference.hpp"

#include <vector>

namespace hopflab::ambient {

CoordinateJet coordinate_jet(const SpaceForm& space, const PointMap& map, std::span<const double> q,
                             double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "jet step must be positive");
  const std::size_t n = q.size();
  std::vector<double> work(q.begin(), q.end());

  auto eval = [&]() -> CVec3 { return space.normalize(map(work)); };
  // Evaluates the map with coordinate i shifted to value x (others as in work).
  auto along = [&](std::size_t i) {
    return [&, i](double x) -> CVec3 {
      const double saved = work[i];
      work[i] = x;
      const CVec3 out = eval();
      work[i] = saved;
      return out;
    };
  };

  const CVec3 z = eval();
  const double kappa = space.kappa();

  std::vector<CVec3> d(n);
  std::vector<std::vector<CVec3>> second(n, std::vector<CVec3>(n));
  for (std::size_t i = 0; i < n; ++i) {
    auto f = along(i);
    const CVec3 p1 = f(q[i] + step);
    const CVec3 m1 = f(q[i] - step);
    const CVec3 p2 = f(q[i] + 2.0 * step);
    const CVec3 m2 = f(q[i] - 2.0 * step);
    d[i] = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * step);
    second[i][i] = (16.0 * (p1 + m1) - (p2 + m2) - 30.0 * z) / (12.0 * step * step);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto inner = [&, i, j](double x) -> CVec3 {
        const double saved = work[i];
        work[i] = x;
        const CVec3 out = fd::first4(along(j), work[j], step);
        work[i] = saved;
        return out;
      };
      second[i][j] = fd::first4(inner, q[i], step);
      second[j][i] = second[i][j];
    }
  }

  CoordinateJet jet;
  jet.point = AmbientPoint{z};
  jet.tangents.resize(n);
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = space.hermitian(d[i], z).imag() / kappa;
    jet.tangents[i] = space.horizontal(z, d[i]);
  }
  const cplx unit(0.0, 1.0);
  jet.nabla.assign(n, std::vector<CVec3>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      jet.nabla[i][j] = space.horizontal(z, second[i][j]) - unit * theta[j] * jet.tangents[i] -
                        unit * theta[i] * jet.tangents[j];
    }
  }
  return jet;
}

}  // namespace hopflab::ambient
