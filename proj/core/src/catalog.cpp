#include "hopflab/catalog.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hopflab::catalog {

using ambient::AmbientPoint;
using ambient::AmbientTangent;
using hypersurface::HypersurfacePatch;
using hypersurface::ParameterBox;
using hypersurface::Params;

namespace {

const cplx kI(0.0, 1.0);

// Hypersurface normal at the centre of the box for the given orientation.
AmbientTangent center_normal(const HypersurfacePatch& patch) {
  const hypersurface::PointGeometry g = hypersurface::point_geometry(patch, patch.box().center());
  return AmbientTangent{g.point, g.normal};
}

// Orientation whose normal has negative pairing with the reference vector
// (given at the patch point of the box centre).
HypersurfacePatch orient_against(const HypersurfacePatch& patch, const AmbientTangent& reference) {
  const AmbientTangent n = center_normal(patch);
  const AmbientTangent ref = ambient::rebase(patch.space(), reference, n.base);
  const double s = ambient::metric(patch.space(), n, ref);
  return s <= 0.0 ? patch : patch.with_orientation(-patch.orientation());
}

// Orientation with non-negative mean curvature at the box centre.
HypersurfacePatch orient_mean_positive(const HypersurfacePatch& patch) {
  const double trace = hypersurface::shape_operator(patch, patch.box().center()).spectrum.values.sum();
  return trace >= 0.0 ? patch : patch.with_orientation(-patch.orientation());
}

// Normalized origin e0 of the model.
AmbientPoint model_origin(const ambient::SpaceForm& space) {
  return ambient::make_point(space, CVec3::UnitX());
}

// cos/sin for CP^2 and cosh/sinh for CH^2 at the scaled argument x / radius.
std::pair<double, double> trig(const ambient::SpaceForm& space, double x) {
  const double a = x / space.radius();
  return space.projective() ? std::pair{std::cos(a), std::sin(a)} : std::pair{std::cosh(a), std::sinh(a)};
}

void require_hyperbolic(const ambient::SpaceForm& space, const char* what) {
  if (space.projective()) throw Error(ErrorKind::InvalidArgument, std::string(what) + " requires c < 0");
}

Vec3 sorted_descending(Vec3 v) {
  std::sort(v.data(), v.data() + 3, std::greater<>());
  return v;
}

}  // namespace

std::vector<std::string> expectation_mismatches(const ExpectedClassification& e,
                                                const hypersurface::ClassificationReport& r,
                                                double spectrum_tol, double mean_tol) {
  std::vector<std::string> out;
  auto flag = [&](const char* name, const std::optional<bool>& want, bool got) {
    if (want && *want != got) out.emplace_back(name);
  };
  if (e.h && *e.h != r.h) out.emplace_back("h");
  flag("hopf", e.hopf, r.hopf);
  flag("strongly_two_hopf", e.strongly_two_hopf, r.strongly_two_hopf);
  flag("austere", e.austere, r.austere);
  flag("levi_flat", e.levi_flat, r.levi_flat);
  flag("ruled", e.ruled, r.ruled);
  flag("cmc", e.cmc, r.cmc);
  if (e.mean_curvature && std::abs(*e.mean_curvature - r.mean_curvature) > mean_tol) {
    out.emplace_back("mean_curvature");
  }
  for (std::size_t k = 0; k < e.spectrum.size() && k < 3; ++k) {
    const std::string key = "principal_" + std::to_string(k + 1);
    const double lo = r.residuals.at(key + "_min");
    const double hi = r.residuals.at(key + "_max");
    if (std::abs(lo - e.spectrum[k]) > spectrum_tol || std::abs(hi - e.spectrum[k]) > spectrum_tol) {
      out.push_back(key);
    }
  }
  return out;
}

CatalogEntry geodesic_sphere(const ambient::SpaceForm& space, const AmbientPoint& center, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
  const double sc = std::sqrt(std::abs(space.c()));
  if (space.projective() && r >= std::numbers::pi / sc) {
    throw Error(ErrorKind::Domain, "sphere radius reaches the focal radius pi/sqrt(c)");
  }
  const AmbientPoint p = ambient::make_point(space, center.rep);
  const auto frame = ambient::complex_frame(space, p);
  auto direction = [space, p, frame](const Params& q) {
    const double psi = q[0];
    const CVec3 v = std::cos(psi) * (std::cos(q[1]) * frame[0].vec + std::sin(q[1]) * frame[1].vec) +
                    std::sin(psi) * (std::cos(q[2]) * frame[2].vec + std::sin(q[2]) * frame[3].vec);
    return AmbientTangent{p, v};
  };
  HypersurfacePatch::Map map = [space, p, direction, r](const Params& q) {
    return ambient::exp_map(space, p, direction(q), r).rep;
  };
  const ParameterBox box{Params(0.4, 0.2, 0.2), Params(1.1, 1.2, 1.2)};
  HypersurfacePatch patch(space, map, box);
  const Params mid = box.center();
  // The inward normal gives positive principal curvatures.
  patch = orient_against(patch, ambient::geodesic_velocity(space, p, direction(mid), r));

  const double x = sc * r;
  Vec3 spectrum = space.projective()
                      ? Vec3(sc * std::cos(x) / std::sin(x), 0.5 * sc / std::tan(0.5 * x), 0.5 * sc / std::tan(0.5 * x))
                      : Vec3(sc / std::tanh(x), 0.5 * sc / std::tanh(0.5 * x), 0.5 * sc / std::tanh(0.5 * x));
  spectrum = sorted_descending(spectrum);
  ExpectedClassification expected;
  expected.h = 1;
  expected.hopf = true;
  expected.cmc = true;
  expected.austere = false;
  expected.mean_curvature = spectrum.sum();
  expected.spectrum = {spectrum[0], spectrum[1], spectrum[2]};
  return CatalogEntry{"geodesic-sphere", space, {{"c", space.c()}, {"r", r}}, patch, expected, {5, 4, 4}};
}

CatalogEntry horosphere(const ambient::SpaceForm& space) {
  require_hyperbolic(space, "horosphere");
  // Nilpotent algebra fixing the null direction e0 + e1.
  CMat3 x1, x2, z;
  const double s = 1.0 / std::sqrt(2.0);
  x1 << 0, 0, s, 0, 0, s, s, -s, 0;
  x2 << 0, 0, -kI * s, 0, 0, -kI * s, kI * s, -kI * s, 0;
  z << -0.5 * kI, 0.5 * kI, 0, -0.5 * kI, 0.5 * kI, 0, 0, 0, 0;
  const CVec3 o = model_origin(space).rep;
  HypersurfacePatch::Map map = [x1, x2, z, o](const Params& q) {
    return CVec3((q[0] * z + q[1] * x1 + q[2] * x2).exp() * o);
  };
  const ParameterBox box{Params(-0.3, -0.3, -0.3), Params(0.3, 0.3, 0.3)};
  HypersurfacePatch patch = orient_mean_positive(HypersurfacePatch(space, map, box));
  const double sc = std::sqrt(-space.c());
  ExpectedClassification expected;
  expected.h = 1;
  expected.hopf = true;
  expected.cmc = true;
  expected.austere = false;
  expected.mean_curvature = 2.0 * sc;
  expected.spectrum = {sc, 0.5 * sc, 0.5 * sc};
  return CatalogEntry{"horosphere", space, {{"c", space.c()}}, patch, expected, {5, 4, 4}};
}

CatalogEntry tube_real_plane(const ambient::SpaceForm& space, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "tube radius must be positive");
  if (space.projective() && r >= std::numbers::pi / (2.0 * std::sqrt(space.c()))) {
    throw Error(ErrorKind::Domain, "tube radius reaches the focal radius of the real plane");
  }
  const ambient::SectionChart chart(space, CMat3::Identity());
  const double rad = space.radius();
  HypersurfacePatch::Map map = [space, chart, r](const Params& q) {
    const Vec3 x = chart.model_point(Vec2(q[0], q[1]));
    const auto f = chart.tangent_frame(x);
    const AmbientTangent t = chart.lift_tangent(x, std::cos(q[2]) * f[0] + std::sin(q[2]) * f[1]);
    return ambient::exp_map(space, t.base, AmbientTangent{t.base, kI * t.vec}, r).rep;
  };
  const ParameterBox box{Params(-0.2 * rad, -0.2 * rad, 0.2), Params(0.2 * rad, 0.2 * rad, 1.2)};
  HypersurfacePatch patch = orient_mean_positive(HypersurfacePatch(space, map, box));
  ExpectedClassification expected;
  expected.h = 1;
  expected.hopf = true;
  expected.cmc = true;
  return CatalogEntry{"tube-rp2", space, {{"c", space.c()}, {"r", r}}, patch, expected, {5, 4, 4}};
}

CatalogEntry tube_complex_line(const ambient::SpaceForm& space, double r) {
  require_hyperbolic(space, "tube around a complex line");
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "tube radius must be positive");
  const AmbientPoint o = model_origin(space);
  const double rad = space.radius();
  HypersurfacePatch::Map map = [space, o, r](const Params& q) {
    const AmbientTangent v{o, CVec3(0.0, cplx(q[0], q[1]), 0.0)};
    const AmbientPoint base = ambient::exp_map(space, o, v, 1.0);
    const AmbientTangent n = ambient::make_tangent(space, base, CVec3(0.0, 0.0, std::polar(1.0, q[2])));
    return ambient::exp_map(space, base, n, r).rep;
  };
  const ParameterBox box{Params(-0.3 * rad, -0.3 * rad, 0.2), Params(0.3 * rad, 0.3 * rad, 1.2)};
  HypersurfacePatch patch = orient_mean_positive(HypersurfacePatch(space, map, box));
  ExpectedClassification expected;
  expected.h = 1;
  expected.hopf = true;
  expected.cmc = true;
  return CatalogEntry{"tube-ch1", space, {{"c", space.c()}, {"r", r}}, patch, expected, {5, 4, 4}};
}

CatalogEntry lohnherr(double c) {
  const ambient::SpaceForm space(c);
  require_hyperbolic(space, "Lohnherr hypersurface");
  const actions::PolarActionSpec spec = actions::polar_action(actions::ActionLabel::Ch2LineG2a, c);
  const auto& chart = spec.section;
  const Vec3 x0 = chart.model_point(Vec2::Zero());
  const Vec3 w0 = chart.tangent_frame(x0)[0];
  const constructor::SigmaCurve sigma = constructor::integrate_sigma(
      spec, x0, w0, constructor::CurveLaw::geodesic(), constructor::kDefaultStep, 200, 200);
  const constructor::EquivariantHypersurface ehs = constructor::build_hypersurface(spec, sigma);

  const double half = 0.5 * std::sqrt(-c);
  ExpectedClassification expected;
  expected.h = 2;
  expected.strongly_two_hopf = true;
  expected.austere = true;
  expected.levi_flat = true;
  expected.ruled = true;
  expected.mean_curvature = 0.0;
  expected.spectrum = {half, 0.0, -half};
  return CatalogEntry{"lohnherr", space, {{"c", c}}, ehs.patch, expected, {5, 4, 4}};
}

CatalogEntry bisector(const ambient::SpaceForm& space, const AmbientPoint& p1, const AmbientPoint& p2) {
  require_hyperbolic(space, "bisector");
  const AmbientPoint a = ambient::make_point(space, p1.rep);
  const AmbientPoint b = ambient::make_point(space, p2.rep);
  const double d = ambient::distance(space, a, b);
  if (!(d > 1e-9)) throw Error(ErrorKind::InvalidArgument, "bisector needs two distinct points");

  // Geodesic from a to b and its midpoint.
  // Gauge b so that <b, a> has the sign of <a, a> before projecting.
  const cplx pairing = space.hermitian(b.rep, a.rep);
  const double sign = space.kappa() < 0.0 ? -1.0 : 1.0;
  const CVec3 toward = space.horizontal(a.rep, b.rep * (sign * std::conj(pairing) / std::abs(pairing)));
  AmbientTangent v{a, toward};
  v.vec /= ambient::norm(space, v);
  const AmbientPoint mid = ambient::exp_map(space, a, v, 0.5 * d);
  const AmbientTangent w = ambient::geodesic_velocity(space, a, v, 0.5 * d);
  // The real spine runs orthogonally to ab inside the complex line through a, b.
  const AmbientTangent spine = ambient::rebase(space, AmbientTangent{w.base, kI * w.vec}, mid);
  // Hermitian normal of that complex line. Eigen's complex cross product is
  // already conjugated, so H (a x b) is orthogonal to both a and b.
  CVec3 n = space.signature().cast<cplx>().cwiseProduct(a.rep.cross(b.rep));
  n /= std::sqrt(space.hermitian(n, n).real());

  HypersurfacePatch::Map map = [space, mid, spine, n](const Params& q) {
    const AmbientPoint m = ambient::exp_map(space, mid, spine, q[0]);
    const AmbientTangent slice = ambient::make_tangent(space, m, cplx(q[1], q[2]) * n);
    return ambient::exp_map(space, m, slice, 1.0).rep;
  };
  const double rad = space.radius();
  const ParameterBox box{Params(-0.3 * rad, -0.3 * rad, -0.3 * rad), Params(0.3 * rad, 0.3 * rad, 0.3 * rad)};
  HypersurfacePatch patch(space, map, box);
  ExpectedClassification expected;
  expected.h = 2;
  expected.strongly_two_hopf = true;
  expected.austere = true;
  expected.levi_flat = true;
  expected.ruled = true;
  expected.mean_curvature = 0.0;
  return CatalogEntry{"bisector", space, {{"c", space.c()}, {"r", d}}, patch, expected, {5, 4, 4}};
}

CatalogEntry bisector(double c, double separation) {
  const ambient::SpaceForm space(c);
  require_hyperbolic(space, "bisector");
  const AmbientPoint o = model_origin(space);
  const AmbientTangent e{o, CVec3(0.0, 1.0, 0.0)};
  return bisector(space, ambient::exp_map(space, o, e, -0.5 * separation),
                  ambient::exp_map(space, o, e, 0.5 * separation));
}

CatalogEntry clifford_cone(const ambient::SpaceForm& space, int vertex) {
  if (vertex < 0 || vertex > 2) throw Error(ErrorKind::InvalidArgument, "vertex index must be 0, 1 or 2");
  const Vec3 sig = space.signature();
  if (sig[vertex] * space.kappa() <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "vertex is not a fixed point of the torus action in this space");
  }
  const CVec3 v = CVec3::Unit(vertex) * std::sqrt(space.kappa() / sig[vertex]);
  const int ia = (vertex + 1) % 3, ib = (vertex + 2) % 3;
  const double rad = space.radius();
  HypersurfacePatch::Map map = [space, v, ia, ib, rad](const Params& q) {
    const auto [co, si] = trig(space, q[0]);
    CVec3 u = CVec3::Zero();
    u[ia] = std::polar(1.0, q[1]) / std::sqrt(2.0);
    u[ib] = std::polar(1.0, q[2]) / std::sqrt(2.0);
    return CVec3(co * v + rad * si * u);
  };
  const double rho_min = std::max(0.2 * rad, 1e-2);
  const ParameterBox box{Params(rho_min, 0.2, 0.2), Params(0.6 * rad, 1.2, 1.2)};
  HypersurfacePatch patch(space, map, box);
  ExpectedClassification expected;
  expected.h = 2;
  expected.strongly_two_hopf = true;
  expected.austere = true;
  expected.levi_flat = true;
  expected.ruled = true;
  expected.mean_curvature = 0.0;
  const std::string name = space.projective() ? "clifford-cone-cp2" : "clifford-cone-ch2";
  return CatalogEntry{name, space, {{"c", space.c()}, {"vertex", static_cast<double>(vertex)}}, patch, expected,
                      {5, 4, 4}};
}

CatalogEntry clifford_cone(const ambient::SpaceForm& space, const AmbientPoint& vertex) {
  const CVec3 z = space.normalize(vertex.rep);
  int k = 0;
  z.cwiseAbs().maxCoeff(&k);
  for (int j = 0; j < 3; ++j) {
    if (j != k && std::abs(z[j]) > 1e-9 * std::abs(z[k])) {
      throw Error(ErrorKind::InvalidArgument, "vertex is not a fixed point of the torus action");
    }
  }
  return clifford_cone(space, k);
}

CatalogEntry ruled_fixture(const ambient::SpaceForm& space) {
  const double rad = space.radius();
  // A curve with no special relation to the complex structure.
  auto curve = [rad](double t) {
    return CVec3(rad, cplx(0.4 * t, 0.2 * t * t) * rad, cplx(0.3 * t * t, 0.5 * t) * rad);
  };
  auto velocity = [rad](double t) {
    return CVec3(0.0, cplx(0.4, 0.4 * t) * rad, cplx(0.6 * t, 0.5) * rad);
  };
  HypersurfacePatch::Map map = [space, curve, velocity, rad](const Params& q) {
    CVec3 tau = curve(q[0]);
    tau *= std::sqrt(space.kappa() / space.hermitian(tau, tau).real());
    CVec3 n = space.signature().cast<cplx>().cwiseProduct(tau.cross(velocity(q[0])));
    n /= std::sqrt(space.hermitian(n, n).real());
    const double rho = std::hypot(q[1], q[2]);
    const auto [co, si] = trig(space, rho);
    return CVec3(co * tau + (rad * si / rho) * cplx(q[1], q[2]) * n);
  };
  // Kept away from the focal set, where the third principal curvature blows up.
  const ParameterBox box{Params(-0.15, 0.15 * rad, 0.15 * rad), Params(0.15, 0.35 * rad, 0.35 * rad)};
  HypersurfacePatch patch(space, map, box);
  ExpectedClassification expected;
  expected.h = 2;
  expected.levi_flat = true;
  expected.ruled = true;
  return CatalogEntry{"ruled-fixture", space, {{"c", space.c()}}, patch, expected, {5, 4, 4}};
}

std::vector<std::string> catalog_names() {
  return {"lohnherr",       "bisector",   "clifford-cone-cp2", "clifford-cone-ch2", "geodesic-sphere",
          "horosphere",     "tube-rp2",   "tube-ch1",          "ruled-fixture"};
}

CatalogEntry by_name(std::string_view name, const std::map<std::string, double>& parameters) {
  auto param = [&](const char* key, double fallback) {
    const auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
  };
  if (name == "lohnherr") return lohnherr(param("c", -4.0));
  if (name == "bisector") return bisector(param("c", -4.0), param("r", 1.0));
  if (name == "clifford-cone-cp2") return clifford_cone(ambient::SpaceForm(param("c", 4.0)), 0);
  if (name == "clifford-cone-ch2") return clifford_cone(ambient::SpaceForm(param("c", -4.0)), 0);
  if (name == "geodesic-sphere") {
    const ambient::SpaceForm space(param("c", 4.0));
    return geodesic_sphere(space, model_origin(space), param("r", std::numbers::pi / 4.0));
  }
  if (name == "horosphere") return horosphere(ambient::SpaceForm(param("c", -4.0)));
  if (name == "tube-rp2") return tube_real_plane(ambient::SpaceForm(param("c", 4.0)), param("r", 0.3));
  if (name == "tube-ch1") return tube_complex_line(ambient::SpaceForm(param("c", -4.0)), param("r", 0.5));
  if (name == "ruled-fixture") return ruled_fixture(ambient::SpaceForm(param("c", 4.0)));
  throw Error(ErrorKind::InvalidArgument, "unknown catalog entry '" + std::string(name) + "'");
}

}  // namespace hopflab::catalog
