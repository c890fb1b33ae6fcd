#include "hopflab/cli/suites.hpp"

#include "hopflab/catalog.hpp"
#include "hopflab/cli/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace hopflab::cli {

using ambient::AmbientPoint;
using ambient::AmbientTangent;
using hypersurface::Params;

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void SuiteReport::below(std::string name, double value, double threshold, std::string note) {
  checks.push_back({std::move(name), value, threshold, Bound::Below, value < threshold, std::move(note)});
}

void SuiteReport::above(std::string name, double value, double threshold, std::string note) {
  checks.push_back({std::move(name), value, threshold, Bound::Above, value > threshold, std::move(note)});
}

void SuiteReport::require(std::string name, bool condition, std::string note) {
  above(std::move(name), condition ? 1.0 : 0.0, 0.5, std::move(note));
}

namespace {

// Uniform doubles straight from the 64-bit engine so the stream does not
// depend on the standard library's distribution algorithms.
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

std::string label(actions::ActionLabel l) { return std::string(actions::label_name(l)); }

std::string space_tag(const ambient::SpaceForm& space) { return space.projective() ? "cp2" : "ch2"; }

AmbientTangent unit_tangent(const ambient::SpaceForm& space, const AmbientPoint& p, Rng& rng) {
  AmbientTangent v = ambient::make_tangent(space, p, rng.complex_vector());
  v.vec /= ambient::norm(space, v);
  return v;
}

AmbientPoint random_point(const ambient::SpaceForm& space, Rng& rng) {
  const AmbientPoint origin = ambient::make_point(space, CVec3::UnitX());
  const AmbientTangent v = unit_tangent(space, origin, rng);
  return ambient::exp_map(space, origin, v, rng.uniform(0.1, 1.0) * space.radius());
}

// Unit Y orthogonal to X and JX.
AmbientTangent totally_real_partner(const ambient::SpaceForm& space, const AmbientTangent& x, Rng& rng) {
  AmbientTangent y = unit_tangent(space, x.base, rng);
  const AmbientTangent jx = ambient::complex_structure(x);
  y.vec -= ambient::metric(space, y, x) * x.vec + ambient::metric(space, y, jx) * jx.vec;
  y.vec /= ambient::norm(space, y);
  return y;
}

// Sectional curvature from the small-distance expansion
// d(exp tX, exp tY)^2 = 2 t^2 - K t^4 / 3 + O(t^6) for orthonormal X, Y.
double distance_sectional(const ambient::SpaceForm& space, const AmbientTangent& x, const AmbientTangent& y,
                          double t) {
  const double d = ambient::distance(space, ambient::exp_map(space, x.base, x, t),
                                     ambient::exp_map(space, y.base, y, t));
  return 3.0 * (2.0 * t * t - d * d) / (t * t * t * t);
}

Vec2 random_chart_point(const actions::PolarActionSpec& spec, Rng& rng, bool regular) {
  const double r = spec.ambient.radius();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Vec2 u(rng.uniform(-0.8, 0.8) * r, rng.uniform(-0.8, 0.8) * r);
    if (u.norm() > 0.8 * r) continue;
    if (!regular || actions::is_regular_model(spec, spec.section.model_point(u), 1e-4)) return u;
  }
  throw Error(ErrorKind::Degenerate, "no regular chart point found");
}

struct Built {
  constructor::EquivariantHypersurface surface;
  constructor::Launch launch;
};

Built construct_default(actions::ActionLabel l, const constructor::CurveLaw& law) {
  const actions::PolarActionSpec spec = actions::polar_action(l);
  const constructor::Launch launch = constructor::make_launch(spec);
  const constructor::SigmaCurve sigma =
      constructor::integrate_sigma(spec, launch.point, launch.direction, law, constructor::kDefaultStep, 100, 100);
  return {constructor::build_hypersurface(spec, sigma), launch};
}

Params random_params(const hypersurface::ParameterBox& box, Rng& rng, double margin = 0.1) {
  return box.at(Vec3(rng.uniform(margin, 1.0 - margin), rng.uniform(margin, 1.0 - margin),
                     rng.uniform(margin, 1.0 - margin)));
}

const std::array<Vec3, 3> kProbeFractions = {Vec3(0.25, 0.5, 0.5), Vec3(0.5, 0.3, 0.7), Vec3(0.75, 0.6, 0.4)};

// ---------------------------------------------------------------- ambient

void suite_ambient(SuiteReport& rep, Rng& rng) {
  for (double c : {4.0, -4.0}) {
    const ambient::SpaceForm space(c);
    const std::string tag = space_tag(space);
    double holo = 0.0, totally_real = 0.0, holo_fd = 0.0, real_fd = 0.0;
    for (int k = 0; k < 50; ++k) {
      const AmbientPoint p = random_point(space, rng);
      const AmbientTangent x = unit_tangent(space, p, rng);
      const AmbientTangent jx = ambient::complex_structure(x);
      const AmbientTangent y = totally_real_partner(space, x, rng);
      holo = std::max(holo, std::abs(ambient::curvature_form(space, x, jx, jx, x) - c));
      totally_real = std::max(totally_real, std::abs(ambient::curvature_form(space, x, y, y, x) - c / 4.0));
      holo_fd = std::max(holo_fd, std::abs(distance_sectional(space, x, jx, 1e-2) - c));
      real_fd = std::max(real_fd, std::abs(distance_sectional(space, x, y, 1e-2) - c / 4.0));
    }
    rep.below(tag + ".holomorphic_sectional", holo, 1e-8);
    rep.below(tag + ".totally_real_sectional", totally_real, 1e-8);
    rep.below(tag + ".holomorphic_sectional_distance_oracle", holo_fd, 1e-3);
    rep.below(tag + ".totally_real_sectional_distance_oracle", real_fd, 1e-3);

    double kahler = 0.0, commutation = 0.0, acceleration = 0.0, dist = 0.0;
    for (int k = 0; k < 20; ++k) {
      const AmbientPoint p = random_point(space, rng);
      const AmbientTangent v = unit_tangent(space, p, rng);
      const CVec3 c0 = rng.complex_vector(), c1 = rng.complex_vector(), c2 = rng.complex_vector();
      const ambient::CurveFn curve = [&](double t) { return ambient::exp_map(space, p, v, t); };
      const ambient::FieldFn velocity = [&](double t) { return ambient::geodesic_velocity(space, p, v, t); };
      const ambient::FieldFn j_velocity = [&](double t) { return ambient::complex_structure(velocity(t)); };
      const ambient::FieldFn field = [&](double t) {
        return ambient::make_tangent(space, curve(t), c0 + t * c1 + t * t * c2);
      };
      const ambient::FieldFn j_field = [&](double t) { return ambient::complex_structure(field(t)); };
      const double t0 = 0.3 * space.radius();
      const double h = 1e-4;
      kahler = std::max(kahler, ambient::norm(space, ambient::covariant_derivative(space, curve, j_velocity, t0, h)));
      acceleration =
          std::max(acceleration, ambient::norm(space, ambient::covariant_derivative(space, curve, velocity, t0, h)));
      const AmbientTangent dj = ambient::covariant_derivative(space, curve, j_field, t0, h);
      const AmbientTangent jd = ambient::complex_structure(ambient::covariant_derivative(space, curve, field, t0, h));
      commutation = std::max(commutation, ambient::norm(space, {dj.base, dj.vec - ambient::rebase(space, jd, dj.base).vec}));
      dist = std::max(dist, std::abs(ambient::distance(space, p, curve(t0)) - t0));
    }
    rep.below(tag + ".kahler_parallel_j_velocity", kahler, 1e-6);
    rep.below(tag + ".kahler_commutation", commutation, 1e-6);
    rep.below(tag + ".geodesic_acceleration", acceleration, 1e-6);
    rep.below(tag + ".exp_distance_consistency", dist, 1e-10);
  }
}

// ---------------------------------------------------------------- actions

void suite_actions(SuiteReport& rep, Rng& rng) {
  for (actions::ActionLabel l : actions::all_labels()) {
    const actions::PolarActionSpec spec = actions::polar_action(l);
    const auto& space = spec.ambient;
    const auto& chart = spec.section;
    const std::string tag = label(l);

    double isometry = 0.0;
    const CMat3 form = space.form_matrix();
    for (const CMat3& g : spec.generators) isometry = std::max(isometry, (g.adjoint() * form + form * g).cwiseAbs().maxCoeff());
    rep.below(tag + ".generators_isometric", isometry, 1e-12);

    double j_defect = 0.0, second_fundamental = 0.0, killing = 0.0;
    const ambient::PointMap chart_map = [&](std::span<const double> u) {
      return chart.lift(chart.model_point(Vec2(u[0], u[1])));
    };
    for (int k = 0; k < 20; ++k) {
      const Vec2 u = random_chart_point(spec, rng, false);
      const Vec3 x = chart.model_point(u);
      const auto frame = chart.tangent_frame(x);
      const AmbientTangent e1 = chart.lift_tangent(x, frame[0]);
      const AmbientTangent e2 = chart.lift_tangent(x, frame[1]);
      j_defect = std::max(j_defect, std::abs(ambient::metric(space, ambient::complex_structure(e1), e2)));
      for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        const AmbientTangent kf = actions::killing_field(spec, i, e1.base);
        killing = std::max({killing, std::abs(ambient::metric(space, kf, e1)), std::abs(ambient::metric(space, kf, e2))});
      }
      const std::array<double, 2> q{u[0], u[1]};
      const ambient::CoordinateJet jet = ambient::coordinate_jet(space, chart_map, q, 1e-3);
      const AmbientTangent n1 = ambient::rebase(space, ambient::complex_structure(e1), jet.point);
      const AmbientTangent n2 = ambient::rebase(space, ambient::complex_structure(e2), jet.point);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const AmbientTangent d{jet.point, jet.nabla[i][j]};
          second_fundamental =
              std::max({second_fundamental, std::abs(ambient::metric(space, d, n1)), std::abs(ambient::metric(space, d, n2))});
        }
      }
    }
    rep.below(tag + ".section_totally_real", j_defect, 1e-8);
    rep.below(tag + ".section_second_fundamental_form", second_fundamental, 1e-6);
    rep.below(tag + ".killing_orthogonal_to_section", killing, 1e-8);

    double phi_min_max = std::numeric_limits<double>::infinity();
    bool even = true, stable = true;
    double symmetry = 0.0, unit_hopf = 0.0, equivariance = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Vec3 x = chart.model_point(random_chart_point(spec, rng, true));
      const actions::HopfDirectionScan coarse = actions::scan_hopf_directions(spec, x, 720, 1e-12);
      const actions::HopfDirectionScan fine = actions::scan_hopf_directions(spec, x, 1440, 1e-12);
      phi_min_max = std::min(phi_min_max, coarse.max_abs);
      even = even && coarse.zero_angles.size() % 2 == 0;
      stable = stable && coarse.zero_angles.size() == fine.zero_angles.size();

      const auto frame = chart.tangent_frame(x);
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const AmbientTangent xi = chart.lift_tangent(x, std::cos(theta) * frame[0] + std::sin(theta) * frame[1]);
      const actions::OrbitData orbit = actions::orbit_shape_operator(spec, xi.base, xi);
      symmetry = std::max(symmetry, std::abs(orbit.shape(0, 1) - orbit.shape(1, 0)));
      unit_hopf = std::max(unit_hopf, std::abs(orbit.hopf_components.squaredNorm() - 1.0));
      const double s1 = rng.uniform(-0.5, 0.5), s2 = rng.uniform(-0.5, 0.5);
      const actions::OrbitData moved =
          actions::orbit_shape_operator(spec, actions::act(spec, s1, s2, xi.base), actions::push_forward(spec, s1, s2, xi));
      equivariance = std::max(equivariance, (moved.principal - orbit.principal).cwiseAbs().maxCoeff());
    }
    rep.above(tag + ".phi_not_identically_zero", phi_min_max, 1e-6);
    rep.require(tag + ".phi_zero_count_even", even);
    rep.require(tag + ".phi_zero_count_stable_720_1440", stable);
    rep.below(tag + ".orbit_shape_symmetric", symmetry, 1e-8);
    rep.below(tag + ".orbit_hopf_components_unit", unit_hopf, 1e-10);
    rep.below(tag + ".orbit_spectrum_equivariant", equivariance, 1e-6);
  }
}

// ---------------------------------------------------------------- frames

struct NamedPatch {
  std::string name;
  hypersurface::HypersurfacePatch patch;
};

std::vector<NamedPatch> two_hopf_patches() {
  std::vector<NamedPatch> out;
  for (const char* name : {"lohnherr", "bisector", "clifford-cone-cp2", "clifford-cone-ch2", "ruled-fixture"}) {
    out.push_back({name, catalog::by_name(name).patch});
  }
  for (actions::ActionLabel l : {actions::ActionLabel::Cp2Torus, actions::ActionLabel::Ch2G0}) {
    out.push_back({"cmc." + label(l), construct_default(l, constructor::CurveLaw::cmc(1.0)).surface.patch});
  }
  return out;
}

// Even grid counts keep the probes off the totally geodesic spine of the
// bisector, where the shape operator vanishes.
void suite_frames(SuiteReport& rep, Rng&) {
  const hypersurface::Tolerances tol;
  for (const NamedPatch& np : two_hopf_patches()) {
    double identities = 0.0, symmetry = 0.0;
    for (const Params& q : hypersurface::grid_points(np.patch.box(), {4, 4, 4})) {
      const hypersurface::ShapeResult shape = hypersurface::shape_operator(np.patch, q, tol.tau_mult);
      symmetry = std::max(symmetry, shape.geometry.symmetry_defect);
      if (hypersurface::hopf_projection_count(shape, tol.tau_proj).h != 2) continue;
      const hypersurface::AdaptedFrame f = hypersurface::adapted_frame(shape, tol.tau_proj);
      for (double r : f.identity_residuals) identities = std::max(identities, r);
    }
    rep.below(np.name + ".frame_identities", identities, 1e-6);
    rep.below(np.name + ".shape_symmetric", symmetry, 1e-8);

    const hypersurface::ClassificationReport c =
        hypersurface::classify(np.patch, hypersurface::grid_points(np.patch.box(), {4, 4, 4}), tol);
    const bool chain = (!c.strongly_two_hopf || c.two_hopf) && (!c.two_hopf || c.h == 2) &&
                       (!c.austere || std::abs(c.mean_curvature) < tol.cmc) && (!c.ruled || c.levi_flat);
    rep.require(np.name + ".flag_implications", chain);

    if (c.austere && c.h == 2) {
      // J xi never reaches the zero eigenspace of an austere h = 2 patch.
      double zero_projection = 0.0;
      for (const Params& q : hypersurface::grid_points(np.patch.box(), {4, 4, 4})) {
        const hypersurface::HopfCount count =
            hypersurface::hopf_projection_count(hypersurface::shape_operator(np.patch, q, tol.tau_mult), tol.tau_proj);
        if (count.h != 2) continue;
        for (std::size_t k = 0; k < count.cluster_values.size(); ++k) {
          if (std::abs(count.cluster_values[k]) < 1e-3) zero_projection = std::max(zero_projection, count.projections[k]);
        }
      }
      rep.below(np.name + ".austere_no_zero_eigenspace_projection", zero_projection, tol.tau_proj);
    }
  }
}

// ---------------------------------------------------------------- connection

double max_entry(const hypersurface::ResidualReport& r, const std::string& prefix) {
  double m = 0.0;
  for (const auto& e : r.entries) {
    if (e.name.rfind(prefix, 0) == 0) m = std::max(m, e.residual);
  }
  return m;
}

void suite_connection(SuiteReport& rep, Rng& rng) {
  const hypersurface::Tolerances tol;
  for (actions::ActionLabel l : actions::all_labels()) {
    const Built b = construct_default(l, constructor::CurveLaw::cmc(1.0));
    const auto& patch = b.surface.patch;
    double strong = 0.0, nabla_aa = 0.0, consistency = 0.0, dual = 0.0;
    bool skipped = false;
    for (const Vec3& f : kProbeFractions) {
      const Params q = patch.box().at(f);
      const hypersurface::ResidualReport r =
          hypersurface::verify_connection_formulas(patch, q, hypersurface::ConnectionMode::Strong, tol);
      skipped = skipped || r.skipped;
      strong = std::max(strong, r.max_residual);
      nabla_aa = std::max(nabla_aa, max_entry(r, "<nabla_A A"));
      const hypersurface::FrameJet jet = hypersurface::frame_jet(patch, q, tol);
      using FJ = hypersurface::FrameJet;
      const Vec3 bracket = jet.bracket(FJ::kU, FJ::kV);
      const Vec3 torsion_free = jet.connection(FJ::kU, FJ::kV) - jet.connection(FJ::kV, FJ::kU);
      consistency = std::max(consistency, std::sqrt(jet.inner(bracket - torsion_free, bracket - torsion_free)));
      const Vec3 flow = hypersurface::flow_bracket(patch, q, FJ::kU, FJ::kV, 1e-2, tol);
      dual = std::max(dual, std::sqrt(jet.inner(bracket - flow, bracket - flow)));
    }
    const std::string tag = "cmc." + label(l);
    rep.require(tag + ".strong_formulas_applicable", !skipped);
    rep.below(tag + ".strong_connection_relative", strong, 1e-3);
    rep.below(tag + ".nabla_A_A", nabla_aa, 1e-4);
    rep.below(tag + ".bracket_connection_consistency", consistency, 1e-5);
    rep.below(tag + ".bracket_flow_vs_jet", dual, 1e-5);
  }

  const catalog::CatalogEntry ruled = catalog::by_name("ruled-fixture");
  double generic = 0.0;
  bool skipped = false;
  for (int k = 0; k < 3; ++k) {
    const Params q = random_params(ruled.patch.box(), rng, 0.2);
    const hypersurface::ResidualReport r =
        hypersurface::verify_connection_formulas(ruled.patch, q, hypersurface::ConnectionMode::Generic, tol);
    skipped = skipped || r.skipped;
    generic = std::max(generic, r.max_residual);
  }
  rep.require("ruled-fixture.generic_formulas_applicable", !skipped);
  rep.below("ruled-fixture.generic_connection_relative", generic, 1e-3);
}

// ---------------------------------------------------------------- gauss-codazzi

void suite_gauss_codazzi(SuiteReport& rep, Rng& rng) {
  auto probe = [&](const std::string& name, const hypersurface::HypersurfacePatch& patch) {
    const Params q = random_params(patch.box(), rng);
    const std::uint64_t probe_seed = static_cast<std::uint64_t>(rng.uniform(0.0, 1e9));
    const hypersurface::GaussCodazziReport r = hypersurface::verify_gauss_codazzi(patch, q, 20, probe_seed);
    rep.below(name + ".gauss", r.gauss, 1e-4);
    rep.below(name + ".codazzi", r.codazzi, 1e-4);
  };
  for (const std::string& name : catalog::catalog_names()) probe(name, catalog::by_name(name).patch);
  probe("tube-rp2-ch2", catalog::tube_real_plane(ambient::SpaceForm(-4.0), 0.5).patch);
  for (actions::ActionLabel l : actions::all_labels()) {
    probe("cmc." + label(l), construct_default(l, constructor::CurveLaw::cmc(1.0)).surface.patch);
  }

  // A shape operator that is 10% off must be caught.
  const catalog::CatalogEntry lohnherr = catalog::by_name("lohnherr");
  hypersurface::SecondOrderGeometry g = hypersurface::second_order_geometry(lohnherr.patch, lohnherr.patch.box().center());
  g.shape_mixed *= 1.1;
  const hypersurface::GaussCodazziReport corrupted = hypersurface::gauss_codazzi_residuals(lohnherr.ambient, g, 20, 1);
  rep.above("corrupted-shape.gauss", corrupted.gauss, 1e-2, "negative control");
}

// ---------------------------------------------------------------- austere

std::string expected_family(actions::ActionLabel l) {
  switch (l) {
    case actions::ActionLabel::Cp2Torus:
    case actions::ActionLabel::Ch2Torus: return "clifford_cone";
    case actions::ActionLabel::Ch2G0: return "bisector";
    case actions::ActionLabel::Ch2LineG2a: return "lohnherr";
    case actions::ActionLabel::Ch2K0G2a: return "";
  }
  return "";
}

void suite_austere(SuiteReport& rep, Rng&) {
  const hypersurface::Tolerances tol;
  const double half = std::numbers::sqrt2 / 2.0;
  for (actions::ActionLabel l : actions::all_labels()) {
    const actions::PolarActionSpec spec = actions::polar_action(l);
    const constructor::AustereSearchResult res = constructor::austere_search(spec);
    const std::string tag = label(l);
    const std::string family = expected_family(l);
    if (family.empty()) {
      rep.below(tag + ".austere_curves", static_cast<double>(res.curves.size()), 0.5, "no suitable curve expected");
      continue;
    }
    rep.above(tag + ".austere_curves", static_cast<double>(res.curves.size()), 0.5);
    for (std::size_t k = 0; k < res.curves.size(); ++k) {
      const constructor::AustereCurve& curve = res.curves[k];
      const std::string ctag = tag + ".curve" + std::to_string(k);
      rep.require(ctag + ".family_" + family, curve.family == family, curve.family);
      rep.below(ctag + ".alignment", curve.alignment_residual, 1e-6);
      const constructor::EquivariantHypersurface ehs = constructor::build_hypersurface(spec, curve.sigma);
      const auto grid = hypersurface::grid_points(ehs.patch.box(), {8, 3, 3});
      const hypersurface::ClassificationReport c = hypersurface::classify(ehs.patch, grid, tol);
      rep.require(ctag + ".austere", c.austere);
      rep.require(ctag + ".ruled", c.ruled);
      rep.require(ctag + ".levi_flat", c.levi_flat);
      double ab = 0.0, sum = 0.0, gamma = 0.0;
      for (const Params& q : grid) {
        const hypersurface::AdaptedFrame f = hypersurface::adapted_frame(ehs.patch, q, tol.tau_proj, tol.tau_mult);
        ab = std::max({ab, std::abs(f.a - half), std::abs(f.b - half)});
        sum = std::max(sum, std::abs(f.alpha + f.beta));
        gamma = std::max(gamma, std::abs(f.gamma));
      }
      rep.below(ctag + ".hopf_components_balanced", ab, 1e-4);
      rep.below(ctag + ".alpha_plus_beta", sum, 1e-3);
      rep.below(ctag + ".gamma", gamma, 1e-3);
    }
  }

  const catalog::CatalogEntry lohnherr = catalog::lohnherr(-4.0);
  const hypersurface::ClassificationReport c =
      hypersurface::classify(lohnherr.patch, hypersurface::grid_points(lohnherr.patch.box(), {5, 2, 2}), tol);
  const double expected[3] = {1.0, 0.0, -1.0};
  double spectrum = 0.0, spread = 0.0;
  for (int k = 0; k < 3; ++k) {
    const std::string key = "principal_" + std::to_string(k + 1);
    const double lo = c.residuals.at(key + "_min"), hi = c.residuals.at(key + "_max");
    spectrum = std::max({spectrum, std::abs(lo - expected[k]), std::abs(hi - expected[k])});
    spread = std::max(spread, hi - lo);
  }
  rep.below("lohnherr.spectrum", spectrum, 1e-4);
  rep.below("lohnherr.spectrum_spread", spread, 1e-4);
}

// ---------------------------------------------------------------- cmc

void suite_cmc(SuiteReport& rep, Rng&) {
  const hypersurface::Tolerances tol;
  for (actions::ActionLabel l : actions::all_labels()) {
    const std::string tag = "cmc." + label(l);
    const Built b = construct_default(l, constructor::CurveLaw::cmc(1.0));
    const constructor::CertificationReport cert = constructor::strongly_2hopf_certify(b.surface);
    const auto& r = cert.residuals;
    rep.require(tag + ".strongly_2hopf_certified", cert.passed, cert.failing);
    rep.below(tag + ".h_deviation", std::max(std::abs(r.at("classify.h_min") - 2.0), std::abs(r.at("classify.h_max") - 2.0)), 0.5);
    rep.below(tag + ".integrability", r.at("classify.integrability_max"), 1e-5);
    rep.below(tag + ".d_alpha", r.at("classify.d_alpha_max"), 1e-4);
    rep.below(tag + ".d_beta", r.at("classify.d_beta_max"), 1e-4);
    rep.below(tag + ".mean_curvature_error", std::abs(cert.classification.mean_curvature - 1.0), 1e-3);
    rep.below(tag + ".mean_curvature_spread", r.at("classify.mean_curvature_spread"), 1e-3);
    rep.below(tag + ".leaf_intrinsic_curvature", r.at("leaf_curvature_intrinsic_max"), 1e-3);
    rep.below(tag + ".leaf_totally_real", r.at("leaf_totally_real_max"), 1e-6);
    rep.below(tag + ".a_curve_geodesic", r.at("a_curve_geodesic_max"), 1e-4);

    const auto& box = b.surface.patch.box();
    const constructor::EquidistanceReport eq =
        constructor::equidistance_spot_check(b.surface, box.lower[0] + 0.01, box.upper[0] - 0.01, 10);
    rep.below(tag + ".equidistance_spread", eq.spread, 1e-3);
    rep.below(tag + ".equidistance_failures", eq.failures, 0.5);

    // A launch along a Hopf direction gives h = 1 at the launch point.
    const actions::PolarActionSpec& spec = b.surface.spec;
    const actions::HopfDirectionScan scan = actions::scan_hopf_directions(spec, b.launch.point, 720, 1e-12);
    rep.above(tag + ".hopf_directions_found", static_cast<double>(scan.zero_directions.size()), 0.5);
    if (!scan.zero_directions.empty()) {
      const constructor::SigmaCurve sigma = constructor::integrate_sigma(
          spec, b.launch.point, scan.zero_directions.front(), constructor::CurveLaw::cmc(1.0), constructor::kDefaultStep, 100, 100);
      const constructor::EquivariantHypersurface hopf = constructor::build_hypersurface(spec, sigma);
      const hypersurface::ClassificationReport c = hypersurface::classify(hopf.patch, {Params(0.0, 0.0, 0.0)}, tol);
      rep.below(tag + ".hopf_launch_h_deviation", std::abs(c.h - 1.0), 0.5);
      rep.below(tag + ".hopf_launch_excluded_projection", c.residuals.at("hopf_projection_excluded_max"), tol.tau_proj);
    }

    // Reversing the launch traces the same curve once eta changes sign.
    const constructor::SigmaCurve back = constructor::integrate_sigma(
        spec, b.launch.point, b.launch.direction, constructor::CurveLaw::cmc(1.0), constructor::kDefaultStep, 0, 50);
    const constructor::SigmaCurve reversed = constructor::integrate_sigma(
        spec, b.launch.point, -b.launch.direction, constructor::CurveLaw::cmc(-1.0), constructor::kDefaultStep, 50, 0);
    double reversal = 0.0;
    for (int k = 0; k <= 50; ++k) {
      const double t = k * constructor::kDefaultStep;
      reversal = std::max(reversal, (back.position(-t) - reversed.position(t)).norm());
    }
    rep.below(tag + ".time_reversal", reversal, 1e-9);

    // The geodesic law converges at fourth order.
    double errors[2];
    for (int k = 0; k < 2; ++k) {
      const double step = 0.1 / (1 << k);
      const constructor::SigmaCurve g = constructor::integrate_sigma(
          spec, b.launch.point, b.launch.direction, constructor::CurveLaw::geodesic(), step, 4 << k, 0);
      const Vec3 exact = spec.section.model_exp(b.launch.point, b.launch.direction, 0.4);
      errors[k] = (g.samples().back().x - exact).norm();
    }
    rep.below(tag + ".geodesic_step_halving_ratio_minus_16", std::abs(errors[0] / errors[1] - 16.0), 2.0, "ratio near 16");
  }

  struct HopfEntry {
    std::string name;
    catalog::CatalogEntry entry;
  };
  std::vector<HopfEntry> hopf;
  for (const char* name : {"geodesic-sphere", "horosphere", "tube-rp2", "tube-ch1"}) hopf.push_back({name, catalog::by_name(name)});
  hopf.push_back({"tube-rp2-ch2", catalog::tube_real_plane(ambient::SpaceForm(-4.0), 0.5)});
  for (const HopfEntry& h : hopf) {
    const auto grid = hypersurface::grid_points(h.entry.patch.box(), h.entry.grid);
    double relation = 0.0;
    for (const Params& q : grid) relation = std::max(relation, hypersurface::hopf_cmc_relation_check(h.entry.patch, q, tol));
    const hypersurface::ClassificationReport c = hypersurface::classify(h.entry.patch, grid, tol);
    rep.below(h.name + ".hopf_cmc_relation", relation, 1e-6);
    rep.below(h.name + ".spectrum_spread", c.residuals.at("spectrum_spread"), 1e-4);
    rep.require(h.name + ".hopf", c.hopf);
  }
  const hypersurface::ClassificationReport horo = hypersurface::classify(
      hopf[1].entry.patch, hypersurface::grid_points(hopf[1].entry.patch.box(), hopf[1].entry.grid), tol);
  const double want[3] = {2.0, 1.0, 1.0};
  double horo_dev = 0.0;
  for (int k = 0; k < 3; ++k) {
    const std::string key = "principal_" + std::to_string(k + 1);
    horo_dev = std::max({horo_dev, std::abs(horo.residuals.at(key + "_min") - want[k]),
                         std::abs(horo.residuals.at(key + "_max") - want[k])});
  }
  rep.below("horosphere.spectrum_2_1_1", horo_dev, 1e-4);
}

// ---------------------------------------------------------------- levi-flat

void suite_levi_flat(SuiteReport& rep, Rng&) {
  const hypersurface::Tolerances tol;
  for (actions::ActionLabel l : actions::all_labels()) {
    const std::string tag = label(l);
    const actions::PolarActionSpec spec = actions::polar_action(l);

    // The Levi-flat law always yields a Levi-flat patch.
    const Built levi = construct_default(l, constructor::CurveLaw::levi_flat());
    const hypersurface::ClassificationReport lc =
        hypersurface::classify(levi.surface.patch, hypersurface::grid_points(levi.surface.patch.box(), {6, 3, 3}), tol);
    rep.below(tag + ".levi_law.levi_max", lc.residuals.at("levi_max"), 1e-3);

    // Levi-flat and CMC with eta = 1 cannot hold together.
    const Built cmc = construct_default(l, constructor::CurveLaw::cmc(1.0));
    const constructor::CombinedLawReport nonminimal = constructor::levi_flat_cmc_certify(cmc.surface);
    rep.require(tag + ".nonminimal_combination_rejected",
                !nonminimal.passed && (nonminimal.failing == "levi_form" || nonminimal.failing == "mean_curvature_spread"),
                nonminimal.failing);

    // Minimal case: start the Levi-flat law on an austere curve.
    const constructor::AustereSearchResult res = constructor::austere_search(spec);
    if (res.curves.empty()) continue;
    const constructor::SigmaSample* start = nullptr;
    for (const auto& s : res.curves.front().sigma.samples()) {
      if (s.t == 0.0) start = &s;
    }
    if (start == nullptr) throw Error(ErrorKind::Degenerate, "austere curve has no sample at t = 0");
    const constructor::SigmaCurve sigma = constructor::integrate_sigma(
        spec, start->x, start->v, constructor::CurveLaw::levi_flat(), constructor::kDefaultStep, 100, 100);
    const constructor::CombinedLawReport minimal =
        constructor::levi_flat_cmc_certify(constructor::build_hypersurface(spec, sigma));
    rep.require(tag + ".minimal_levi_flat.certified", minimal.passed, minimal.failing);
    rep.below(tag + ".minimal_levi_flat.gamma", minimal.gamma_max, 1e-3);
    rep.below(tag + ".minimal_levi_flat.alpha_plus_beta", minimal.alpha_plus_beta_max, 1e-3);
    rep.below(tag + ".minimal_levi_flat.a_minus_b", minimal.a_minus_b_max, 1e-4);
  }

  const catalog::CatalogEntry lohnherr = catalog::by_name("lohnherr");
  const hypersurface::ClassificationReport c =
      hypersurface::classify(lohnherr.patch, hypersurface::grid_points(lohnherr.patch.box(), lohnherr.grid), tol);
  rep.below("lohnherr.levi_max", c.residuals.at("levi_max"), 1e-4);
}

using SuiteFn = void (*)(SuiteReport&, Rng&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"ambient", suite_ambient},       {"actions", suite_actions},
      {"frames", suite_frames},         {"connection", suite_connection},
      {"gauss-codazzi", suite_gauss_codazzi}, {"austere", suite_austere},
      {"cmc", suite_cmc},               {"levi-flat", suite_levi_flat},
  };
  return r;
}

SuiteReport run_one(const std::string& name, SuiteFn fn, std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = name;
  rep.seed = seed;
  // Each suite draws from its own stream so that suites can run alone.
  Rng rng(seed ^ std::hash<std::string>{}(name));
  fn(rep, rng);
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    n.push_back("all");
    return n;
  }();
  return names;
}

std::vector<SuiteReport> run_suite(std::string_view name, std::uint64_t seed) {
  std::vector<SuiteReport> out;
  for (const auto& [suite, fn] : registry()) {
    if (name == "all" || name == suite) out.push_back(run_one(suite, fn, seed));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "unknown suite '" + std::string(name) + "'");
  return out;
}

Json to_json(const std::vector<SuiteReport>& reports) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  bool all = true;
  Json suites = Json::array();
  for (const SuiteReport& r : reports) {
    Json s;
    s["suite"] = r.suite;
    s["seed"] = r.seed;
    s["passed"] = r.passed();
    Json checks = Json::array();
    for (const Check& c : r.checks) {
      Json j;
      j["name"] = c.name;
      j["value"] = number(c.value);
      j["threshold"] = c.threshold;
      j["bound"] = c.bound == Bound::Below ? "below" : "above";
      j["passed"] = c.passed;
      if (!c.note.empty()) j["note"] = c.note;
      checks.push_back(std::move(j));
    }
    s["checks"] = std::move(checks);
    suites.push_back(std::move(s));
    all = all && r.passed();
  }
  doc["suites"] = std::move(suites);
  doc["passed"] = all;
  return doc;
}

std::string format_table(const std::vector<SuiteReport>& reports) {
  std::ostringstream out;
  char line[256];
  for (const SuiteReport& r : reports) {
    for (const Check& c : r.checks) {
      std::snprintf(line, sizeof line, "%-4s %-14s %-58s %12.4e %s %.1e\n", c.passed ? "ok" : "FAIL", r.suite.c_str(),
                    c.name.c_str(), c.value, c.bound == Bound::Below ? "<" : ">", c.threshold);
      out << line;
    }
  }
  for (const SuiteReport& r : reports) {
    const auto failed = std::count_if(r.checks.begin(), r.checks.end(), [](const Check& c) { return !c.passed; });
    std::snprintf(line, sizeof line, "suite %-14s %s (%zu checks, %td failed)\n", r.suite.c_str(),
                  r.passed() ? "PASS" : "FAIL", r.checks.size(), failed);
    out << line;
  }
  return out.str();
}

}  // namespace hopflab::cli
