// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion holds at its stated tolerance.

#include "support.hpp"

#include "hopflab/catalog.hpp"
#include "hopflab/constructor.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

// The connection is reported component-wise as <nabla_X Y, Z>; the nine entries
// are the vectors nabla_X Y, each of which needs all three frame components.
bool covers_nine_connection_entries(const hopflab::hypersurface::ResidualReport& report) {
  std::map<std::string, int> components;
  for (const auto& e : report.entries) {
    if (e.name.rfind("<nabla_", 0) == 0) ++components[e.name.substr(0, e.name.find(','))];
  }
  if (components.size() != 9) return false;
  for (const auto& [pair, count] : components) {
    if (count != 3) return false;
  }
  return true;
}

}  // namespace

#ifndef HOPFLAB_EXE
#error "HOPFLAB_EXE must point at the hopflab executable"
#endif

namespace {

using namespace hopflab;
using actions::ActionLabel;
using ambient::AmbientPoint;
using ambient::AmbientTangent;
using hypersurface::Params;
using testing::Rng;

// Collects the measurements behind one criterion.
class Ledger {
 public:
  void below(const std::string& what, double value, double bound) { add(what, value, bound, value < bound, "<"); }
  void above(const std::string& what, double value, double bound) { add(what, value, bound, value > bound, ">"); }
  void require(const std::string& what, bool ok) {
    if (!ok) failures_.push_back(what);
    ++count_;
  }
  bool passed() const { return failures_.empty(); }
  std::string summary() const {
    std::ostringstream s;
    s << count_ << " checks";
    if (!failures_.empty()) {
      s << "; failed:";
      for (std::size_t k = 0; k < failures_.size() && k < 6; ++k) s << " " << failures_[k];
      if (failures_.size() > 6) s << " (+" << failures_.size() - 6 << " more)";
    }
    for (const auto& [label, value] : worst_) s << "; " << label << " " << value;
    return s.str();
  }
  // Headline numbers printed with the verdict.
  void headline(const std::string& label, double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", value);
    worst_.emplace_back(label, buf);
  }

 private:
  void add(const std::string& what, double value, double bound, bool ok, const char* op) {
    ++count_;
    if (!ok) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "=%.3e %s %.0e", value, op, bound);
      failures_.push_back(what + buf);
    }
  }
  int count_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::pair<std::string, std::string>> worst_;
};

std::string name_of(ActionLabel l) { return std::string(actions::label_name(l)); }

Vec3 regular_chart_point(const actions::PolarActionSpec& spec, Rng& rng) {
  const double r = spec.ambient.radius();
  for (;;) {
    const Vec2 u(rng.uniform(-0.8, 0.8) * r, rng.uniform(-0.8, 0.8) * r);
    if (u.norm() > 0.8 * r) continue;
    const Vec3 x = spec.section.model_point(u);
    if (actions::is_regular_model(spec, x, 1e-4)) return x;
  }
}

struct Constructed {
  constructor::EquivariantHypersurface surface;
  constructor::Launch launch;
};

Constructed construct_cmc(ActionLabel l, double eta) {
  const auto spec = actions::polar_action(l);
  const auto launch = constructor::make_launch(spec);
  const auto sigma = constructor::integrate_sigma(spec, launch.point, launch.direction, constructor::CurveLaw::cmc(eta),
                                                  constructor::kDefaultStep, 100, 100);
  return {constructor::build_hypersurface(spec, sigma), launch};
}

// 1. Ambient curvature against closed forms and the distance oracle.
void criterion_ambient_curvature(Ledger& out) {
  double closed = 0.0, oracle = 0.0;
  for (double c : {4.0, -4.0}) {
    const ambient::SpaceForm space(c);
    Rng rng(c > 0 ? 101 : 102);
    for (int k = 0; k < 50; ++k) {
      const AmbientTangent x = testing::unit_tangent(space, testing::random_point(space, rng), rng);
      const AmbientTangent jx = ambient::complex_structure(x);
      const AmbientTangent y = testing::orthonormal_partner(space, x, rng, true);
      const double holo = std::abs(ambient::curvature_form(space, x, jx, jx, x) - c);
      const double real = std::abs(ambient::curvature_form(space, x, y, y, x) - c / 4.0);
      const double fd = std::abs(testing::distance_sectional(space, x, jx, 1e-2) - c);
      out.below("holomorphic", holo, 1e-8);
      out.below("totally_real", real, 1e-8);
      out.below("distance_oracle", fd, 1e-3);
      closed = std::max({closed, holo, real});
      oracle = std::max(oracle, fd);
    }
  }
  out.headline("closed-form max", closed);
  out.headline("oracle max", oracle);
}

// 2. J is parallel along geodesics.
void criterion_kahler(Ledger& out) {
  double worst = 0.0;
  for (double c : {4.0, -4.0}) {
    const ambient::SpaceForm space(c);
    Rng rng(c > 0 ? 201 : 202);
    for (int k = 0; k < 20; ++k) {
      const AmbientPoint p = testing::random_point(space, rng);
      const AmbientTangent v = testing::unit_tangent(space, p, rng);
      const CVec3 a = rng.complex_vector(), b = rng.complex_vector();
      const ambient::CurveFn curve = [&](double t) { return ambient::exp_map(space, p, v, t); };
      const ambient::FieldFn y = [&](double t) { return ambient::make_tangent(space, curve(t), a + t * b); };
      const ambient::FieldFn jy = [&](double t) { return ambient::complex_structure(y(t)); };
      const ambient::FieldFn jvel = [&](double t) {
        return ambient::complex_structure(ambient::geodesic_velocity(space, p, v, t));
      };
      const double t0 = rng.uniform(0.1, 0.8) * space.radius();
      const double parallel = ambient::norm(space, ambient::covariant_derivative(space, curve, jvel, t0, 1e-4));
      const AmbientTangent lhs = ambient::covariant_derivative(space, curve, jy, t0, 1e-4);
      const AmbientTangent rhs =
          ambient::rebase(space, ambient::complex_structure(ambient::covariant_derivative(space, curve, y, t0, 1e-4)), lhs.base);
      const double commute = ambient::norm(space, {lhs.base, lhs.vec - rhs.vec});
      out.below("nabla_J_velocity", parallel, 1e-6);
      out.below("nabla_J_field", commute, 1e-6);
      worst = std::max({worst, parallel, commute});
    }
  }
  out.headline("max residual", worst);
}

// 3. Sections are totally real, totally geodesic and orthogonal to the orbits.
void criterion_section(Ledger& out) {
  double jmax = 0.0, iimax = 0.0, kmax = 0.0;
  for (ActionLabel l : actions::all_labels()) {
    const auto spec = actions::polar_action(l);
    const auto& space = spec.ambient;
    const auto& chart = spec.section;
    const ambient::PointMap map = [&](std::span<const double> u) { return chart.lift(chart.model_point(Vec2(u[0], u[1]))); };
    Rng rng(300 + static_cast<int>(l));
    for (int k = 0; k < 20; ++k) {
      const double r = space.radius();
      const Vec2 u(rng.uniform(-0.7, 0.7) * r, rng.uniform(-0.7, 0.7) * r);
      const std::array<double, 2> q{u[0], u[1]};
      const ambient::CoordinateJet jet = ambient::coordinate_jet(space, map, q, 1e-3);
      // Orthonormalize the coordinate tangents independently of the chart frame.
      AmbientTangent e1{jet.point, jet.tangents[0]};
      e1.vec /= ambient::norm(space, e1);
      AmbientTangent e2{jet.point, jet.tangents[1]};
      e2.vec -= ambient::metric(space, e2, e1) * e1.vec;
      e2.vec /= ambient::norm(space, e2);
      const AmbientTangent n1 = ambient::complex_structure(e1), n2 = ambient::complex_structure(e2);
      const double jdef = std::abs(ambient::metric(space, n1, e2));
      double ii = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const AmbientTangent d{jet.point, jet.nabla[i][j]};
          ii = std::max({ii, std::abs(ambient::metric(space, d, n1)), std::abs(ambient::metric(space, d, n2))});
        }
      }
      double kill = 0.0;
      for (std::size_t g = 0; g < spec.generators.size(); ++g) {
        const AmbientTangent kf = actions::killing_field(spec, g, jet.point);
        kill = std::max({kill, std::abs(ambient::metric(space, kf, e1)), std::abs(ambient::metric(space, kf, e2))});
      }
      out.below(name_of(l) + ".totally_real", jdef, 1e-8);
      out.below(name_of(l) + ".second_fundamental_form", ii, 1e-6);
      out.below(name_of(l) + ".killing", kill, 1e-8);
      jmax = std::max(jmax, jdef);
      iimax = std::max(iimax, ii);
      kmax = std::max(kmax, kill);
    }
  }
  out.headline("<J.TS,TS>", jmax);
  out.headline("II", iimax);
  out.headline("Killing", kmax);
}

// 4. The Hopf obstruction.
void criterion_phi(Ledger& out) {
  double min_peak = 1e300;
  for (ActionLabel l : actions::all_labels()) {
    const auto spec = actions::polar_action(l);
    Rng rng(400 + static_cast<int>(l));
    for (int k = 0; k < 5; ++k) {
      const Vec3 x = regular_chart_point(spec, rng);
      const auto coarse = actions::scan_hopf_directions(spec, x, 720, 1e-12);
      const auto fine = actions::scan_hopf_directions(spec, x, 1440, 1e-12);
      out.above(name_of(l) + ".max_phi", coarse.max_abs, 1e-6);
      out.require(name_of(l) + ".even", coarse.zero_angles.size() % 2 == 0);
      out.require(name_of(l) + ".stable", coarse.zero_angles.size() == fine.zero_angles.size());
      min_peak = std::min(min_peak, coarse.max_abs);
    }
  }
  out.headline("smallest max|phi|", min_peak);
}

// 5. The construction pipeline.
void criterion_pipeline(Ledger& out) {
  const hypersurface::Tolerances tol;
  double h_err = 0.0;
  for (ActionLabel l : actions::all_labels()) {
    const std::string tag = name_of(l);
    const Constructed built = construct_cmc(l, 1.0);
    const auto cert = constructor::strongly_2hopf_certify(built.surface);
    const auto& r = cert.classification.residuals;
    out.require(tag + ".certified(" + cert.failing + ")", cert.passed);
    out.require(tag + ".h_is_2", r.at("h_min") == 2.0 && r.at("h_max") == 2.0);
    out.require(tag + ".grid_20x5x5", cert.classification.grid_size == 500);
    out.below(tag + ".integrability", r.at("integrability_max"), 1e-5);
    out.below(tag + ".d_alpha", r.at("d_alpha_max"), 1e-4);
    out.below(tag + ".d_beta", r.at("d_beta_max"), 1e-4);
    const double err = std::abs(cert.classification.mean_curvature - 1.0);
    out.below(tag + ".mean_curvature", err, 1e-3);
    h_err = std::max(h_err, err);

    const auto& spec = built.surface.spec;
    const auto scan = actions::scan_hopf_directions(spec, built.launch.point, 720, 1e-12);
    out.require(tag + ".has_hopf_direction", !scan.zero_directions.empty());
    for (const Vec3& w : scan.zero_directions) {
      const auto sigma = constructor::integrate_sigma(spec, built.launch.point, w, constructor::CurveLaw::cmc(1.0),
                                                      constructor::kDefaultStep, 100, 100);
      const auto patch = constructor::build_hypersurface(spec, sigma).patch;
      const auto count =
          hypersurface::hopf_projection_count(hypersurface::shape_operator(patch, Params::Zero(), tol.tau_mult), tol.tau_proj);
      out.require(tag + ".hopf_launch_h1", count.h == 1);
    }
  }
  out.headline("max |H-1|", h_err);
}

// 6. Connection and leaf structure on the certified patches.
void criterion_structure(Ledger& out) {
  double conn = 0.0;
  for (ActionLabel l : actions::all_labels()) {
    const std::string tag = name_of(l);
    const Constructed built = construct_cmc(l, 1.0);
    const auto cert = constructor::strongly_2hopf_certify(built.surface);
    for (const Vec3& f : {Vec3(0.2, 0.5, 0.5), Vec3(0.5, 0.25, 0.75), Vec3(0.8, 0.7, 0.3)}) {
      const auto r = hypersurface::verify_connection_formulas(built.surface.patch, built.surface.patch.box().at(f),
                                                              hypersurface::ConnectionMode::Strong);
      out.require(tag + ".strong_mode", !r.skipped);
      out.require(tag + ".nine_entries", covers_nine_connection_entries(r));
      out.below(tag + ".connection", r.max_residual, 1e-3);
      conn = std::max(conn, r.max_residual);
    }
    out.below(tag + ".nabla_A_A", cert.residuals.at("nabla_A_A_max"), 1e-4);
    out.below(tag + ".leaf_intrinsic", cert.residuals.at("leaf_curvature_intrinsic_max"), 1e-3);
    out.below(tag + ".leaf_totally_real", cert.residuals.at("leaf_totally_real_max"), 1e-6);
  }
  out.headline("connection max", conn);
}

std::string expected_family(ActionLabel l) {
  switch (l) {
    case ActionLabel::Cp2Torus:
    case ActionLabel::Ch2Torus: return "clifford_cone";
    case ActionLabel::Ch2G0: return "bisector";
    case ActionLabel::Ch2LineG2a: return "lohnherr";
    case ActionLabel::Ch2K0G2a: return "";
  }
  return "";
}

// 7. Austere classification.
void criterion_austere(Ledger& out) {
  const hypersurface::Tolerances tol;
  const double half = std::numbers::sqrt2 / 2.0;
  double ab = 0.0;
  int curves = 0;
  for (ActionLabel l : actions::all_labels()) {
    const auto spec = actions::polar_action(l);
    const auto found = constructor::austere_search(spec);
    const std::string family = expected_family(l);
    const std::string tag = name_of(l);
    if (family.empty()) {
      out.require(tag + ".none", found.curves.empty());
      continue;
    }
    out.require(tag + ".found", !found.curves.empty());
    for (const auto& curve : found.curves) {
      ++curves;
      out.require(tag + ".family", curve.family == family);
      const auto ehs = constructor::build_hypersurface(spec, curve.sigma);
      const auto grid = hypersurface::grid_points(ehs.patch.box(), {8, 3, 3});
      const auto c = hypersurface::classify(ehs.patch, grid, tol);
      out.require(tag + ".austere", c.austere);
      out.require(tag + ".ruled", c.ruled);
      out.require(tag + ".levi_flat", c.levi_flat);
      for (const Params& q : grid) {
        const auto f = hypersurface::adapted_frame(ehs.patch, q, tol.tau_proj, tol.tau_mult);
        out.below(tag + ".alpha_plus_beta", std::abs(f.alpha + f.beta), 1e-3);
        out.below(tag + ".gamma", std::abs(f.gamma), 1e-3);
        const double dev = std::max(std::abs(f.a - half), std::abs(f.b - half));
        out.below(tag + ".a_b", dev, 1e-4);
        ab = std::max(ab, dev);
      }
    }
  }
  out.headline("curves", curves);
  out.headline("max |a-1/sqrt2|,|b-1/sqrt2|", ab);
}

// 8. Lohnherr spectrum.
void criterion_lohnherr(Ledger& out) {
  const auto entry = catalog::lohnherr(-4.0);
  const auto grid = hypersurface::grid_points(entry.patch.box(), {5, 2, 2});
  out.require("twenty_points", grid.size() == 20);
  const double expected[3] = {1.0, 0.0, -1.0};
  double dev = 0.0;
  Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
  for (const Params& q : grid) {
    const Vec3 v = hypersurface::shape_operator(entry.patch, q).spectrum.values;
    for (int k = 0; k < 3; ++k) {
      dev = std::max(dev, std::abs(v[k] - expected[k]));
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  }
  out.below("spectrum", dev, 1e-4);
  out.below("spread", (hi - lo).maxCoeff(), 1e-4);
  out.headline("deviation", dev);
}

// 9. Hopf hypersurfaces have constant principal curvatures tied by the relation.
void criterion_hopf(Ledger& out) {
  std::vector<catalog::CatalogEntry> entries = {
      catalog::by_name("geodesic-sphere"),
      catalog::by_name("geodesic-sphere", {{"r", 0.5}}),
      catalog::geodesic_sphere(ambient::SpaceForm(-4.0), ambient::make_point(ambient::SpaceForm(-4.0), CVec3::UnitX()), 0.6),
      catalog::by_name("horosphere"),
      catalog::by_name("tube-rp2"),
      catalog::tube_real_plane(ambient::SpaceForm(-4.0), 0.5),
      catalog::by_name("tube-ch1"),
  };
  double relation = 0.0, spread = 0.0;
  for (const auto& e : entries) {
    const auto grid = hypersurface::grid_points(e.patch.box(), e.grid);
    const auto c = hypersurface::classify(e.patch, grid);
    out.require(e.name + ".hopf", c.hopf);
    for (const Params& q : grid) {
      const double r = hypersurface::hopf_cmc_relation_check(e.patch, q);
      out.below(e.name + ".relation", r, 1e-6);
      relation = std::max(relation, r);
    }
    out.below(e.name + ".spread", c.residuals.at("spectrum_spread"), 1e-4);
    spread = std::max(spread, c.residuals.at("spectrum_spread"));
  }
  const auto horo = catalog::horosphere(ambient::SpaceForm(-4.0));
  const double want[3] = {2.0, 1.0, 1.0};
  for (const Params& q : hypersurface::grid_points(horo.patch.box(), horo.grid)) {
    const Vec3 v = hypersurface::shape_operator(horo.patch, q).spectrum.values;
    for (int k = 0; k < 3; ++k) out.below("horosphere.spectrum", std::abs(v[k] - want[k]), 1e-4);
  }
  out.headline("relation max", relation);
  out.headline("spread max", spread);
}

// 10. Levi-flat together with constant mean curvature.
void criterion_levi_flat(Ledger& out) {
  double gamma = 0.0;
  for (ActionLabel l : actions::all_labels()) {
    const auto spec = actions::polar_action(l);
    const std::string tag = name_of(l);
    const auto found = constructor::austere_search(spec);
    if (!found.curves.empty()) {
      const auto& samples = found.curves.front().sigma.samples();
      const auto start = std::find_if(samples.begin(), samples.end(), [](const auto& s) { return s.t == 0.0; });
      out.require(tag + ".start", start != samples.end());
      if (start != samples.end()) {
        const auto sigma = constructor::integrate_sigma(spec, start->x, start->v, constructor::CurveLaw::levi_flat(),
                                                        constructor::kDefaultStep, 100, 100);
        const auto minimal = constructor::levi_flat_cmc_certify(constructor::build_hypersurface(spec, sigma));
        out.require(tag + ".minimal_certified", minimal.passed);
        out.below(tag + ".mean_curvature", std::abs(minimal.mean_curvature), 1e-3);
        out.below(tag + ".gamma", minimal.gamma_max, 1e-3);
        out.below(tag + ".alpha_plus_beta", minimal.alpha_plus_beta_max, 1e-3);
        gamma = std::max(gamma, minimal.gamma_max);
      }
    }
    const auto attempt = constructor::levi_flat_cmc_certify(construct_cmc(l, 1.0).surface);
    out.require(tag + ".nonminimal_rejected", !attempt.passed);
    out.require(tag + ".cites_levi_or_spectrum",
                attempt.failing == "levi_form" || attempt.failing == "mean_curvature_spread");
  }
  out.headline("minimal gamma max", gamma);
}

// 11. Gauss and Codazzi equations.
void criterion_gauss_codazzi(Ledger& out) {
  double worst = 0.0;
  Rng rng(1100);
  std::uint64_t probe_seed = 1100;
  auto probe = [&](const std::string& name, const hypersurface::HypersurfacePatch& patch) {
    const auto& box = patch.box();
    const Params q = box.at(Vec3(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)));
    const auto r = hypersurface::verify_gauss_codazzi(patch, q, 20, ++probe_seed);
    out.below(name + ".gauss", r.gauss, 1e-4);
    out.below(name + ".codazzi", r.codazzi, 1e-4);
    worst = std::max({worst, r.gauss, r.codazzi});
  };
  for (const std::string& name : catalog::catalog_names()) probe(name, catalog::by_name(name).patch);
  for (ActionLabel l : actions::all_labels()) {
    probe("cmc." + name_of(l), construct_cmc(l, 1.0).surface.patch);
    const auto spec = actions::polar_action(l);
    const auto found = constructor::austere_search(spec);
    if (!found.curves.empty()) {
      probe("austere." + name_of(l), constructor::build_hypersurface(spec, found.curves.front().sigma).patch);
    }
  }
  const auto entry = catalog::by_name("lohnherr");
  auto corrupted = hypersurface::second_order_geometry(entry.patch, entry.patch.box().center());
  corrupted.shape_mixed *= 1.1;
  const double control = hypersurface::gauss_codazzi_residuals(entry.ambient, corrupted, 20, 1).gauss;
  out.above("corrupted_control", control, 1e-2);
  out.headline("max residual", worst);
  out.headline("corrupted", control);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 12. Two full verification runs with the same seed agree byte for byte.
void criterion_determinism(Ledger& out) {
  const auto dir = std::filesystem::temp_directory_path();
  std::string reports[2], tables[2];
  for (int k = 0; k < 2; ++k) {
    const std::string json = (dir / ("hopflab_acceptance_verify_" + std::to_string(k) + ".json")).string();
    const std::string table = (dir / ("hopflab_acceptance_verify_" + std::to_string(k) + ".txt")).string();
    const std::string command = std::string("\"") + HOPFLAB_EXE + "\" verify all --seed 7 --output \"" + json + "\" > \"" +
                                table + "\" 2>&1";
    const int status = std::system(command.c_str());
    out.require("run" + std::to_string(k) + "_exit0", status == 0);
    reports[k] = slurp(json);
    tables[k] = slurp(table);
  }
  out.require("json_nonempty", !reports[0].empty());
  out.require("json_identical", reports[0] == reports[1]);
  out.require("table_identical", tables[0] == tables[1]);
  out.headline("report bytes", static_cast<double>(reports[0].size()));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Ledger&)>>> criteria = {
      {"ambient curvature", criterion_ambient_curvature},
      {"Kahler identity", criterion_kahler},
      {"section geometry", criterion_section},
      {"Hopf obstruction", criterion_phi},
      {"construction pipeline", criterion_pipeline},
      {"strongly 2-Hopf structure", criterion_structure},
      {"austere classification", criterion_austere},
      {"Lohnherr spectrum", criterion_lohnherr},
      {"Hopf CMC rigidity", criterion_hopf},
      {"Levi-flat and CMC", criterion_levi_flat},
      {"Gauss and Codazzi", criterion_gauss_codazzi},
      {"determinism", criterion_determinism},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Ledger ledger;
    std::string error;
    try {
      criteria[k].second(ledger);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const bool ok = error.empty() && ledger.passed();
    all = all && ok;
    std::printf("%s criterion %2zu (%s): %s\n", ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                error.empty() ? ledger.summary().c_str() : ("exception: " + error).c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
