#include "hopflab/cli/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#ifndef HOPFLAB_VERSION_STRING
#define HOPFLAB_VERSION_STRING "unknown"
#endif

namespace hopflab::cli {

namespace {

Json vec_json(const Vec3& v) { return Json::array({number(v[0]), number(v[1]), number(v[2])}); }

Vec3 read_vec3(const Json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Parse, std::string("'") + field + "' must hold three numbers");
  return Vec3(read_number(j[0]), read_number(j[1]), read_number(j[2]));
}

Json map_json(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = number(v);
  return j;
}

std::map<std::string, double> read_map(const Json& j) {
  std::map<std::string, double> m;
  for (const auto& [k, v] : j.items()) m[k] = read_number(v);
  return m;
}

constexpr double kStepTolerance = 1e-9;

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const hypersurface::ClassificationReport& r) {
  Json j;
  j["h"] = r.h;
  j["hopf"] = r.hopf;
  j["two_hopf"] = r.two_hopf;
  j["strongly_two_hopf"] = r.strongly_two_hopf;
  j["austere"] = r.austere;
  j["levi_flat"] = r.levi_flat;
  j["ruled"] = r.ruled;
  j["cmc"] = r.cmc;
  j["mean_curvature"] = number(r.mean_curvature);
  j["grid_size"] = r.grid_size;
  j["residuals"] = map_json(r.residuals);
  return j;
}

hypersurface::ClassificationReport classification_from_json(const Json& j) {
  hypersurface::ClassificationReport r;
  r.h = j.at("h").get<int>();
  r.hopf = j.at("hopf").get<bool>();
  r.two_hopf = j.at("two_hopf").get<bool>();
  r.strongly_two_hopf = j.at("strongly_two_hopf").get<bool>();
  r.austere = j.at("austere").get<bool>();
  r.levi_flat = j.at("levi_flat").get<bool>();
  r.ruled = j.at("ruled").get<bool>();
  r.cmc = j.at("cmc").get<bool>();
  r.mean_curvature = read_number(j.at("mean_curvature"));
  r.grid_size = j.at("grid_size").get<std::size_t>();
  r.residuals = read_map(j.at("residuals"));
  return r;
}

Json scene_to_json(const Scene& scene) {
  Json j;
  j["schema_version"] = scene.schema_version;
  j["generator"] = scene.generator;
  j["config"] = to_json(scene.config);
  j["c"] = scene.c;

  Json launch;
  launch["chart"] = Json::array({scene.launch.chart[0], scene.launch.chart[1]});
  launch["angle"] = scene.launch.angle;
  launch["point"] = vec_json(scene.launch.point);
  launch["direction"] = vec_json(scene.launch.direction);
  j["launch"] = launch;

  Json sigma;
  sigma["law"] = std::string(constructor::law_name(scene.sigma.law.kind));
  sigma["eta"] = scene.sigma.law.eta;
  sigma["step"] = scene.sigma.step;
  sigma["truncated"] = scene.sigma.truncated;
  sigma["truncation_reason"] = scene.sigma.truncation_reason;
  Json samples = Json::array();
  for (const constructor::SigmaSample& s : scene.sigma.samples) {
    Json row;
    row["t"] = s.t;
    row["x"] = vec_json(s.x);
    row["v"] = vec_json(s.v);
    row["xi"] = vec_json(s.xi);
    row["acceleration"] = vec_json(s.acceleration);
    row["curvature"] = number(s.curvature);
    samples.push_back(std::move(row));
  }
  sigma["samples"] = std::move(samples);
  j["sigma"] = std::move(sigma);

  Json patch;
  patch["box_lower"] = vec_json(scene.patch.box.lower);
  patch["box_upper"] = vec_json(scene.patch.box.upper);
  patch["orientation"] = scene.patch.orientation;
  patch["s_extent"] = scene.patch.s_extent;
  patch["diff_step"] = scene.patch.diff_step;
  patch["frame_step"] = scene.patch.frame_step;
  j["patch"] = patch;

  j["classification"] = to_json(scene.classification);
  Json cert;
  cert["passed"] = scene.certification.passed;
  cert["failing"] = scene.certification.failing;
  cert["residuals"] = map_json(scene.certification.residuals);
  j["certification"] = cert;
  j["law_check"] = map_json(scene.law_check);
  j["passed"] = scene.passed;
  return j;
}

Scene scene_from_json(const Json& doc) {
  Scene scene;
  try {
    scene.schema_version = doc.at("schema_version").get<int>();
    if (scene.schema_version != kSchemaVersion) {
      throw Error(ErrorKind::Parse, "unsupported schema_version " + std::to_string(scene.schema_version));
    }
    scene.generator = doc.at("generator").get<std::string>();
    scene.config = config_from_json(doc.at("config"));
    scene.c = read_number(doc.at("c"));

    const Json& launch = doc.at("launch");
    const Json& chart = launch.at("chart");
    if (!chart.is_array() || chart.size() != 2) throw Error(ErrorKind::Parse, "'launch.chart' must hold two numbers");
    scene.launch.chart = Vec2(read_number(chart[0]), read_number(chart[1]));
    scene.launch.angle = read_number(launch.at("angle"));
    scene.launch.point = read_vec3(launch.at("point"), "launch.point");
    scene.launch.direction = read_vec3(launch.at("direction"), "launch.direction");

    const Json& sigma = doc.at("sigma");
    const std::string law_name = sigma.at("law").get<std::string>();
    const auto law = constructor::parse_law(law_name);
    if (!law) throw Error(ErrorKind::Parse, "unknown law '" + law_name + "' in sigma");
    scene.sigma.law = {*law, read_number(sigma.at("eta"))};
    scene.sigma.step = read_number(sigma.at("step"));
    scene.sigma.truncated = sigma.at("truncated").get<bool>();
    scene.sigma.truncation_reason = sigma.at("truncation_reason").get<std::string>();
    for (const Json& row : sigma.at("samples")) {
      constructor::SigmaSample s;
      s.t = read_number(row.at("t"));
      s.x = read_vec3(row.at("x"), "sigma.samples.x");
      s.v = read_vec3(row.at("v"), "sigma.samples.v");
      s.xi = read_vec3(row.at("xi"), "sigma.samples.xi");
      s.acceleration = read_vec3(row.at("acceleration"), "sigma.samples.acceleration");
      s.curvature = read_number(row.at("curvature"));
      scene.sigma.samples.push_back(std::move(s));
    }

    const Json& patch = doc.at("patch");
    scene.patch.box.lower = read_vec3(patch.at("box_lower"), "patch.box_lower");
    scene.patch.box.upper = read_vec3(patch.at("box_upper"), "patch.box_upper");
    scene.patch.orientation = patch.at("orientation").get<int>();
    scene.patch.s_extent = read_number(patch.at("s_extent"));
    scene.patch.diff_step = read_number(patch.at("diff_step"));
    scene.patch.frame_step = read_number(patch.at("frame_step"));

    scene.classification = classification_from_json(doc.at("classification"));
    const Json& cert = doc.at("certification");
    scene.certification.passed = cert.at("passed").get<bool>();
    scene.certification.failing = cert.at("failing").get<std::string>();
    scene.certification.residuals = read_map(cert.at("residuals"));
    scene.law_check = read_map(doc.at("law_check"));
    scene.passed = doc.at("passed").get<bool>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::Parse, std::string("scene: ") + ex.what());
  }
  return scene;
}

std::string emit_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

Scene parse_scene(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw Error(ErrorKind::Parse, std::string("scene: ") + ex.what());
  }
  return scene_from_json(doc);
}

namespace {

std::map<std::string, double> law_checks(const RunConfig& config,
                                         const constructor::CertificationReport& cert, bool& ok) {
  std::map<std::string, double> out;
  const auto& c = cert.classification;
  switch (config.law) {
    case constructor::LawKind::Cmc: {
      const double error = std::abs(c.mean_curvature - config.eta);
      const double spread = c.residuals.at("mean_curvature_spread");
      out["mean_curvature_error"] = error;
      out["mean_curvature_spread"] = spread;
      ok = ok && error < config.tolerances.cmc && spread < config.tolerances.cmc;
      break;
    }
    case constructor::LawKind::LeviFlat:
      out["levi_max"] = c.residuals.at("levi_max");
      ok = ok && c.levi_flat;
      break;
    case constructor::LawKind::AusterePregeodesic:
      out["austere_sum_max"] = c.residuals.at("austere_sum_max");
      ok = ok && c.austere;
      break;
    case constructor::LawKind::Geodesic:
      break;
  }
  if (config.austere_curve && config.law != constructor::LawKind::AusterePregeodesic) {
    out["austere_sum_max"] = c.residuals.at("austere_sum_max");
    ok = ok && c.austere;
  }
  return out;
}

constructor::Launch austere_launch(const actions::PolarActionSpec& spec, int index) {
  const constructor::AustereSearchResult found = constructor::austere_search(spec);
  if (index >= static_cast<int>(found.curves.size())) {
    throw Error(ErrorKind::InvalidArgument, "austere_curve: index " + std::to_string(index) + " but only " +
                                                std::to_string(found.curves.size()) + " austere curves exist");
  }
  const auto& samples = found.curves[static_cast<std::size_t>(index)].sigma.samples();
  const auto start = std::find_if(samples.begin(), samples.end(), [](const auto& s) { return s.t == 0.0; });
  if (start == samples.end()) throw Error(ErrorKind::Degenerate, "austere curve has no sample at t = 0");
  const auto& chart = spec.section;
  const auto frame = chart.tangent_frame(start->x);
  constructor::Launch launch;
  launch.chart = chart.coordinates(start->x);
  launch.angle = std::atan2(spec.ambient.real_form(start->v, frame[1]), spec.ambient.real_form(start->v, frame[0]));
  launch.point = start->x;
  launch.direction = start->v;
  return launch;
}

}  // namespace

ConstructionResult run_construction(const RunConfig& config) {
  validate(config);
  const double c = config.c ? *config.c : actions::default_curvature(config.action);
  const actions::PolarActionSpec spec = actions::polar_action(config.action, c);
  const constructor::Launch launch =
      config.austere_curve ? austere_launch(spec, *config.austere_curve) : constructor::make_launch(spec, config.point, config.angle);
  const constructor::CurveLaw law{config.law, config.law == constructor::LawKind::Cmc ? config.eta : 0.0};
  const constructor::SigmaCurve sigma =
      constructor::integrate_sigma(spec, launch.point, launch.direction, law, config.step, config.n_steps,
                                   config.n_steps);
  constructor::EquivariantHypersurface ehs = constructor::build_hypersurface(spec, sigma);

  constructor::CertifyOptions options;
  options.grid = config.grid;
  options.tolerances = config.tolerances;
  const constructor::CertificationReport cert = constructor::strongly_2hopf_certify(ehs, options);

  Scene scene;
  scene.generator = std::string("hopflab ") + HOPFLAB_VERSION_STRING;
  scene.config = config;
  scene.c = c;
  scene.launch = launch;
  scene.sigma = {sigma.law(), sigma.step(), sigma.truncated, sigma.truncation_reason, sigma.samples()};
  scene.patch = {ehs.patch.box(), ehs.patch.orientation(), ehs.options.s_extent, ehs.patch.diff_step(),
                 ehs.patch.frame_step()};
  scene.classification = cert.classification;
  scene.certification = {cert.passed, cert.failing, cert.residuals};
  bool ok = cert.passed;
  scene.law_check = law_checks(config, cert, ok);
  scene.passed = ok;
  return {std::move(scene), std::move(ehs)};
}

constructor::EquivariantHypersurface rebuild(const Scene& scene) {
  const auto& samples = scene.sigma.samples;
  if (samples.size() < 2) throw Error(ErrorKind::Parse, "scene: sigma needs at least two samples");
  const double step = scene.sigma.step;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double expected = samples.front().t + static_cast<double>(k) * step;
    if (!(std::abs(samples[k].t - expected) <= kStepTolerance * std::max(1.0, std::abs(expected)))) {
      throw Error(ErrorKind::Parse, "scene: sigma samples are not uniformly spaced at index " + std::to_string(k));
    }
  }
  const actions::PolarActionSpec spec = actions::polar_action(scene.config.action, scene.c);
  constructor::SigmaCurve sigma(samples, step, scene.sigma.law);
  sigma.truncated = scene.sigma.truncated;
  sigma.truncation_reason = scene.sigma.truncation_reason;
  constructor::BuildOptions options;
  options.s_extent = scene.patch.s_extent;
  options.diff_step = scene.patch.diff_step;
  options.frame_step = scene.patch.frame_step;
  constructor::EquivariantHypersurface ehs = constructor::build_hypersurface(spec, sigma, options);
  if (!(ehs.patch.box().lower - scene.patch.box.lower).isZero(1e-12) ||
      !(ehs.patch.box().upper - scene.patch.box.upper).isZero(1e-12)) {
    throw Error(ErrorKind::Parse, "scene: stored patch box does not match the rebuilt curve");
  }
  return ehs;
}

void write_mesh_csv(std::ostream& out, const hypersurface::HypersurfacePatch& patch,
                    const std::array<int, 3>& grid, const hypersurface::Tolerances& tol) {
  out << kMeshCsvHeader << "\n";
  out << "t,s1,s2,re_z0,im_z0,re_z1,im_z1,re_z2,im_z2,k1,k2,k3,mean_curvature,h\n";
  for (const hypersurface::Params& q : hypersurface::grid_points(patch.box(), grid)) {
    const hypersurface::ShapeResult shape = hypersurface::shape_operator(patch, q, tol.tau_mult);
    const int h = hypersurface::hopf_projection_count(shape, tol.tau_proj).h;
    const CVec3 z = shape.geometry.point.rep;
    const Vec3& k = shape.spectrum.values;
    out << format_double(q[0]) << ',' << format_double(q[1]) << ',' << format_double(q[2]);
    for (int i = 0; i < 3; ++i) out << ',' << format_double(z[i].real()) << ',' << format_double(z[i].imag());
    out << ',' << format_double(k[0]) << ',' << format_double(k[1]) << ',' << format_double(k[2]) << ','
        << format_double(k.sum()) << ',' << h << "\n";
  }
}

void write_profile_csv(std::ostream& out, const actions::HopfDirectionScan& scan) {
  out << kProfileCsvHeader << "\n";
  out << "angle,phi\n";
  for (std::size_t k = 0; k < scan.angles.size(); ++k) {
    out << format_double(scan.angles[k]) << ',' << format_double(scan.profile[k]) << "\n";
  }
}

std::string gnuplot_script(const std::string& csv_path) {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel 't'\n"
         "set ylabel 'principal curvature'\n"
         "plot '" + csv_path + "' using 1:10 with points, '' using 1:11 with points, "
         "'' using 1:12 with points\n";
}

}  // namespace hopflab::cli
