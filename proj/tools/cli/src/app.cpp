#include "hopflab/cli/app.hpp"

#include "hopflab/catalog.hpp"
#include "hopflab/cli/config.hpp"
#include "hopflab/cli/scene.hpp"
#include "hopflab/cli/suites.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef HOPFLAB_VERSION_STRING
#define HOPFLAB_VERSION_STRING "unknown"
#endif

namespace hopflab::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
}

std::string label_list() {
  std::string s;
  for (actions::ActionLabel l : actions::all_labels()) s += (s.empty() ? "" : ", ") + std::string(actions::label_name(l));
  return s;
}

actions::ActionLabel action_from(const std::string& name) {
  const auto label = actions::parse_label(name);
  if (!label) throw Error(ErrorKind::InvalidArgument, "action: unknown action '" + name + "' (expected one of " + label_list() + ")");
  return *label;
}

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

void print_classification(std::ostream& out, const hypersurface::ClassificationReport& r) {
  auto flag = [&](const char* name, bool value) { out << "  " << name << ": " << (value ? "yes" : "no") << "\n"; };
  out << "grid points: " << r.grid_size << "\n";
  out << "h: " << r.h << "\n";
  flag("hopf", r.hopf);
  flag("two_hopf", r.two_hopf);
  flag("strongly_two_hopf", r.strongly_two_hopf);
  flag("austere", r.austere);
  flag("ruled", r.ruled);
  flag("levi_flat", r.levi_flat);
  flag("cmc", r.cmc);
  out << "mean curvature: " << fmt("%.10g", r.mean_curvature) << "\n";
  out << "residuals:\n";
  for (const auto& [name, value] : r.residuals) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-32s %.6e\n", name.c_str(), value);
    out << line;
  }
}

struct ParsedTolerance {
  std::string name;
  double value;
};

ParsedTolerance parse_tolerance(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "tol: expected name=value, got '" + text + "'");
  const std::string name = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw Error(ErrorKind::InvalidArgument, "tol: '" + value + "' is not a number");
  return {name, v};
}

// Options shared by construct; bound to plain locals and applied only when
// given, so that a config file supplies everything else.
struct ConstructFlags {
  std::string config_path;
  std::string action;
  double c = 0.0;
  std::vector<double> point;
  double angle = 0.0;
  int austere_curve = 0;
  std::string law;
  double eta = 0.0;
  double step = 0.0;
  int n_steps = 0;
  std::vector<int> grid;
  std::vector<std::string> tolerances;
  std::string output;
  std::string csv;
  std::uint64_t seed = 0;
};

struct Options {
  CLI::Option* action = nullptr;
  CLI::Option* c = nullptr;
  CLI::Option* point = nullptr;
  CLI::Option* angle = nullptr;
  CLI::Option* austere_curve = nullptr;
  CLI::Option* law = nullptr;
  CLI::Option* eta = nullptr;
  CLI::Option* step = nullptr;
  CLI::Option* n_steps = nullptr;
  CLI::Option* grid = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* output = nullptr;
  CLI::Option* csv = nullptr;
  CLI::Option* seed = nullptr;
};

RunConfig resolve_config(const ConstructFlags& f, const Options& o) {
  RunConfig config;
  if (!f.config_path.empty()) {
    const std::string text = read_file(f.config_path);
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
      throw Error(ErrorKind::Parse, "config '" + f.config_path + "': " + ex.what());
    }
    merge_json(config, doc);
  }
  if (o.action->count()) config.action = action_from(f.action);
  if (o.c->count()) config.c = f.c;
  if (o.point->count()) config.point = Vec2(f.point[0], f.point[1]);
  if (o.angle->count()) config.angle = f.angle;
  if (o.austere_curve->count()) config.austere_curve = f.austere_curve;
  if (o.law->count()) {
    const auto law = constructor::parse_law(f.law);
    if (!law) throw Error(ErrorKind::InvalidArgument, "law: unknown law '" + f.law + "' (expected geodesic, cmc, levi-flat or austere)");
    config.law = *law;
  }
  if (o.eta->count()) config.eta = f.eta;
  if (o.step->count()) config.step = f.step;
  if (o.n_steps->count()) config.n_steps = f.n_steps;
  if (o.grid->count()) config.grid = {f.grid[0], f.grid[1], f.grid[2]};
  for (const std::string& t : f.tolerances) {
    const ParsedTolerance p = parse_tolerance(t);
    set_tolerance(config.tolerances, p.name, p.value);
  }
  if (o.output->count()) config.output = f.output;
  if (o.csv->count()) config.csv = f.csv;
  config.seed = resolve_seed(o.seed->count() ? std::optional(f.seed) : std::nullopt);
  validate(config);
  return config;
}

int cmd_construct(const ConstructFlags& f, const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig config = resolve_config(f, o);
  const ConstructionResult result = run_construction(config);
  const Scene& scene = result.scene;
  const std::string text = emit_scene(scene);
  if (config.output.empty()) {
    out << text;
  } else {
    write_file(config.output, text);
    out << "scene written to " << config.output << "\n";
  }
  if (!config.csv.empty()) {
    std::ostringstream csv;
    write_mesh_csv(csv, result.surface.patch, config.grid, config.tolerances);
    write_file(config.csv, csv.str());
  }
  if (!scene.passed) {
    std::string reason = scene.certification.failing;
    if (reason.empty()) {
      for (const auto& [name, value] : scene.law_check) reason += (reason.empty() ? "" : ", ") + name + "=" + fmt("%.3e", value);
      reason = "law check (" + reason + ")";
    }
    err << "certification failed: " << reason << "\n";
    return kExitFailed;
  }
  err << "certification passed\n";
  return kExitOk;
}

struct SourceFlags {
  std::string scene;
  std::string catalog;
  double c = 0.0;
  double r = 0.0;
  std::vector<int> grid;
  CLI::Option* c_opt = nullptr;
  CLI::Option* r_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
};

struct Source {
  std::string name;
  hypersurface::HypersurfacePatch patch;
  std::array<int, 3> grid;
  hypersurface::Tolerances tolerances;
  std::optional<catalog::ExpectedClassification> expected;
};

Source load_source(const SourceFlags& f) {
  if (f.scene.empty() == f.catalog.empty()) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --scene or --catalog");
  }
  std::optional<std::array<int, 3>> grid;
  if (f.grid_opt->count()) {
    grid = std::array<int, 3>{f.grid[0], f.grid[1], f.grid[2]};
    for (int n : *grid) {
      if (n < 1 || n > 200) throw Error(ErrorKind::InvalidArgument, "grid: counts must lie in [1, 200]");
    }
  }
  if (!f.scene.empty()) {
    if (f.c_opt->count() || f.r_opt->count()) throw Error(ErrorKind::InvalidArgument, "--c and --r apply to --catalog only");
    const Scene scene = parse_scene(read_file(f.scene));
    constructor::EquivariantHypersurface ehs = rebuild(scene);
    return {f.scene, ehs.patch, grid.value_or(scene.config.grid), scene.config.tolerances, std::nullopt};
  }
  std::map<std::string, double> params;
  if (f.c_opt->count()) params["c"] = f.c;
  if (f.r_opt->count()) params["r"] = f.r;
  catalog::CatalogEntry entry = catalog::by_name(f.catalog, params);
  return {entry.name, entry.patch, grid.value_or(entry.grid), {}, entry.expected};
}

int cmd_classify(const SourceFlags& f, const std::string& output, bool json_only, std::ostream& out,
                 std::ostream& err) {
  const Source src = load_source(f);
  const hypersurface::ClassificationReport report =
      hypersurface::classify(src.patch, hypersurface::grid_points(src.patch.box(), src.grid), src.tolerances);
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["source"] = src.name;
  doc["grid"] = src.grid;
  doc["classification"] = to_json(report);
  std::vector<std::string> mismatches;
  if (src.expected) {
    mismatches = catalog::expectation_mismatches(*src.expected, report);
    doc["expectation_mismatches"] = mismatches;
  }
  const std::string text = doc.dump(2) + "\n";
  if (json_only) {
    out << text;
  } else {
    out << "source: " << src.name << "\n";
    print_classification(out, report);
    if (src.expected) {
      out << "catalog expectations: " << (mismatches.empty() ? "all met" : "violated") << "\n";
      for (const std::string& m : mismatches) out << "  mismatch: " << m << "\n";
    }
  }
  if (!output.empty()) write_file(output, text);
  if (!mismatches.empty()) {
    err << "classification does not match the catalog expectation\n";
    return kExitFailed;
  }
  return kExitOk;
}

struct HopfFlags {
  std::string action = "cp2-torus";
  double c = 0.0;
  std::vector<double> point;
  int samples = 720;
  double tol = 1e-12;
  std::string csv;
  std::string output;
  CLI::Option* c_opt = nullptr;
  CLI::Option* point_opt = nullptr;
};

int cmd_hopf_directions(const HopfFlags& f, std::ostream& out) {
  const actions::ActionLabel label = action_from(f.action);
  if (f.samples < 90) throw Error(ErrorKind::InvalidArgument, "samples: at least 90 samples are needed");
  if (!(f.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol: must be positive");
  const actions::PolarActionSpec spec =
      f.c_opt->count() ? actions::polar_action(label, f.c) : actions::polar_action(label);
  const double r = spec.ambient.radius();
  const Vec2 u = f.point_opt->count() ? Vec2(f.point[0], f.point[1])
                                      : Vec2(constructor::kDefaultLaunchU * r, constructor::kDefaultLaunchV * r);
  const Vec3 x = spec.section.model_point(u);
  if (!actions::is_regular_model(spec, x)) {
    throw Error(ErrorKind::SingularOrbit, "point: the orbit through (" + fmt("%g", u[0]) + ", " + fmt("%g", u[1]) + ") is singular");
  }
  const actions::HopfDirectionScan scan = actions::scan_hopf_directions(spec, x, f.samples, f.tol);

  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["action"] = std::string(actions::label_name(label));
  doc["c"] = spec.ambient.c();
  doc["point"] = Json::array({u[0], u[1]});
  doc["samples"] = f.samples;
  doc["max_abs_phi"] = scan.max_abs;
  Json zeros = Json::array();
  for (std::size_t k = 0; k < scan.zero_angles.size(); ++k) {
    Json z;
    z["angle"] = scan.zero_angles[k];
    z["phi"] = scan.zero_values[k];
    z["direction"] = Json::array({scan.zero_directions[k][0], scan.zero_directions[k][1], scan.zero_directions[k][2]});
    zeros.push_back(std::move(z));
  }
  doc["zeros"] = std::move(zeros);

  out << "action " << actions::label_name(label) << ", point (" << fmt("%.6g", u[0]) << ", " << fmt("%.6g", u[1])
      << "), " << f.samples << " samples, max |phi| = " << fmt("%.6e", scan.max_abs) << "\n";
  out << scan.zero_angles.size() << " Hopf directions\n";
  for (std::size_t k = 0; k < scan.zero_angles.size(); ++k) {
    out << "  angle " << fmt("%.12f", scan.zero_angles[k]) << "  |phi| " << fmt("%.3e", std::abs(scan.zero_values[k])) << "\n";
  }
  if (!f.output.empty()) write_file(f.output, doc.dump(2) + "\n");
  if (!f.csv.empty()) {
    std::ostringstream csv;
    write_profile_csv(csv, scan);
    write_file(f.csv, csv.str());
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::optional<std::uint64_t> seed_flag, const std::string& output,
               std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(seed_flag);
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    std::string list;
    for (const std::string& n : names) list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "' (expected one of " + list + ")");
  }
  const std::vector<SuiteReport> reports = run_suite(suite, seed);
  out << format_table(reports);
  if (!output.empty()) write_file(output, to_json(reports).dump(2) + "\n");
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const SuiteReport& r) { return r.passed(); });
  if (!ok) {
    err << "verification failed\n";
    return kExitFailed;
  }
  return kExitOk;
}

int cmd_sample(const SourceFlags& f, const std::string& csv_path, const std::string& gnuplot, std::ostream& out) {
  const Source src = load_source(f);
  std::ostringstream csv;
  write_mesh_csv(csv, src.patch, src.grid, src.tolerances);
  if (csv_path.empty()) {
    out << csv.str();
  } else {
    write_file(csv_path, csv.str());
  }
  if (!gnuplot.empty()) {
    if (csv_path.empty()) throw Error(ErrorKind::InvalidArgument, "gnuplot: needs --csv so the script can refer to a file");
    write_file(gnuplot, gnuplot_script(csv_path));
  }
  return kExitOk;
}

void add_source_options(CLI::App* cmd, SourceFlags& f) {
  cmd->add_option("--scene", f.scene, "Scene file written by construct");
  cmd->add_option("--catalog", f.catalog, "Catalog entry name");
  f.c_opt = cmd->add_option("--c", f.c, "Holomorphic sectional curvature for a catalog entry");
  f.r_opt = cmd->add_option("--r", f.r, "Radius (spheres, tubes) or separation (bisector)");
  f.grid_opt = cmd->add_option("--grid", f.grid, "Grid counts along t, s1, s2")->expected(3);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strongly 2-Hopf hypersurfaces of the complex projective and hyperbolic planes"};
  app.name("hopflab");
  app.set_version_flag("--version", std::string("hopflab ") + HOPFLAB_VERSION_STRING);
  app.require_subcommand(1);

  ConstructFlags cf;
  Options co;
  CLI::App* construct = app.add_subcommand("construct", "Build and certify an equivariant hypersurface");
  construct->add_option("--config", cf.config_path, "JSON config file; flags override its fields");
  co.action = construct->add_option("--action", cf.action, "Polar action (" + label_list() + ")");
  co.c = construct->add_option("--c", cf.c, "Holomorphic sectional curvature");
  co.point = construct->add_option("--point", cf.point, "Launch point in section chart coordinates")->expected(2);
  co.angle = construct->add_option("--angle", cf.angle, "Launch angle in the section tangent frame");
  co.austere_curve = construct->add_option("--austere-curve", cf.austere_curve,
                                           "Launch from the t = 0 data of the k-th austere curve");
  co.law = construct->add_option("--law", cf.law, "Curve law: geodesic, cmc, levi-flat or austere");
  co.eta = construct->add_option("--eta", cf.eta, "Target mean curvature for the cmc law");
  co.step = construct->add_option("--step", cf.step, "Integration step");
  co.n_steps = construct->add_option("--n-steps", cf.n_steps, "Steps in each direction from the launch");
  co.grid = construct->add_option("--grid", cf.grid, "Certification grid counts along t, s1, s2")->expected(3);
  co.tol = construct->add_option("--tol", cf.tolerances, "Tolerance override name=value (repeatable)");
  co.output = construct->add_option("--output", cf.output, "Scene file (default: stdout)");
  co.csv = construct->add_option("--csv", cf.csv, "Mesh CSV over the certification grid");
  co.seed = construct->add_option("--seed", cf.seed, "Random seed (fallback: HOPFLAB_SEED)");

  SourceFlags classify_src;
  std::string classify_output;
  bool classify_json = false;
  CLI::App* classify = app.add_subcommand("classify", "Classify a scene or a catalog entry");
  add_source_options(classify, classify_src);
  classify->add_option("--output", classify_output, "Write the JSON report to this file");
  classify->add_flag("--json", classify_json, "Print the JSON report instead of the table");

  HopfFlags hf;
  CLI::App* hopf = app.add_subcommand("hopf-directions", "Find the Hopf directions at a section point");
  hopf->add_option("--action", hf.action, "Polar action (" + label_list() + ")");
  hf.c_opt = hopf->add_option("--c", hf.c, "Holomorphic sectional curvature");
  hf.point_opt = hopf->add_option("--point", hf.point, "Section chart coordinates")->expected(2);
  hopf->add_option("--samples", hf.samples, "Samples on the unit circle");
  hopf->add_option("--tol", hf.tol, "Bisection tolerance on the angle");
  hopf->add_option("--csv", hf.csv, "Obstruction profile CSV");
  hopf->add_option("--output", hf.output, "JSON report");

  std::string suite;
  std::uint64_t verify_seed = 0;
  std::string verify_output;
  CLI::App* verify = app.add_subcommand("verify", "Run an invariant suite");
  verify->add_option("suite", suite, "Suite name or 'all'")->required();
  CLI::Option* verify_seed_opt = verify->add_option("--seed", verify_seed, "Random seed (fallback: HOPFLAB_SEED)");
  verify->add_option("--output", verify_output, "JSON report");

  SourceFlags sample_src;
  std::string sample_csv, sample_gnuplot;
  CLI::App* sample = app.add_subcommand("sample", "Export a mesh CSV of a scene or catalog entry");
  add_source_options(sample, sample_src);
  sample->add_option("--csv", sample_csv, "Mesh CSV (default: stdout)");
  sample->add_option("--gnuplot", sample_gnuplot, "gnuplot script plotting the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests carry exit code 0.
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (construct->parsed()) return cmd_construct(cf, co, out, err);
    if (classify->parsed()) return cmd_classify(classify_src, classify_output, classify_json, out, err);
    if (hopf->parsed()) return cmd_hopf_directions(hf, out);
    if (verify->parsed()) {
      return cmd_verify(suite, verify_seed_opt->count() ? std::optional(verify_seed) : std::nullopt, verify_output,
                        out, err);
    }
    if (sample->parsed()) return cmd_sample(sample_src, sample_csv, sample_gnuplot, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace hopflab::cli
