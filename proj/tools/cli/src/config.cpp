#include "hopflab/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

namespace hopflab::cli {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, message);
}

struct ToleranceField {
  const char* name;
  double hypersurface::Tolerances::*member;
};

constexpr ToleranceField kToleranceFields[] = {
    {"tau_mult", &hypersurface::Tolerances::tau_mult},
    {"tau_proj", &hypersurface::Tolerances::tau_proj},
    {"integrability", &hypersurface::Tolerances::integrability},
    {"derivative", &hypersurface::Tolerances::derivative},
    {"austere", &hypersurface::Tolerances::austere},
    {"levi", &hypersurface::Tolerances::levi},
    {"ruled", &hypersurface::Tolerances::ruled},
    {"cmc", &hypersurface::Tolerances::cmc},
    {"spectrum", &hypersurface::Tolerances::spectrum},
    {"frame", &hypersurface::Tolerances::frame},
};

double field_number(const Json& doc, const char* key) {
  const Json& j = doc.at(key);
  if (!j.is_number()) throw Error(ErrorKind::Parse, std::string("config field '") + key + "' must be a number");
  return j.get<double>();
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.c) {
    require(std::isfinite(*config.c) && *config.c != 0.0, "c: curvature must be finite and nonzero");
    const bool projective = config.action == actions::ActionLabel::Cp2Torus;
    require((*config.c > 0.0) == projective, "c: sign does not match the action's ambient space");
  }
  if (config.point) require(config.point->allFinite(), "point: coordinates must be finite");
  if (config.angle) require(std::isfinite(*config.angle), "angle: must be finite");
  if (config.austere_curve) {
    require(*config.austere_curve >= 0, "austere_curve: index must be non-negative");
    require(!config.point && !config.angle, "austere_curve: cannot be combined with point or angle");
  }
  require(std::isfinite(config.eta), "eta: must be finite");
  require(std::isfinite(config.step) && config.step > 0.0, "step: must be positive");
  require(config.n_steps >= 10, "n_steps: at least 10 steps are needed for the differentiation margin");
  require(config.step * config.n_steps > 0.04, "n_steps: step * n_steps must exceed 0.04");
  for (int k = 0; k < 3; ++k) require(config.grid[k] >= 1 && config.grid[k] <= 200, "grid: counts must lie in [1, 200]");
  for (const ToleranceField& f : kToleranceFields) {
    const double v = config.tolerances.*f.member;
    require(std::isfinite(v) && v > 0.0, std::string("tolerances.") + f.name + ": must be positive");
  }
}

void set_tolerance(hypersurface::Tolerances& tol, const std::string& name, double value) {
  for (const ToleranceField& f : kToleranceFields) {
    if (name == f.name) {
      tol.*f.member = value;
      return;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "tolerances: unknown tolerance '" + name + "'");
}

Json tolerances_json(const hypersurface::Tolerances& tol) {
  Json j = Json::object();
  for (const ToleranceField& f : kToleranceFields) j[f.name] = tol.*f.member;
  return j;
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double read_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw Error(ErrorKind::Parse, "expected a number, found " + std::string(j.type_name()));
  return j.get<double>();
}

Json to_json(const RunConfig& config) {
  Json j;
  j["action"] = std::string(actions::label_name(config.action));
  j["c"] = config.c ? Json(*config.c) : Json(nullptr);
  j["point"] = config.point ? Json::array({(*config.point)[0], (*config.point)[1]}) : Json(nullptr);
  j["angle"] = config.angle ? Json(*config.angle) : Json(nullptr);
  j["austere_curve"] = config.austere_curve ? Json(*config.austere_curve) : Json(nullptr);
  j["law"] = std::string(constructor::law_name(config.law));
  j["eta"] = config.eta;
  j["step"] = config.step;
  j["n_steps"] = config.n_steps;
  j["grid"] = config.grid;
  j["tolerances"] = tolerances_json(config.tolerances);
  j["output"] = config.output;
  j["csv"] = config.csv;
  j["seed"] = config.seed;
  return j;
}

void merge_json(RunConfig& config, const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "config: top level must be an object");
  static const std::set<std::string> known = {"action",  "c",    "point",      "angle",  "austere_curve", "law", "eta",
                                              "step",    "n_steps", "grid", "tolerances", "output", "csv",           "seed"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw Error(ErrorKind::Parse, "config: unknown field '" + key + "'");
  }
  try {
    if (doc.contains("action")) {
      const std::string name = doc.at("action").get<std::string>();
      const auto label = actions::parse_label(name);
      if (!label) throw Error(ErrorKind::InvalidArgument, "action: unknown action '" + name + "'");
      config.action = *label;
    }
    if (doc.contains("c")) config.c = doc.at("c").is_null() ? std::nullopt : std::optional(field_number(doc, "c"));
    if (doc.contains("point")) {
      const Json& p = doc.at("point");
      if (p.is_null()) {
        config.point.reset();
      } else {
        if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::Parse, "config field 'point' must be [u, v]");
        config.point = Vec2(p.at(0).get<double>(), p.at(1).get<double>());
      }
    }
    if (doc.contains("angle")) {
      config.angle = doc.at("angle").is_null() ? std::nullopt : std::optional(field_number(doc, "angle"));
    }
    if (doc.contains("austere_curve")) {
      const Json& a = doc.at("austere_curve");
      config.austere_curve = a.is_null() ? std::nullopt : std::optional(a.get<int>());
    }
    if (doc.contains("law")) {
      const std::string name = doc.at("law").get<std::string>();
      const auto law = constructor::parse_law(name);
      if (!law) throw Error(ErrorKind::InvalidArgument, "law: unknown law '" + name + "'");
      config.law = *law;
    }
    if (doc.contains("eta")) config.eta = field_number(doc, "eta");
    if (doc.contains("step")) config.step = field_number(doc, "step");
    if (doc.contains("n_steps")) config.n_steps = doc.at("n_steps").get<int>();
    if (doc.contains("grid")) {
      const Json& g = doc.at("grid");
      if (!g.is_array() || g.size() != 3) throw Error(ErrorKind::Parse, "config field 'grid' must have three counts");
      for (int k = 0; k < 3; ++k) config.grid[k] = g.at(k).get<int>();
    }
    if (doc.contains("tolerances")) {
      for (const auto& [name, value] : doc.at("tolerances").items()) {
        if (!value.is_number()) throw Error(ErrorKind::Parse, "tolerances." + name + ": must be a number");
        set_tolerance(config.tolerances, name, value.get<double>());
      }
    }
    if (doc.contains("output")) config.output = doc.at("output").get<std::string>();
    if (doc.contains("csv")) config.csv = doc.at("csv").get<std::string>();
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::Parse, std::string("config: ") + ex.what());
  }
}

RunConfig config_from_json(const Json& doc) {
  RunConfig config;
  merge_json(config, doc);
  return config;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HOPFLAB_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') {
      throw Error(ErrorKind::InvalidArgument, "HOPFLAB_SEED must be a non-negative integer");
    }
    return value;
  }
  return kDefaultSeed;
}

}  // namespace hopflab::cli
