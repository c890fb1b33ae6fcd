#pragma once

#include "hopflab/cli/config.hpp"
#include "hopflab/constructor.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hopflab::cli {

struct SigmaRecord {
  constructor::CurveLaw law;
  double step = constructor::kDefaultStep;
  bool truncated = false;
  std::string truncation_reason;
  std::vector<constructor::SigmaSample> samples;
};

struct PatchRecord {
  hypersurface::ParameterBox box;
  int orientation = 1;
  double s_extent = 0.0;
  double diff_step = 0.0;
  double frame_step = 0.0;
};

struct CertificationRecord {
  bool passed = false;
  std::string failing;
  std::map<std::string, double> residuals;
};

// Output of `construct`: the resolved run, the curve, the patch box, and
// every report behind the pass/fail verdict.
struct Scene {
  int schema_version = kSchemaVersion;
  std::string generator;
  RunConfig config;
  double c = 0.0;
  constructor::Launch launch;
  SigmaRecord sigma;
  PatchRecord patch;
  hypersurface::ClassificationReport classification;
  CertificationRecord certification;
  std::map<std::string, double> law_check;
  bool passed = false;
};

Json to_json(const hypersurface::ClassificationReport& report);
hypersurface::ClassificationReport classification_from_json(const Json& j);

Json scene_to_json(const Scene& scene);
Scene scene_from_json(const Json& doc);
// Two-space indented JSON followed by a newline.
std::string emit_scene(const Scene& scene);
// Throws hopflab::Error(Parse) with the line and column of a syntax error or
// the name of a missing or mistyped field.
Scene parse_scene(const std::string& text);

struct ConstructionResult {
  Scene scene;
  constructor::EquivariantHypersurface surface;
};

// integrate_sigma + build_hypersurface + certification for a validated config.
ConstructionResult run_construction(const RunConfig& config);

// Rebuilds the patch of a scene from its stored curve samples.
constructor::EquivariantHypersurface rebuild(const Scene& scene);

// Mesh CSV over a grid of the patch: parameters, ambient representative,
// principal curvatures, mean curvature and h. The first line is a versioned
// header comment and the column order is fixed.
inline constexpr const char* kMeshCsvHeader = "# hopflab-mesh-csv v1";
void write_mesh_csv(std::ostream& out, const hypersurface::HypersurfacePatch& patch,
                    const std::array<int, 3>& grid, const hypersurface::Tolerances& tol);

inline constexpr const char* kProfileCsvHeader = "# hopflab-phi-profile-csv v1";
void write_profile_csv(std::ostream& out, const actions::HopfDirectionScan& scan);

// Text for gnuplot that plots principal curvature against t from a mesh CSV.
std::string gnuplot_script(const std::string& csv_path);

// printf-style "%.17g".
std::string format_double(double x);

}  // namespace hopflab::cli
