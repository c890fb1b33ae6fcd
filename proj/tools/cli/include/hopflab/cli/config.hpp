#pragma once

#include "hopflab/actions.hpp"
#include "hopflab/constructor.hpp"
#include "hopflab/hypersurface.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace hopflab::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 1;

// Everything that determines a construction run. Optional fields fall back to
// library defaults when the run is resolved.
struct RunConfig {
  actions::ActionLabel action = actions::ActionLabel::Cp2Torus;
  std::optional<double> c;
  std::optional<Vec2> point;
  std::optional<double> angle;
  // Launch from the t = 0 data of the k-th curve returned by austere_search
  // instead of point/angle.
  std::optional<int> austere_curve;
  constructor::LawKind law = constructor::LawKind::Cmc;
  double eta = 1.0;
  double step = constructor::kDefaultStep;
  int n_steps = 100;
  std::array<int, 3> grid{20, 5, 5};
  hypersurface::Tolerances tolerances;
  std::string output;
  std::string csv;
  std::uint64_t seed = kDefaultSeed;
};

// Throws hopflab::Error(InvalidArgument) naming the offending field.
void validate(const RunConfig& config);

Json to_json(const RunConfig& config);
// Reads the fields present in doc over the values already in config, so a
// file can be layered under command-line flags. Unknown keys are rejected.
void merge_json(RunConfig& config, const Json& doc);
RunConfig config_from_json(const Json& doc);

// Sets one tolerance by its JSON name (tau_mult, tau_proj, integrability,
// derivative, austere, levi, ruled, cmc, spectrum, frame).
void set_tolerance(hypersurface::Tolerances& tol, const std::string& name, double value);
Json tolerances_json(const hypersurface::Tolerances& tol);

// Seed precedence: explicit flag, then HOPFLAB_SEED, then kDefaultSeed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

// Non-finite doubles are stored as null and read back as NaN.
Json number(double x);
double read_number(const Json& j);

}  // namespace hopflab::cli
