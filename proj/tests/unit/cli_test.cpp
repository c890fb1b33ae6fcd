#include "hopflab/cli/app.hpp"
#include "hopflab/cli/config.hpp"
#include "hopflab/cli/scene.hpp"
#include "hopflab/cli/suites.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hopflab::cli {
namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hopflab");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hopflab_cli_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig small_config() {
  RunConfig config;
  config.action = actions::ActionLabel::Ch2G0;
  config.n_steps = 60;
  config.grid = {4, 2, 2};
  return config;
}

TEST(Config, ValidationNamesTheField) {
  RunConfig config;
  config.step = -1.0;
  try {
    validate(config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
  config = RunConfig{};
  config.tolerances.levi = 0.0;
  try {
    validate(config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("tolerances.levi"), std::string::npos);
  }
  config = RunConfig{};
  config.c = -4.0;  // wrong sign for the projective action
  EXPECT_THROW(validate(config), Error);
}

TEST(Config, JsonRoundTripAndUnknownKeys) {
  RunConfig config = small_config();
  config.point = Vec2(0.1, 0.2);
  config.angle = 1.25;
  config.tolerances.cmc = 5e-4;
  const RunConfig back = config_from_json(to_json(config));
  EXPECT_EQ(to_json(back).dump(), to_json(config).dump());
  try {
    config_from_json(Json::parse(R"({"acton": "cp2-torus"})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
}

TEST(Config, SeedPrecedence) {
  ::unsetenv("HOPFLAB_SEED");
  EXPECT_EQ(resolve_seed(std::nullopt), kDefaultSeed);
  ::setenv("HOPFLAB_SEED", "42", 1);
  EXPECT_EQ(resolve_seed(std::nullopt), 42u);
  EXPECT_EQ(resolve_seed(9), 9u);
  ::setenv("HOPFLAB_SEED", "x", 1);
  EXPECT_THROW(resolve_seed(std::nullopt), Error);
  ::unsetenv("HOPFLAB_SEED");
}

TEST(Scene, EmitParseEmitIsIdentity) {
  const ConstructionResult result = run_construction(small_config());
  const std::string text = emit_scene(result.scene);
  const Scene parsed = parse_scene(text);
  EXPECT_EQ(emit_scene(parsed), text);
  ASSERT_EQ(parsed.sigma.samples.size(), result.scene.sigma.samples.size());
  for (std::size_t k = 0; k < parsed.sigma.samples.size(); ++k) {
    EXPECT_EQ(parsed.sigma.samples[k].t, result.scene.sigma.samples[k].t);
    EXPECT_EQ(parsed.sigma.samples[k].x, result.scene.sigma.samples[k].x);
  }
  EXPECT_EQ(parsed.classification.residuals, result.scene.classification.residuals);
  // The stored curve rebuilds the same patch.
  const auto rebuilt = rebuild(parsed);
  const hypersurface::Params q = rebuilt.patch.box().center();
  EXPECT_LT((rebuilt.patch.point(q).rep - result.surface.patch.point(q).rep).norm(), 1e-15);
}

TEST(Scene, CorruptedFileReportsLocation) {
  const std::string text = emit_scene(run_construction(small_config()).scene);
  try {
    parse_scene(text.substr(0, text.size() / 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
}

TEST(Scene, MeshCsvHasVersionedHeader) {
  const ConstructionResult result = run_construction(small_config());
  std::ostringstream csv;
  write_mesh_csv(csv, result.surface.patch, {2, 2, 2}, {});
  std::istringstream lines(csv.str());
  std::string header, columns;
  std::getline(lines, header);
  std::getline(lines, columns);
  EXPECT_EQ(header, kMeshCsvHeader);
  EXPECT_EQ(columns, "t,s1,s2,re_z0,im_z0,re_z1,im_z1,re_z2,im_z2,k1,k2,k3,mean_curvature,h");
  int rows = 0;
  for (std::string row; std::getline(lines, row);) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST(App, ExitCodes) {
  EXPECT_EQ(invoke({"construct", "--eta", "abc"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"construct", "--action", "nosuch"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"verify", "nosuch"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"classify"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"hopf-directions", "--action", "cp2-torus", "--point", "0", "0"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);

  const Invocation lohnherr = invoke({"classify", "--catalog", "lohnherr", "--json"});
  ASSERT_EQ(lohnherr.code, kExitOk) << lohnherr.err;
  const Json report = Json::parse(lohnherr.out);
  EXPECT_TRUE(report["classification"]["austere"].get<bool>());
  EXPECT_TRUE(report["classification"]["ruled"].get<bool>());

  // An impossible tolerance turns a good construction into a certification failure.
  const Invocation strict = invoke({"construct", "--action", "ch2-g0", "--n-steps", "60", "--grid", "4", "2", "2",
                                    "--tol", "integrability=1e-300", "--output", temp_path("strict.json")});
  EXPECT_EQ(strict.code, kExitFailed) << strict.err;
}

TEST(App, ConfigFileIsOverriddenByFlags) {
  const std::string config = temp_path("config.json");
  std::ofstream(config) << R"({"action": "ch2-g0", "law": "cmc", "eta": 0.5, "n_steps": 60, "grid": [4, 2, 2]})";
  const std::string scene = temp_path("scene.json");
  const Invocation r = invoke({"construct", "--config", config, "--eta", "1.0", "--output", scene});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json doc = Json::parse(slurp(scene));
  EXPECT_EQ(doc["config"]["eta"].get<double>(), 1.0);
  EXPECT_EQ(doc["config"]["action"].get<std::string>(), "ch2-g0");
  EXPECT_LT(doc["law_check"]["mean_curvature_spread"].get<double>(), 1e-3);
}

TEST(App, HopfDirectionsStableUnderResolution) {
  const std::string coarse = temp_path("hd360.json"), fine = temp_path("hd720.json"), csv = temp_path("hd.csv");
  ASSERT_EQ(invoke({"hopf-directions", "--action", "ch2-torus", "--samples", "360", "--output", coarse}).code, kExitOk);
  ASSERT_EQ(invoke({"hopf-directions", "--action", "ch2-torus", "--samples", "720", "--output", fine, "--csv", csv}).code,
            kExitOk);
  const Json a = Json::parse(slurp(coarse)), b = Json::parse(slurp(fine));
  EXPECT_EQ(a["zeros"].size(), b["zeros"].size());
  for (const Json& z : b["zeros"]) EXPECT_LT(std::abs(z["phi"].get<double>()), 1e-9);
  EXPECT_GT(b["max_abs_phi"].get<double>(), 1e-6);
  EXPECT_EQ(slurp(csv).rfind(kProfileCsvHeader, 0), 0u);
}

TEST(App, VerifyIsDeterministic) {
  const std::string first = temp_path("v1.json"), second = temp_path("v2.json");
  ASSERT_EQ(invoke({"verify", "ambient", "--seed", "3", "--output", first}).code, kExitOk);
  ASSERT_EQ(invoke({"verify", "ambient", "--seed", "3", "--output", second}).code, kExitOk);
  EXPECT_EQ(slurp(first), slurp(second));
  const std::string other = temp_path("v3.json");
  ASSERT_EQ(invoke({"verify", "ambient", "--seed", "4", "--output", other}).code, kExitOk);
  EXPECT_NE(slurp(first), slurp(other));
}

TEST(Suites, UnknownSuiteThrows) {
  EXPECT_THROW(run_suite("nosuch", 1), Error);
  EXPECT_EQ(suite_names().back(), "all");
}

}  // namespace
}  // namespace hopflab::cli
