#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "rismm/config.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rismm_config_test";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

rismm::RunConfig with_env(const std::string& text, const std::map<std::string, std::string>& env) {
  const auto doc = toml::parse(text);
  return rismm::config_from_toml(doc, [&](const std::string& name) -> const char* {
    const auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  });
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
  const auto c = rismm::load_config(write("empty.toml", ""), false);
  const auto& p = c.params;
  EXPECT_EQ(p.cell_radius, 100.0);
  EXPECT_EQ(p.lambda_u(50.0), 3.18e-3);
  EXPECT_EQ(p.mean_block_len(), 15.0);
  EXPECT_EQ(p.lambda_b, 1.59e-3);
  EXPECT_EQ(p.radio.n_bs, 64);
  EXPECT_EQ(p.radio.n_u, 4);
  EXPECT_EQ(p.radio.n_r, 64);
  EXPECT_EQ(p.radio.bandwidth_hz, 2e8);
  EXPECT_EQ(p.radio.alpha, 3.8);
  EXPECT_EQ(p.radio.beta, 2.2);
  EXPECT_EQ(p.threshold, 1.0);
  EXPECT_EQ(c.mc.seed, 1U);
  EXPECT_EQ(c.sweep.variable, "lambda_r");
  EXPECT_EQ(c.sweep.grid.size(), 6U);
}

TEST(Config, SectionsOverrideDefaults) {
  const auto c = rismm::parse_config(R"(
[system]
lambda_r = 6.37e-4
ris_mass = "sector_boundary"

[radio]
n_r = 16

[montecarlo]
n_scenes = 500
mode = "physical"
association = "direct_first"

[sweep]
variable = "threshold"
grid = [1.0, 10.0, 100.0]

[engines]
mc_physical = true
)");
  EXPECT_EQ(c.params.lambda_r, 6.37e-4);
  EXPECT_EQ(c.params.ris_mass, rismm::RisMassRule::kSectorBoundary);
  EXPECT_EQ(c.params.radio.n_r, 16);
  EXPECT_EQ(c.mc.n_scenes, 500U);
  EXPECT_EQ(c.mc.mode, rismm::McMode::kPhysical);
  EXPECT_EQ(c.mc.association, rismm::Association::kDirectFirst);
  EXPECT_EQ(c.sweep.variable, "threshold");
  EXPECT_TRUE(c.engines.mc_physical);
  EXPECT_EQ(c.params_at(10.0).threshold, 10.0);
}

TEST(Config, NegativeDensityIsParameterError) {
  EXPECT_THROW(rismm::parse_config("[system]\nlambda_b = -1.0\n"), rismm::ParameterError);
  EXPECT_THROW(rismm::parse_config("[system]\nlambda_r = -1e-4\n"), rismm::ParameterError);
}

TEST(Config, BadSweepRejected) {
  EXPECT_THROW(rismm::parse_config("[sweep]\ngrid = [2.0, 1.0]\n"), rismm::ParameterError);
  EXPECT_THROW(rismm::parse_config("[sweep]\ngrid = []\n"), rismm::ParameterError);
  EXPECT_THROW(rismm::parse_config("[sweep]\nvariable = \"alpha\"\n"), rismm::ParameterError);
}

TEST(Config, UnknownKeysAndSectionsRejected) {
  EXPECT_THROW(rismm::parse_config("[system]\nlambda_x = 1.0\n"), rismm::ConfigParseError);
  EXPECT_THROW(rismm::parse_config("[plotting]\ncolor = 1\n"), rismm::ConfigParseError);
  EXPECT_THROW(rismm::parse_config("lambda_r = 1.0\n"), rismm::ConfigParseError);
}

TEST(Config, WrongTypesRejected) {
  EXPECT_THROW(rismm::parse_config("[system]\nlambda_r = \"lots\"\n"), rismm::ConfigParseError);
  EXPECT_THROW(rismm::parse_config("[montecarlo]\nn_scenes = 1.5\n"), rismm::ConfigParseError);
}

TEST(Config, SyntaxErrorIsParseError) {
  EXPECT_THROW(rismm::parse_config("[system\nlambda_r = \n"), rismm::ConfigParseError);
  EXPECT_THROW(rismm::load_config(write("broken.toml", "[system]\nlambda_r = = 2\n"), false), rismm::ConfigParseError);
}

TEST(Config, MissingFileIsFileError) {
  EXPECT_THROW(rismm::load_config(scratch("does_not_exist.toml"), false), rismm::ConfigFileError);
}

TEST(Config, SaveLoadRoundTrip) {
  auto c = rismm::default_config(false);
  c.sweep.grid = {1.59e-4, 3.18e-4, 6.37e-4, 9.55e-4, 1.59e-3};
  c.params.lambda_r = 1.0 / 3.0 * 1e-3;
  c.params.lambda_u = rismm::UserDensity({0.0, 50.0, 100.0}, {1e-3, 3.3e-3, 2e-3});
  c.mc.seed = 0xdeadbeefULL;
  c.output.json = "out.json";
  const auto path = scratch("roundtrip.toml");
  rismm::save_config(c, path);
  const auto d = rismm::load_config(path, false);
  EXPECT_EQ(d.sweep.grid, c.sweep.grid);
  EXPECT_EQ(d.params.lambda_r, c.params.lambda_r);
  EXPECT_EQ(d.params.lambda_u.radii(), c.params.lambda_u.radii());
  EXPECT_EQ(d.params.lambda_u.values(), c.params.lambda_u.values());
  EXPECT_EQ(d.params.radio.noise_power, c.params.radio.noise_power);
  EXPECT_EQ(d.mc.seed, c.mc.seed);
  EXPECT_EQ(d.output.json, "out.json");
  EXPECT_EQ(rismm::config_to_string(d), rismm::config_to_string(c));
}

TEST(Config, UserDensityTable) {
  const auto c = rismm::parse_config("[system]\nlambda_u = { radii = [0.0, 100.0], values = [1e-3, 5e-3] }\n");
  EXPECT_FALSE(c.params.lambda_u.is_constant());
  EXPECT_DOUBLE_EQ(c.params.lambda_u(50.0), 3e-3);
  EXPECT_THROW(rismm::parse_config("[system]\nlambda_u = { radii = [0.0], values = [1e-3, 5e-3] }\n"),
               rismm::ParameterError);
}

TEST(Config, EnvironmentOverrides) {
  const auto c = with_env("[system]\nlambda_r = 1e-4\n",
                          {{"RISMM_SYSTEM_LAMBDA_R", "2e-4"}, {"RISMM_MONTECARLO_SEED", "99"},
                           {"RISMM_MONTECARLO_MODE", "physical"}, {"RISMM_SWEEP_GRID", "[1e-4, 2e-4]"}});
  EXPECT_EQ(c.params.lambda_r, 2e-4);
  EXPECT_EQ(c.mc.seed, 99U);
  EXPECT_EQ(c.mc.mode, rismm::McMode::kPhysical);
  EXPECT_EQ(c.sweep.grid, (std::vector<double>{1e-4, 2e-4}));
  EXPECT_THROW(with_env("", {{"RISMM_SYSTEM_LAMBDA_B", "-1"}}), rismm::ParameterError);
  EXPECT_THROW(with_env("", {{"RISMM_SYSTEM_LAMBDA_B", "x = {"}}), rismm::ConfigParseError);
}
