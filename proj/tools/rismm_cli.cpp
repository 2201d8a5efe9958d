// rismm: analytic and Monte Carlo coverage / rate of RIS-assisted mmWave cells.
//
//   rismm analytic   [--xi X]                    closed-form values
//   rismm mc         [--xi X] [--mode M]         Monte Carlo estimates
//   rismm sweep                                  CSV (and JSON) over the sweep grid
//   rismm validate                               oracle equivalence suite
//   rismm gap-report                             analytic vs model-faithful vs physical
//
// Exit codes: 0 ok, 1 validation failure, 2 invalid config, 3 non-convergence,
// 4 config parse error, 5 config file missing.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rismm/analytic.hpp"
#include "rismm/config.hpp"
#include "rismm/montecarlo.hpp"
#include "rismm/report.hpp"
#include "rismm/validation.hpp"

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kConfigInvalid = 2, kNonConvergence = 3, kParseError = 4, kMissingFile = 5 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string json;
  std::string out;
  std::string mutate;
};

rismm::RunConfig load(const Common& c) {
  auto cfg = c.config.empty() ? rismm::default_config() : rismm::load_config(c.config);
  if (c.seed) cfg.mc.seed = *c.seed;
  cfg.mc.parallel_shards = std::max(1U, c.threads);
  if (c.mutate == "drop-2-over-pi") {
    // Test hook: the analytic LoS decay loses its 2/pi factor.
    cfg.analytic.los_decay_scale = std::numbers::pi / 2.0;
  } else if (!c.mutate.empty()) {
    throw rismm::ParameterError("unknown mutation: " + c.mutate);
  }
  return cfg;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void emit_json(const Common& c, const nlohmann::json& j) {
  if (!c.json.empty()) write_file(c.json, j.dump(2) + "\n");
}

std::string est(const rismm::McEstimate& e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.6g  (se %.3g, 95%% CI [%.6g, %.6g], n=%llu)", e.mean, e.std_error, e.ci95_low,
                e.ci95_high, static_cast<unsigned long long>(e.n));
  return buf;
}

nlohmann::json est_json(const rismm::McEstimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"ci95_low", e.ci95_low}, {"ci95_high", e.ci95_high}, {"n", e.n}};
}

int cmd_analytic(const Common& c, std::optional<double> xi) {
  const auto cfg = load(c);
  const rismm::CoverageModel m(cfg.params, cfg.analytic);
  const double w = cfg.params.radio.bandwidth_hz;
  nlohmann::json j;
  bool converged = true;
  if (xi) {
    const auto cc = m.cond_coverage(*xi, cfg.params.threshold);
    const auto r = m.user_rate(*xi);
    converged = cc.converged && r.converged;
    std::printf("xi                 %g m\n", *xi);
    std::printf("P(direct assoc)    %.8g\n", cc.p_direct_assoc);
    std::printf("P(reflect assoc)   %.8g\n", cc.p_reflect_assoc);
    std::printf("P(cov | direct)    %.8g\n", cc.p_cov_direct);
    std::printf("P(cov | reflect)   %.8g\n", cc.p_cov_reflect);
    std::printf("P(cov)             %.8g\n", cc.p_cov_total);
    std::printf("user rate          %.8g bps (%.8g bps/Hz)\n", r.bps, r.bps / w);
    j = {{"xi", *xi},
         {"p_direct_assoc", cc.p_direct_assoc},
         {"p_reflect_assoc", cc.p_reflect_assoc},
         {"p_cov_direct", cc.p_cov_direct},
         {"p_cov_reflect", cc.p_cov_reflect},
         {"p_cov_total", cc.p_cov_total},
         {"user_rate_bps", r.bps},
         {"converged", converged}};
  } else {
    const auto cov = m.ergodic_coverage();
    const auto assoc = m.ergodic_association();
    const auto sr = m.sum_rate();
    converged = cov.converged && sr.converged && assoc.converged;
    std::printf("ergodic coverage   %.8g (error est %.2g)\n", cov.value, cov.error_estimate);
    std::printf("association prob   %.8g\n", assoc.value);
    std::printf("sum rate           %.8g bps (%.8g bps/Hz)\n", sr.bps, sr.bps / w);
    j = {{"ergodic_coverage", cov.value},
         {"association_prob", assoc.value},
         {"sum_rate_bps", sr.bps},
         {"sum_rate_bps_per_hz", sr.bps / w},
         {"converged", converged}};
  }
  emit_json(c, j);
  if (!converged) {
    std::fprintf(stderr, "quadrature did not reach the requested tolerance\n");
    return kNonConvergence;
  }
  return kOk;
}

int cmd_mc(const Common& c, std::optional<double> xi, const std::string& mode, std::optional<std::uint64_t> scenes) {
  auto cfg = load(c);
  if (mode == "physical") cfg.mc.mode = rismm::McMode::kPhysical;
  else if (mode == "model_faithful") cfg.mc.mode = rismm::McMode::kModelFaithful;
  else if (!mode.empty()) throw rismm::ParameterError("--mode must be model_faithful or physical");
  if (scenes) cfg.mc.n_scenes = *scenes;
  else if (cfg.mc.mode == rismm::McMode::kPhysical && !xi) cfg.mc.n_scenes = cfg.physical_scenes;
  const double w = cfg.params.radio.bandwidth_hz;
  nlohmann::json j{{"mode", rismm::to_string(cfg.mc.mode)}, {"seed", cfg.mc.seed}};
  if (xi) {
    const auto cov = rismm::simulate_conditional_coverage(*xi, cfg.params, cfg.mc);
    const auto rate = rismm::simulate_user_rate(*xi, cfg.params, cfg.mc);
    std::printf("mode               %s\n", rismm::to_string(cfg.mc.mode).c_str());
    std::printf("P(cov | xi=%g)     %s\n", *xi, est(cov).c_str());
    std::printf("user rate (bps)    %s\n", est(rate).c_str());
    j["xi"] = *xi;
    j["coverage"] = est_json(cov);
    j["user_rate_bps"] = est_json(rate);
  } else {
    const auto cov = rismm::simulate_coverage(cfg.params, cfg.mc);
    const auto sr = rismm::simulate_sum_rate(cfg.params, cfg.mc);
    std::printf("mode               %s\n", rismm::to_string(cfg.mc.mode).c_str());
    std::printf("coverage           %s\n", est(cov).c_str());
    std::printf("sum rate (bps)     %s\n", est(sr).c_str());
    std::printf("sum rate (bps/Hz)  %.8g\n", sr.mean / w);
    j["coverage"] = est_json(cov);
    j["sum_rate_bps"] = est_json(sr);
  }
  emit_json(c, j);
  return kOk;
}

int cmd_sweep(const Common& c) {
  const auto cfg = load(c);
  const auto res = rismm::run_sweep(cfg, c.threads);
  const std::string csv = rismm::sweep_csv(res);
  const std::string out = c.out.empty() ? cfg.output.csv : c.out;
  if (out == "-") std::cout << csv;
  else write_file(out, csv);
  Common jc = c;
  if (jc.json.empty()) jc.json = cfg.output.json;
  emit_json(jc, rismm::sweep_json(res));
  for (const auto& r : res.rows) {
    if (r.status != "ok") std::fprintf(stderr, "%s=%g: %s\n", res.variable.c_str(), r.value, r.status.c_str());
  }
  return res.analytic_converged() ? kOk : kNonConvergence;
}

int cmd_validate(const Common& c) {
  const auto cfg = load(c);
  const auto rep = rismm::run_validation(cfg, c.threads);
  std::cout << rismm::validation_text(rep);
  emit_json(c, rismm::validation_json(rep));
  return rep.passed() ? kOk : kValidationFailed;
}

int cmd_gap(const Common& c, bool independent) {
  const auto cfg = load(c);
  const auto rep = rismm::gap_report(cfg, c.threads, independent);
  const std::string csv = rismm::gap_csv(rep);
  if (c.out.empty() || c.out == "-") std::cout << csv;
  else write_file(c.out, csv);
  emit_json(c, rismm::gap_json(rep));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage and rate of RIS-assisted mmWave cells: closed form and Monte Carlo."};
  app.require_subcommand(1);
  Common common;
  std::optional<double> xi;
  std::string mode;
  std::optional<std::uint64_t> scenes;
  bool no_independent = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", common.config, "TOML config file (defaults when omitted)");
    sub->add_option("--seed", common.seed, "Monte Carlo seed (overrides config)");
    sub->add_option("--threads,-j", common.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--json", common.json, "also write results as JSON to this path");
    sub->add_option("--out,-o", common.out, "output path ('-' for stdout)");
    sub->add_option("--mutate", common.mutate, "corrupt the analytic model (test hook)")->group("");
  };

  auto* analytic = app.add_subcommand("analytic", "closed-form coverage and rate");
  add_common(analytic);
  analytic->add_option("--xi", xi, "user distance for conditional values (m)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo coverage and rate");
  add_common(mc);
  mc->add_option("--xi", xi, "tagged user distance (m)");
  mc->add_option("--mode", mode, "model_faithful or physical");
  mc->add_option("--scenes", scenes, "number of scenes / trials");

  auto* sweep = app.add_subcommand("sweep", "evaluate engines over the sweep grid, write CSV");
  add_common(sweep);

  auto* validate = app.add_subcommand("validate", "run the oracle equivalence suite");
  add_common(validate);

  auto* gap = app.add_subcommand("gap-report", "analytic vs model-faithful vs physical coverage");
  add_common(gap);
  gap->add_flag("--no-independent", no_independent, "skip the independent-blocking physical run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*analytic) return cmd_analytic(common, xi);
    if (*mc) return cmd_mc(common, xi, mode, scenes);
    if (*sweep) return cmd_sweep(common);
    if (*validate) return cmd_validate(common);
    if (*gap) return cmd_gap(common, !no_independent);
  } catch (const rismm::ConfigFileError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kMissingFile;
  } catch (const rismm::ConfigParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kParseError;
  } catch (const rismm::ParameterError& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kConfigInvalid;
  } catch (const rismm::NonConvergenceError& e) {
    std::fprintf(stderr, "did not converge: %s\n", e.what());
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigInvalid;
  }
  return kOk;
}
