#pragma once

// Oracle equivalence suite: every analytic quantity next to a model-faithful
// Monte Carlo estimate of the same quantity, plus the degenerate collapses.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "rismm/analytic.hpp"
#include "rismm/config.hpp"
#include "rismm/montecarlo.hpp"

namespace rismm {

enum class CheckStatus { kPass, kFail, kSkipped };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "FAIL";
    default: return "skipped (degenerate)";
  }
}

struct CheckResult {
  std::string name;
  std::string group;  // analytic quantity under test
  CheckStatus status = CheckStatus::kPass;
  double observed = 0.0;   // Monte Carlo or reference value
  double expected = 0.0;   // analytic value
  double std_error = 0.0;  // of `observed`; 0 for deterministic checks
  double tolerance = 0.0;  // allowed |observed - expected|
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const {
    for (const auto& c : checks) {
      if (c.status == CheckStatus::kFail) return false;
    }
    return true;
  }
  [[nodiscard]] std::vector<const CheckResult*> group(const std::string& g) const {
    std::vector<const CheckResult*> out;
    for (const auto& c : checks) {
      if (c.group == g) out.push_back(&c);
    }
    return out;
  }
};

namespace validation_detail {

inline std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline CheckResult compare(std::string name, std::string group, const McEstimate& mc, double analytic,
                           double floor = 0.0) {
  CheckResult c;
  c.name = std::move(name);
  c.group = std::move(group);
  c.observed = mc.mean;
  c.expected = analytic;
  c.std_error = mc.std_error;
  c.tolerance = std::max(3.0 * mc.std_error, floor);
  c.status = std::abs(mc.mean - analytic) <= c.tolerance ? CheckStatus::kPass : CheckStatus::kFail;
  return c;
}

inline CheckResult exact(std::string name, std::string group, double observed, double expected, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.group = std::move(group);
  c.observed = observed;
  c.expected = expected;
  c.tolerance = tol;
  c.status = std::abs(observed - expected) <= tol ? CheckStatus::kPass : CheckStatus::kFail;
  return c;
}

inline CheckResult skipped(std::string name, std::string group) {
  CheckResult c;
  c.name = std::move(name);
  c.group = std::move(group);
  c.status = CheckStatus::kSkipped;
  c.detail = "lambda_r = 0";
  return c;
}

}  // namespace validation_detail

/// Thresholds used by the fading-sensitive checks: the direct one puts the
/// conditional direct coverage at 1/2 at xi = R/2, the reflected one puts the
/// reflected SNR scale at a cascaded product of R^2 / 5.
inline double validation_direct_threshold(const CoverageModel& m) {
  return m.mean_direct_snr(0.5 * m.params().cell_radius) * std::numbers::ln2;
}
inline double validation_reflect_threshold(const CoverageModel& m) {
  const double R = m.params().cell_radius;
  return m.reflect_snr_scale() / std::pow(0.2 * R * R, m.params().radio.beta);
}

/// Runs the suite on cfg.params with cfg.mc.n_scenes trials per oracle.
/// cfg.analytic (including its los_decay_scale) shapes the analytic side only.
inline ValidationReport run_validation(const RunConfig& cfg, unsigned threads = 1) {
  using namespace validation_detail;
  cfg.validate();
  const SystemParams& p = cfg.params;
  const CoverageModel model(p, cfg.analytic);
  McConfig mc = cfg.mc;
  mc.mode = McMode::kModelFaithful;
  mc.parallel_shards = std::max(1U, threads);
  const double R = p.cell_radius;
  const bool has_ris = p.lambda_r > 0.0;
  const std::vector<double> xis{0.1 * R, 0.5 * R, 0.9 * R};
  ValidationReport rep;

  // LoS frequency of a fixed link in blockage scenes.
  for (double d : {0.25 * R, R, 2.0 * R}) {
    rep.checks.push_back(
        compare("p_los d=" + fmt("%g", d), "p_los", oracle_p_los(d, p, mc), model.p_los(d), 0.015));
  }

  for (double xi : xis) {
    const std::string name = "reflection_prob xi=" + fmt("%g", xi);
    if (!has_ris) {
      rep.checks.push_back(skipped(name, "reflection_prob"));
      continue;
    }
    rep.checks.push_back(
        compare(name, "reflection_prob", oracle_reflection_prob(xi, p, mc), model.reflection_prob(xi).value));
  }

  if (has_ris) {
    const double xi = 0.5 * R;
    const double xm = model.max_eta(xi);
    const std::vector<double> grid{0.01 * xm, 0.05 * xm, 0.15 * xm};
    const auto e = oracle_eta_cdf(xi, grid, model, mc);
    auto ks = exact("eta_cdf KS xi=" + fmt("%g", xi), "eta_cdf", e.ks_distance, 0.0, 0.02);
    ks.detail = "Kolmogorov-Smirnov distance";
    rep.checks.push_back(ks);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const auto est = McEstimate::make(e.empirical[j], e.std_error[j], mc.n_scenes);
      rep.checks.push_back(compare("eta_cdf x=" + fmt("%.6g", grid[j]), "eta_cdf", est, e.analytic[j]));
    }
    rep.checks.push_back(compare("eta_cdf x=inf", "eta_cdf", e.finite_fraction, e.analytic_finite));
  } else {
    rep.checks.push_back(skipped("eta_cdf", "eta_cdf"));
  }

  const double t_direct = validation_direct_threshold(model);
  for (double xi : xis) {
    rep.checks.push_back(compare("cond_coverage_direct xi=" + fmt("%g", xi), "cond_coverage_direct",
                                 oracle_cond_coverage_direct(xi, t_direct, p, mc),
                                 model.cond_coverage_direct(xi, t_direct)));
  }

  const double t_reflect = validation_reflect_threshold(model);
  for (double xi : xis) {
    const std::string name = "cond_coverage_reflected xi=" + fmt("%g", xi);
    if (!has_ris) {
      rep.checks.push_back(skipped(name, "cond_coverage_reflected"));
      continue;
    }
    rep.checks.push_back(compare(name, "cond_coverage_reflected", oracle_cond_coverage_reflected(xi, t_reflect, p, mc),
                                 model.cond_coverage_reflected(xi, t_reflect).value));
  }
  if (has_ris) {
    const double xi = 0.5 * R;
    rep.checks.push_back(compare("reflected_coverage_joint xi=" + fmt("%g", xi), "cond_coverage_reflected",
                                 oracle_reflected_coverage_joint(xi, t_reflect, model, mc),
                                 model.reflected_coverage_joint(xi, t_reflect).value));
  }

  for (double t : {p.threshold, t_direct, t_reflect}) {
    if (t == t_reflect && !has_ris) {
      rep.checks.push_back(skipped("ergodic_coverage T=" + fmt("%.4g", t), "ergodic_coverage"));
      continue;
    }
    SystemParams q = p;
    q.threshold = t;
    const CoverageModel m(q, cfg.analytic);
    rep.checks.push_back(compare("ergodic_coverage T=" + fmt("%.4g", t), "ergodic_coverage", simulate_coverage(q, mc),
                                 m.ergodic_coverage().value));
  }

  for (double k : {0.5, 1.0, 2.0}) {
    SystemParams q = p;
    q.lambda_b = k * p.lambda_b;
    const CoverageModel m(q, cfg.analytic);
    rep.checks.push_back(compare("sum_rate lambda_b=" + fmt("%.4g", q.lambda_b), "sum_rate", simulate_sum_rate(q, mc),
                                 m.sum_rate().bps));
  }

  // Degenerate collapses.
  {
    SystemParams q = p;
    q.lambda_b = 0.0;
    q.threshold = t_direct;
    const CoverageModel m(q, cfg.analytic);
    // Without blockage every user is served directly.
    auto direct_only = numerics::integrate_1d(
        [&](double xi) { return m.cond_coverage_direct(xi, t_direct) * q.lambda_u(xi) * 2.0 * std::numbers::pi * xi; },
        0.0, R, q.lambda_u.radii(), QuadratureSpec{1e-10, 1e-14});
    const double users = m.user_count().value;
    rep.checks.push_back(exact("lambda_b=0 collapse", "degenerate", m.ergodic_coverage().value,
                               direct_only.value / users, 1e-6));
  }
  {
    SystemParams q = p;
    q.lambda_r = 0.0;
    const CoverageModel m(q, cfg.analytic);
    double worst = 0.0;
    for (double xi : xis) {
      const auto c = m.cond_coverage(xi, t_reflect);
      worst = std::max({worst, c.p_reflect_assoc, c.p_cov_reflect});
    }
    rep.checks.push_back(exact("lambda_r=0 reflected terms", "degenerate", worst, 0.0, 0.0));
  }
  {
    SystemParams q = p;
    q.threshold = 1e-300;
    rep.checks.push_back(compare("T->0 coverage = association", "degenerate", simulate_coverage(q, mc),
                                 model.ergodic_association().value));
  }
  return rep;
}

inline std::string validation_text(const ValidationReport& rep) {
  std::string out;
  char buf[256];
  for (const auto& c : rep.checks) {
    if (c.status == CheckStatus::kSkipped) {
      std::snprintf(buf, sizeof buf, "[%s] %s\n", to_string(c.status).c_str(), c.name.c_str());
    } else {
      std::snprintf(buf, sizeof buf, "[%s] %-40s observed=%.6g expected=%.6g |diff|=%.3g tol=%.3g se=%.3g\n",
                    to_string(c.status).c_str(), c.name.c_str(), c.observed, c.expected,
                    std::abs(c.observed - c.expected), c.tolerance, c.std_error);
    }
    out += buf;
  }
  out += rep.passed() ? "validation passed\n" : "validation FAILED\n";
  return out;
}

inline nlohmann::json validation_json(const ValidationReport& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"group", c.group},
                      {"status", to_string(c.status)},
                      {"observed", c.observed},
                      {"expected", c.expected},
                      {"std_error", c.std_error},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  return {{"passed", rep.passed()}, {"checks", checks}};
}

}  // namespace rismm
