// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   rismm_acceptance [--write-baseline]
//
// --write-baseline rewrites data/physical_gap_baseline.json from this run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "numerics_cases.hpp"
#include "rismm/analytic.hpp"
#include "rismm/config.hpp"
#include "rismm/report.hpp"
#include "rismm/validation.hpp"

namespace {

const std::vector<double> kRisGrid{0.0, 1.59e-4, 3.18e-4, 6.37e-4, 9.55e-4, 1.59e-3};

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const Outcome& o, double seconds) {
  std::printf("%s %-4s %-46s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", id, title, seconds, o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

template <class F>
void run(const char* id, const char* title, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(id, title, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

rismm::RunConfig base() {
  auto c = rismm::default_config(false);
  c.mc.n_scenes = 100000;
  c.mc.seed = 1;
  return c;
}

Outcome oracle_equivalence(const rismm::ValidationReport& rep) {
  const char* groups[] = {"p_los", "reflection_prob", "eta_cdf", "cond_coverage_direct", "cond_coverage_reflected",
                          "ergodic_coverage", "sum_rate"};
  Outcome o{true, ""};
  int n = 0;
  for (const char* g : groups) {
    const auto checks = rep.group(g);
    if (checks.empty()) {
      o.pass = false;
      o.detail += std::string(g) + " missing; ";
    }
    for (const auto* c : checks) {
      ++n;
      if (c->status != rismm::CheckStatus::kPass) {
        o.pass = false;
        o.detail += c->name + " off by " + fmt("%.3g", std::abs(c->observed - c->expected)) + "; ";
      }
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " checks within 3 sigma at 1e5 trials";
  return o;
}

Outcome degenerate(const rismm::ValidationReport& rep) {
  Outcome o{true, ""};
  for (const auto* c : rep.group("degenerate")) {
    if (c->status != rismm::CheckStatus::kPass) o.pass = false;
    o.detail += c->name + " |d|=" + fmt("%.2g", std::abs(c->observed - c->expected)) + "; ";
  }
  return o;
}

Outcome coverage_trend() {
  std::vector<double> cov;
  for (double lr : kRisGrid) {
    auto p = base().params;
    p.lambda_r = lr;
    p.lambda_b = 1.59e-3;
    cov.push_back(rismm::CoverageModel(p).ergodic_coverage().value);
  }
  Outcome o{true, "coverage"};
  for (std::size_t i = 0; i < cov.size(); ++i) {
    o.detail += " " + fmt("%.4f", cov[i]);
    if (i >= 1 && !(cov[i] > cov[i - 1])) o.pass = false;
    if (i >= 2 && !(cov[i] - cov[i - 1] < cov[i - 1] - cov[i - 2])) o.pass = false;
  }
  return o;
}

Outcome sum_rate_gain() {
  auto gain = [](double lambda_b) {
    auto p = base().params;
    p.lambda_b = lambda_b;
    p.lambda_r = 0.0;
    const double r0 = rismm::CoverageModel(p).sum_rate().bps;
    p.lambda_r = 1.59e-3;
    return rismm::CoverageModel(p).sum_rate().bps / r0;
  };
  const double dense = gain(1.59e-3);
  const double sparse = gain(3.18e-4);
  return {dense > sparse, "gain " + fmt("%.3fx", dense) + " at lambda_b=1.59e-3 vs " + fmt("%.3fx", sparse) +
                              " at lambda_b=3.18e-4"};
}

Outcome physical_gap(bool write_baseline) {
  auto c = base();
  c.sweep.grid = kRisGrid;
  c.mc.n_scenes = 20000;
  c.physical_scenes = 2000;
  const auto rep = rismm::gap_report(c, 1, false);
  const std::string path = std::string(RISMM_TEST_DATA_DIR) + "/physical_gap_baseline.json";
  if (write_baseline) {
    nlohmann::json j;
    for (const auto& r : rep.rows) {
      j["rows"].push_back({{"lambda_r", r.value}, {"gap", r.physical_gap()}, {"std_error", r.physical.std_error}});
    }
    j["physical_scenes"] = c.physical_scenes;
    j["seed"] = c.mc.seed;
    std::ofstream(path) << j.dump(2) << "\n";
  }
  std::ifstream f(path);
  const auto baseline = nlohmann::json::parse(f);
  Outcome o{rep.physical_ok(), "gap"};
  bool regressed = false;
  double worst = 0.0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const double g = rep.rows[i].physical_gap();
    worst = std::max(worst, std::abs(g));
    o.detail += " " + fmt("%+.3f", g);
    regressed |= std::abs(g - baseline["rows"][i]["gap"].get<double>()) > 1e-12;
  }
  o.detail += "; worst " + fmt("%.3f", worst) + " vs bound 0.05";
  o.detail += regressed ? "; DIFFERS from frozen baseline" : "; matches frozen baseline";
  if (regressed) o.pass = false;
  return o;
}

Outcome numerics_suite() {
  const auto spec = rismm_test::quadrature_case_spec();
  int within = 0;
  int conservative = 0;
  int identical = 0;
  const auto cases = rismm_test::quadrature_cases();
  for (const auto& c : cases) {
    const auto a = c.run(spec);
    const auto b = c.run(spec);
    const double err = std::abs(a.value - c.exact);
    within += err <= std::max(spec.rel_tol * std::abs(c.exact), spec.abs_tol);
    conservative += err <= a.error_estimate;
    identical += a.value == b.value && a.error_estimate == b.error_estimate && a.evals == b.evals;
  }
  const int n = static_cast<int>(cases.size());
  return {n == 20 && within == n && conservative >= 0.95 * n && identical == n,
          std::to_string(within) + "/" + std::to_string(n) + " within tolerance, " + std::to_string(conservative) +
              " conservative, " + std::to_string(identical) + " bit-identical"};
}

Outcome reproducibility() {
  auto c = base();
  c.mc.n_scenes = 20000;
  c.physical_scenes = 100;
  c.engines.mc_physical = true;
  const auto serial = rismm::sweep_csv(rismm::run_sweep(c, 1));
  const auto parallel = rismm::sweep_csv(rismm::run_sweep(c, 8));
  const auto again = rismm::sweep_csv(rismm::run_sweep(c, 1));
  return {serial == parallel && serial == again,
          std::to_string(serial.size()) + " CSV bytes, serial vs 8 threads vs rerun " +
              (serial == parallel && serial == again ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  const bool write_baseline = argc > 1 && std::strcmp(argv[1], "--write-baseline") == 0;
  rismm::ValidationReport rep;
  run("AC1", "oracle equivalence (3 sigma, 1e5 trials)", [&] {
    rep = rismm::run_validation(base());
    return oracle_equivalence(rep);
  });
  run("AC2", "degenerate collapses", [&] { return degenerate(rep); });
  run("AC3", "coverage rises and saturates in lambda_r", coverage_trend);
  run("AC4", "sum-rate gain larger with denser blockage", sum_rate_gain);
  run("AC5", "physical vs analytic gap within 0.05", [&] { return physical_gap(write_baseline); });
  run("AC6", "numerics suite", numerics_suite);
  run("AC7", "byte-identical CSV, serial vs parallel", reproducibility);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
