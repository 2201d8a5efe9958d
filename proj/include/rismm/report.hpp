#pragma once

// Parameter sweeps and the analytic / model-faithful / physical gap table,
// with CSV and JSON writers.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rismm/analytic.hpp"
#include "rismm/config.hpp"
#include "rismm/montecarlo.hpp"
#include "rismm/parallel.hpp"

namespace rismm {

struct SweepRow {
  double value = 0.0;
  std::optional<double> analytic_cov;
  std::optional<double> analytic_sumrate;  // bps
  bool analytic_converged = true;
  std::string mc_engine;
  std::optional<McEstimate> mc_cov;
  std::optional<McEstimate> mc_sumrate;
  std::optional<McEstimate> physical_cov;
  std::optional<McEstimate> physical_sumrate;
  double runtime_s = 0.0;
  std::string status = "ok";
};

struct SweepResult {
  std::string variable;
  double bandwidth_hz = 1.0;
  bool timing = false;
  std::vector<SweepRow> rows;

  [[nodiscard]] bool analytic_converged() const {
    for (const auto& r : rows) {
      if (!r.analytic_converged) return false;
    }
    return true;
  }
};

namespace report_detail {

// Grid points run concurrently; each MC run gets the leftover threads.
inline std::pair<unsigned, unsigned> split_threads(unsigned threads, std::size_t points) {
  threads = std::max(1U, threads);
  const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(points, 1)));
  return {outer, std::max(1U, threads / outer)};
}

inline void note(std::string& status, const std::string& what) {
  if (status == "ok") status.clear();
  else status += "; ";
  status += what;
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline nlohmann::json est_json(const std::optional<McEstimate>& e) {
  if (!e) return nullptr;
  return {{"mean", e->mean}, {"std_error", e->std_error}, {"ci95_low", e->ci95_low},
          {"ci95_high", e->ci95_high}, {"n", e->n}};
}

inline nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace report_detail

/// Evaluates every enabled engine at each grid point. A failure at one point
/// is recorded in that row's status and the sweep carries on.
inline SweepResult run_sweep(const RunConfig& cfg, unsigned threads = 1) {
  cfg.validate();
  SweepResult out;
  out.variable = cfg.sweep.variable;
  out.bandwidth_hz = cfg.params.radio.bandwidth_hz;
  out.timing = cfg.output.timing;
  out.rows.resize(cfg.sweep.grid.size());
  const auto [outer, inner] = report_detail::split_threads(threads, cfg.sweep.grid.size());

  parallel_for(cfg.sweep.grid.size(), outer, [&, inner = inner](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRow row;
    row.value = cfg.sweep.grid[i];
    const SystemParams p = cfg.params_at(row.value);
    if (cfg.engines.analytic) {
      try {
        const CoverageModel model(p, cfg.analytic);
        const auto cov = model.ergodic_coverage();
        const auto sr = model.sum_rate();
        row.analytic_cov = cov.value;
        row.analytic_sumrate = sr.bps;
        row.analytic_converged = cov.converged && sr.converged;
        if (!row.analytic_converged) report_detail::note(row.status, "analytic: quadrature did not converge");
      } catch (const std::exception& e) {
        row.analytic_converged = false;
        report_detail::note(row.status, std::string("analytic: ") + e.what());
      }
    }
    auto run_mc = [&](McMode mode, std::uint64_t scenes, std::optional<McEstimate>& cov,
                      std::optional<McEstimate>& sr) {
      McConfig mc = cfg.mc;
      mc.mode = mode;
      mc.n_scenes = scenes;
      mc.parallel_shards = inner;
      try {
        cov = simulate_coverage(p, mc);
        sr = simulate_sum_rate(p, mc);
      } catch (const std::exception& e) {
        report_detail::note(row.status, to_string(mode) + ": " + e.what());
      }
    };
    if (cfg.engines.mc_model_faithful) {
      row.mc_engine = to_string(McMode::kModelFaithful);
      run_mc(McMode::kModelFaithful, cfg.mc.n_scenes, row.mc_cov, row.mc_sumrate);
    }
    if (cfg.engines.mc_physical) {
      run_mc(McMode::kPhysical, cfg.physical_scenes, row.physical_cov, row.physical_sumrate);
      if (!cfg.engines.mc_model_faithful) {
        row.mc_engine = to_string(McMode::kPhysical);
        row.mc_cov = row.physical_cov;
        row.mc_sumrate = row.physical_sumrate;
      }
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.rows[i] = std::move(row);
  });
  return out;
}

inline const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> cols{
      "sweep_value",     "analytic_cov",      "mc_cov",           "mc_cov_ci_low",
      "mc_cov_ci_high",  "analytic_sumrate",  "mc_sumrate",       "mc_sr_ci_low",
      "mc_sr_ci_high",   "runtime_s",         "mc_engine",        "physical_cov",
      "physical_cov_ci_low", "physical_cov_ci_high", "physical_sumrate", "physical_sr_ci_low",
      "physical_sr_ci_high", "analytic_sumrate_per_hz", "mc_sumrate_per_hz", "status"};
  return cols;
}

inline std::string sweep_csv(const SweepResult& r) {
  using report_detail::num;
  using report_detail::opt;
  std::ostringstream out;
  const auto& cols = sweep_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  const double w = r.bandwidth_hz;
  for (const auto& row : r.rows) {
    auto est = [](const std::optional<McEstimate>& e) -> std::array<std::string, 3> {
      if (!e) return {"", "", ""};
      return {num(e->mean), num(e->ci95_low), num(e->ci95_high)};
    };
    const auto mc = est(row.mc_cov);
    const auto ms = est(row.mc_sumrate);
    const auto pc = est(row.physical_cov);
    const auto ps = est(row.physical_sumrate);
    std::vector<std::string> f{num(row.value),
                               opt(row.analytic_cov),
                               mc[0], mc[1], mc[2],
                               opt(row.analytic_sumrate),
                               ms[0], ms[1], ms[2],
                               r.timing ? num(row.runtime_s) : "",
                               row.mc_engine,
                               pc[0], pc[1], pc[2],
                               ps[0], ps[1], ps[2],
                               row.analytic_sumrate ? num(*row.analytic_sumrate / w) : "",
                               row.mc_sumrate ? num(row.mc_sumrate->mean / w) : "",
                               report_detail::csv_field(row.status)};
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << "\n";
  }
  return out.str();
}

inline nlohmann::json sweep_json(const SweepResult& r) {
  using report_detail::est_json;
  using report_detail::opt_json;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"sweep_value", row.value},
                    {"analytic_cov", opt_json(row.analytic_cov)},
                    {"analytic_sumrate_bps", opt_json(row.analytic_sumrate)},
                    {"analytic_sumrate_bps_per_hz",
                     row.analytic_sumrate ? nlohmann::json(*row.analytic_sumrate / r.bandwidth_hz) : nlohmann::json()},
                    {"mc_engine", row.mc_engine},
                    {"mc_cov", est_json(row.mc_cov)},
                    {"mc_sumrate_bps", est_json(row.mc_sumrate)},
                    {"physical_cov", est_json(row.physical_cov)},
                    {"physical_sumrate_bps", est_json(row.physical_sumrate)},
                    {"runtime_s", r.timing ? nlohmann::json(row.runtime_s) : nlohmann::json()},
                    {"status", row.status}});
  }
  return {{"variable", r.variable}, {"bandwidth_hz", r.bandwidth_hz}, {"rows", rows}};
}

// ---------------------------------------------------------------------------

struct GapRow {
  double value = 0.0;
  double analytic = 0.0;
  McEstimate model_faithful;
  McEstimate physical;
  std::optional<McEstimate> physical_independent;
  bool model_faithful_ok = false;  // |gap| <= max(3 sigma, 0.01)
  bool physical_ok = false;        // |gap| <= physical_bound

  [[nodiscard]] double model_faithful_gap() const { return model_faithful.mean - analytic; }
  [[nodiscard]] double physical_gap() const { return physical.mean - analytic; }
};

struct GapReport {
  std::string variable;
  double physical_bound = 0.05;
  std::vector<GapRow> rows;

  [[nodiscard]] bool model_faithful_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const GapRow& r) { return r.model_faithful_ok; });
  }
  [[nodiscard]] bool physical_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const GapRow& r) { return r.physical_ok; });
  }
};

/// Coverage from all three engines on the sweep grid. With with_independent,
/// also runs physical scenes where each link sees its own blockage draw,
/// which separates the blocking-correlation part of the gap.
inline GapReport gap_report(const RunConfig& cfg, unsigned threads = 1, bool with_independent = true,
                            double physical_bound = 0.05) {
  cfg.validate();
  GapReport rep;
  rep.variable = cfg.sweep.variable;
  rep.physical_bound = physical_bound;
  rep.rows.resize(cfg.sweep.grid.size());
  const auto [outer, inner] = report_detail::split_threads(threads, cfg.sweep.grid.size());
  parallel_for(cfg.sweep.grid.size(), outer, [&, inner = inner](std::size_t i) {
    GapRow row;
    row.value = cfg.sweep.grid[i];
    const SystemParams p = cfg.params_at(row.value);
    row.analytic = CoverageModel(p, cfg.analytic).ergodic_coverage().value;
    McConfig mc = cfg.mc;
    mc.parallel_shards = inner;
    mc.mode = McMode::kModelFaithful;
    row.model_faithful = simulate_coverage(p, mc);
    mc.mode = McMode::kPhysical;
    mc.n_scenes = cfg.physical_scenes;
    row.physical = simulate_coverage(p, mc);
    if (with_independent) {
      mc.independent_blocking = true;
      row.physical_independent = simulate_coverage(p, mc);
    }
    row.model_faithful_ok = row.model_faithful.agrees_with(row.analytic, 3.0, 0.01);
    row.physical_ok = std::abs(row.physical_gap()) <= physical_bound;
    rep.rows[i] = row;
  });
  return rep;
}

inline std::string gap_csv(const GapReport& g) {
  using report_detail::num;
  std::ostringstream out;
  out << "sweep_value,analytic_cov,mf_cov,mf_se,mf_gap,mf_ok,physical_cov,physical_se,physical_gap,physical_ok,"
         "physical_indep_cov,physical_indep_se\n";
  for (const auto& r : g.rows) {
    out << num(r.value) << "," << num(r.analytic) << "," << num(r.model_faithful.mean) << ","
        << num(r.model_faithful.std_error) << "," << num(r.model_faithful_gap()) << ","
        << (r.model_faithful_ok ? "true" : "false") << "," << num(r.physical.mean) << "," << num(r.physical.std_error)
        << "," << num(r.physical_gap()) << "," << (r.physical_ok ? "true" : "false") << ",";
    if (r.physical_independent) {
      out << num(r.physical_independent->mean) << "," << num(r.physical_independent->std_error);
    } else {
      out << ",";
    }
    out << "\n";
  }
  return out.str();
}

inline nlohmann::json gap_json(const GapReport& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : g.rows) {
    rows.push_back({{"sweep_value", r.value},
                    {"analytic_cov", r.analytic},
                    {"model_faithful", report_detail::est_json(r.model_faithful)},
                    {"physical", report_detail::est_json(r.physical)},
                    {"physical_independent", report_detail::est_json(r.physical_independent)},
                    {"model_faithful_gap", r.model_faithful_gap()},
                    {"physical_gap", r.physical_gap()},
                    {"model_faithful_ok", r.model_faithful_ok},
                    {"physical_ok", r.physical_ok}});
  }
  return {{"variable", g.variable}, {"physical_bound", g.physical_bound}, {"rows", rows}};
}

}  // namespace rismm
