#pragma once

// Run configuration: TOML file with sections [system], [radio], [quadrature],
// [montecarlo], [sweep], [output], [engines]. Every key is optional; unknown
// sections or keys are rejected. Any key can be overridden from the
// environment as RISMM_<SECTION>_<KEY> (upper case), e.g. RISMM_SYSTEM_LAMBDA_R=1e-4.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <toml.hpp>

#include "rismm/analytic.hpp"
#include "rismm/errors.hpp"
#include "rismm/montecarlo.hpp"
#include "rismm/params.hpp"

namespace rismm {

class ConfigFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string variable = "lambda_r";
  std::vector<double> grid{0.0, 1.59e-4, 3.18e-4, 6.37e-4, 9.55e-4, 1.59e-3};

  void validate() const {
    detail::require(variable == "lambda_r" || variable == "lambda_b" || variable == "threshold",
                    "sweep.variable must be one of lambda_r, lambda_b, threshold");
    detail::require(!grid.empty(), "sweep.grid must not be empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      detail::require(grid[i] > grid[i - 1], "sweep.grid must be strictly increasing");
    }
  }
};

struct OutputSpec {
  std::string csv = "sweep.csv";
  std::string json;     // empty: no JSON mirror
  bool timing = false;  // fill runtime_s (makes output run-dependent)
};

struct EngineFlags {
  bool analytic = true;
  bool mc_model_faithful = true;
  bool mc_physical = false;
};

struct RunConfig {
  // Mid-grid RIS density so the reflected-path checks have something to test.
  SystemParams params = [] {
    SystemParams p;
    p.lambda_r = 3.18e-4;
    return p;
  }();
  AnalyticOptions analytic;
  McConfig mc;
  std::uint64_t physical_scenes = 2000;  // scenes per point for the physical engine
  SweepSpec sweep;
  OutputSpec output;
  EngineFlags engines;

  void validate() const {
    params.validate();
    analytic.outer.validate();
    analytic.inner.validate();
    detail::require(analytic.los_decay_scale > 0.0, "los_decay_scale must be positive");
    mc.validate();
    detail::require(physical_scenes >= 1, "montecarlo.physical_scenes must be >= 1");
    sweep.validate();
  }

  /// Parameters with the sweep variable set to v.
  [[nodiscard]] SystemParams params_at(double v) const {
    SystemParams p = params;
    if (sweep.variable == "lambda_r") p.lambda_r = v;
    else if (sweep.variable == "lambda_b") p.lambda_b = v;
    else p.threshold = v;
    return p;
  }
};

namespace config_detail {

// One binding between a TOML key and a RunConfig field.
struct Field {
  std::function<void(const toml::node&, RunConfig&)> read;
  std::function<void(const RunConfig&, toml::table&)> write;
};

[[noreturn]] inline void bad_type(const std::string& key, const char* want) {
  throw ConfigParseError("config key '" + key + "' must be " + want);
}

inline double as_double(const toml::node& n, const std::string& key) {
  if (auto v = n.value<double>()) return *v;  // accepts integers too
  bad_type(key, "a number");
}

inline std::int64_t as_int(const toml::node& n, const std::string& key) {
  if (n.is_integer()) return n.as_integer()->get();
  if (n.is_floating_point()) {
    const double d = n.as_floating_point()->get();
    if (d == std::floor(d) && std::abs(d) < 9.0e18) return static_cast<std::int64_t>(d);
  }
  bad_type(key, "an integer");
}

inline std::uint64_t as_count(const toml::node& n, const std::string& key) {
  const auto v = as_int(n, key);
  if (v < 0) throw ParameterError("config key '" + key + "' must be >= 0");
  return static_cast<std::uint64_t>(v);
}

inline bool as_bool(const toml::node& n, const std::string& key) {
  if (auto v = n.value<bool>()) return *v;
  bad_type(key, "true or false");
}

inline std::string as_string(const toml::node& n, const std::string& key) {
  if (auto v = n.value<std::string>()) return *v;
  bad_type(key, "a string");
}

inline std::vector<double> as_doubles(const toml::node& n, const std::string& key) {
  const auto* arr = n.as_array();
  if (!arr) bad_type(key, "an array of numbers");
  std::vector<double> out;
  for (const auto& e : *arr) out.push_back(as_double(e, key));
  return out;
}

inline toml::array to_array(const std::vector<double>& v) {
  toml::array a;
  for (double x : v) a.push_back(x);
  return a;
}

using Schema = std::map<std::string, std::map<std::string, Field>>;

#define RISMM_DOUBLE(sec, key, expr)                                                                 \
  s[sec][key] = {[](const toml::node& n, RunConfig& c) { expr = as_double(n, sec "." key); },       \
                 [](const RunConfig& c, toml::table& t) { t.insert_or_assign(key, expr); }}
#define RISMM_INT(sec, key, expr, type)                                                              \
  s[sec][key] = {[](const toml::node& n, RunConfig& c) { expr = static_cast<type>(as_count(n, sec "." key)); }, \
                 [](const RunConfig& c, toml::table& t) { t.insert_or_assign(key, static_cast<std::int64_t>(expr)); }}
#define RISMM_BOOL(sec, key, expr)                                                                   \
  s[sec][key] = {[](const toml::node& n, RunConfig& c) { expr = as_bool(n, sec "." key); },         \
                 [](const RunConfig& c, toml::table& t) { t.insert_or_assign(key, expr); }}
#define RISMM_STRING(sec, key, expr)                                                                 \
  s[sec][key] = {[](const toml::node& n, RunConfig& c) { expr = as_string(n, sec "." key); },       \
                 [](const RunConfig& c, toml::table& t) { t.insert_or_assign(key, expr); }}

inline const Schema& schema() {
  static const Schema s_all = [] {
    Schema s;
    RISMM_DOUBLE("system", "cell_radius", c.params.cell_radius);
    RISMM_DOUBLE("system", "lambda_r", c.params.lambda_r);
    RISMM_DOUBLE("system", "lambda_b", c.params.lambda_b);
    RISMM_DOUBLE("system", "block_len_min", c.params.block_len_min);
    RISMM_DOUBLE("system", "block_len_max", c.params.block_len_max);
    RISMM_DOUBLE("system", "threshold", c.params.threshold);
    // lambda_u: a number, or a table { radii = [...], values = [...] }.
    s["system"]["lambda_u"] = {
        [](const toml::node& n, RunConfig& c) {
          if (const auto* t = n.as_table()) {
            for (const auto& [k, v] : *t) {
              if (k.str() != "radii" && k.str() != "values") {
                throw ConfigParseError("unknown key 'system.lambda_u." + std::string(k.str()) + "'");
              }
            }
            const auto* r = t->get("radii");
            const auto* v = t->get("values");
            if (!r || !v) throw ConfigParseError("system.lambda_u table needs radii and values");
            c.params.lambda_u = UserDensity(as_doubles(*r, "system.lambda_u.radii"),
                                            as_doubles(*v, "system.lambda_u.values"));
          } else {
            c.params.lambda_u = UserDensity(as_double(n, "system.lambda_u"));
          }
        },
        [](const RunConfig& c, toml::table& t) {
          const auto& u = c.params.lambda_u;
          if (u.is_constant()) {
            t.insert_or_assign("lambda_u", u.values().front());
          } else {
            toml::table sub;
            sub.insert_or_assign("radii", to_array(u.radii()));
            sub.insert_or_assign("values", to_array(u.values()));
            t.insert_or_assign("lambda_u", std::move(sub));
          }
        }};
    s["system"]["ris_mass"] = {
        [](const toml::node& n, RunConfig& c) {
          const auto v = as_string(n, "system.ris_mass");
          if (v == "cell_integral") c.params.ris_mass = RisMassRule::kCellIntegral;
          else if (v == "sector_boundary") c.params.ris_mass = RisMassRule::kSectorBoundary;
          else throw ParameterError("system.ris_mass must be cell_integral or sector_boundary");
        },
        [](const RunConfig& c, toml::table& t) { t.insert_or_assign("ris_mass", to_string(c.params.ris_mass)); }};

    RISMM_DOUBLE("radio", "alpha", c.params.radio.alpha);
    RISMM_DOUBLE("radio", "beta", c.params.radio.beta);
    RISMM_DOUBLE("radio", "p0", c.params.radio.p0);
    RISMM_DOUBLE("radio", "noise_power", c.params.radio.noise_power);
    RISMM_DOUBLE("radio", "bandwidth_hz", c.params.radio.bandwidth_hz);
    RISMM_INT("radio", "n_bs", c.params.radio.n_bs, int);
    RISMM_INT("radio", "n_u", c.params.radio.n_u, int);
    RISMM_INT("radio", "n_r", c.params.radio.n_r, int);

    RISMM_DOUBLE("quadrature", "outer_rel_tol", c.analytic.outer.rel_tol);
    RISMM_DOUBLE("quadrature", "outer_abs_tol", c.analytic.outer.abs_tol);
    RISMM_DOUBLE("quadrature", "inner_rel_tol", c.analytic.inner.rel_tol);
    RISMM_DOUBLE("quadrature", "inner_abs_tol", c.analytic.inner.abs_tol);
    s["quadrature"]["max_depth"] = {
        [](const toml::node& n, RunConfig& c) {
          c.analytic.outer.max_depth = c.analytic.inner.max_depth = static_cast<int>(as_count(n, "quadrature.max_depth"));
        },
        [](const RunConfig& c, toml::table& t) {
          t.insert_or_assign("max_depth", static_cast<std::int64_t>(c.analytic.outer.max_depth));
        }};
    s["quadrature"]["max_evals"] = {
        [](const toml::node& n, RunConfig& c) {
          c.analytic.outer.max_evals = c.analytic.inner.max_evals =
              static_cast<std::size_t>(as_count(n, "quadrature.max_evals"));
        },
        [](const RunConfig& c, toml::table& t) {
          t.insert_or_assign("max_evals", static_cast<std::int64_t>(c.analytic.outer.max_evals));
        }};

    RISMM_INT("montecarlo", "n_scenes", c.mc.n_scenes, std::uint64_t);
    RISMM_INT("montecarlo", "n_fading_per_scene", c.mc.n_fading_per_scene, std::uint64_t);
    RISMM_INT("montecarlo", "seed", c.mc.seed, std::uint64_t);
    RISMM_INT("montecarlo", "parallel_shards", c.mc.parallel_shards, unsigned);
    RISMM_INT("montecarlo", "physical_scenes", c.physical_scenes, std::uint64_t);
    RISMM_DOUBLE("montecarlo", "min_distance", c.mc.min_distance);
    RISMM_BOOL("montecarlo", "independent_blocking", c.mc.independent_blocking);
    s["montecarlo"]["mode"] = {
        [](const toml::node& n, RunConfig& c) {
          const auto v = as_string(n, "montecarlo.mode");
          if (v == "model_faithful") c.mc.mode = McMode::kModelFaithful;
          else if (v == "physical") c.mc.mode = McMode::kPhysical;
          else throw ParameterError("montecarlo.mode must be model_faithful or physical");
        },
        [](const RunConfig& c, toml::table& t) { t.insert_or_assign("mode", to_string(c.mc.mode)); }};
    s["montecarlo"]["association"] = {
        [](const toml::node& n, RunConfig& c) {
          const auto v = as_string(n, "montecarlo.association");
          if (v == "max_mean_power") c.mc.association = Association::kMaxMeanPower;
          else if (v == "direct_first") c.mc.association = Association::kDirectFirst;
          else throw ParameterError("montecarlo.association must be max_mean_power or direct_first");
        },
        [](const RunConfig& c, toml::table& t) { t.insert_or_assign("association", to_string(c.mc.association)); }};

    RISMM_STRING("sweep", "variable", c.sweep.variable);
    s["sweep"]["grid"] = {[](const toml::node& n, RunConfig& c) { c.sweep.grid = as_doubles(n, "sweep.grid"); },
                          [](const RunConfig& c, toml::table& t) { t.insert_or_assign("grid", to_array(c.sweep.grid)); }};

    RISMM_STRING("output", "csv", c.output.csv);
    RISMM_STRING("output", "json", c.output.json);
    RISMM_BOOL("output", "timing", c.output.timing);

    RISMM_BOOL("engines", "analytic", c.engines.analytic);
    RISMM_BOOL("engines", "mc_model_faithful", c.engines.mc_model_faithful);
    RISMM_BOOL("engines", "mc_physical", c.engines.mc_physical);
    return s;
  }();
  return s_all;
}

#undef RISMM_DOUBLE
#undef RISMM_INT
#undef RISMM_BOOL
#undef RISMM_STRING

inline std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

// Parses "value" as the right-hand side of a TOML key.
inline toml::table parse_scalar(const std::string& name, const std::string& text) {
  try {
    return toml::parse("v = " + text);
  } catch (const toml::parse_error&) {
    // Bare words are taken as strings: RISMM_MONTECARLO_MODE=physical.
    if (text.find_first_of("[]{}=\"") != std::string::npos) {
      throw ConfigParseError("cannot parse environment override " + name + "=" + text);
    }
    toml::table t;
    t.insert_or_assign("v", text);
    return t;
  }
}

}  // namespace config_detail

/// Applies a parsed TOML document on top of defaults.
/// env(name) returns the override for an environment variable name, if any.
inline RunConfig config_from_toml(const toml::table& doc,
                                  const std::function<const char*(const std::string&)>& env = nullptr) {
  using namespace config_detail;
  const auto& s = schema();
  RunConfig c;
  for (const auto& [sec_key, sec_node] : doc) {
    const std::string sec(sec_key.str());
    const auto it = s.find(sec);
    if (it == s.end()) throw ConfigParseError("unknown config section '" + sec + "'");
    const auto* tbl = sec_node.as_table();
    if (!tbl) throw ConfigParseError("'" + sec + "' must be a [section]");
    for (const auto& [k, v] : *tbl) {
      const std::string key(k.str());
      const auto f = it->second.find(key);
      if (f == it->second.end()) throw ConfigParseError("unknown config key '" + sec + "." + key + "'");
      f->second.read(v, c);
    }
  }
  if (env) {
    for (const auto& [sec, fields] : s) {
      for (const auto& [key, field] : fields) {
        const std::string name = "RISMM_" + upper(sec) + "_" + upper(key);
        if (const char* val = env(name)) {
          const auto t = parse_scalar(name, val);
          field.read(*t.get("v"), c);
        }
      }
    }
  }
  c.validate();
  return c;
}

inline const char* getenv_override(const std::string& name) { return std::getenv(name.c_str()); }

/// Parses TOML text (no environment overrides).
inline RunConfig parse_config(const std::string& text) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigParseError(std::string("config parse error: ") + std::string(e.description()));
  }
  return config_from_toml(doc);
}

/// Reads, parses and validates a config file, then applies RISMM_* overrides.
inline RunConfig load_config(const std::filesystem::path& path, bool use_env = true) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigFileError("config file not found: " + path.string());
  toml::table doc;
  try {
    doc = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config parse error in " << path.string() << " at " << e.source().begin << ": " << e.description();
    throw ConfigParseError(msg.str());
  }
  return config_from_toml(doc, use_env ? getenv_override : nullptr);
}

/// Defaults plus RISMM_* overrides, for runs without a config file.
inline RunConfig default_config(bool use_env = true) {
  return config_from_toml(toml::table{}, use_env ? getenv_override : nullptr);
}

inline toml::table config_to_toml(const RunConfig& c) {
  toml::table doc;
  for (const auto& [sec, fields] : config_detail::schema()) {
    toml::table t;
    for (const auto& [key, field] : fields) field.write(c, t);
    doc.insert_or_assign(sec, std::move(t));
  }
  return doc;
}

inline std::string config_to_string(const RunConfig& c) {
  std::ostringstream out;
  out << config_to_toml(c) << "\n";
  return out.str();
}

inline void save_config(const RunConfig& c, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigFileError("cannot write config file: " + path.string());
  f << config_to_string(c);
}

}  // namespace rismm
