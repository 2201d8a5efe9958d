#pragma once

// Monte Carlo engines.
//
// Model-faithful runs re-sample the analytic model's own probabilistic
// description: independent LoS coin flips with P_LoS(d), RIS availability from
// a thinned RIS PPP, the cascaded product eta from the uniform-cos(theta)
// placement, and "direct if LoS, else best RIS" association.
//
// Physical runs draw whole scenes: segment blockages, RIS and user PPPs,
// exact intersection tests on every link (all sharing one blockage set),
// and association by largest mean received power.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rismm/analytic.hpp"
#include "rismm/channel.hpp"
#include "rismm/errors.hpp"
#include "rismm/geometry.hpp"
#include "rismm/parallel.hpp"
#include "rismm/params.hpp"
#include "rismm/random.hpp"

namespace rismm {

enum class McMode { kModelFaithful, kPhysical };

inline std::string to_string(McMode m) { return m == McMode::kModelFaithful ? "model_faithful" : "physical"; }

enum class Association {
  kMaxMeanPower,  // larger of the direct and best reflected mean received power
  kDirectFirst,   // direct if LoS, else best LoS RIS
};

inline std::string to_string(Association a) {
  return a == Association::kMaxMeanPower ? "max_mean_power" : "direct_first";
}

struct McConfig {
  std::uint64_t n_scenes = 100000;  // scenes (physical) or trials (model-faithful)
  std::uint64_t n_fading_per_scene = 1;
  std::uint64_t seed = 1;
  McMode mode = McMode::kModelFaithful;
  unsigned parallel_shards = 1;  // worker threads
  double min_distance = 1.0;     // physical mode: link lengths clamped below at this (m)
  Association association = Association::kMaxMeanPower;  // physical mode only
  // Physical mode diagnostic: every link sees its own fresh blockage draw
  // instead of the shared scene, removing blocking correlation between links.
  bool independent_blocking = false;

  void validate() const {
    detail::require(n_scenes >= 1, "n_scenes must be >= 1");
    detail::require(n_fading_per_scene >= 1, "n_fading_per_scene must be >= 1");
    detail::require(parallel_shards >= 1, "parallel_shards must be >= 1");
    detail::require(min_distance > 0.0 && std::isfinite(min_distance), "min_distance must be positive");
  }
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::uint64_t n = 0;

  static McEstimate make(double mean, double se, std::uint64_t n) {
    return {mean, se, mean - 1.96 * se, mean + 1.96 * se, n};
  }

  [[nodiscard]] McEstimate scaled(double k) const { return make(mean * k, std_error * std::abs(k), n); }

  /// |mean - value| <= max(k_sigma * std_error, floor).
  [[nodiscard]] bool agrees_with(double value, double k_sigma = 3.0, double floor = 0.0) const {
    return std::abs(mean - value) <= std::max(k_sigma * std_error, floor);
  }
};

/// Sample mean with the usual standard error.
inline McEstimate mean_estimate(std::span<const double> x) {
  const auto n = x.size();
  if (n == 0) throw EmptyEstimateError("no samples");
  double sum = 0.0;
  for (double v : x) sum += v;
  const double m = sum / static_cast<double>(n);
  if (n == 1) return McEstimate::make(m, 0.0, 1);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return McEstimate::make(m, std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)), n);
}

/// Ratio sum(num) / sum(den) over clusters, with the delta-method standard
/// error that treats each cluster (scene) as one draw.
inline McEstimate ratio_estimate(std::span<const double> num, std::span<const double> den) {
  detail::require(num.size() == den.size(), "ratio estimate needs matching spans");
  const auto n = num.size();
  double sy = 0.0;
  double sx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sy += num[i];
    sx += den[i];
  }
  if (!(sx > 0.0)) throw EmptyEstimateError("no users were sampled in any scene");
  const double r = sy / sx;
  if (n < 2) return McEstimate::make(r, 0.0, n);
  const double xbar = sx / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = num[i] - r * den[i];
    ss += e * e;
  }
  const double se = std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1))) / xbar;
  return McEstimate::make(r, se, n);
}

namespace mc_detail {

inline double los_decay(const SystemParams& p) {
  return 2.0 * p.lambda_b * p.mean_block_len() / std::numbers::pi;
}

// Mean-SNR scales; fading is applied as multiples of unit exponentials.
struct LinkBudget {
  double direct = 0.0;   // 10^alpha P0 N_BS N_u / sigma^2
  double reflect = 0.0;  // 10^{2 alpha} P0 (N_BS N_R)(N_R N_u) / sigma^2
  double beta = 2.0;
  double bandwidth = 1.0;

  explicit LinkBudget(const RadioParams& r)
      : direct(std::pow(10.0, r.alpha) * r.p0 * r.direct_fading_mean() / r.noise_power),
        reflect(std::pow(10.0, 2.0 * r.alpha) * r.p0 * r.bs_ris_fading_mean() * r.ris_user_fading_mean() /
                r.noise_power),
        beta(r.beta),
        bandwidth(r.bandwidth_hz) {}
};

enum class LinkKind { kNone, kDirect, kReflected };

// The associated link: distance xi (direct) or product s r (reflected).
struct ServingLink {
  LinkKind kind = LinkKind::kNone;
  double length = 0.0;
};

struct UserOutcome {
  double covered = 0.0;  // fraction of fading draws above threshold
  double rate = 0.0;     // mean W log2(1 + snr), bps
};

// Two unit exponentials per fading draw whatever the link, so paired runs
// stay aligned when association changes.
inline UserOutcome fade(const ServingLink& link, const LinkBudget& lb, double threshold, std::uint64_t draws,
                        RandomStream& rng) {
  UserOutcome out;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const double u = rng.exponential(1.0);
    const double v = rng.exponential(1.0);
    if (link.kind == LinkKind::kNone) continue;
    const double pl = std::pow(link.length, lb.beta);
    const double snr = link.kind == LinkKind::kDirect ? lb.direct * u / pl : lb.reflect * u * v / pl;
    if (snr > threshold) out.covered += 1.0;
    out.rate += lb.bandwidth * std::log1p(snr) / std::numbers::ln2;
  }
  const double n = static_cast<double>(draws);
  out.covered /= n;
  out.rate /= n;
  return out;
}

// Direct-link association probability at xi, as the model sees it.
inline double model_p_los(double d, const SystemParams& p) { return std::exp(-los_decay(p) * d); }

}  // namespace mc_detail

// ---------------------------------------------------------------------------
// Model-faithful sampling primitives

/// User distance from the BS with density proportional to lambda_u(xi) xi on (0, R].
inline double sample_user_distance(const SystemParams& p, RandomStream& rng) {
  const double lmax = p.lambda_u.max_value();
  if (!(lmax > 0.0)) throw EmptyEstimateError("user density is zero everywhere");
  for (int i = 0; i < 1000000; ++i) {
    const double xi = p.cell_radius * std::sqrt(rng.uniform_open0());
    if (p.lambda_u.is_constant() || rng.uniform() * lmax < p.lambda_u(xi)) return xi;
  }
  throw NonConvergenceError("user distance rejection sampler stalled");
}

/// Does at least one RIS of a fresh PPP survive LoS thinning, seen from a user
/// at (xi, 0)? Cell-integral rule: each RIS kept with P_LoS(distance to the
/// user). Sector-boundary rule: kept with P_LoS of the cell-edge distance along
/// the user's bearing to it.
inline bool sample_reflection_available(double xi, const SystemParams& p, RandomStream& rng) {
  if (p.lambda_r == 0.0) return false;
  const double R = p.cell_radius;
  const double k = mc_detail::los_decay(p);
  const Point2D user{xi, 0.0};
  const auto n = sample_poisson_count(p.lambda_r, std::numbers::pi * R * R, rng);
  bool found = false;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Point2D ris = sample_uniform_disc(R, rng);
    const double u = rng.uniform();
    if (found) continue;  // keep the draw count fixed per point
    const double d = distance(ris, user);
    double len = d;
    if (p.ris_mass == RisMassRule::kSectorBoundary) {
      len = d > 0.0 ? distance_to_boundary(user, (1.0 / d) * (ris - user), R) : R - xi;
    }
    if (u < std::exp(-k * len)) found = true;
  }
  return found;
}

/// eta = min s r over a fresh RIS PPP thinned by P_LoS(r), with s from the disc
/// radial law and cos(theta) ~ U[-1, 1]; +inf when nothing survives.
inline double sample_eta(double xi, const SystemParams& p, RandomStream& rng) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (p.lambda_r == 0.0) return inf;
  const double R = p.cell_radius;
  const double k = mc_detail::los_decay(p);
  const auto n = sample_poisson_count(p.lambda_r, std::numbers::pi * R * R, rng);
  double best = inf;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double s = R * std::sqrt(rng.uniform());
    const double c = rng.uniform(-1.0, 1.0);
    const double u = rng.uniform();
    const double r = std::sqrt(std::max(0.0, s * s + xi * xi - 2.0 * s * xi * c));
    if (u < std::exp(-k * r)) best = std::min(best, s * r);
  }
  return best;
}

/// sample_eta conditioned on a finite result.
inline double sample_eta_finite(double xi, const SystemParams& p, RandomStream& rng) {
  detail::require(p.lambda_r > 0.0, "conditioned eta needs lambda_r > 0");
  for (int i = 0; i < 10000000; ++i) {
    const double e = sample_eta(xi, p, rng);
    if (std::isfinite(e)) return e;
  }
  throw NonConvergenceError("no LoS RIS in 1e7 eta draws");
}

namespace mc_detail {

// Independent substreams of one trial or scene, so that changing one
// density leaves the draws of everything else untouched.
struct TrialStreams {
  RandomStream user;
  RandomStream link;
  RandomStream reflect;
  RandomStream eta;
  RandomStream fading;

  TrialStreams(std::uint64_t seed, std::uint64_t index)
      : user(seed, StreamTag::kScene, index),
        link(seed, StreamTag::kLink, index),
        reflect(seed, StreamTag::kReflection, index),
        eta(seed, StreamTag::kEta, index),
        fading(seed, StreamTag::kFading, index) {}
};

// Degenerate association of the analytic model for a user at xi.
inline ServingLink model_associate(double xi, const SystemParams& p, TrialStreams& s) {
  if (s.link.uniform() < model_p_los(xi, p)) return {LinkKind::kDirect, xi};
  if (p.lambda_r > 0.0 && sample_reflection_available(xi, p, s.reflect)) {
    return {LinkKind::kReflected, sample_eta_finite(xi, p, s.eta)};
  }
  return {};
}

inline Scene sample_scene(const SystemParams& p, std::uint64_t seed, std::uint64_t index, bool with_users) {
  Scene sc;
  sc.cell_radius = p.cell_radius;
  RandomStream blk(seed, StreamTag::kScene, index);
  RandomStream ris(seed, StreamTag::kReflection, index);
  sc.blockages = BlockageSet(sample_blockages(p.lambda_b, p.cell_radius + 0.5 * p.block_len_max, p.block_len_min,
                                              p.block_len_max, blk));
  if (p.lambda_r > 0.0) sc.ris_points = sample_ppp_disc(p.lambda_r, p.cell_radius, ris);
  if (with_users) {
    // Inhomogeneous PPP by thinning a homogeneous one at the peak density.
    RandomStream usr(seed, StreamTag::kLink, index);
    const double lmax = p.lambda_u.max_value();
    if (lmax > 0.0) {
      const auto cand = sample_ppp_disc(lmax, p.cell_radius, usr);
      for (const auto& u : cand) {
        const double keep = usr.uniform();
        if (p.lambda_u.is_constant() || keep * lmax < p.lambda_u(u.norm())) sc.user_points.push_back(u);
      }
    }
  }
  return sc;
}

// Association with real geometry. RISs are scanned in increasing s r order,
// so the first LoS one is the best reflected link.
// LoS test of one link, against the scene or (diagnostic) a fresh blockage
// draw on a disc just covering the link.
class LinkTester {
 public:
  LinkTester(const Scene& sc, const SystemParams& p, const McConfig& mc, std::uint64_t index)
      : sc_(sc), p_(p), independent_(mc.independent_blocking), rng_(mc.seed, StreamTag::kGeneric, index) {}

  bool clear(Point2D a, Point2D b) {
    if (!independent_) return sc_.blockages.clear(a, b);
    const double region = 0.5 * distance(a, b) + 0.5 * p_.block_len_max;
    const BlockageSet local(
        sample_blockages(p_.lambda_b, region, p_.block_len_min, p_.block_len_max, rng_, 0.5 * (a + b)));
    return local.clear(a, b);
  }

 private:
  const Scene& sc_;
  const SystemParams& p_;
  bool independent_;
  RandomStream rng_;
};

inline ServingLink physical_associate(Point2D user, const Scene& sc, const McConfig& mc, const LinkBudget& lb,
                                      LinkTester& los, std::vector<std::pair<double, std::size_t>>& order) {
  const double dmin = mc.min_distance;
  const double xi = std::max(user.norm(), dmin);
  const bool direct_los = los.clear(sc.bs, user);
  if (direct_los && (mc.association == Association::kDirectFirst || sc.ris_points.empty())) {
    return {LinkKind::kDirect, xi};
  }
  // A reflected link beats the direct one iff its product is below this.
  double cutoff = std::numeric_limits<double>::infinity();
  if (direct_los) cutoff = std::pow(lb.reflect / lb.direct, 1.0 / lb.beta) * xi;
  order.clear();
  for (std::size_t i = 0; i < sc.ris_points.size(); ++i) {
    const auto& q = sc.ris_points[i];
    const double prod = std::max(q.norm(), dmin) * std::max(distance(q, user), dmin);
    if (prod < cutoff) order.emplace_back(prod, i);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [prod, i] : order) {
    if (los.clear(sc.ris_points[i], user)) return {LinkKind::kReflected, prod};
  }
  if (direct_los) return {LinkKind::kDirect, xi};
  return {};
}

struct SceneTotals {
  double covered = 0.0;
  double rate = 0.0;
  double users = 0.0;
};

template <class PerTrial>
std::vector<SceneTotals> run_trials(const McConfig& mc, PerTrial&& per_trial) {
  std::vector<SceneTotals> out(mc.n_scenes);
  parallel_for(mc.n_scenes, mc.parallel_shards, [&](std::size_t i) { out[i] = per_trial(std::uint64_t{i}); });
  return out;
}

inline McEstimate mean_of(const std::vector<SceneTotals>& t, double SceneTotals::*field) {
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = t[i].*field;
  return mean_estimate(v);
}

inline McEstimate ratio_of(const std::vector<SceneTotals>& t, double SceneTotals::*field) {
  std::vector<double> num(t.size());
  std::vector<double> den(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    num[i] = t[i].*field;
    den[i] = t[i].users;
  }
  return ratio_estimate(num, den);
}

// Per-user outcomes at a fixed distance xi (tagged user).
inline std::vector<SceneTotals> tagged_user_trials(double xi, const SystemParams& p, const McConfig& mc) {
  detail::require_domain(xi >= 0.0 && xi <= p.cell_radius, "user distance must lie in [0, cell_radius]");
  const LinkBudget lb(p.radio);
  if (mc.mode == McMode::kModelFaithful) {
    return run_trials(mc, [&](std::uint64_t i) {
      TrialStreams s(mc.seed, i);
      const auto link = model_associate(xi, p, s);
      const auto o = fade(link, lb, p.threshold, mc.n_fading_per_scene, s.fading);
      return SceneTotals{o.covered, o.rate, 1.0};
    });
  }
  return run_trials(mc, [&](std::uint64_t i) {
    Scene sc = sample_scene(p, mc.seed, i, false);
    RandomStream fad(mc.seed, StreamTag::kFading, i);
    std::vector<std::pair<double, std::size_t>> order;
    LinkTester los(sc, p, mc, i);
    const auto link = physical_associate({xi, 0.0}, sc, mc, lb, los, order);
    const auto o = fade(link, lb, p.threshold, mc.n_fading_per_scene, fad);
    return SceneTotals{o.covered, o.rate, 1.0};
  });
}

// Model-faithful: one user per trial drawn from the user density.
// Physical: every user of every scene.
inline std::vector<SceneTotals> population_trials(const SystemParams& p, const McConfig& mc) {
  const LinkBudget lb(p.radio);
  if (mc.mode == McMode::kModelFaithful) {
    return run_trials(mc, [&](std::uint64_t i) {
      TrialStreams s(mc.seed, i);
      const double xi = sample_user_distance(p, s.user);
      const auto link = model_associate(xi, p, s);
      const auto o = fade(link, lb, p.threshold, mc.n_fading_per_scene, s.fading);
      return SceneTotals{o.covered, o.rate, 1.0};
    });
  }
  return run_trials(mc, [&](std::uint64_t i) {
    Scene sc = sample_scene(p, mc.seed, i, true);
    RandomStream fad(mc.seed, StreamTag::kFading, i);
    std::vector<std::pair<double, std::size_t>> order;
    LinkTester los(sc, p, mc, i);
    SceneTotals t;
    for (const auto& u : sc.user_points) {
      const auto link = physical_associate(u, sc, mc, lb, los, order);
      const auto o = fade(link, lb, p.threshold, mc.n_fading_per_scene, fad);
      t.covered += o.covered;
      t.rate += o.rate;
      t.users += 1.0;
    }
    return t;
  });
}

}  // namespace mc_detail

// ---------------------------------------------------------------------------
// Coverage and rate estimators (either mode)

/// Coverage at threshold params.threshold for a user at distance xi.
inline McEstimate simulate_conditional_coverage(double xi, const SystemParams& p, const McConfig& mc) {
  p.validate();
  mc.validate();
  return mc_detail::mean_of(mc_detail::tagged_user_trials(xi, p, mc), &mc_detail::SceneTotals::covered);
}

/// Ergodic rate (bps) of a user at distance xi.
inline McEstimate simulate_user_rate(double xi, const SystemParams& p, const McConfig& mc) {
  p.validate();
  mc.validate();
  return mc_detail::mean_of(mc_detail::tagged_user_trials(xi, p, mc), &mc_detail::SceneTotals::rate);
}

/// User-averaged coverage probability.
inline McEstimate simulate_coverage(const SystemParams& p, const McConfig& mc) {
  p.validate();
  mc.validate();
  const auto t = mc_detail::population_trials(p, mc);
  if (mc.mode == McMode::kModelFaithful) return mc_detail::mean_of(t, &mc_detail::SceneTotals::covered);
  return mc_detail::ratio_of(t, &mc_detail::SceneTotals::covered);
}

/// Cell sum rate (bps). Model-faithful: expected user count times the mean
/// per-user rate. Physical: mean over scenes of the summed user rates.
inline McEstimate simulate_sum_rate(const SystemParams& p, const McConfig& mc) {
  p.validate();
  mc.validate();
  if (!(p.lambda_u.max_value() > 0.0)) return McEstimate::make(0.0, 0.0, mc.n_scenes);
  const auto t = mc_detail::population_trials(p, mc);
  if (mc.mode == McMode::kModelFaithful) {
    const auto users = numerics::integrate_1d(
        [&](double xi) { return p.lambda_u(xi) * 2.0 * std::numbers::pi * xi; }, 0.0, p.cell_radius,
        p.lambda_u.radii(), QuadratureSpec{1e-10, 1e-12});
    return mc_detail::mean_of(t, &mc_detail::SceneTotals::rate).scaled(users.value);
  }
  return mc_detail::mean_of(t, &mc_detail::SceneTotals::rate);
}

// ---------------------------------------------------------------------------
// Formula-level oracles

/// Fraction of fixed links of length d that no blockage segment touches, with
/// blockages drawn around the link on a disc large enough to hold every
/// segment that could reach it.
inline McEstimate oracle_p_los(double d, const SystemParams& p, const McConfig& mc) {
  p.validate();
  mc.validate();
  detail::require_domain(d >= 0.0, "link length must be non-negative");
  std::vector<double> hit(mc.n_scenes);
  const Point2D a{-0.5 * d, 0.0};
  const Point2D b{0.5 * d, 0.0};
  const double region = 0.5 * d + 0.5 * p.block_len_max;
  parallel_for(mc.n_scenes, mc.parallel_shards, [&](std::size_t i) {
    RandomStream rng(mc.seed, StreamTag::kScene, i);
    const BlockageSet bs(sample_blockages(p.lambda_b, region, p.block_len_min, p.block_len_max, rng));
    hit[i] = bs.clear(a, b) ? 1.0 : 0.0;
  });
  return mean_estimate(hit);
}

/// Fraction of trials in which at least one RIS survives LoS thinning.
inline McEstimate oracle_reflection_prob(double xi, const SystemParams& p, const McConfig& mc) {
  p.validate();
  mc.validate();
  detail::require_domain(xi >= 0.0 && xi <= p.cell_radius, "user distance must lie in [0, cell_radius]");
  std::vector<double> hit(mc.n_scenes);
  parallel_for(mc.n_scenes, mc.parallel_shards, [&](std::size_t i) {
    RandomStream rng(mc.seed, StreamTag::kReflection, i);
    hit[i] = sample_reflection_available(xi, p, rng) ? 1.0 : 0.0;
  });
  return mean_estimate(hit);
}

/// eta draws, +inf where no RIS survives.
inline std::vector<double> oracle_eta_samples(double xi, const SystemParams& p, const McConfig& mc) {
  p.validate();
  mc.validate();
  std::vector<double> eta(mc.n_scenes);
  parallel_for(mc.n_scenes, mc.parallel_shards, [&](std::size_t i) {
    RandomStream rng(mc.seed, StreamTag::kEta, i);
    eta[i] = sample_eta(xi, p, rng);
  });
  return eta;
}

struct EtaCdfComparison {
  std::vector<double> x;
  std::vector<double> empirical;
  std::vector<double> std_error;
  std::vector<double> analytic;
  double ks_distance = 0.0;  // sup |empirical - analytic| over a dense grid
  McEstimate finite_fraction;  // P(eta < inf)
  double analytic_finite = 0.0;
};

/// Empirical CDF of eta on x_grid next to the analytic CDF.
inline EtaCdfComparison oracle_eta_cdf(double xi, std::span<const double> x_grid, const CoverageModel& model,
                                       const McConfig& mc) {
  const auto& p = model.params();
  auto eta = oracle_eta_samples(xi, p, mc);
  std::sort(eta.begin(), eta.end());
  const double n = static_cast<double>(eta.size());
  auto ecdf = [&](double x) {
    // P(eta <= x)
    return static_cast<double>(std::upper_bound(eta.begin(), eta.end(), x) - eta.begin()) / n;
  };
  EtaCdfComparison out;
  for (double x : x_grid) {
    const double e = ecdf(x);
    out.x.push_back(x);
    out.empirical.push_back(e);
    out.std_error.push_back(std::sqrt(e * (1.0 - e) / n));
    out.analytic.push_back(model.eta_cdf(x, xi).value);
  }
  const double x_max = model.max_eta(xi);
  constexpr int kDense = 512;
  for (int j = 0; j <= kDense; ++j) {
    const double x = x_max * j / kDense;
    out.ks_distance = std::max(out.ks_distance, std::abs(ecdf(x) - model.eta_cdf(x, xi).value));
  }
  for (std::size_t j = 0; j < out.x.size(); ++j) {
    out.ks_distance = std::max(out.ks_distance, std::abs(out.empirical[j] - out.analytic[j]));
  }
  std::vector<double> finite(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) finite[i] = std::isfinite(eta[i]) ? 1.0 : 0.0;
  out.finite_fraction = mean_estimate(finite);
  out.analytic_finite = model.eta_cdf(x_max, xi).value;
  return out;
}

/// P(direct SNR > T) with h_d ~ Exp(N_BS N_u) at distance xi.
inline McEstimate oracle_cond_coverage_direct(double xi, double threshold, const SystemParams& p,
                                              const McConfig& mc) {
  p.validate();
  mc.validate();
  detail::require_domain(xi > 0.0, "direct coverage oracle needs a positive distance");
  const mc_detail::LinkBudget lb(p.radio);
  std::vector<double> hit(mc.n_scenes);
  parallel_for(mc.n_scenes, mc.parallel_shards, [&](std::size_t i) {
    RandomStream rng(mc.seed, StreamTag::kFading, i);
    hit[i] = lb.direct * rng.exponential(1.0) / std::pow(xi, lb.beta) > threshold ? 1.0 : 0.0;
  });
  return mean_estimate(hit);
}

/// P(reflected SNR > T | some RIS is LoS): eta from the conditioned sampler,
/// h_s and h_r drawn.
inline McEstimate oracle_cond_coverage_reflected(double xi, double threshold, const SystemParams& p,
                                                 const McConfig& mc) {
  p.validate();
  mc.validate();
  if (p.lambda_r == 0.0) return McEstimate::make(0.0, 0.0, mc.n_scenes);
  const mc_detail::LinkBudget lb(p.radio);
  std::vector<double> hit(mc.n_scenes);
  parallel_for(mc.n_scenes, mc.parallel_shards, [&](std::size_t i) {
    RandomStream eta_rng(mc.seed, StreamTag::kEta, i);
    RandomStream fad(mc.seed, StreamTag::kFading, i);
    const double eta = sample_eta_finite(xi, p, eta_rng);
    const double z = fad.exponential(1.0) * fad.exponential(1.0);
    hit[i] = lb.reflect * z / std::pow(eta, lb.beta) > threshold ? 1.0 : 0.0;
  });
  return mean_estimate(hit);
}

/// E[F_eta(tau_2)] by drawing h_s, h_r and evaluating the analytic eta CDF.
inline McEstimate oracle_reflected_coverage_joint(double xi, double threshold, const CoverageModel& model,
                                                  const McConfig& mc) {
  mc.validate();
  const auto& rd = model.params().radio;
  const double k = std::pow(10.0, 2.0 * rd.alpha) * rd.p0 / (rd.noise_power * threshold);
  std::vector<double> f(mc.n_scenes);
  parallel_for(mc.n_scenes, mc.parallel_shards, [&](std::size_t i) {
    RandomStream fad(mc.seed, StreamTag::kFading, i);
    const double hs = fad.exponential(rd.bs_ris_fading_mean());
    const double hr = fad.exponential(rd.ris_user_fading_mean());
    f[i] = model.eta_cdf(std::pow(k * hs * hr, 1.0 / rd.beta), xi).value;
  });
  return mean_estimate(f);
}

}  // namespace rismm
