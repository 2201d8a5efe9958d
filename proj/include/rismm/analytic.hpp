#pragma once

// Closed-form coverage and rate model of a single RIS-assisted mmWave cell.
//
// A user at distance xi from the BS is served directly when its direct link
// is LoS (probability P_LoS(xi)); otherwise through the RIS with the smallest
// cascaded distance product eta = min s_l r_l among RISs with a LoS RIS-user
// link, when one exists. Blockage enters only through
// P_LoS(d) = exp(-2 lambda_b E[L] d / pi); RISs are thinned by P_LoS of their
// distance to the user. Coverage and rate follow from exponential fading on
// every hop and are averaged over users with Campbell's theorem.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "rismm/errors.hpp"
#include "rismm/numerics.hpp"
#include "rismm/params.hpp"
#include "rismm/special.hpp"

namespace rismm {

using numerics::QuadratureResult;
using numerics::QuadratureSpec;

/// exp(-2 lambda_b E[L] d / pi).
inline double p_los(double d, double lambda_b, double mean_block_len) {
  detail::require_domain(d >= 0.0, "LoS probability needs a non-negative distance");
  return std::exp(-2.0 * lambda_b * mean_block_len * d / std::numbers::pi);
}

/// Density of RISs with a LoS link to a user at distance r from them.
inline double thinned_ris_density(double r, const SystemParams& params) {
  return params.lambda_r * p_los(r, params.lambda_b, params.mean_block_len());
}

struct AnalyticOptions {
  QuadratureSpec outer{1e-5, 1e-9};   // integrals over the user distance xi
  QuadratureSpec inner{1e-6, 1e-10};  // everything nested below
  // Multiplies the LoS decay rate seen by the analytic model only. 1 is the
  // model; other values exist to check that validation catches a broken formula.
  double los_decay_scale = 1.0;
};

struct ConditionalCoverage {
  double xi = 0.0;
  double p_direct_assoc = 0.0;
  double p_reflect_assoc = 0.0;
  double p_cov_direct = 0.0;
  double p_cov_reflect = 0.0;
  double p_cov_total = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

struct RateResult {
  double bps = 0.0;
  double error_bps = 0.0;
  double bandwidth_hz = 1.0;
  bool converged = true;

  [[nodiscard]] double bps_per_hz() const { return bps / bandwidth_hz; }
};

class CoverageModel {
 public:
  explicit CoverageModel(SystemParams params, AnalyticOptions options = {})
      : p_(std::move(params)), opt_(options) {
    p_.validate();
    opt_.outer.validate();
    opt_.inner.validate();
    decay_ = opt_.los_decay_scale * 2.0 * p_.lambda_b * p_.mean_block_len() / std::numbers::pi;
    const auto& rd = p_.radio;
    snr_direct_scale_ = std::pow(10.0, rd.alpha) * rd.p0 * rd.direct_fading_mean() / rd.noise_power;
    snr_reflect_scale_ =
        std::pow(10.0, 2.0 * rd.alpha) * rd.p0 * rd.bs_ris_fading_mean() * rd.ris_user_fading_mean() / rd.noise_power;
  }

  [[nodiscard]] const SystemParams& params() const { return p_; }
  [[nodiscard]] const AnalyticOptions& options() const { return opt_; }

  /// LoS decay rate 2 lambda_b E[L] / pi (per metre).
  [[nodiscard]] double los_decay() const { return decay_; }
  [[nodiscard]] double p_los(double d) const {
    detail::require_domain(d >= 0.0, "LoS probability needs a non-negative distance");
    return std::exp(-decay_ * d);
  }
  [[nodiscard]] double thinned_ris_density(double r) const { return p_.lambda_r * p_los(r); }

  /// Mean direct-link SNR at distance xi (fading at its mean N_BS N_u).
  [[nodiscard]] double mean_direct_snr(double xi) const { return snr_direct_scale_ / std::pow(xi, p_.radio.beta); }
  /// gamma_I = reflect_snr_scale * U V / eta^beta with U, V ~ Exp(1).
  [[nodiscard]] double reflect_snr_scale() const { return snr_reflect_scale_; }

  /// Distance from a user at xi to the cell edge along bearing psi, where
  /// psi = 0 points straight away from the BS.
  [[nodiscard]] double boundary_distance(double xi, double psi) const {
    const double R = p_.cell_radius;
    const double sn = std::sin(psi);
    return std::sqrt(std::max(0.0, R * R - xi * xi * sn * sn)) - xi * std::cos(psi);
  }

  /// Expected number of RISs with a LoS RIS-user link for a user at xi.
  [[nodiscard]] QuadratureResult mean_los_ris_count(double xi) const { return mean_los_ris_count(xi, opt_.inner); }

  [[nodiscard]] QuadratureResult mean_los_ris_count(double xi, const QuadratureSpec& spec) const {
    check_xi(xi);
    if (p_.lambda_r == 0.0) return {};
    const double R = p_.cell_radius;
    const double lam = p_.lambda_r;
    auto sector = [&](double r) {
      if (p_.ris_mass == RisMassRule::kCellIntegral) return lam * special::exp_radial_moment(r, decay_);
      return lam * std::exp(-decay_ * r) * 0.5 * r * r;
    };
    if (xi == 0.0) return {2.0 * std::numbers::pi * sector(R), 0.0, 1, true};
    // r(psi) is symmetric about psi = pi.
    auto f = [&](double psi) { return 2.0 * sector(boundary_distance(xi, psi)); };
    return numerics::integrate_1d(f, 0.0, std::numbers::pi, spec);
  }

  /// Probability that at least one RIS offers a LoS reflected link.
  [[nodiscard]] QuadratureResult reflection_prob(double xi) const { return reflection_prob(xi, opt_.inner); }

  [[nodiscard]] QuadratureResult reflection_prob(double xi, const QuadratureSpec& spec) const {
    const auto mass = mean_los_ris_count(xi, spec);
    const double v = -std::expm1(-mass.value);
    return {v, std::exp(-mass.value) * mass.error_estimate, mass.evals, mass.converged};
  }

  /// Largest possible cascaded product s r inside the cell.
  [[nodiscard]] double max_eta(double xi) const { return p_.cell_radius * (p_.cell_radius + xi); }

  /// Mean number of LoS RISs with s r < x, under the uniform-cos(theta)
  /// placement of RIS bearings about the BS.
  [[nodiscard]] QuadratureResult eta_mass(double x, double xi) const { return eta_mass(x, xi, opt_.inner); }

  [[nodiscard]] QuadratureResult eta_mass(double x, double xi, const QuadratureSpec& spec) const {
    check_xi(xi);
    detail::require_domain(x >= 0.0, "eta CDF argument must be non-negative");
    if (p_.lambda_r == 0.0 || x == 0.0) return {};
    const double R = p_.cell_radius;
    const double pre = std::numbers::pi * p_.lambda_r;
    if (xi < 1e-9 * R) {
      // r = s for every bearing; the admissible set is s^2 < x.
      return {pre * 2.0 * special::exp_radial_moment(std::min(R, std::sqrt(x)), decay_), 0.0, 1, true};
    }
    auto f = [&](double s) {
      const double lo = std::abs(s - xi);
      const double hi = std::min(s + xi, x / s);
      if (!(hi > lo)) return 0.0;
      return radial_moment_between(lo, hi) / xi;
    };
    std::vector<double> bp{xi};
    const double d1 = std::sqrt(xi * xi + 4.0 * x);
    bp.push_back(0.5 * (d1 - xi));
    bp.push_back(0.5 * (d1 + xi));
    if (4.0 * x < xi * xi) {
      const double d2 = std::sqrt(xi * xi - 4.0 * x);
      bp.push_back(0.5 * (xi - d2));
      bp.push_back(0.5 * (xi + d2));
    }
    return numerics::integrate_1d(f, 0.0, R, bp, spec).scaled(pre);
  }

  /// CDF of eta = min_l s_l r_l over LoS RISs; eta = +inf (mass 1 - F(inf))
  /// when no RIS is LoS to the user.
  [[nodiscard]] QuadratureResult eta_cdf(double x, double xi) const { return eta_cdf(x, xi, opt_.inner); }

  [[nodiscard]] QuadratureResult eta_cdf(double x, double xi, const QuadratureSpec& spec) const {
    const auto m = eta_mass(std::min(x, max_eta(xi)), xi, spec);
    return {-std::expm1(-m.value), std::exp(-m.value) * m.error_estimate, m.evals, m.converged};
  }

  /// exp(-tau_1 / (N_BS N_u)) with tau_1 = xi^beta sigma^2 T / (P_0 10^alpha).
  [[nodiscard]] double cond_coverage_direct(double xi, double threshold) const {
    detail::require_domain(xi >= 0.0, "user distance must be non-negative");
    if (xi == 0.0) return 1.0;
    return std::exp(-threshold / mean_direct_snr(xi));
  }

  /// P(gamma_I > T and some RIS is LoS) = E_{h_s,h_r}[F_eta(tau_2)].
  ///
  /// Evaluated as E_eta[P(U V > T eta^beta / K)] and integrated by parts
  /// against the density of U V, so only one quadrature level sits above the
  /// eta CDF.
  [[nodiscard]] QuadratureResult reflected_coverage_joint(double xi, double threshold) const {
    return reflected_coverage_joint(xi, threshold, opt_.inner);
  }

  [[nodiscard]] QuadratureResult reflected_coverage_joint(double xi, double threshold,
                                                          const QuadratureSpec& spec) const {
    check_xi(xi);
    detail::require(threshold > 0.0, "threshold must be positive");
    if (p_.lambda_r == 0.0) return {};
    const double beta = p_.radio.beta;
    const double c = threshold / snr_reflect_scale_;  // z = c x^beta
    const double x_max = max_eta(xi);
    const double z_max = c * std::pow(x_max, beta);
    const auto inner_spec = spec.tightened();
    const auto total = eta_cdf(x_max, xi, inner_spec);

    QuadratureResult out{total.value * special::exp_product_sf(z_max),
                         total.error_estimate, total.evals, total.converged};
    const double z_hi = std::min(z_max, 1000.0);
    auto f = [&](double z) -> QuadratureResult {
      const double x = std::pow(z / c, 1.0 / beta);
      const auto F = eta_cdf(x, xi, inner_spec);
      const double g = special::exp_product_pdf(z);
      return {F.value * g, F.error_estimate * g, F.evals, F.converged};
    };
    std::vector<double> bp;
    for (double x : eta_kinks(xi)) bp.push_back(c * std::pow(x, beta));
    bp.push_back(1.0);
    out += numerics::integrate_1d(f, 0.0, z_hi, bp, spec);
    out.value = std::clamp(out.value, 0.0, 1.0);
    return out;
  }

  /// Coverage of the reflected link given that the user is served through a
  /// RIS: the joint probability divided by P(eta < inf).
  [[nodiscard]] QuadratureResult cond_coverage_reflected(double xi, double threshold) const {
    return cond_coverage_reflected(xi, threshold, opt_.inner);
  }

  [[nodiscard]] QuadratureResult cond_coverage_reflected(double xi, double threshold,
                                                         const QuadratureSpec& spec) const {
    check_xi(xi);
    if (p_.lambda_r == 0.0) return {};
    const auto total = eta_cdf(max_eta(xi), xi, spec.tightened());
    if (total.value <= 0.0) return {};
    const auto joint = reflected_coverage_joint(xi, threshold, spec);
    const double v = std::clamp(joint.value / total.value, 0.0, 1.0);
    const double err = (joint.error_estimate + v * total.error_estimate) / total.value;
    return {v, err, joint.evals + total.evals, joint.converged && total.converged};
  }

  /// Association split and coverage of a user at distance xi.
  [[nodiscard]] ConditionalCoverage cond_coverage(double xi, double threshold) const {
    return cond_coverage(xi, threshold, opt_.inner);
  }

  [[nodiscard]] ConditionalCoverage cond_coverage(double xi, double threshold, const QuadratureSpec& spec) const {
    check_xi(xi);
    ConditionalCoverage c;
    c.xi = xi;
    const double plos = p_los(xi);
    c.p_direct_assoc = plos;
    c.p_cov_direct = cond_coverage_direct(xi, threshold);
    if (p_.lambda_r > 0.0 && plos < 1.0) {
      const auto pr = reflection_prob(xi, spec);
      c.p_reflect_assoc = (1.0 - plos) * pr.value;
      const auto cr = cond_coverage_reflected(xi, threshold, spec);
      c.p_cov_reflect = cr.value;
      c.error_estimate = (1.0 - plos) * pr.error_estimate * cr.value + c.p_reflect_assoc * cr.error_estimate;
      c.converged = pr.converged && cr.converged;
    }
    c.p_cov_total = c.p_direct_assoc * c.p_cov_direct + c.p_reflect_assoc * c.p_cov_reflect;
    return c;
  }

  /// Expected number of users in the cell, \int_0^R lambda_u(xi) 2 pi xi dxi.
  [[nodiscard]] QuadratureResult user_count() const {
    auto f = [&](double xi) { return p_.lambda_u(xi) * 2.0 * std::numbers::pi * xi; };
    return numerics::integrate_1d(f, 0.0, p_.cell_radius, p_.lambda_u.radii(), opt_.outer.tightened());
  }

  /// User-averaged coverage probability at threshold T.
  [[nodiscard]] QuadratureResult ergodic_coverage(double threshold) const {
    return user_average([&](double xi) {
      const auto c = cond_coverage(xi, threshold);
      return QuadratureResult{c.p_cov_total, c.error_estimate, 0, c.converged};
    });
  }

  [[nodiscard]] QuadratureResult ergodic_coverage() const { return ergodic_coverage(p_.threshold); }

  /// User-averaged probability of having any serving link, P_Ad + P_AI.
  [[nodiscard]] QuadratureResult ergodic_association() const {
    return user_average([&](double xi) {
      const double plos = p_los(xi);
      if (p_.lambda_r == 0.0) return QuadratureResult{plos, 0.0, 0, true};
      const auto pr = reflection_prob(xi);
      return QuadratureResult{plos + (1.0 - plos) * pr.value, pr.error_estimate, pr.evals, pr.converged};
    });
  }

  /// Ergodic rate W E[log2(1 + gamma)] of a user at xi, with users that have
  /// no serving link contributing zero.
  [[nodiscard]] RateResult user_rate(double xi) const { return user_rate(xi, opt_.inner); }

  [[nodiscard]] RateResult user_rate(double xi, const QuadratureSpec& spec) const {
    check_xi(xi);
    detail::require_domain(xi > 0.0, "user rate needs a positive distance");
    const double w = p_.radio.bandwidth_hz;
    const double plos = p_los(xi);
    // \int_0^inf e^{-g/a} / (1 + g) dg = e^{1/a} E_1(1/a)
    const double direct = plos * special::scaled_e1(1.0 / mean_direct_snr(xi));
    RateResult out{direct, 0.0, w, true};
    if (p_.lambda_r > 0.0 && plos < 1.0) {
      const auto pr = reflection_prob(xi, spec);
      const auto total = eta_cdf(max_eta(xi), xi, spec.tightened());
      if (total.value > 0.0) {
        const auto j = reflected_log_moment(xi, spec);
        const double weight = (1.0 - plos) * pr.value / total.value;
        out.bps += weight * j.value;
        out.error_bps += weight * j.error_estimate + (1.0 - plos) * pr.error_estimate * j.value / total.value;
        out.converged = pr.converged && total.converged && j.converged;
      }
    }
    out.bps *= w / std::numbers::ln2;
    out.error_bps *= w / std::numbers::ln2;
    return out;
  }

  /// Cell sum rate \int_0^R R(xi) lambda_u(xi) 2 pi xi dxi.
  [[nodiscard]] RateResult sum_rate() const {
    auto f = [&](double xi) -> QuadratureResult {
      const auto r = user_rate(xi);
      const double wgt = p_.lambda_u(xi) * 2.0 * std::numbers::pi * xi;
      return {r.bps * wgt, r.error_bps * wgt, 0, r.converged};
    };
    const auto q = numerics::integrate_1d(f, 0.0, p_.cell_radius, p_.lambda_u.radii(), opt_.outer);
    return {q.value, q.error_estimate, p_.radio.bandwidth_hz, q.converged};
  }

  // ---------------------------------------------------------------------
  // Reference evaluations that follow the textbook order of integration.
  // Slower; kept as independent cross-checks of the reductions above.

  /// E[F_eta(tau_2)] as an iterated integral over h_s ~ Exp(N_BS N_R) and
  /// h_r ~ Exp(N_R N_u).
  [[nodiscard]] QuadratureResult reflected_coverage_joint_nested(double xi, double threshold,
                                                                 const QuadratureSpec& spec) const {
    check_xi(xi);
    if (p_.lambda_r == 0.0) return {};
    const auto& rd = p_.radio;
    const double k = std::pow(10.0, 2.0 * rd.alpha) * rd.p0 / (rd.noise_power * threshold);
    const auto f_spec = spec.tightened(100.0);
    auto inner = [&](double hs, const QuadratureSpec& s) {
      auto g = [&](double hr) {
        const double tau2 = std::pow(k * hs * hr, 1.0 / rd.beta);
        return eta_cdf(tau2, xi, f_spec);
      };
      return numerics::integrate_semiinf_expweight(g, 1.0 / rd.ris_user_fading_mean(), s);
    };
    auto outer = [&](double hs) { return inner(hs, spec.tightened()); };
    return numerics::integrate_semiinf_expweight(outer, 1.0 / rd.bs_ris_fading_mean(), spec);
  }

  /// R(xi) = W \int_0^inf P_cov|xi(2^{t/W} - 1) dt, evaluated after the
  /// substitution gamma = 2^{t/W} - 1 as (W / ln 2) \int P_cov|xi(gamma) / (1 + gamma) dgamma.
  [[nodiscard]] RateResult user_rate_threshold_integral(double xi, const QuadratureSpec& spec) const {
    check_xi(xi);
    const double w = p_.radio.bandwidth_hz;
    const double scale = std::max(mean_direct_snr(xi), p_.lambda_r > 0.0 ? snr_reflect_scale_ : 0.0);
    const auto cov_spec = spec.tightened();
    // gamma = e^u; the integrand behaves like e^u below the SNR scale.
    auto f = [&](double u) -> QuadratureResult {
      const double g = std::exp(u);
      const auto c = cond_coverage(xi, g, cov_spec);
      const double wgt = g / (1.0 + g);
      return {c.p_cov_total * wgt, c.error_estimate * wgt, 0, c.converged};
    };
    const double u_hi = std::log(scale) + 60.0;
    const std::array<double, 1> bp{std::log(mean_direct_snr(xi))};
    const auto q = numerics::integrate_1d(f, -40.0, u_hi, bp, spec);
    return {q.value * w / std::numbers::ln2, q.error_estimate * w / std::numbers::ln2, w, q.converged};
  }

 private:
  void check_xi(double xi) const {
    detail::require_domain(xi >= 0.0 && xi <= p_.cell_radius * (1.0 + 1e-12),
                           "user distance must lie in [0, cell_radius]");
  }

  // \int_a^b r e^{-k r} dr without cancellation when b - a is small.
  [[nodiscard]] double radial_moment_between(double a, double b) const {
    if (b - a > 1e-3 * b) {
      return special::exp_radial_moment(b, decay_) - special::exp_radial_moment(a, decay_);
    }
    // 5-point Gauss-Legendre on a short interval.
    static constexpr std::array<double, 5> x = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                                -0.9061798459386640};
    static constexpr std::array<double, 5> wt = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                 0.2369268850561891, 0.2369268850561891};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      const double r = c + h * x[i];
      sum += wt[i] * r * std::exp(-decay_ * r);
    }
    return sum * h;
  }

  // Values of x where the eta CDF is not smooth.
  [[nodiscard]] std::vector<double> eta_kinks(double xi) const {
    const double R = p_.cell_radius;
    return {0.25 * xi * xi, R * std::max(0.0, R - xi)};
  }

  // \int_0^inf P(gamma_I > g, eta < inf) / (1 + g) dg, rewritten as
  // \int_0^{x_max} F(x) m(x^beta / K) beta / x dx + F(inf) E[ln(1 + Z K / x_max^beta)]
  // with m(t) = E[Z / (Z + t)] and Z = U V.
  [[nodiscard]] QuadratureResult reflected_log_moment(double xi, const QuadratureSpec& spec) const {
    const double beta = p_.radio.beta;
    const double K = snr_reflect_scale_;
    const double x_max = max_eta(xi);
    const auto inner_spec = spec.tightened();
    const auto total = eta_cdf(x_max, xi, inner_spec);
    const double t_max = std::pow(x_max, beta) / K;
    const auto tail = log_moment_product(1.0 / t_max, inner_spec);
    QuadratureResult out{total.value * tail.value, total.error_estimate * tail.value + tail.error_estimate,
                         total.evals + tail.evals, total.converged && tail.converged};
    auto f = [&](double x) -> QuadratureResult {
      const auto F = eta_cdf(x, xi, inner_spec);
      const auto m = ratio_moment_product(std::pow(x, beta) / K, inner_spec);
      const double wgt = beta / x;
      return {F.value * m.value * wgt, (F.error_estimate * m.value + F.value * m.error_estimate) * wgt, 0,
              F.converged && m.converged};
    };
    auto bp = eta_kinks(xi);
    bp.push_back(std::pow(K, 1.0 / beta));
    out += numerics::integrate_1d(f, 0.0, x_max, bp, spec);
    return out;
  }

  // E[Z / (Z + t)] = 1 - E_U[y e^y E_1(y)], y = t / U.
  [[nodiscard]] static QuadratureResult ratio_moment_product(double t, const QuadratureSpec& spec) {
    auto g = [t](double u) {
      if (u <= 0.0) return 0.0;
      const double y = t / u;
      if (y < 1.0) return 1.0 - y * special::scaled_e1(y);
      const double h = special::scaled_e1(y);
      return (1.0 / h - y) * h;
    };
    const std::array<double, 1> bp{t};
    return numerics::integrate_semiinf_expweight(g, 1.0, spec, bp);
  }

  // E[ln(1 + a Z)] = E_V[e^{1/(aV)} E_1(1/(aV))].
  [[nodiscard]] static QuadratureResult log_moment_product(double a, const QuadratureSpec& spec) {
    auto g = [a](double v) { return v > 0.0 ? special::scaled_e1(1.0 / (a * v)) : 0.0; };
    return numerics::integrate_semiinf_expweight(g, 1.0, spec);
  }

  template <class F>
  [[nodiscard]] QuadratureResult user_average(F&& cond) const {
    const auto users = user_count();
    detail::require(users.value > 0.0, "user density integrates to zero");
    auto f = [&](double xi) -> QuadratureResult {
      const auto c = cond(xi);
      const double wgt = p_.lambda_u(xi) * 2.0 * std::numbers::pi * xi;
      return {c.value * wgt, c.error_estimate * wgt, c.evals, c.converged};
    };
    auto q = numerics::integrate_1d(f, 0.0, p_.cell_radius, p_.lambda_u.radii(), opt_.outer);
    q.value /= users.value;
    q.error_estimate = q.error_estimate / users.value + std::abs(q.value) * users.error_estimate / users.value;
    q.converged = q.converged && users.converged;
    return q;
  }

  SystemParams p_;
  AnalyticOptions opt_;
  double decay_ = 0.0;
  double snr_direct_scale_ = 0.0;
  double snr_reflect_scale_ = 0.0;
};

}  // namespace rismm
