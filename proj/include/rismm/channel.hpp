#pragma once

// Link budget: power-law path gain, exponential small-scale fading,
// segmented-lobe antenna gains and the SNR of direct and RIS-reflected links.

#include <cmath>
#include <numbers>

#include "rismm/errors.hpp"
#include "rismm/random.hpp"

namespace rismm {

/// Thermal noise power (W) at 290 K over `bandwidth_hz`, plus a noise figure.
inline double thermal_noise_power(double bandwidth_hz, double noise_figure_db) {
  constexpr double kBoltzmann = 1.380649e-23;
  return kBoltzmann * 290.0 * bandwidth_hz * std::pow(10.0, noise_figure_db / 10.0);
}

struct RadioParams {
  double alpha = 3.8;  // path gain 10^alpha at 1 m
  double beta = 2.2;   // path-loss exponent
  double p0 = 1.0;     // W
  double noise_power = thermal_noise_power(200e6, 9.0);  // W
  int n_bs = 64;
  int n_u = 4;
  int n_r = 64;
  double bandwidth_hz = 200e6;

  void validate() const {
    detail::require(std::isfinite(alpha), "alpha must be finite");
    detail::require(beta > 0.0, "beta must be positive");
    detail::require(p0 > 0.0, "p0 must be positive");
    detail::require(noise_power > 0.0, "noise_power must be positive");
    detail::require(n_bs >= 1 && n_u >= 1 && n_r >= 1, "antenna counts must be >= 1");
    detail::require(bandwidth_hz > 0.0, "bandwidth must be positive");
  }

  // Mean small-scale gains of the three hops.
  [[nodiscard]] double direct_fading_mean() const { return double(n_bs) * n_u; }
  [[nodiscard]] double bs_ris_fading_mean() const { return double(n_bs) * n_r; }
  [[nodiscard]] double ris_user_fading_mean() const { return double(n_r) * n_u; }
};

struct LobePattern {
  double main_gain = 1.0;
  double side_gain = 1.0;
  double beamwidth = 2.0 * std::numbers::pi;  // rad

  void validate() const {
    detail::require(side_gain > 0.0 && main_gain >= side_gain, "lobe gains need main >= side > 0");
    detail::require(beamwidth > 0.0 && beamwidth <= 2.0 * std::numbers::pi, "beamwidth must lie in (0, 2pi]");
  }
};

/// 10^alpha / d^beta.
inline double pathloss_gain(double d, double alpha, double beta) {
  detail::require_domain(d > 0.0, "path gain needs a positive distance");
  return std::pow(10.0, alpha) / std::pow(d, beta);
}

/// Cascaded BS-RIS-user gain 10^{2 alpha} / (s r)^beta.
inline double reflected_pathloss_gain(double s, double r, double alpha, double beta) {
  detail::require_domain(s > 0.0 && r > 0.0, "reflected path gain needs positive distances");
  return std::pow(10.0, 2.0 * alpha) / std::pow(s * r, beta);
}

/// Default main-lobe width for an n-element array: 102 degrees / sqrt(n).
inline double default_beamwidth(int n_antennas) {
  return (102.0 * std::numbers::pi / 180.0) / std::sqrt(static_cast<double>(n_antennas));
}

/// Segmented-lobe pattern of an n-element array: M = n, m = 1 / sin^2(3 pi / (2 sqrt n)).
/// The side-lobe formula exceeds the main lobe for n = 2, 3, which are rejected.
inline LobePattern lobe_pattern(int n_antennas) {
  detail::require(n_antennas >= 1, "antenna count must be >= 1");
  const double s = std::sin(3.0 * std::numbers::pi / (2.0 * std::sqrt(static_cast<double>(n_antennas))));
  LobePattern p{static_cast<double>(n_antennas), 1.0 / (s * s), default_beamwidth(n_antennas)};
  detail::require(p.main_gain >= p.side_gain, "segmented-lobe model needs n = 1 or n >= 4");
  return p;
}

/// Directional gain of a link whose angles of departure and arrival are
/// uniform: main lobe at each end with probability beamwidth / 2pi.
inline double sample_directional_gain(const LobePattern& tx, const LobePattern& rx, RandomStream& rng) {
  const double pt = tx.beamwidth / (2.0 * std::numbers::pi);
  const double pr = rx.beamwidth / (2.0 * std::numbers::pi);
  const double gt = rng.bernoulli(pt) ? tx.main_gain : tx.side_gain;
  const double gr = rng.bernoulli(pr) ? rx.main_gain : rx.side_gain;
  return gt * gr;
}

/// Beam-aligned link.
inline double aligned_directional_gain(const LobePattern& tx, const LobePattern& rx) {
  return tx.main_gain * rx.main_gain;
}

inline double sample_fading(double mean, RandomStream& rng) {
  detail::require(mean > 0.0, "fading mean must be positive");
  return rng.exponential(mean);
}

inline double snr_direct(double xi, double h_d, const RadioParams& radio) {
  detail::require_domain(xi > 0.0, "direct SNR needs a positive distance");
  return pathloss_gain(xi, radio.alpha, radio.beta) * radio.p0 * h_d / radio.noise_power;
}

inline double snr_reflected(double s, double r, double h_s, double h_r, const RadioParams& radio) {
  return reflected_pathloss_gain(s, r, radio.alpha, radio.beta) * radio.p0 * h_s * h_r / radio.noise_power;
}

}  // namespace rismm
