#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rismm/channel.hpp"
#include "rismm/errors.hpp"

namespace rismm {

/// User density lambda_u(xi) per m^2: a constant, or a table in xi with
/// linear interpolation (held constant beyond the end points).
class UserDensity {
 public:
  UserDensity() = default;
  explicit UserDensity(double constant) : values_{constant} {}
  UserDensity(std::vector<double> radii, std::vector<double> values)
      : radii_(std::move(radii)), values_(std::move(values)) {
    detail::require(!values_.empty() && radii_.size() == values_.size(),
                    "user density table needs matching non-empty radii and values");
    detail::require(std::is_sorted(radii_.begin(), radii_.end()) &&
                        std::adjacent_find(radii_.begin(), radii_.end()) == radii_.end(),
                    "user density radii must be strictly increasing");
  }

  [[nodiscard]] bool is_constant() const { return radii_.empty(); }
  [[nodiscard]] const std::vector<double>& radii() const { return radii_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

  [[nodiscard]] double operator()(double xi) const {
    if (radii_.empty()) return values_.front();
    if (xi <= radii_.front()) return values_.front();
    if (xi >= radii_.back()) return values_.back();
    const auto it = std::upper_bound(radii_.begin(), radii_.end(), xi);
    const auto i = static_cast<std::size_t>(it - radii_.begin());
    const double t = (xi - radii_[i - 1]) / (radii_[i] - radii_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
  }

  [[nodiscard]] double max_value() const { return *std::max_element(values_.begin(), values_.end()); }

  /// Returns a copy with every density multiplied by k.
  [[nodiscard]] UserDensity scaled(double k) const {
    UserDensity d = *this;
    for (auto& v : d.values_) v *= k;
    return d;
  }

  void validate() const {
    detail::require(std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0 && std::isfinite(v); }),
                    "user densities must be finite and >= 0");
  }

 private:
  std::vector<double> radii_;
  std::vector<double> values_{3.18e-3};
};

/// How the expected number of LoS-assisting RISs is evaluated.
enum class RisMassRule {
  /// Integrate the thinned density over the whole cell (each RIS thinned by
  /// its own distance to the user).
  kCellIntegral,
  /// Evaluate the thinned density at the cell-boundary distance r(psi) along
  /// each bearing and multiply by the sector area r(psi)^2 / 2.
  kSectorBoundary,
};

inline std::string to_string(RisMassRule r) {
  return r == RisMassRule::kCellIntegral ? "cell_integral" : "sector_boundary";
}

struct SystemParams {
  double cell_radius = 100.0;  // m
  UserDensity lambda_u{3.18e-3};
  double lambda_r = 0.0;        // RIS per m^2
  double lambda_b = 1.59e-3;    // blockage centres per m^2
  double block_len_min = 10.0;  // m
  double block_len_max = 20.0;  // m
  RadioParams radio{};
  double threshold = 1.0;  // linear SNR threshold
  RisMassRule ris_mass = RisMassRule::kCellIntegral;

  [[nodiscard]] double mean_block_len() const { return 0.5 * (block_len_min + block_len_max); }

  void validate() const {
    detail::require(cell_radius > 0.0 && std::isfinite(cell_radius), "cell_radius must be positive");
    lambda_u.validate();
    detail::require(lambda_r >= 0.0 && std::isfinite(lambda_r), "lambda_r must be finite and >= 0");
    detail::require(lambda_b >= 0.0 && std::isfinite(lambda_b), "lambda_b must be finite and >= 0");
    detail::require(block_len_min > 0.0 && block_len_min <= block_len_max,
                    "blockage lengths need 0 < block_len_min <= block_len_max");
    detail::require(threshold > 0.0, "threshold must be positive");
    radio.validate();
  }
};

}  // namespace rismm
