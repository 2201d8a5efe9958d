#pragma once

// Planar scene model: point processes for users, RISs and blockage segments,
// and exact line-of-sight tests against the blockage set.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "rismm/errors.hpp"
#include "rismm/random.hpp"

namespace rismm {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2D operator*(double k, Point2D a) { return {k * a.x, k * a.y}; }
  friend bool operator==(const Point2D&, const Point2D&) = default;

  [[nodiscard]] double norm() const { return std::hypot(x, y); }
};

inline double distance(Point2D a, Point2D b) { return (a - b).norm(); }
inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }

/// Closed segment given by its endpoints.
struct SegmentEndpoints {
  Point2D p;
  Point2D q;
};

/// Blockage segment in centre/length/orientation form.
struct Segment2D {
  Point2D center;
  double length = 0.0;
  double orientation = 0.0;

  [[nodiscard]] SegmentEndpoints endpoints() const {
    const Point2D half{0.5 * length * std::cos(orientation), 0.5 * length * std::sin(orientation)};
    return {center - half, center + half};
  }
};

namespace detail {

// Sign of the turn a -> b -> c; 0 when collinear.
inline int orientation_sign(Point2D a, Point2D b, Point2D c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

// For c collinear with [a, b]: does c lie inside the closed bounding box?
inline bool on_segment(Point2D a, Point2D b, Point2D c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

}  // namespace detail

/// True iff the two closed segments share at least one point.
inline bool segments_intersect(const SegmentEndpoints& a, const SegmentEndpoints& b) {
  using detail::on_segment;
  using detail::orientation_sign;
  const int o1 = orientation_sign(a.p, a.q, b.p);
  const int o2 = orientation_sign(a.p, a.q, b.q);
  const int o3 = orientation_sign(b.p, b.q, a.p);
  const int o4 = orientation_sign(b.p, b.q, a.q);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a.p, a.q, b.p)) return true;
  if (o2 == 0 && on_segment(a.p, a.q, b.q)) return true;
  if (o3 == 0 && on_segment(b.p, b.q, a.p)) return true;
  if (o4 == 0 && on_segment(b.p, b.q, a.q)) return true;
  return false;
}

/// Blockage set with endpoints and bounding boxes precomputed for LoS queries.
class BlockageSet {
 public:
  BlockageSet() = default;
  explicit BlockageSet(std::vector<Segment2D> segments) : segments_(std::move(segments)) {
    ends_.reserve(segments_.size());
    for (const auto& s : segments_) ends_.push_back(s.endpoints());
  }

  [[nodiscard]] std::span<const Segment2D> segments() const { return segments_; }
  [[nodiscard]] std::span<const SegmentEndpoints> endpoints() const { return ends_; }
  [[nodiscard]] std::size_t size() const { return segments_.size(); }
  [[nodiscard]] bool empty() const { return segments_.empty(); }

  /// True iff the closed link p-q touches no blockage.
  [[nodiscard]] bool clear(Point2D p, Point2D q) const {
    const SegmentEndpoints link{p, q};
    const double xmin = std::min(p.x, q.x);
    const double xmax = std::max(p.x, q.x);
    const double ymin = std::min(p.y, q.y);
    const double ymax = std::max(p.y, q.y);
    for (const auto& e : ends_) {
      if (std::max(e.p.x, e.q.x) < xmin || std::min(e.p.x, e.q.x) > xmax || std::max(e.p.y, e.q.y) < ymin ||
          std::min(e.p.y, e.q.y) > ymax) {
        continue;
      }
      if (segments_intersect(link, e)) return false;
    }
    return true;
  }

 private:
  std::vector<Segment2D> segments_;
  std::vector<SegmentEndpoints> ends_;
};

inline bool is_los(Point2D p, Point2D q, std::span<const Segment2D> blockages) {
  const SegmentEndpoints link{p, q};
  return std::none_of(blockages.begin(), blockages.end(),
                      [&](const Segment2D& b) { return segments_intersect(link, b.endpoints()); });
}

inline bool is_los(Point2D p, Point2D q, const BlockageSet& blockages) { return blockages.clear(p, q); }

/// Poisson count with mean density * area.
inline std::uint64_t sample_poisson_count(double density, double area, RandomStream& rng) {
  detail::require(density >= 0.0 && area >= 0.0, "density and area must be non-negative");
  return rng.poisson(density * area);
}

/// Uniform point on the disc of the given radius centred at `centre`.
inline Point2D sample_uniform_disc(double radius, RandomStream& rng, Point2D centre = {}) {
  const double r = radius * std::sqrt(rng.uniform());
  const double phi = rng.angle();
  return {centre.x + r * std::cos(phi), centre.y + r * std::sin(phi)};
}

/// Homogeneous PPP restricted to a disc.
inline std::vector<Point2D> sample_ppp_disc(double density, double radius, RandomStream& rng,
                                            Point2D centre = {}) {
  detail::require(density >= 0.0, "density must be non-negative");
  detail::require(radius > 0.0, "disc radius must be positive");
  const auto n = sample_poisson_count(density, std::numbers::pi * radius * radius, rng);
  std::vector<Point2D> pts;
  pts.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) pts.push_back(sample_uniform_disc(radius, rng, centre));
  return pts;
}

/// Line Boolean blockage process: PPP centres on a disc, U[l_min, l_max]
/// lengths, U[0, 2pi) orientations.
inline std::vector<Segment2D> sample_blockages(double density, double region_radius, double l_min, double l_max,
                                               RandomStream& rng, Point2D centre = {}) {
  detail::require(density >= 0.0, "blockage density must be non-negative");
  detail::require(region_radius > 0.0, "blockage region radius must be positive");
  detail::require(l_min > 0.0 && l_min <= l_max, "blockage lengths need 0 < l_min <= l_max");
  const auto n = sample_poisson_count(density, std::numbers::pi * region_radius * region_radius, rng);
  std::vector<Segment2D> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const Point2D c = sample_uniform_disc(region_radius, rng, centre);
    const double len = rng.uniform(l_min, l_max);
    out.push_back({c, len, rng.angle()});
  }
  return out;
}

/// Distance from `from` (inside the disc of radius `radius` about the
/// origin) to the circle along the unit direction `dir`.
inline double distance_to_boundary(Point2D from, Point2D dir, double radius) {
  const double b = dot(from, dir);
  const double c = dot(from, from) - radius * radius;
  return -b + std::sqrt(std::max(0.0, b * b - c));
}

/// One realisation of the cell: BS at the origin, RISs and users inside the
/// cell radius, blockage centres on the enlarged disc R + l_max / 2.
struct Scene {
  double cell_radius = 0.0;
  BlockageSet blockages;
  std::vector<Point2D> ris_points;
  std::vector<Point2D> user_points;
  Point2D bs{};
};

}  // namespace rismm
