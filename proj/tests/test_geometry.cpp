#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rismm/geometry.hpp"

using rismm::BlockageSet;
using rismm::Point2D;
using rismm::RandomStream;
using rismm::Segment2D;
using rismm::SegmentEndpoints;
using rismm::StreamTag;

namespace {
SegmentEndpoints seg(double x1, double y1, double x2, double y2) { return {{x1, y1}, {x2, y2}}; }
}  // namespace

TEST(SegmentsIntersect, ProperCrossing) {
  EXPECT_TRUE(rismm::segments_intersect(seg(0, 0, 2, 2), seg(0, 2, 2, 0)));
}

TEST(SegmentsIntersect, Disjoint) {
  EXPECT_FALSE(rismm::segments_intersect(seg(0, 0, 1, 0), seg(0, 1, 1, 1)));
  EXPECT_FALSE(rismm::segments_intersect(seg(0, 0, 1, 1), seg(2, 0, 3, -5)));
}

TEST(SegmentsIntersect, ParallelSeparate) {
  EXPECT_FALSE(rismm::segments_intersect(seg(0, 0, 4, 0), seg(0, 1e-9, 4, 1e-9)));
}

TEST(SegmentsIntersect, CollinearOverlap) {
  EXPECT_TRUE(rismm::segments_intersect(seg(0, 0, 4, 0), seg(3, 0, 6, 0)));
}

TEST(SegmentsIntersect, CollinearDisjoint) {
  EXPECT_FALSE(rismm::segments_intersect(seg(0, 0, 1, 0), seg(2, 0, 3, 0)));
}

TEST(SegmentsIntersect, TouchingEndpointCounts) {
  EXPECT_TRUE(rismm::segments_intersect(seg(0, 0, 1, 0), seg(1, 0, 1, 5)));
  EXPECT_TRUE(rismm::segments_intersect(seg(0, 0, 2, 0), seg(1, 0, 1, 5)));  // T-junction
}

TEST(SegmentsIntersect, DegenerateSegmentPoint) {
  EXPECT_TRUE(rismm::segments_intersect(seg(0, 0, 2, 2), seg(1, 1, 1, 1)));
  EXPECT_FALSE(rismm::segments_intersect(seg(0, 0, 2, 2), seg(1, 1.5, 1, 1.5)));
}

// Property: symmetric in its arguments and in endpoint order.
TEST(SegmentsIntersectProperty, Symmetry) {
  RandomStream r(5, StreamTag::kGeneric, 0);
  for (int i = 0; i < 20000; ++i) {
    const auto a = seg(r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1));
    const auto b = seg(r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1));
    const bool x = rismm::segments_intersect(a, b);
    ASSERT_EQ(x, rismm::segments_intersect(b, a));
    ASSERT_EQ(x, rismm::segments_intersect({a.q, a.p}, b));
    ASSERT_EQ(x, rismm::segments_intersect(a, {b.q, b.p}));
  }
}

// Property: agrees with solving the 2x2 system for random generic segments.
TEST(SegmentsIntersectProperty, MatchesParametricSolution) {
  RandomStream r(6, StreamTag::kGeneric, 0);
  for (int i = 0; i < 20000; ++i) {
    const auto a = seg(r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1));
    const auto b = seg(r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1));
    const Point2D d1 = a.q - a.p;
    const Point2D d2 = b.q - b.p;
    const double den = rismm::cross(d1, d2);
    if (std::abs(den) < 1e-6) continue;
    const double t = rismm::cross(b.p - a.p, d2) / den;
    const double u = rismm::cross(b.p - a.p, d1) / den;
    const double margin = 1e-9;
    if (std::min({t, 1 - t, u, 1 - u}) > margin) { ASSERT_TRUE(rismm::segments_intersect(a, b)); }
    if (t < -margin || t > 1 + margin || u < -margin || u > 1 + margin) { ASSERT_FALSE(rismm::segments_intersect(a, b)); }
  }
}

TEST(Segment2D, EndpointsFromCenterForm) {
  const Segment2D s{{1.0, 2.0}, 4.0, std::numbers::pi / 2};
  const auto e = s.endpoints();
  EXPECT_NEAR(e.p.x, 1.0, 1e-12);
  EXPECT_NEAR(e.p.y, 0.0, 1e-12);
  EXPECT_NEAR(e.q.y, 4.0, 1e-12);
}

TEST(IsLos, EmptyBlockagesAlwaysLos) {
  EXPECT_TRUE(rismm::is_los({0, 0}, {100, 0}, std::vector<Segment2D>{}));
  EXPECT_TRUE(rismm::is_los({0, 0}, {100, 0}, BlockageSet{}));
}

TEST(IsLos, WallBlocks) {
  const std::vector<Segment2D> wall{{{50.0, 0.0}, 10.0, std::numbers::pi / 2}};
  EXPECT_FALSE(rismm::is_los({0, 0}, {100, 0}, wall));
  EXPECT_TRUE(rismm::is_los({0, 0}, {40, 0}, wall));
  EXPECT_TRUE(rismm::is_los({0, 20}, {100, 20}, wall));
}

// Property: the indexed set answers exactly like the plain scan.
TEST(IsLosProperty, BlockageSetMatchesScan) {
  RandomStream r(8, StreamTag::kGeneric, 0);
  const auto segs = rismm::sample_blockages(2e-3, 120.0, 10.0, 20.0, r);
  const BlockageSet set(segs);
  for (int i = 0; i < 5000; ++i) {
    const auto p = rismm::sample_uniform_disc(100.0, r);
    const auto q = rismm::sample_uniform_disc(100.0, r);
    ASSERT_EQ(rismm::is_los(p, q, segs), set.clear(p, q));
  }
}

TEST(PoissonCount, MeanMatchesDensityTimesArea) {
  RandomStream r(2, StreamTag::kGeneric, 0);
  const int n = 50000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += static_cast<double>(rismm::sample_poisson_count(1.59e-3, 31415.9, r));
  EXPECT_NEAR(s / n, 1.59e-3 * 31415.9, 5.0 * std::sqrt(49.95 / n));
}

TEST(PoissonCount, ZeroDensityGivesZero) {
  RandomStream r(2, StreamTag::kGeneric, 0);
  EXPECT_EQ(rismm::sample_poisson_count(0.0, 1e6, r), 0U);
  EXPECT_TRUE(rismm::sample_ppp_disc(0.0, 100.0, r).empty());
}

TEST(PoissonCount, NegativeInputsRejected) {
  RandomStream r(2, StreamTag::kGeneric, 0);
  EXPECT_THROW(rismm::sample_poisson_count(-1.0, 1.0, r), rismm::ParameterError);
  EXPECT_THROW(rismm::sample_ppp_disc(1.0, 0.0, r), rismm::ParameterError);
}

TEST(PppDisc, PointsInsideAndUniformInArea) {
  RandomStream r(3, StreamTag::kGeneric, 0);
  int inner = 0;
  int total = 0;
  for (int k = 0; k < 200; ++k) {
    for (const auto& p : rismm::sample_ppp_disc(1e-2, 50.0, r, {10.0, -5.0})) {
      const double d = rismm::distance(p, {10.0, -5.0});
      ASSERT_LE(d, 50.0);
      inner += d < 25.0;
      ++total;
    }
  }
  // A quarter of the area lies inside half the radius.
  EXPECT_NEAR(inner / double(total), 0.25, 4.0 * std::sqrt(0.1875 / total));
}

TEST(Blockages, LengthsAndOrientationsInRange) {
  RandomStream r(4, StreamTag::kGeneric, 0);
  const auto b = rismm::sample_blockages(5e-3, 110.0, 10.0, 20.0, r);
  ASSERT_FALSE(b.empty());
  for (const auto& s : b) {
    EXPECT_GE(s.length, 10.0);
    EXPECT_LE(s.length, 20.0);
    EXPECT_GE(s.orientation, 0.0);
    EXPECT_LT(s.orientation, 2.0 * std::numbers::pi);
    EXPECT_LE(s.center.norm(), 110.0);
  }
}

TEST(Blockages, InvalidLengthsRejected) {
  RandomStream r(4, StreamTag::kGeneric, 0);
  EXPECT_THROW(rismm::sample_blockages(1e-3, 10.0, 20.0, 10.0, r), rismm::ParameterError);
  EXPECT_THROW(rismm::sample_blockages(1e-3, 10.0, 0.0, 10.0, r), rismm::ParameterError);
}

TEST(Blockages, ReproducibleFromStream) {
  RandomStream a(4, StreamTag::kScene, 12);
  RandomStream b(4, StreamTag::kScene, 12);
  const auto x = rismm::sample_blockages(2e-3, 110.0, 10.0, 20.0, a);
  const auto y = rismm::sample_blockages(2e-3, 110.0, 10.0, 20.0, b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].center, y[i].center);
}

TEST(DistanceToBoundary, KnownCases) {
  EXPECT_NEAR(rismm::distance_to_boundary({0, 0}, {1, 0}, 100.0), 100.0, 1e-12);
  EXPECT_NEAR(rismm::distance_to_boundary({50, 0}, {1, 0}, 100.0), 50.0, 1e-12);
  EXPECT_NEAR(rismm::distance_to_boundary({50, 0}, {-1, 0}, 100.0), 150.0, 1e-12);
  EXPECT_NEAR(rismm::distance_to_boundary({50, 0}, {0, 1}, 100.0), std::sqrt(7500.0), 1e-12);
}

// Worked examples for the samplers.

TEST(PoissonCount, RisDensityMeanWithinOnePercent) {
  RandomStream r(21, StreamTag::kGeneric, 0);
  const double area = std::numbers::pi * 100.0 * 100.0;
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) s += static_cast<double>(rismm::sample_poisson_count(1.59e-4, area, r));
  EXPECT_NEAR(s / 1e5, 4.995, 0.01 * 4.995);
}

TEST(PoissonCount, UsersPerCell) {
  RandomStream r(22, StreamTag::kGeneric, 0);
  const double area = std::numbers::pi * 100.0 * 100.0;
  double s = 0.0;
  for (int i = 0; i < 20000; ++i) s += static_cast<double>(rismm::sample_poisson_count(3.18e-3, area, r));
  EXPECT_NEAR(s / 2e4, 99.9, 0.5);
}

TEST(PppDisc, RadialLawKolmogorovSmirnov) {
  RandomStream r(23, StreamTag::kGeneric, 0);
  std::vector<double> rad;
  while (rad.size() < 100000) {
    for (const auto& p : rismm::sample_ppp_disc(3.18e-3, 100.0, r)) rad.push_back(p.norm() / 100.0);
  }
  std::sort(rad.begin(), rad.end());
  double ks = 0.0;
  const double n = static_cast<double>(rad.size());
  for (std::size_t i = 0; i < rad.size(); ++i) {
    const double f = rad[i] * rad[i];
    ks = std::max({ks, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  EXPECT_LT(ks, 0.01);
}

TEST(PppDisc, CountMeanAndDispersion) {
  RandomStream r(24, StreamTag::kGeneric, 0);
  const int n = 100000;
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(rismm::sample_ppp_disc(1.59e-4, 100.0, r).size());
    s += k;
    s2 += k * k;
  }
  const double m = s / n;
  EXPECT_NEAR(m, 4.995, 0.02 * 4.995);
  const double ratio = (s2 / n - m * m) / m;
  EXPECT_GE(ratio, 0.97);
  EXPECT_LE(ratio, 1.03);
}

// Chi-square statistic of n angles in `bins` equal bins on [0, 2pi).
static double angle_chi2(const std::vector<double>& angles, int bins) {
  std::vector<double> count(bins, 0.0);
  for (double a : angles) {
    const int b = std::min(bins - 1, static_cast<int>(a / (2.0 * std::numbers::pi) * bins));
    count[b] += 1.0;
  }
  const double expect = static_cast<double>(angles.size()) / bins;
  double chi2 = 0.0;
  for (double c : count) chi2 += (c - expect) * (c - expect) / expect;
  return chi2;
}

// 1% critical value of chi-square with 19 degrees of freedom.
constexpr double kChi2Crit19 = 36.191;

TEST(PppDisc, IsotropicAngles) {
  RandomStream r(25, StreamTag::kGeneric, 0);
  std::vector<double> ang;
  while (ang.size() < 100000) {
    for (const auto& p : rismm::sample_ppp_disc(3.18e-3, 100.0, r)) {
      double a = std::atan2(p.y, p.x);
      if (a < 0) a += 2.0 * std::numbers::pi;
      ang.push_back(a);
    }
  }
  EXPECT_LT(angle_chi2(ang, 20), kChi2Crit19);
}

TEST(Blockages, MeanLengthAndUniformOrientation) {
  RandomStream r(26, StreamTag::kGeneric, 0);
  std::vector<double> orient;
  double len = 0.0;
  while (orient.size() < 100000) {
    for (const auto& s : rismm::sample_blockages(1.59e-3, 110.0, 10.0, 20.0, r)) {
      orient.push_back(s.orientation);
      len += s.length;
    }
  }
  EXPECT_NEAR(len / static_cast<double>(orient.size()), 15.0, 0.15);
  EXPECT_LT(angle_chi2(orient, 20), kChi2Crit19);
}

TEST(Blockages, ZeroDensityEmpty) {
  RandomStream r(27, StreamTag::kGeneric, 0);
  EXPECT_TRUE(rismm::sample_blockages(0.0, 110.0, 10.0, 20.0, r).empty());
}

TEST(SegmentsIntersect, WorkedExamples) {
  EXPECT_TRUE(rismm::segments_intersect(seg(0, 0, 2, 0), seg(1, -1, 1, 1)));
  EXPECT_FALSE(rismm::segments_intersect(seg(0, 0, 1, 0), seg(2, 0, 3, 0)));
  EXPECT_TRUE(rismm::segments_intersect(seg(0, 0, 2, 2), seg(1, 1, 3, 0)));
}

TEST(IsLos, BlockageThroughMidpoint) {
  const std::vector<Segment2D> b{{{5.0, 5.0}, 2.0, 0.3}};
  EXPECT_FALSE(rismm::is_los({0, 0}, {10, 10}, b));
}

// Property: adding a blockage never turns an NLoS link into LoS.
TEST(IsLosProperty, MonotoneInBlockageSet) {
  RandomStream r(28, StreamTag::kGeneric, 0);
  for (int t = 0; t < 300; ++t) {
    auto segs = rismm::sample_blockages(1e-3, 110.0, 10.0, 20.0, r);
    const auto extra = rismm::sample_blockages(1e-3, 110.0, 10.0, 20.0, r);
    auto more = segs;
    more.insert(more.end(), extra.begin(), extra.end());
    for (int i = 0; i < 20; ++i) {
      const auto p = rismm::sample_uniform_disc(100.0, r);
      const auto q = rismm::sample_uniform_disc(100.0, r);
      if (!rismm::is_los(p, q, segs)) { ASSERT_FALSE(rismm::is_los(p, q, more)); }
    }
  }
}

TEST(IsLos, EmpiricalFrequencyAtFiftyMetres) {
  // Link (0,0)-(50,0) with blockage centres on the disc that can reach it.
  int clear = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    RandomStream r(29, StreamTag::kScene, static_cast<std::uint64_t>(i));
    const BlockageSet b(rismm::sample_blockages(1.59e-3, 35.0, 10.0, 20.0, r, {25.0, 0.0}));
    clear += b.clear({0, 0}, {50, 0});
  }
  EXPECT_NEAR(clear / double(n), std::exp(-2.0 * 1.59e-3 * 15.0 * 50.0 / std::numbers::pi), 0.01);
  EXPECT_NEAR(clear / double(n), 0.468, 0.01);
}
