#pragma once

// Adaptive Gauss-Kronrod quadrature: finite intervals, exponential-weight
// half lines and nested (iterated) integrals with additive error propagation.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "rismm/errors.hpp"

namespace rismm::numerics {

struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  int max_depth = 60;
  std::size_t max_evals = 400000;

  void validate() const {
    rismm::detail::require(rel_tol > 0.0 && abs_tol > 0.0, "quadrature tolerances must be positive");
    rismm::detail::require(max_depth >= 1, "quadrature max_depth must be >= 1");
    rismm::detail::require(max_evals >= 15, "quadrature max_evals must allow one panel");
  }

  /// Spec for an inner integral: both tolerances one order tighter.
  [[nodiscard]] QuadratureSpec tightened(double factor = 10.0) const {
    QuadratureSpec s = *this;
    s.rel_tol /= factor;
    s.abs_tol /= factor;
    return s;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evals = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    evals += o.evals;
    converged = converged && o.converged;
    return *this;
  }

  [[nodiscard]] QuadratureResult scaled(double k) const {
    return {value * k, error_estimate * std::abs(k), evals, converged};
  }
};

inline QuadratureResult operator+(QuadratureResult a, const QuadratureResult& b) { return a += b; }

template <class R>
concept ResultLike = requires(const R& r) {
  { r.value } -> std::convertible_to<double>;
  { r.error_estimate } -> std::convertible_to<double>;
  { r.converged } -> std::convertible_to<bool>;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes kXgk[1], kXgk[3], kXgk[5] and the centre.
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Sample {
  double value;
  double inner_error;
  bool inner_converged;
};

template <class F>
Sample call(F& f, double x) {
  using R = std::invoke_result_t<F&, double>;
  if constexpr (ResultLike<R>) {
    const R r = f(x);
    return {static_cast<double>(r.value), static_cast<double>(r.error_estimate),
            static_cast<bool>(r.converged)};
  } else {
    return {static_cast<double>(f(x)), 0.0, true};
  }
}

struct Panel {
  double a;
  double b;
  double value;
  double error;        // outer rule error, drives subdivision
  double inner_error;  // propagated from inner integrals, reported only
  int depth;
  bool inner_converged;
};

template <class F>
Panel gk15(F& f, double a, double b, int depth) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  bool inner_ok = true;
  double inner_err = 0.0;

  const Sample fc = call(f, centre);
  inner_ok = inner_ok && fc.inner_converged;
  inner_err += kWgk[7] * fc.inner_error;
  double resg = fc.value * kWg[3];
  double resk = fc.value * kWgk[7];
  double resabs = std::abs(resk);

  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const Sample lo = call(f, centre - dx);
    const Sample hi = call(f, centre + dx);
    inner_ok = inner_ok && lo.inner_converged && hi.inner_converged;
    const double w = kWgk[static_cast<std::size_t>(j)];
    inner_err += w * (lo.inner_error + hi.inner_error);
    f1[static_cast<std::size_t>(j)] = lo.value;
    f2[static_cast<std::size_t>(j)] = hi.value;
    const double sum = lo.value + hi.value;
    resk += w * sum;
    resabs += w * (std::abs(lo.value) + std::abs(hi.value));
    if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * sum;
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc.value - reskh);
  for (std::size_t j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
  }

  const double result = resk * half;
  resabs *= abs_half;
  resasc *= abs_half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > uflow / (50.0 * eps)) err = std::max(eps * 50.0 * resabs, err);
  if (!std::isfinite(result) || !std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  return {a, b, result, err, inner_err * abs_half, depth, inner_ok};
}

inline bool by_error(const Panel& x, const Panel& y) { return x.error < y.error; }

// Global adaptive bisection (QUADPACK qag strategy) seeded with one panel per
// breakpoint interval. The final sum runs over panels ordered by position so
// the result is bit-reproducible for identical inputs. Inner-integral error
// does not shrink under outer bisection, so only the rule error is refined
// against the tolerance; the inner part is added to the reported estimate.
template <class F>
QuadratureResult adaptive(F& f, std::span<const double> edges, const QuadratureSpec& spec) {
  spec.validate();
  QuadratureResult out;
  if (edges.size() < 2) return out;

  std::vector<Panel> heap;
  std::vector<Panel> frozen;
  heap.reserve(64);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] > edges[i]) heap.push_back(gk15(f, edges[i], edges[i + 1], 0));
    out.evals += 15;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  auto totals = [&](double& value, double& error) {
    value = 0.0;
    error = 0.0;
    for (const auto& p : heap) { value += p.value; error += p.error; }
    for (const auto& p : frozen) { value += p.value; error += p.error; }
  };

  double value = 0.0;
  double error = 0.0;
  totals(value, error);
  std::size_t splits = 0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value)) && !heap.empty()) {
    if (out.evals + 30 > spec.max_evals) break;
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.depth >= spec.max_depth || (worst.b - worst.a) <= 100.0 * eps * scale || !(mid > worst.a) ||
        !(mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = gk15(f, worst.a, mid, worst.depth + 1);
    const Panel right = gk15(f, mid, worst.b, worst.depth + 1);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    out.evals += 30;
    // Running totals drift; resynchronise periodically.
    if (++splits % 64 == 0) {
      totals(value, error);
    } else {
      value += left.value + right.value - worst.value;
      error += left.error + right.error - worst.error;
    }
  }

  std::vector<Panel> all = std::move(heap);
  all.insert(all.end(), frozen.begin(), frozen.end());
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  bool inner_ok = true;
  double rule_error = 0.0;
  double inner_error = 0.0;
  out.value = 0.0;
  for (const auto& p : all) {
    out.value += p.value;
    rule_error += p.error;
    inner_error += p.inner_error;
    inner_ok = inner_ok && p.inner_converged;
  }
  out.error_estimate = rule_error + inner_error;
  out.converged = inner_ok && std::isfinite(out.value) &&
                  rule_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  return out;
}

inline std::vector<double> sorted_edges(double a, double b, std::span<const double> interior) {
  std::vector<double> e{a};
  for (double p : interior) {
    if (p > a && p < b && std::isfinite(p)) e.push_back(p);
  }
  e.push_back(b);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

}  // namespace detail

/// Adaptive integral of f over [a, b]. f may return a plain number or a
/// QuadratureResult (inner integral); inner error estimates are integrated
/// into the reported error.
template <class F>
QuadratureResult integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  rismm::detail::require(a <= b, "integrate_1d requires a <= b");
  const std::array<double, 2> edges{a, b};
  return detail::adaptive(f, edges, spec);
}

/// As integrate_1d, but seeds the subdivision at known kinks or jumps of f.
/// Breakpoints outside (a, b) are ignored.
template <class F>
QuadratureResult integrate_1d(F&& f, double a, double b, std::span<const double> breakpoints,
                              const QuadratureSpec& spec = {}) {
  rismm::detail::require(a <= b, "integrate_1d requires a <= b");
  const auto edges = detail::sorted_edges(a, b, breakpoints);
  return detail::adaptive(f, edges, spec);
}

/// Computes E[g(X)] = \int_0^inf g(x) rate e^{-rate x} dx for X ~ Exp(rate).
///
/// The half line is mapped onto the unit interval through the exponential
/// CDF, u = 1 - e^{-rate x}, and truncated at u = 1 - tail_eps; g must be
/// bounded (or grow slowly) so the neglected mass stays below the tolerance.
/// An estimate of the truncated mass is added to error_estimate.
template <class G>
QuadratureResult integrate_semiinf_expweight(G&& g, double rate, const QuadratureSpec& spec = {},
                                             std::span<const double> x_breakpoints = {},
                                             double tail_eps = 1e-12) {
  rismm::detail::require(rate > 0.0, "exponential rate must be positive");
  rismm::detail::require(tail_eps > 0.0 && tail_eps < 1.0, "tail_eps must lie in (0, 1)");
  auto x_of = [rate](double u) { return -std::log1p(-u) / rate; };
  auto h = [&](double u) { return g(x_of(u)); };
  std::vector<double> ub;
  ub.reserve(x_breakpoints.size());
  for (double x : x_breakpoints) {
    if (x > 0.0 && std::isfinite(x)) ub.push_back(-std::expm1(-rate * x));
  }
  const double u_max = 1.0 - tail_eps;
  const auto edges = detail::sorted_edges(0.0, u_max, ub);
  QuadratureResult r = detail::adaptive(h, edges, spec);
  const auto tail = detail::call(g, x_of(u_max));
  r.error_estimate += 2.0 * tail_eps * std::max(1.0, std::abs(tail.value));
  return r;
}

/// Iterated integral \int_a^b I(x) dx where inner(x, spec) returns the inner
/// integral I(x) as a QuadratureResult. The inner spec is one order tighter
/// than the outer one; inner errors propagate additively into the total.
template <class Inner>
QuadratureResult integrate_nested(Inner&& inner, double a, double b, const QuadratureSpec& outer,
                                  std::span<const double> breakpoints = {}) {
  const QuadratureSpec inner_spec = outer.tightened();
  auto f = [&](double x) -> QuadratureResult { return inner(x, inner_spec); };
  return integrate_1d(f, a, b, breakpoints, outer);
}

}  // namespace rismm::numerics
