#pragma once

// Adaptive Gauss-Kronrod integration on finite intervals, plus the tail
// probe used to truncate integrals over [0, inf).
//
// The driver keeps a heap of panels ordered by error estimate and bisects the
// worst one until the global estimate meets the requested tolerance (the
// QUADPACK qag strategy). Integrands may return either a plain value or an
// Estimate, in which case the inner error is carried into the outer estimate;
// this is what makes nested (tensor-product) integration report honest errors.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "stcov/error.hpp"

namespace stcov {

template <std::floating_point Real>
struct Estimate {
  Real value{};
  Real error{};
  Real l1{};  // estimate of the integral of |f|
  bool converged = true;
};

/// Positive half of a Kronrod rule; gauss[j] is zero for nodes that are not
/// shared with the embedded Gauss rule.
template <std::floating_point Real>
struct KronrodRule {
  std::vector<Real> nodes;
  std::vector<Real> kronrod;
  std::vector<Real> gauss;
};

/// Supported sizes: 15, 21, 31, 41, 51, 61. Tables are built once.
template <std::floating_point Real>
const KronrodRule<Real>& kronrod_rule(int points);

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  /// Tolerance relative to the integral of |f|; useful when the integral
  /// itself is small through cancellation.
  double l1_rel_tol = 0.0;
  int max_panels = 2000;
  int points = 21;
};

namespace detail {

// Returns f(x); inner_error and inner_l1 receive the error and the integral
// of |.| reported by a nested integral, or 0 and |f(x)| for plain values.
template <class Real, class F>
Real call_value(F& f, Real x, Real& inner_error, Real& inner_l1) {
  using R = std::invoke_result_t<F&, Real>;
  if constexpr (std::is_same_v<R, Estimate<Real>>) {
    const Estimate<Real> e = f(x);
    inner_error = std::abs(e.error);
    inner_l1 = std::max(std::abs(e.l1), std::abs(e.value));
    return e.value;
  } else {
    inner_error = Real(0);
    const Real v = static_cast<Real>(f(x));
    inner_l1 = std::abs(v);
    return v;
  }
}

template <class Real>
struct Panel {
  Real a, b;
  Real value, error, l1;
  bool splittable;
};

template <class Real, class F>
Panel<Real> evaluate_panel(F& f, Real a, Real b, const KronrodRule<Real>& rule) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real c = (a + b) / 2;
  const Real h = (b - a) / 2;
  const std::size_t m = rule.nodes.size();

  // Keep the function values for the resasc pass.
  Real buf_lo[64];
  Real buf_hi[64];
  Real inner_err = 0;
  Real e = 0;
  Real a0 = 0;

  const Real fc = call_value(f, c, e, a0);
  inner_err += rule.kronrod[0] * e;
  Real resk = rule.kronrod[0] * fc;
  Real resg = rule.gauss[0] * fc;
  Real resabs = rule.kronrod[0] * a0;
  for (std::size_t j = 1; j < m; ++j) {
    const Real dx = h * rule.nodes[j];
    Real e1 = 0;
    Real e2 = 0;
    Real a1 = 0;
    Real a2 = 0;
    const Real f1 = call_value(f, c - dx, e1, a1);
    const Real f2 = call_value(f, c + dx, e2, a2);
    buf_lo[j] = f1;
    buf_hi[j] = f2;
    resk += rule.kronrod[j] * (f1 + f2);
    resg += rule.gauss[j] * (f1 + f2);
    resabs += rule.kronrod[j] * (a1 + a2);
    inner_err += rule.kronrod[j] * (e1 + e2);
  }
  const Real mean = resk / 2;
  Real resasc = rule.kronrod[0] * std::abs(fc - mean);
  for (std::size_t j = 1; j < m; ++j) {
    resasc += rule.kronrod[j] * (std::abs(buf_lo[j] - mean) + std::abs(buf_hi[j] - mean));
  }
  const Real ah = std::abs(h);
  resasc *= ah;
  resabs *= ah;
  Real err = std::abs((resk - resg) * h);
  if (resasc != 0 && err != 0) {
    err = resasc * std::min(Real(1), std::pow(200 * err / resasc, Real(1.5)));
  }
  if (resabs > std::numeric_limits<Real>::min() / (50 * eps)) {
    err = std::max(50 * eps * resabs, err);
  }
  err += inner_err * ah;
  const bool splittable = std::abs(h) > 100 * eps * std::max(std::abs(c), Real(1e-300));
  return {a, b, resk * h, err, resabs, splittable};
}

}  // namespace detail

/// Integrates f over the union of consecutive intervals given by
/// breakpoints (at least two, increasing).
template <std::floating_point Real, class F>
Estimate<Real> integrate(F&& f, std::span<const Real> breakpoints, const QuadratureOptions& opt = {}) {
  using detail::Panel;
  const KronrodRule<Real>& rule = kronrod_rule<Real>(opt.points);
  std::vector<Panel<Real>> heap;
  std::vector<Panel<Real>> frozen;
  heap.reserve(static_cast<std::size_t>(opt.max_panels) + breakpoints.size() + 2);

  auto worse = [](const Panel<Real>& p, const Panel<Real>& q) { return p.error < q.error; };
  Real value = 0;
  Real error = 0;
  Real l1 = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    Panel<Real> p = detail::evaluate_panel(f, breakpoints[i], breakpoints[i + 1], rule);
    value += p.value;
    error += p.error;
    l1 += p.l1;
    heap.push_back(p);
  }
  std::make_heap(heap.begin(), heap.end(), worse);

  auto tolerance = [&] {
    return std::max({Real(opt.abs_tol), Real(opt.rel_tol) * std::abs(value), Real(opt.l1_rel_tol) * l1});
  };

  int panels = static_cast<int>(heap.size());
  while (!heap.empty() && error > tolerance() && panels < opt.max_panels) {
    std::pop_heap(heap.begin(), heap.end(), worse);
    Panel<Real> worst = heap.back();
    heap.pop_back();
    if (!worst.splittable) {
      frozen.push_back(worst);
      continue;
    }
    const Real mid = (worst.a + worst.b) / 2;
    Panel<Real> left = detail::evaluate_panel(f, worst.a, mid, rule);
    Panel<Real> right = detail::evaluate_panel(f, mid, worst.b, rule);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
    ++panels;
  }

  // Resum to shed the drift of the running totals.
  Estimate<Real> out;
  for (const auto* list : {&heap, &frozen}) {
    for (const Panel<Real>& p : *list) {
      out.value += p.value;
      out.error += p.error;
      out.l1 += p.l1;
    }
  }
  value = out.value;
  l1 = out.l1;
  out.converged = out.error <= tolerance();
  return out;
}

template <std::floating_point Real, class F>
Estimate<Real> integrate(F&& f, Real a, Real b, const QuadratureOptions& opt = {}) {
  const Real bp[2] = {a, b};
  return integrate<Real>(std::forward<F>(f), std::span<const Real>(bp, 2), opt);
}

// ---------------------------------------------------------------------------
// Tail truncation for integrals over [0, inf).

enum class TailRule {
  /// Stop once the integrand stays below threshold * (peak value).
  PointwisePeak,
  /// Stop once the extrapolated tail mass is below threshold * (mass so far).
  TailMass,
};

struct RadialCutoff {
  double radius = 0.0;
  /// Extrapolated integral of |f| beyond radius (power-law model).
  double tail_estimate = 0.0;
  /// Local log-log slope of |f| at radius.
  double decay_exponent = 0.0;
  /// False when the search hit its cap; tail_estimate then matters.
  bool reached = true;
};

/// Finds a truncation radius for the integral of f over [0, inf).
/// Radii are probed on a geometric grid starting near length_scale.
/// Throws NonConvergenceError when the tail is not integrable (|f| decays no
/// faster than 1/u at the cap).
template <class F>
RadialCutoff find_radial_cutoff(F&& f, double length_scale, double threshold, TailRule rule) {
  constexpr int kPerOctave = 4;
  constexpr int kMaxOctaves = 72;
  const double step = std::exp2(1.0 / kPerOctave);
  double u = length_scale * std::exp2(-8.0);
  double prev_u = 0.0;
  double prev_f = std::abs(static_cast<double>(f(0.0)));
  double peak = prev_f;
  double mass = 0.0;
  std::vector<double> octave_values;
  octave_values.reserve(kPerOctave);
  double f_half = -1.0;  // |f| one octave below the current candidate
  int octaves = 0;

  while (true) {
    const double fu = std::abs(static_cast<double>(f(u)));
    peak = std::max(peak, fu);
    mass += 0.5 * (fu + prev_f) * (u - prev_u);
    octave_values.push_back(fu);
    prev_u = u;
    prev_f = fu;

    if (static_cast<int>(octave_values.size()) == kPerOctave) {
      const double slope = (f_half > 0.0 && fu > 0.0) ? std::log2(fu / f_half) : -1e300;
      if (u >= length_scale) {
        bool done = false;
        if (rule == TailRule::PointwisePeak) {
          done = std::all_of(octave_values.begin(), octave_values.end(),
                             [&](double v) { return v < threshold * peak; });
          if (done) {
            if (fu == 0.0) return {u, 0.0, slope, true};
            if (!(slope < -1.0)) {
              throw NonConvergenceError("integrand tail is not integrable: |f(u)| ~ u^" + std::to_string(slope) +
                                        " at u = " + std::to_string(u));
            }
            return {u, fu * u / (-slope - 1.0), slope, true};
          }
        } else {
          const double tail =
              (fu == 0.0) ? 0.0 : (slope < -1.0 ? fu * u / (-slope - 1.0) : std::numeric_limits<double>::infinity());
          if (tail <= threshold * mass && fu <= 1e-3 * peak) return {u, tail, slope, true};
        }
      }
      f_half = fu;
      octave_values.clear();
      if (++octaves == kMaxOctaves) {
        if (!(slope < -1.0)) {
          throw NonConvergenceError("integrand tail is not integrable: |f(u)| ~ u^" + std::to_string(slope) +
                                    " at u = " + std::to_string(u));
        }
        return {u, fu * u / (-slope - 1.0), slope, false};
      }
    }
    u *= step;
  }
}

/// Breakpoints 0, s*2^-4, s*2^-3, ..., up to radius (inclusive).
std::vector<double> geometric_breakpoints(double length_scale, double radius);

}  // namespace stcov
