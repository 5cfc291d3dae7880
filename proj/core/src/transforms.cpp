#include "stcov/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stcov/error.hpp"
#include "stcov/special.hpp"

namespace stcov {

namespace {

struct Resolved {
  bool extended;
  double l1_rel_tol;
  double tail_rel_tol;
};

Resolved resolve(const Generator& gen, const TransformOptions& opt) {
  const bool ext = opt.precision == Precision::Extended ||
                   (opt.precision == Precision::Automatic && !gen.is_compact());
  Resolved r{ext, opt.l1_rel_tol, opt.tail_rel_tol};
  if (r.l1_rel_tol <= 0.0) r.l1_rel_tol = ext ? 1e-16 : 1e-10;
  if (r.tail_rel_tol <= 0.0) r.tail_rel_tol = ext ? 1e-20 : 1e-12;
  return r;
}

// Truncation ball in rho units and the tail mass left outside it.
struct Ball {
  double radius;
  double tail;
};

Ball truncation_ball(const Generator& gen, int n, int extra_power, double scale, double tail_rel_tol) {
  const double sq = std::sqrt(scale);
  if (gen.is_compact()) return {gen.support_radius() * sq, 0.0};
  const int power = n - 1 + extra_power;
  auto surrogate = [&](double r) { return static_cast<double>(gen.radial(r / sq)) * std::pow(r, power); };
  const RadialCutoff cut = find_radial_cutoff(surrogate, gen.length_scale() * sq, tail_rel_tol, TailRule::TailMass);
  // Volume of the unit rho-ball is at most 2^n; n r^{n-1} dr is its shell.
  return {cut.radius, cut.tail_estimate * n * std::exp2(n)};
}

template <class Real, class Weight>
class OrthantIntegrator {
 public:
  OrthantIntegrator(const Generator& gen, const HomogeneousNorm& rho, int n, double scale, double ball,
                    std::array<double, 3> freq, Weight weight, const QuadratureOptions& qopt, double abs_tol = 0.0)
      : gen_(gen),
        rho_(rho),
        n_(n),
        inv_sqrt_scale_(1 / std::sqrt(static_cast<Real>(scale))),
        ball_(ball),
        length_(gen.length_scale() * std::sqrt(scale)),
        freq_(freq),
        weight_(std::move(weight)),
        qopt_(qopt),
        abs_tol_(abs_tol) {}

  Estimate<Real> run() { return level(0, 0); }

 private:
  // Initial panels: the whole slice, cut every few periods of the cosine
  // weight and at the kink of the max norm. Adaptivity does the rest.
  std::vector<Real> breakpoints(int i, Real upper, Real rest) const {
    std::vector<Real> bp{0};
    if (freq_[i] > 0.0) {
      const Real periods = qopt_.points >= 61 ? 3 : 1;
      const Real width = periods * 2 * std::numbers::pi_v<Real> / static_cast<Real>(freq_[i]);
      for (Real x = width; x < upper; x += width) bp.push_back(x);
    }
    if (rho_.is_max() && rest > 0 && rest < upper) bp.push_back(rest);
    bp.push_back(upper);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return bp;
  }

  Estimate<Real> level(int i, long double rest) {
    // Inner levels get a tighter tolerance so that their accumulated error
    // leaves room for the outer rule. The absolute part keeps far-out slices,
    // which carry almost no mass, from being resolved to full relative accuracy.
    QuadratureOptions q = qopt_;
    q.l1_rel_tol = qopt_.l1_rel_tol * std::pow(3.0, i - (n_ - 1));
    q.abs_tol = abs_tol_ / std::pow(3.0 * ball_, i);
    const long double upper = rho_.slice_radius(static_cast<long double>(ball_), rest);
    if (!(upper > 0)) return {};
    const std::vector<Real> bp = breakpoints(i, static_cast<Real>(upper), static_cast<Real>(rest));
    if (i == n_ - 1) {
      auto f = [&](Real yi) -> Real {
        y_[i] = yi;
        const Real r = rho_(std::span<const Real>(y_.data(), static_cast<std::size_t>(n_)));
        const Real phi = static_cast<Real>(gen_.radial(static_cast<long double>(r * inv_sqrt_scale_)));
        return phi == 0 ? Real(0) : phi * weight_(y_);
      };
      return integrate<Real>(f, std::span<const Real>(bp), q);
    }
    auto f = [&](Real yi) -> Estimate<Real> {
      y_[i] = yi;
      return level(i + 1, rho_.accumulate(rest, yi));
    };
    return integrate<Real>(f, std::span<const Real>(bp), q);
  }

  const Generator& gen_;
  const HomogeneousNorm& rho_;
  int n_;
  Real inv_sqrt_scale_;
  double ball_;
  double length_;
  std::array<double, 3> freq_;
  Weight weight_;
  QuadratureOptions qopt_;
  double abs_tol_;
  std::array<Real, 3> y_{};
};

// make_weight yields the weight in the requested precision; make_magnitude
// a nonnegative, non-oscillating bound on it, used for the coarse pass that
// fixes the absolute tolerance.
template <class Real, class WeightFactory, class MagnitudeFactory>
Estimate<double> orthant(const Generator& gen, const HomogeneousNorm& rho, int n, double scale, int extra_power,
                         std::array<double, 3> freq, const TransformOptions& opt, WeightFactory make_weight,
                         MagnitudeFactory make_magnitude) {
  if (n < 1 || n > 3) throw std::invalid_argument("tensor-product transforms support n = 1, 2, 3");
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  const Resolved res = resolve(gen, opt);
  const Ball ball = truncation_ball(gen, n, extra_power, scale, res.tail_rel_tol);
  QuadratureOptions q;
  q.rel_tol = 0.0;
  q.l1_rel_tol = res.l1_rel_tol;
  q.max_panels = opt.max_panels;
  q.points = std::is_same_v<Real, long double> ? 61 : 21;

  QuadratureOptions coarse;
  coarse.rel_tol = 0.0;
  coarse.l1_rel_tol = 1e-4;
  coarse.max_panels = 50;
  coarse.points = 21;
  OrthantIntegrator<double, decltype(make_magnitude.template operator()<double>())> mass(
      gen, rho, n, scale, ball.radius, {}, make_magnitude.template operator()<double>(), coarse);
  const double l1 = std::abs(mass.run().value);

  OrthantIntegrator<Real, decltype(make_weight.template operator()<Real>())> integ(
      gen, rho, n, scale, ball.radius, freq, make_weight.template operator()<Real>(), q, res.l1_rel_tol * l1);
  const Estimate<Real> e = integ.run();
  const double factor = std::exp2(n);
  Estimate<double> out;
  out.value = static_cast<double>(factor * e.value);
  out.error = static_cast<double>(factor * e.error) + ball.tail * gen.at_origin();
  out.l1 = static_cast<double>(factor * e.l1);
  out.converged = e.converged;
  return out;
}

}  // namespace

Estimate<double> fourier_Gn(const Generator& gen, const HomogeneousNorm& rho, int n, std::span<const double> v,
                            double scale, const TransformOptions& opt) {
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("fourier_Gn: frequency has wrong dimension");
  std::array<double, 3> freq{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) freq[i] = std::abs(v[i]);
  auto make = [&]<class Real>() {
    return [freq, n](const std::array<Real, 3>& y) {
      Real w = 1;
      for (int i = 0; i < n; ++i) {
        if (freq[i] != 0.0) w *= std::cos(y[i] * static_cast<Real>(freq[i]));
      }
      return w;
    };
  };
  auto unit = []<class Real>() { return [](const std::array<Real, 3>&) { return Real(1); }; };
  if (resolve(gen, opt).extended) return orthant<long double>(gen, rho, n, scale, 0, freq, opt, make, unit);
  return orthant<double>(gen, rho, n, scale, 0, freq, opt, make, unit);
}

Estimate<double> moment_alpha(const Generator& gen, const HomogeneousNorm& rho, int n, int k,
                              std::span<const double> v, const TransformOptions& opt) {
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("moment_alpha: direction has wrong dimension");
  if (k < 0) throw std::invalid_argument("moment_alpha: order must be nonnegative");
  std::array<double, 3> vv{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) vv[i] = v[i];
  // Average of (sum_i eps_i y_i v_i)^{2k} over sign patterns eps.
  auto make = [&]<class Real>() {
    return [vv, n, k](const std::array<Real, 3>& y) {
      Real sum = 0;
      const int patterns = 1 << n;
      for (int m = 0; m < patterns; ++m) {
        Real dot = 0;
        for (int i = 0; i < n; ++i) dot += ((m >> i) & 1 ? -1 : 1) * y[i] * static_cast<Real>(vv[i]);
        sum += std::pow(dot, 2 * k);
      }
      return sum / patterns;
    };
  };
  TransformOptions o = opt;
  if (o.precision == Precision::Automatic) o.precision = Precision::Double;
  if (resolve(gen, o).extended) return orthant<long double>(gen, rho, n, 1.0, 2 * k, {}, o, make, make);
  return orthant<double>(gen, rho, n, 1.0, 2 * k, {}, o, make, make);
}

Estimate<double> moment_beta_tensor(const Generator& gen, const HomogeneousNorm& rho, int n, int k,
                                    const TransformOptions& opt) {
  if (k < 0) throw std::invalid_argument("moment_beta_tensor: order must be nonnegative");
  auto make = [&]<class Real>() {
    return [n, k](const std::array<Real, 3>& y) {
      Real s = 0;
      for (int i = 0; i < n; ++i) s += y[i] * y[i];
      return std::pow(s, k);
    };
  };
  TransformOptions o = opt;
  if (o.precision == Precision::Automatic) o.precision = Precision::Double;
  if (resolve(gen, o).extended) return orthant<long double>(gen, rho, n, 1.0, 2 * k, {}, o, make, make);
  return orthant<double>(gen, rho, n, 1.0, 2 * k, {}, o, make, make);
}

Estimate<double> wynn_epsilon(std::span<const double> s) {
  const std::size_t m = s.size();
  if (m == 0) return {0.0, std::numeric_limits<double>::infinity(), 0.0, false};
  if (m < 3) return {s[m - 1], m == 2 ? std::abs(s[1] - s[0]) : std::numeric_limits<double>::infinity(), 0.0, false};
  // e_prev holds eps_{k-1}, e_cur eps_k; even columns are the estimates.
  std::vector<double> e_prev(m + 1, 0.0);
  std::vector<double> e_cur(s.begin(), s.end());
  double best = s[m - 1];
  double best_err = std::abs(s[m - 1] - s[m - 2]);
  double last_even = best;
  for (std::size_t k = 1; k < m; ++k) {
    std::vector<double> e_next(m - k);
    bool ok = true;
    for (std::size_t j = 0; j + k < m; ++j) {
      const double diff = e_cur[j + 1] - e_cur[j];
      if (diff == 0.0) {
        ok = false;
        break;
      }
      e_next[j] = e_prev[j + 1] + 1.0 / diff;
    }
    if (!ok) break;
    if (k % 2 == 0) {
      const double est = e_next.back();
      const double err = std::abs(est - last_even);
      if (err < best_err) {
        best = est;
        best_err = err;
      }
      last_even = est;
    }
    e_prev = std::move(e_cur);
    e_cur = std::move(e_next);
  }
  return {best, best_err, 0.0, true};
}

Estimate<double> hankel_gn_at(const Generator& gen, int n, double s) {
  if (n < 1) throw std::invalid_argument("hankel_gn: dimension must be positive");
  if (!(s >= 0.0)) throw std::invalid_argument("hankel_gn: frequency must be nonnegative");
  const double lambda = 0.5 * n - 1.0;
  auto f = [&](double u) {
    const double phi = static_cast<double>(gen.radial(u));
    if (phi == 0.0) return 0.0;
    return phi * std::pow(u, n - 1) * bessel_j_norm(lambda, s * u);
  };
  QuadratureOptions q;
  q.rel_tol = 1e-12;
  q.l1_rel_tol = 1e-13;
  q.max_panels = 4000;

  double support;
  double tail = 0.0;
  if (gen.is_compact()) {
    support = gen.support_radius();
  } else {
    auto envelope = [&](double u) { return static_cast<double>(gen.radial(u)) * std::pow(u, n - 1); };
    const RadialCutoff cut = find_radial_cutoff(envelope, gen.length_scale(), 1e-14, TailRule::TailMass);
    support = cut.radius;
    tail = cut.tail_estimate * bessel_j_norm(lambda, 0.0);
  }

  std::vector<double> bp = geometric_breakpoints(gen.length_scale(), support);
  if (s * support <= 20.0) {
    Estimate<double> e = integrate<double>(f, std::span<const double>(bp), q);
    e.error += tail;
    return e;
  }

  constexpr std::size_t kMaxZeros = 3000;
  constexpr std::size_t kTerms = 40;
  std::vector<double> zeros = bessel_zeros_below(lambda, s * support, kMaxZeros + kTerms);
  for (double& z : zeros) z /= s;
  if (zeros.size() < kMaxZeros + kTerms) {
    bp.insert(bp.end(), zeros.begin(), zeros.end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    q.max_panels = static_cast<int>(bp.size()) + 4000;
    Estimate<double> e = integrate<double>(f, std::span<const double>(bp), q);
    e.error += tail;
    return e;
  }

  // Long oscillatory tail: integrate to the kMaxZeros-th zero directly, then
  // extrapolate the partial sums over further half-waves.
  const double head_end = zeros[kMaxZeros - 1];
  std::vector<double> head_bp;
  for (double b : bp) {
    if (b < head_end) head_bp.push_back(b);
  }
  head_bp.insert(head_bp.end(), zeros.begin(), zeros.begin() + kMaxZeros);
  std::sort(head_bp.begin(), head_bp.end());
  head_bp.erase(std::unique(head_bp.begin(), head_bp.end()), head_bp.end());
  q.max_panels = static_cast<int>(head_bp.size()) + 4000;
  Estimate<double> head = integrate<double>(f, std::span<const double>(head_bp), q);

  std::vector<double> partial{head.value};
  double extra_err = 0.0;
  for (std::size_t j = kMaxZeros - 1; j + 1 < zeros.size() && partial.size() < kTerms; ++j) {
    const Estimate<double> piece = integrate<double>(f, zeros[j], zeros[j + 1], q);
    partial.push_back(partial.back() + piece.value);
    extra_err += piece.error;
  }
  const Estimate<double> lim = wynn_epsilon(partial);
  return {lim.value, head.error + extra_err + lim.error, head.l1, head.converged && lim.converged};
}

}  // namespace stcov
