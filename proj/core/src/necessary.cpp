#include "stcov/necessary.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "stcov/error.hpp"
#include "stcov/quadrature.hpp"

namespace stcov {

std::string to_string(Overall o) { return o == Overall::Consistent ? "CONSISTENT" : "VIOLATED"; }

namespace {

// Whether the integral of |phi(u^2)| u^power over [0, inf) is finite.
bool integrable(const Generator& gen, int power) {
  if (gen.is_compact()) return true;
  auto f = [&](double u) { return static_cast<double>(gen.radial(u)) * std::pow(u, power); };
  try {
    const RadialCutoff c = find_radial_cutoff(f, gen.length_scale(), 1e-14, TailRule::TailMass);
    return c.reached || c.decay_exponent < -1.0;
  } catch (const NonConvergenceError&) {
    return false;
  }
}

std::string fmt(const char* label, double x) {
  std::ostringstream os;
  os.precision(6);
  os << label << x;
  return os.str();
}

std::vector<double> restrict_unit(const std::vector<double>& v, int m) {
  std::vector<double> r(v.begin(), v.begin() + std::min<std::ptrdiff_t>(m, static_cast<std::ptrdiff_t>(v.size())));
  r.resize(static_cast<std::size_t>(m), 0.0);
  double n = 0.0;
  for (double x : r) n += x * x;
  n = std::sqrt(n);
  if (n == 0.0) {
    r[0] = 1.0;
    return r;
  }
  for (double& x : r) x /= n;
  return r;
}

MonotoneCheck monotone_check(const Generator& gen, const HomogeneousNorm& rho, int d, int m,
                             const std::vector<double>& v, const std::vector<double>& grid) {
  MonotoneCheck mc;
  mc.m = m;
  mc.v = v;
  TransformOptions opt;
  opt.precision = Precision::Double;
  SpectralCurve ray = spectral_along_ray(gen, rho, m, v, grid, opt);
  mc.curve.kind = CurveKind::Fmv;
  mc.curve.n = m;
  mc.curve.direction = ray.direction;
  for (const SpectralSample& p : ray.samples) {
    const double w = std::pow(p.s, m - d);
    mc.curve.samples.push_back({p.s, w * p.value, w * p.error, p.flagged});
  }
  const auto& s = mc.curve.samples;
  mc.verdict = Verdict::Pass;
  mc.min_value = s.empty() ? 0.0 : s[0].value;
  for (std::size_t i = 0; i < s.size(); ++i) {
    mc.min_value = std::min(mc.min_value, s[i].value);
    if (s[i].value < -10.0 * s[i].error) {
      mc.verdict = Verdict::Fail;
      if (mc.note.empty()) mc.note = fmt("negative value at s = ", s[i].s);
    }
    if (i + 1 < s.size()) {
      const double inc = s[i + 1].value - s[i].value;
      const double floor = 10.0 * (s[i].error + s[i + 1].error);
      if (inc > floor) {
        mc.verdict = Verdict::Fail;
        if (inc > mc.worst_increase) {
          mc.worst_increase = inc;
          mc.worst_s = s[i + 1].s;
        }
      }
    }
  }
  return mc;
}

}  // namespace

NecessaryConditionReport check_necessary(const SpaceTimeKernel& kernel, const NecessaryOptions& opt) {
  NecessaryConditionReport rep;
  const Generator& gen = kernel.generator();
  const HomogeneousNorm& rho = kernel.norm();
  const TemporalStructure& h = kernel.temporal();
  const int d = kernel.d();
  const bool euclid = rho.is_euclidean();

  rep.vacuous = h.is_constant();
  if (rep.vacuous) rep.notes.push_back("h is constant: the necessary conditions are vacuous");

  std::vector<int> m_list = opt.m_list;
  if (m_list.empty()) {
    for (int m = 1; m <= (euclid ? d : std::min(d, 3)); ++m) m_list.push_back(m);
  }
  std::vector<std::vector<double>> v_samples = opt.v_samples;
  if (v_samples.empty()) {
    std::vector<double> axis(static_cast<std::size_t>(d), 0.0);
    axis[0] = 1.0;
    v_samples.push_back(axis);
    if (d > 1) {
      v_samples.push_back(std::vector<double>(static_cast<std::size_t>(d), 1.0 / std::sqrt(double(d))));
    }
  }
  for (auto& v : v_samples) v = restrict_unit(v, d);
  // Tensor-product transforms get expensive at high frequency, so general
  // norms default to a shorter grid.
  const std::vector<double> grid =
      !opt.s_grid.empty() ? opt.s_grid : (euclid ? log_grid(1e-2, 1e2, 64) : log_grid(1e-2, 20.0, 32));

  // f_{m,v} decreasing.
  for (int m : m_list) {
    if (m < 1 || m > d) throw std::invalid_argument("check_necessary: m must lie in [1, d]");
    if (!euclid && m > 3) {
      rep.notes.push_back("m = " + std::to_string(m) + " skipped: non-Euclidean transforms need m <= 3");
      continue;
    }
    if (!integrable(gen, m - 1)) {
      rep.notes.push_back("m = " + std::to_string(m) + " skipped: phi(u^2) u^(m-1) is not integrable");
      continue;
    }
    // For Euclidean rho G_m(s v) does not depend on the direction of v.
    const std::size_t nv = euclid ? 1 : v_samples.size();
    for (std::size_t j = 0; j < nv; ++j) {
      MonotoneCheck mc = monotone_check(gen, rho, d, m, restrict_unit(v_samples[j], m), grid);
      if (mc.verdict == Verdict::Fail) {
        rep.violations.push_back("f_{" + std::to_string(m) + ",v} is not decreasing and nonnegative" +
                                 fmt(" (worst increase ", mc.worst_increase) + fmt(" at s = ", mc.worst_s) +
                                 fmt(", min value ", mc.min_value) + ")");
      }
      rep.monotone_f.push_back(std::move(mc));
    }
  }

  // G_d(0) > 0 and strict decrease of G_d(s v).
  if (integrable(gen, d - 1) && (euclid || d <= 3)) {
    if (euclid) {
      const Estimate<double> g0 = hankel_gn_at(gen, d, 0.0);
      const double f = std::pow(2.0 * std::numbers::pi, 0.5 * d);
      rep.gd0_value = f * g0.value;
      rep.gd0_error = f * g0.error;
    } else {
      TransformOptions o;
      o.precision = Precision::Double;
      const std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
      const Estimate<double> g0 = fourier_Gn(gen, rho, d, zero, 1.0, o);
      rep.gd0_value = g0.value;
      rep.gd0_error = g0.error;
    }
    rep.gd0_positive = rep.gd0_value > 10.0 * rep.gd0_error;
    if (!rep.gd0_positive) rep.violations.push_back(fmt("G_d(0) is not positive: ", rep.gd0_value));

    rep.strict_decrease = Verdict::Inconclusive;
    if (gen.analytic_transform()) {
      bool any = false;
      bool ok = true;
      for (const MonotoneCheck& mc : rep.monotone_f) {
        if (mc.m != d) continue;
        any = true;
        const auto& s = mc.curve.samples;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
          if (s[i].value > 10.0 * s[i].error && !(s[i + 1].value < s[i].value)) ok = false;
          if (s[i].value <= 10.0 * s[i].error) break;
        }
      }
      if (any) rep.strict_decrease = ok ? Verdict::Pass : Verdict::Fail;
    }
  } else {
    rep.notes.push_back("G_d(0) not checked: phi(u^2) u^(d-1) is not integrable or d > 3 for this norm");
  }

  // Moments alpha_k, beta_k and the exponent q.
  for (int k = 1; k <= opt.k_max; ++k) {
    if (!integrable(gen, d + 2 * k - 1)) {
      rep.notes.push_back("moments stop at k = " + std::to_string(k - 1) + ": phi(u^2) u^(d+2k-1) is not integrable");
      break;
    }
    if (!euclid && d > 3) {
      rep.notes.push_back("moments skipped: non-Euclidean quadrature needs d <= 3");
      break;
    }
    MomentRow row;
    row.k = k;
    if (euclid) {
      const MomentValue b = moment_beta(gen, d, k);
      row.beta = b.value;
      row.beta_error = b.abs_error_estimate;
    } else {
      const Estimate<double> b = moment_beta_tensor(gen, rho, d, k);
      row.beta = b.value;
      row.beta_error = b.error;
    }
    if (d <= 3) {
      for (const auto& v : v_samples) {
        const Estimate<double> a = moment_alpha(gen, rho, d, k, v);
        row.alpha.push_back(a.value);
        row.alpha_error.push_back(a.error);
      }
    }
    rep.moments.push_back(row);
    if (!rep.q && std::abs(row.beta) > std::max(10.0 * row.beta_error, 1e-10)) rep.q = k;
  }
  if (!rep.moments.empty()) {
    const MomentRow& first = rep.moments.front();
    if (first.beta < -10.0 * first.beta_error) {
      rep.moment_signs_ok = false;
      rep.violations.push_back(fmt("beta_1 is negative: ", first.beta));
    }
    for (std::size_t j = 0; j < first.alpha.size(); ++j) {
      if (first.alpha[j] < -10.0 * first.alpha_error[j]) {
        rep.moment_signs_ok = false;
        rep.violations.push_back(fmt("alpha_1(v) is negative: ", first.alpha[j]));
      }
    }
  }
  if (rep.q) {
    const MomentRow& row = rep.moments[static_cast<std::size_t>(*rep.q - 1)];
    const double sign = (*rep.q % 2 == 0) ? 1.0 : -1.0;
    if (!(sign * row.beta < 0.0)) {
      rep.moment_signs_ok = false;
      rep.violations.push_back("(-1)^q beta_q is not negative for q = " + std::to_string(*rep.q));
    }
    for (std::size_t j = 0; j < row.alpha.size(); ++j) {
      if (sign * row.alpha[j] > 10.0 * row.alpha_error[j]) {
        rep.moment_signs_ok = false;
        rep.violations.push_back("(-1)^q alpha_q(v) is positive for q = " + std::to_string(*rep.q));
      }
    }
  } else if (!rep.moments.empty()) {
    rep.notes.push_back("no nonvanishing beta_k found up to k_max");
  }

  // h(t) >= h(0) and exp(-lambda h^q) positive definite.
  {
    const double h0 = h.at_origin();
    SearchBudget probe = opt.budget;
    probe.refine_steps = 0;
    for (const TimeConfig& cfg : default_configs(h.l(), opt.seed, probe)) {
      for (Eigen::Index r = 0; r < cfg.points.rows(); ++r) {
        std::vector<double> t(static_cast<std::size_t>(h.l()));
        for (int c = 0; c < h.l(); ++c) t[c] = cfg.points(r, c);
        if (h(t) < h0 * (1.0 - 1e-12)) rep.h_minimal_at_origin = false;
      }
    }
    if (!rep.h_minimal_at_origin) rep.violations.push_back("h(t) < h(0) for some sampled t");
  }
  if (rep.q && !rep.vacuous) {
    rep.exp_hq_pd = check_exp_pd(h.raised_to(*rep.q), opt.lambdas, opt.seed, opt.budget);
    if (rep.exp_hq_pd.verdict == Verdict::Fail) {
      rep.violations.push_back("exp(-lambda h^q) is not positive definite for q = " + std::to_string(*rep.q));
    }
  } else {
    rep.exp_hq_pd.lambda_grid = opt.lambdas;
  }

  rep.overall = (!rep.violations.empty() && !rep.vacuous) ? Overall::Violated : Overall::Consistent;
  return rep;
}

}  // namespace stcov
