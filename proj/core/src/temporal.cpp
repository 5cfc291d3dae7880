#include "stcov/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "stcov/error.hpp"

namespace stcov {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double squared_norm(std::span<const double> t) {
  double s = 0.0;
  for (double v : t) s += v * v;
  return s;
}

}  // namespace

TemporalStructure TemporalStructure::pnorm_power(int l, double p, double alpha, double c) {
  require(l >= 1, "temporal dimension must be positive");
  require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be nonnegative");
  require(c > 0.0, "c must be positive so that h > 0");
  TemporalStructure h;
  h.family_ = TemporalFamily::PNormPower;
  h.l_ = l;
  h.norm_ = HomogeneousNorm(p);
  h.alpha_ = alpha;
  h.c_ = c;
  return h;
}

TemporalStructure TemporalStructure::bernstein(int l, BernsteinKind kind, double a, double b, double scale) {
  require(l >= 1, "temporal dimension must be positive");
  require(a > 0.0 && a <= 1.0, "Bernstein composite needs 0 < a <= 1");
  require(scale > 0.0, "Bernstein composite needs scale > 0");
  if (kind == BernsteinKind::Power) require(b > 0.0 && b <= 1.0, "Bernstein power needs 0 < b <= 1");
  TemporalStructure h;
  h.family_ = TemporalFamily::BernsteinComposite;
  h.l_ = l;
  h.kind_ = kind;
  h.a_ = a;
  h.b_ = b;
  h.scale_ = scale;
  return h;
}

TemporalStructure TemporalStructure::variogram(int l, const Generator& g, double c) {
  require(l >= 1, "temporal dimension must be positive");
  require(c > 0.0, "c must be positive so that h > 0");
  TemporalStructure h;
  h.family_ = TemporalFamily::VariogramDerived;
  h.l_ = l;
  h.gen_ = g;
  h.c_ = c;
  return h;
}

TemporalStructure TemporalStructure::constant(int l, double c) {
  require(l >= 1, "temporal dimension must be positive");
  require(c > 0.0, "c must be positive");
  TemporalStructure h;
  h.family_ = TemporalFamily::Constant;
  h.l_ = l;
  h.c_ = c;
  return h;
}

std::string TemporalStructure::name() const {
  switch (family_) {
    case TemporalFamily::PNormPower: return "pnorm_power";
    case TemporalFamily::BernsteinComposite: return "bernstein";
    case TemporalFamily::VariogramDerived: return "variogram";
    case TemporalFamily::Constant: return "constant";
  }
  return "unknown";
}

TemporalStructure TemporalStructure::raised_to(double q) const {
  require(q > 0.0, "exponent must be positive");
  TemporalStructure h = *this;
  h.power_ *= q;
  return h;
}

double TemporalStructure::operator()(std::span<const double> t) const {
  if (static_cast<int>(t.size()) != l_) throw std::invalid_argument("time point has wrong dimension");
  double v = 0.0;
  switch (family_) {
    case TemporalFamily::PNormPower: {
      const double r = norm_(t);
      v = (alpha_ == 0.0 ? 1.0 : std::pow(r, alpha_)) + c_;
      break;
    }
    case TemporalFamily::BernsteinComposite: {
      const double x = std::pow(squared_norm(t) / scale_, a_);
      v = kind_ == BernsteinKind::Power ? std::pow(1.0 + x, b_) : std::log(std::numbers::e + x);
      break;
    }
    case TemporalFamily::VariogramDerived: {
      const Generator& g = *gen_;
      v = g.at_origin() - g(squared_norm(t)) + c_;
      break;
    }
    case TemporalFamily::Constant:
      v = c_;
      break;
  }
  return power_ == 1.0 ? v : std::pow(v, power_);
}

double TemporalStructure::at_origin() const {
  const std::vector<double> zero(static_cast<std::size_t>(l_), 0.0);
  return (*this)(zero);
}

Validity TemporalStructure::classify() const {
  switch (family_) {
    case TemporalFamily::Constant:
      return Validity::Valid;
    case TemporalFamily::PNormPower:
      if (alpha_ == 0.0) return Validity::Valid;
      if (power_ != 1.0) return Validity::Unknown;
      return alpha_ <= stable_exponent_threshold(l_, norm_.p()) ? Validity::Valid : Validity::Invalid;
    case TemporalFamily::BernsteinComposite:
      return power_ == 1.0 ? Validity::Valid : Validity::Unknown;
    case TemporalFamily::VariogramDerived:
      // g(||t||^2) is positive definite on every R^l when g is CM.
      return power_ == 1.0 && gen_->is_completely_monotone() ? Validity::Valid : Validity::Unknown;
  }
  return Validity::Unknown;
}

double stable_exponent_threshold(int n, double p) {
  require(n >= 1, "dimension must be positive");
  require(p > 0.0, "p must be positive");
  if (n == 1) return 2.0;
  if (p <= 2.0) return p;
  return n == 2 ? 1.0 : 0.0;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::vector<TimeConfig> default_configs(int l, std::uint64_t seed, const SearchBudget& budget) {
  std::vector<TimeConfig> configs;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  constexpr double kRanges[] = {1.0, 10.0, 100.0};
  for (int i = 0; i < budget.random_configs; ++i) {
    const double R = kRanges[i % 3];
    Eigen::MatrixXd pts(budget.random_size, l);
    for (int r = 0; r < pts.rows(); ++r)
      for (int c = 0; c < l; ++c) pts(r, c) = R * unit(rng);
    configs.push_back({std::move(pts), true});
  }
  if (budget.lattices) {
    const int per_axis = l == 1 ? 40 : (l == 2 ? 8 : (l == 3 ? 5 : 3));
    int count = 1;
    for (int c = 0; c < l; ++c) count *= per_axis;
    for (double spacing : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0}) {
      Eigen::MatrixXd pts(count, l);
      for (int r = 0; r < count; ++r) {
        int idx = r;
        for (int c = 0; c < l; ++c) {
          pts(r, c) = spacing * (idx % per_axis);
          idx /= per_axis;
        }
      }
      configs.push_back({std::move(pts), false});
    }
  }
  return configs;
}

namespace {

struct GramResult {
  double min_eig;
  double scale;
};

GramResult gram_min_eig(const TemporalStructure& h, const Eigen::MatrixXd& pts, double lambda) {
  const Eigen::Index n = pts.rows();
  const int l = static_cast<int>(pts.cols());
  Eigen::MatrixXd G(n, n);
  std::vector<double> diff(static_cast<std::size_t>(l));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      for (int c = 0; c < l; ++c) diff[c] = pts(i, c) - pts(j, c);
      G(i, j) = G(j, i) = std::exp(-lambda * h(diff));
    }
  }
  const double scale = G.diagonal().maxCoeff();
  if (n == 1) return {G(0, 0), scale};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  if (es.info() == Eigen::Success) return {es.eigenvalues()(0), scale};
  // The tridiagonal QR occasionally stalls on highly regular lattices.
  Eigen::EigenSolver<Eigen::MatrixXd> general(G, false);
  if (general.info() != Eigen::Success) throw NonConvergenceError("eigenvalue computation did not converge");
  return {general.eigenvalues().real().minCoeff(), scale};
}

constexpr double kFailTol = 1e-8;

}  // namespace

PermissibilityVerdict check_exp_pd(const TemporalStructure& h, std::span<const double> lambdas,
                                   const std::vector<TimeConfig>& configs, std::uint64_t seed, int refine_steps) {
  if (configs.empty()) throw std::invalid_argument("check_exp_pd: no configurations");
  if (lambdas.empty()) throw std::invalid_argument("check_exp_pd: no lambda values");
  PermissibilityVerdict out;
  out.lambda_grid.assign(lambdas.begin(), lambdas.end());
  out.worst_relative_eigenvalue = std::numeric_limits<double>::infinity();

  const TimeConfig* worst_cfg = nullptr;
  double worst_lambda = 0.0;
  for (const TimeConfig& cfg : configs) {
    if (cfg.points.cols() != h.l()) throw std::invalid_argument("check_exp_pd: configuration has wrong dimension");
    for (double lambda : lambdas) {
      if (!(lambda > 0.0)) throw std::invalid_argument("check_exp_pd: lambda must be positive");
      const GramResult g = gram_min_eig(h, cfg.points, lambda);
      const double rel = g.min_eig / g.scale;
      if (rel < out.worst_relative_eigenvalue) {
        out.worst_relative_eigenvalue = rel;
        worst_cfg = &cfg;
        worst_lambda = lambda;
      }
      if (g.min_eig < -kFailTol * g.scale) {
        out.verdict = Verdict::Fail;
        out.witness = PermissibilityWitness{cfg.points, lambda, g.min_eig, g.scale};
        ++out.configs_tested;
        return out;
      }
    }
    ++out.configs_tested;
    if (cfg.random && cfg.points.rows() >= 20) ++out.random_configs_tested;
  }

  // Hill climb on the worst configuration: move one point at a time and
  // keep moves that lower the smallest eigenvalue.
  if (refine_steps > 0 && worst_cfg != nullptr && worst_cfg->points.rows() >= 2) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    Eigen::MatrixXd pts = worst_cfg->points;
    const double spread = std::max(1e-3, (pts.rowwise() - pts.colwise().mean()).cwiseAbs().maxCoeff());
    std::normal_distribution<double> step(0.0, 0.05 * spread);
    std::uniform_int_distribution<Eigen::Index> pick(0, pts.rows() - 1);
    GramResult best = gram_min_eig(h, pts, worst_lambda);
    for (int s = 0; s < refine_steps; ++s) {
      Eigen::MatrixXd trial = pts;
      const Eigen::Index r = pick(rng);
      for (Eigen::Index c = 0; c < trial.cols(); ++c) trial(r, c) += step(rng);
      const GramResult g = gram_min_eig(h, trial, worst_lambda);
      if (g.min_eig / g.scale < best.min_eig / best.scale) {
        pts = trial;
        best = g;
        out.worst_relative_eigenvalue = std::min(out.worst_relative_eigenvalue, g.min_eig / g.scale);
        if (g.min_eig < -kFailTol * g.scale) {
          out.verdict = Verdict::Fail;
          out.witness = PermissibilityWitness{pts, worst_lambda, g.min_eig, g.scale};
          return out;
        }
      }
    }
  }

  out.verdict = out.random_configs_tested >= 50 ? Verdict::Pass : Verdict::Inconclusive;
  return out;
}

PermissibilityVerdict check_exp_pd(const TemporalStructure& h, std::span<const double> lambdas, std::uint64_t seed,
                                   const SearchBudget& budget) {
  return check_exp_pd(h, lambdas, default_configs(h.l(), seed, budget), seed, budget.refine_steps);
}

}  // namespace stcov
