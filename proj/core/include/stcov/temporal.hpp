#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stcov/generators.hpp"
#include "stcov/norms.hpp"

namespace stcov {

enum class TemporalFamily {
  PNormPower,          // ||t||_p^alpha + c
  BernsteinComposite,  // psi(||t||_2^2), psi Bernstein with psi(0) > 0
  VariogramDerived,    // g(0) - g(||t||_2^2) + c
  Constant,            // c
};

enum class BernsteinKind {
  Power,  // psi(s) = (1 + (s / scale)^a)^b, 0 < a, b <= 1
  Log,    // psi(s) = ln(e + (s / scale)^a), 0 < a <= 1
};

enum class Validity { Valid, Invalid, Unknown };

/// A strictly positive, even function h on R^l. Every instance may be raised
/// to a positive power q (h^q), which the necessary-condition battery needs.
class TemporalStructure {
 public:
  static TemporalStructure pnorm_power(int l, double p, double alpha, double c);
  static TemporalStructure bernstein(int l, BernsteinKind kind, double a, double b = 1.0, double scale = 1.0);
  static TemporalStructure variogram(int l, const Generator& g, double c);
  static TemporalStructure constant(int l, double c);

  TemporalFamily family() const { return family_; }
  int l() const { return l_; }
  double exponent() const { return power_; }
  std::string name() const;

  // Family parameters; meaningful only for the relevant family.
  double p() const { return norm_.p(); }
  double alpha() const { return alpha_; }
  double c() const { return c_; }
  BernsteinKind bernstein_kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double scale() const { return scale_; }
  const std::optional<Generator>& variogram_generator() const { return gen_; }

  TemporalStructure raised_to(double q) const;

  double operator()(std::span<const double> t) const;
  double at_origin() const;
  bool is_constant() const { return family_ == TemporalFamily::Constant || (family_ == TemporalFamily::PNormPower && alpha_ == 0.0); }

  /// Whether e^{-lambda h} is positive definite on R^l for every lambda > 0,
  /// as far as known in closed form.
  Validity classify() const;

 private:
  TemporalStructure() = default;

  TemporalFamily family_ = TemporalFamily::Constant;
  int l_ = 1;
  HomogeneousNorm norm_;
  double alpha_ = 0.0;
  double c_ = 1.0;
  BernsteinKind kind_ = BernsteinKind::Power;
  double a_ = 1.0;
  double b_ = 1.0;
  double scale_ = 1.0;
  std::optional<Generator> gen_;
  double power_ = 1.0;
};

/// Largest alpha with exp(-||t||_p^alpha) positive definite on R^n.
double stable_exponent_threshold(int n, double p);

/// A point configuration in R^l (one point per row).
struct TimeConfig {
  Eigen::MatrixXd points;
  bool random = false;  // drawn from the random law (counts towards PASS)
};

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct PermissibilityWitness {
  Eigen::MatrixXd points;
  double lambda = 0.0;
  double min_eigenvalue = 0.0;
  double scale = 0.0;  // largest diagonal entry
};

struct PermissibilityVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<PermissibilityWitness> witness;
  std::vector<double> lambda_grid;
  int configs_tested = 0;
  int random_configs_tested = 0;
  double worst_relative_eigenvalue = 0.0;
};

struct SearchBudget {
  int random_configs = 50;
  int random_size = 20;
  bool lattices = true;
  int refine_steps = 200;

  static SearchBudget none() { return {0, 0, false, 0}; }
};

/// Random configurations (uniform on [-R, R]^l, R cycled through 1, 10, 100)
/// followed by lattices with a range of spacings.
std::vector<TimeConfig> default_configs(int l, std::uint64_t seed, const SearchBudget& budget = {});

/// Gram-matrix test of e^{-lambda h}. FAIL when some matrix has an
/// eigenvalue below -1e-8 times its largest diagonal entry; PASS when none
/// does and at least 50 random configurations of size >= 20 were seen;
/// INCONCLUSIVE otherwise. When refine_steps > 0 the worst configuration is
/// additionally perturbed by a seeded hill climb before a PASS is issued.
PermissibilityVerdict check_exp_pd(const TemporalStructure& h, std::span<const double> lambdas,
                                   const std::vector<TimeConfig>& configs, std::uint64_t seed,
                                   int refine_steps = 0);

/// Same, over default_configs(h.l(), seed, budget).
PermissibilityVerdict check_exp_pd(const TemporalStructure& h, std::span<const double> lambdas, std::uint64_t seed,
                                   const SearchBudget& budget = {});

}  // namespace stcov
