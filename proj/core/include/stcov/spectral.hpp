#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stcov/generators.hpp"
#include "stcov/norms.hpp"
#include "stcov/temporal.hpp"
#include "stcov/transforms.hpp"

namespace stcov {

enum class CurveKind { HankelGn, FourierGnRay, Fmv };
std::string to_string(CurveKind k);

struct SpectralSample {
  double s = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool flagged = false;  // error estimate above 1e-6 |g_n(0)|
};

struct SpectralCurve {
  CurveKind kind = CurveKind::HankelGn;
  int n = 1;
  std::vector<double> direction;  // unit vector for ray curves
  std::vector<SpectralSample> samples;
};

/// g_n on an increasing grid of nonnegative s.
SpectralCurve hankel_gn(const Generator& gen, int n, std::span<const double> s_grid);

/// G_n(s v) along a ray. Euclidean rho goes through the Hankel transform;
/// other norms through the tensor-product quadrature (n <= 3).
SpectralCurve spectral_along_ray(const Generator& gen, const HomogeneousNorm& rho, int n,
                                 std::span<const double> direction, std::span<const double> s_grid,
                                 const TransformOptions& opt = {});

/// Uniform grid of count points on [0, s_max].
std::vector<double> uniform_grid(double s_max, int count);
/// count log-spaced points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

struct PdVerification {
  Verdict verdict = Verdict::Inconclusive;
  double reference = 0.0;  // g_n(0) or G_n(0)
  double min_value = 0.0;
  double min_s = 0.0;
  std::vector<double> min_direction;
  int flagged = 0;
  std::vector<SpectralCurve> curves;
};

/// Bochner check: PASS when the spectral density stays above
/// -tol * (its value at the origin) on the grid, FAIL otherwise.
PdVerification verify_pd_radial(const Generator& gen, const HomogeneousNorm& rho, int n, double s_max,
                                int n_samples, double tol = 1e-8);

struct LemmaCheck {
  double max_deviation = 0.0;
  double reference = 0.0;  // G_d(0)
  bool passed = false;
  struct Row {
    std::vector<double> t, v;
    double direct, scaled, deviation;
  };
  std::vector<Row> rows;
};

/// Compares the d-dimensional transform of x -> phi(rho(x)^2 / h(t)) with
/// h(t)^{d/2} G_d(sqrt(h(t)) v) for each (t, v) pair. Passes when the
/// largest deviation is at most 1e-6 G_d(0).
LemmaCheck lemma_consistency_test(const Generator& gen, const HomogeneousNorm& rho, const TemporalStructure& h,
                                  int d, const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs);

}  // namespace stcov
