#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stcov/gneiting.hpp"
#include "stcov/spectral.hpp"
#include "stcov/temporal.hpp"

namespace stcov {

struct MonotoneCheck {
  int m = 1;
  std::vector<double> v;  // unit vector in R^m
  Verdict verdict = Verdict::Inconclusive;
  double worst_increase = 0.0;  // largest f(s_{i+1}) - f(s_i) beyond the noise floor
  double worst_s = 0.0;
  double min_value = 0.0;
  std::string note;
  SpectralCurve curve;  // f_{m,v} on the grid
};

struct MomentRow {
  int k = 0;
  std::vector<double> alpha;  // alpha_k(v) per sampled direction (d <= 3)
  std::vector<double> alpha_error;
  double beta = 0.0;
  double beta_error = 0.0;
};

enum class Overall { Consistent, Violated };
std::string to_string(Overall o);

struct NecessaryConditionReport {
  std::vector<MonotoneCheck> monotone_f;
  bool gd0_positive = false;
  double gd0_value = 0.0;
  double gd0_error = 0.0;
  Verdict strict_decrease = Verdict::Inconclusive;  // advisory
  std::vector<MomentRow> moments;
  std::optional<int> q;
  bool moment_signs_ok = true;
  bool h_minimal_at_origin = true;
  PermissibilityVerdict exp_hq_pd;
  bool vacuous = false;  // h constant: the battery says nothing
  Overall overall = Overall::Consistent;
  std::vector<std::string> violations;
  std::vector<std::string> notes;
};

struct NecessaryOptions {
  std::vector<int> m_list;               // empty: 1..min(d, 3) for general norms, 1..d for Euclidean
  std::vector<std::vector<double>> v_samples;  // empty: axis and diagonal of R^d
  std::vector<double> s_grid;            // empty: 64 log points on [1e-2, 1e2]; 32 on [1e-2, 20] for general norms
  int k_max = 3;
  std::vector<double> lambdas{0.5, 1.0, 2.0, 4.0};
  std::uint64_t seed = 1;
  SearchBudget budget{};
};

/// Runs the necessary-condition battery for K to be positive definite:
/// f_{m,v}(s) = s^{m-d} G_m(s v) decreasing and nonnegative, G_d(0) > 0,
/// alpha_1, beta_1 >= 0, the sign of the first nonvanishing moment beta_q,
/// h(t) >= h(0), and positive definiteness of exp(-lambda h^q).
NecessaryConditionReport check_necessary(const SpaceTimeKernel& kernel, const NecessaryOptions& opt = {});

}  // namespace stcov
