#pragma once

#include <span>
#include <vector>

#include "sheetlab/mc.hpp"
#include "sheetlab/wiener.hpp"

namespace sheetlab {

struct MomentRow {
  int m;
  double estimate;
  double se;      // delta-method standard error of the plug-in estimate
  double target;  // limit_moment(m, sigma2_target)
  double z;       // (estimate - target) / se
};

struct MomentReport {
  std::size_t reps = 0;
  double sigma2_target = 0.0;
  std::vector<MomentRow> rows;
  bool se_warning = false;  // some SE exceeds 10% of a positive target
};

/// Plug-in absolute-moment estimates for even orders, with delta-method SEs
/// and targets from limit_moment. Requires reps >= 100.
MomentReport empirical_moments(std::span<const double> samples, std::span<const int> ms,
                               double sigma2_target);

struct VarianceEstimate {
  double mean;
  double mean_se;
  double variance;
  double se;  // delta-method SE of the variance estimate
};
VarianceEstimate empirical_variance(std::span<const double> samples);

enum class GofTest { ks, ecf };
const char* to_string(GofTest test);

struct GofReport {
  GofTest test;
  double statistic;
  double threshold;
  double level;
  bool reject;  // statistic > threshold
  std::size_t sample_size;
};

double normal_cdf(double z);

/// Tail of the Kolmogorov distribution, 2 sum_j (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_tail(double x);

/// Asymptotic one-sample KS critical value at the given level: K_alpha/sqrt(n).
double ks_critical(double level, std::size_t n);

/// One-sample KS against the centered Gaussian with variance sigma2.
/// Requires sigma2 > 0, reps >= 1000 and a non-degenerate sample.
GofReport ks_test(std::span<const double> samples, double sigma2, double level = 0.01);

/// Empirical characteristic function distance to the centered Gaussian CF at
/// 16 fixed frequencies. Secondary diagnostic: reported, never gated.
GofReport ecf_test(std::span<const double> samples, double sigma2, double level = 0.01);

struct CramerWoldCheck {
  GofReport gof;
  double variance;  // exact variance of the linear combination under the limit
};

/// Simulates sum_j coeffs[j] X_n(corners[j]) via the combined integrand
/// f * sum_j coeffs[j] 1_{[0, corners[j]]} and KS-tests it against the exact
/// Gaussian limit. Requires k <= 8 corners and a nonzero limit variance.
CramerWoldCheck cramer_wold_check(KernelFamily family, const SimpleFunction& f,
                                  std::span<const Point> corners, std::span<const double> coeffs,
                                  int n, std::size_t reps, InnovationLaw law,
                                  const StreamKey& key, unsigned workers = 1,
                                  double level = 0.01, const Budgets& budgets = {});

struct BoundScanRow {
  int n;
  double ratio;  // moment estimate over ||g||_{2q}^m
  double se;
};

struct BoundConstantReport {
  double q = 1.0;
  int m = 4;
  std::size_t reps = 0;
  std::vector<BoundScanRow> rows;
  double max_ratio = 0.0;
  double slope = 0.0;     // least-squares slope of log ratio vs log n
  double slope_se = 0.0;  // propagated from the per-point SEs
  double slope_z = 0.0;
};

/// Scans the normalized m-th moment ratio across the n grid and fits the
/// log-log trend. Requires even m > 2q, an increasing n grid and a nonzero
/// integrand.
BoundConstantReport bound_constant_scan(KernelFamily family, const SimpleFunction& g, double q,
                                        int m, std::span<const int> n_grid, std::size_t reps,
                                        InnovationLaw law, const StreamKey& key,
                                        unsigned workers = 1, const Budgets& budgets = {});

struct LatticeCovariance {
  double finite_n;
  double limit;
};

/// Deterministic variance of the lattice linear combination
/// n^{-d} sum_{s <= [nT]} (sum_j coeffs[j] 1_{[0,[n t^j]]}(s))^2 and its limit
/// sum_{i,j} coeffs_i coeffs_j prod_l (t_l^i /\ t_l^j); both exact (the finite
/// sum factorizes per axis). Corners must be strictly positive.
LatticeCovariance lattice_covariance_limit(std::span<const double> coeffs,
                                           std::span<const Point> corners, int n);

}  // namespace sheetlab
