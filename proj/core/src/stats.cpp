#include "sheetlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "sheetlab/errors.hpp"

namespace sheetlab {

namespace {

// mean of x^k over the sample, pairwise-summed.
double power_mean(std::span<const double> xs, int k) {
  std::vector<double> tmp(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) tmp[i] = pow_int(xs[i], k);
  return pairwise_mean(tmp);
}

}  // namespace

MomentReport empirical_moments(std::span<const double> samples, std::span<const int> ms,
                               double sigma2_target) {
  if (samples.size() < 100) throw std::domain_error("moment estimation requires reps >= 100");
  MomentReport report;
  report.reps = samples.size();
  report.sigma2_target = sigma2_target;
  const double r = static_cast<double>(samples.size());
  for (int m : ms) {
    if (m < 2 || m % 2 != 0) throw std::domain_error("moment orders must be even and >= 2");
    const double est = power_mean(samples, m);
    const double second = power_mean(samples, 2 * m);
    const double var = std::max(0.0, second - est * est);
    const double se = std::sqrt(var / r);
    const double target = limit_moment(m, sigma2_target);
    double z;
    if (se > 0.0) {
      z = (est - target) / se;
    } else {
      z = (est == target) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (target > 0.0 && se > 0.1 * target) report.se_warning = true;
    report.rows.push_back({m, est, se, target, z});
  }
  return report;
}

VarianceEstimate empirical_variance(std::span<const double> samples) {
  if (samples.size() < 2) throw std::domain_error("variance estimation requires reps >= 2");
  const double r = static_cast<double>(samples.size());
  const double mean = pairwise_mean(samples);
  std::vector<double> c2(samples.size()), c4(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - mean;
    c2[i] = d * d;
    c4[i] = c2[i] * c2[i];
  }
  const double variance = pairwise_mean(c2);
  const double mu4 = pairwise_mean(c4);
  const double se = std::sqrt(std::max(0.0, mu4 - variance * variance) / r);
  const double mean_se = std::sqrt(variance / r);
  return {mean, mean_se, variance, se};
}

const char* to_string(GofTest test) { return test == GofTest::ks ? "ks" : "ecf"; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  double acc = 0.0;
  for (int j = 1; j <= 128; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    acc += (j % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::min(1.0, 2.0 * acc);
}

double ks_critical(double level, std::size_t n) {
  if (level <= 0.0 || level >= 1.0) throw std::domain_error("level must lie in (0, 1)");
  if (n == 0) throw std::domain_error("empty sample");
  double lo = 0.2, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_tail(mid) > level)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

GofReport ks_test(std::span<const double> samples, double sigma2, double level) {
  if (sigma2 <= 0.0) throw std::domain_error("ks_test requires sigma2 > 0");
  if (samples.size() < 1000) throw std::domain_error("ks_test requires reps >= 1000");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw std::domain_error("degenerate sample");
  const double sigma = std::sqrt(sigma2);
  const double r = static_cast<double>(sorted.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i] / sigma);
    const double upper = (static_cast<double>(i) + 1.0) / r - cdf;
    const double lower = cdf - static_cast<double>(i) / r;
    stat = std::max(stat, std::max(upper, lower));
  }
  const double threshold = ks_critical(level, sorted.size());
  return {GofTest::ks, stat, threshold, level, stat > threshold, sorted.size()};
}

GofReport ecf_test(std::span<const double> samples, double sigma2, double level) {
  if (sigma2 <= 0.0) throw std::domain_error("ecf_test requires sigma2 > 0");
  if (samples.empty()) throw std::domain_error("empty sample");
  const double sigma = std::sqrt(sigma2);
  const double r = static_cast<double>(samples.size());
  double stat = 0.0;
  for (int j = 1; j <= 16; ++j) {
    const double w = 0.25 * static_cast<double>(j) / sigma;
    std::complex<double> acc{0.0, 0.0};
    for (double x : samples) acc += std::complex<double>(std::cos(w * x), std::sin(w * x));
    acc /= r;
    const double target = std::exp(-0.5 * w * w * sigma2);
    stat = std::max(stat, std::abs(acc - std::complex<double>(target, 0.0)));
  }
  // Conservative noise scale; diagnostic only.
  const double threshold = 3.0 / std::sqrt(r);
  return {GofTest::ecf, stat, threshold, level, stat > threshold, samples.size()};
}

CramerWoldCheck cramer_wold_check(KernelFamily family, const SimpleFunction& f,
                                  std::span<const Point> corners, std::span<const double> coeffs,
                                  int n, std::size_t reps, InnovationLaw law,
                                  const StreamKey& key, unsigned workers, double level,
                                  const Budgets& budgets) {
  if (corners.size() != coeffs.size())
    throw std::invalid_argument("corner and coefficient counts must match");
  if (corners.empty() || corners.size() > 8)
    throw std::invalid_argument("cramer_wold_check supports 1..8 corners");
  const SimpleFunction combo = multiply(f, indicator_combo(f.box(), coeffs, corners));
  const double norm = combo.lp_norm(2.0);
  const double variance = norm * norm;
  if (variance <= 0.0)
    throw std::domain_error("degenerate linear combination: limit variance is zero");
  const IntegralModel model{family, combo, n, law};
  const std::vector<double> samples = simulate_integrals(model, key, reps, workers, budgets);
  return {ks_test(samples, variance, level), variance};
}

BoundConstantReport bound_constant_scan(KernelFamily family, const SimpleFunction& g, double q,
                                        int m, std::span<const int> n_grid, std::size_t reps,
                                        InnovationLaw law, const StreamKey& key, unsigned workers,
                                        const Budgets& budgets) {
  if (q < 1.0) throw std::domain_error("bound scan requires q >= 1");
  if (m % 2 != 0 || static_cast<double>(m) <= 2.0 * q)
    throw std::domain_error("bound scan requires even m > 2q");
  if (n_grid.empty()) throw std::domain_error("bound scan requires a nonempty n grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw std::domain_error("n grid must be increasing");
  const double denom_norm = g.lp_norm(2.0 * q);
  if (denom_norm <= 0.0) throw std::domain_error("bound scan requires a nonzero integrand");
  const double denom = std::pow(denom_norm, static_cast<double>(m));

  BoundConstantReport report;
  report.q = q;
  report.m = m;
  report.reps = reps;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const IntegralModel model{family, g, n_grid[i], law};
    const StreamKey scan_key{key.master, key.replicate, key.substream + i};
    const std::vector<double> samples = simulate_integrals(model, scan_key, reps, workers, budgets);
    const double est = [&] {
      std::vector<double> tmp(samples.size());
      for (std::size_t s = 0; s < samples.size(); ++s) tmp[s] = pow_int(samples[s], m);
      return pairwise_mean(tmp);
    }();
    const double second = [&] {
      std::vector<double> tmp(samples.size());
      for (std::size_t s = 0; s < samples.size(); ++s) tmp[s] = pow_int(samples[s], 2 * m);
      return pairwise_mean(tmp);
    }();
    const double se = std::sqrt(std::max(0.0, second - est * est) / static_cast<double>(reps));
    report.rows.push_back({n_grid[i], est / denom, se / denom});
  }
  report.max_ratio = 0.0;
  for (const auto& row : report.rows) report.max_ratio = std::max(report.max_ratio, row.ratio);

  // Weighted least squares of log ratio on log n; SEs propagated through the
  // log transform.
  const std::size_t k = report.rows.size();
  if (k >= 2) {
    std::vector<double> x(k), y(k), var_y(k);
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = std::log(static_cast<double>(report.rows[i].n));
      y[i] = std::log(report.rows[i].ratio);
      const double rel = report.rows[i].se / report.rows[i].ratio;
      var_y[i] = rel * rel;
    }
    double xbar = 0.0;
    for (double v : x) xbar += v;
    xbar /= static_cast<double>(k);
    double sxx = 0.0;
    for (double v : x) sxx += (v - xbar) * (v - xbar);
    double slope = 0.0, var_slope = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double c = (x[i] - xbar) / sxx;
      slope += c * y[i];
      var_slope += c * c * var_y[i];
    }
    report.slope = slope;
    report.slope_se = std::sqrt(var_slope);
    report.slope_z = report.slope_se > 0.0 ? slope / report.slope_se : 0.0;
  }
  return report;
}

LatticeCovariance lattice_covariance_limit(std::span<const double> coeffs,
                                           std::span<const Point> corners, int n) {
  if (coeffs.size() != corners.size())
    throw std::invalid_argument("coefficient and corner counts must match");
  if (coeffs.empty()) throw std::invalid_argument("need at least one corner");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const std::size_t d = corners[0].dim();
  for (const Point& t : corners) {
    if (t.dim() != d) throw std::invalid_argument("corner dimension mismatch");
    if (!t.strictly_positive()) throw std::domain_error("corners must be strictly positive");
  }
  const double dn = static_cast<double>(n);
  double finite = 0.0, limit = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      double f = 1.0, l = 1.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double v = std::min(corners[i][a], corners[j][a]);
        f *= std::floor(dn * v) / dn;
        l *= v;
      }
      finite += coeffs[i] * coeffs[j] * f;
      limit += coeffs[i] * coeffs[j] * l;
    }
  }
  return {finite, limit};
}

}  // namespace sheetlab
