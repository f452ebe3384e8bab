#include "sheetlab/wiener.hpp"

#include <cmath>
#include <stdexcept>

#include "sheetlab/errors.hpp"
#include "sheetlab/mc.hpp"

namespace sheetlab {

std::vector<double> covariance(const FddSpec& spec) {
  if (spec.points.empty()) throw std::invalid_argument("fdd spec needs at least one point");
  for (const Point& t : spec.points) {
    if (t.dim() != spec.f.dim()) throw std::invalid_argument("point dimension mismatch");
    if (!t.leq(spec.f.box())) throw std::invalid_argument("points must lie inside the box");
  }
  const std::size_t k = spec.points.size();
  std::vector<double> cov(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const Point m = meet(spec.points[i], spec.points[j]);
      const double norm = spec.f.restrict_to(Rect::box_to(m)).lp_norm(2.0);
      cov[i * k + j] = cov[j * k + i] = norm * norm;
    }
  }
  return cov;
}

double limit_moment(int m, double sigma2) {
  if (m < 2 || m % 2 != 0) throw std::domain_error("limit_moment requires even m >= 2");
  if (sigma2 < 0.0) throw std::domain_error("sigma2 must be >= 0");
  // m! / (2^{m/2} (m/2)!) accumulated as the product of the odd factors.
  double c = 1.0;
  for (int j = 3; j < m; j += 2) c *= static_cast<double>(j);
  return c * pow_int(sigma2, m / 2);
}

namespace {

// Lower Cholesky of a PSD matrix; zero pivots (within tolerance) produce zero
// columns. Returns false when a pivot is genuinely negative or a zero pivot
// has inconsistent off-diagonals.
bool try_cholesky(const std::vector<double>& a, std::size_t k, std::vector<double>& l) {
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(a[i * k + i]));
  const double zero_tol = 1e-12 * scale;
  l.assign(k * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double pivot = a[j * k + j];
    for (std::size_t m = 0; m < j; ++m) pivot -= l[j * k + m] * l[j * k + m];
    if (pivot < -zero_tol) return false;
    if (pivot <= zero_tol) {
      for (std::size_t i = j + 1; i < k; ++i) {
        double num = a[i * k + j];
        for (std::size_t m = 0; m < j; ++m) num -= l[i * k + m] * l[j * k + m];
        if (std::abs(num) > 1e-7 * scale + 1e-300) return false;
      }
      continue;  // column stays zero
    }
    const double root = std::sqrt(pivot);
    l[j * k + j] = root;
    for (std::size_t i = j + 1; i < k; ++i) {
      double num = a[i * k + j];
      for (std::size_t m = 0; m < j; ++m) num -= l[i * k + m] * l[j * k + m];
      l[i * k + j] = num / root;
    }
  }
  return true;
}

}  // namespace

FddSampler::FddSampler(FddSpec spec) : spec_(std::move(spec)) {
  cov_ = covariance(spec_);
  k_ = spec_.points.size();
  double trace = 0.0;
  for (std::size_t i = 0; i < k_; ++i) trace += cov_[i * k_ + i];

  const double ladder[] = {0.0, 1e-14, 1e-12, 1e-10};
  std::vector<double> jittered(cov_.size());
  for (double eps : ladder) {
    jittered = cov_;
    const double bump = eps * trace / static_cast<double>(k_);
    for (std::size_t i = 0; i < k_; ++i) jittered[i * k_ + i] += bump;
    if (try_cholesky(jittered, k_, factor_)) {
      jitter_ = bump;
      return;
    }
  }
  throw numeric_error("covariance factorization failed after the jitter ladder");
}

std::vector<double> FddSampler::sample(const StreamKey& key, std::size_t reps,
                                       unsigned workers) const {
  std::vector<double> out(reps * k_);
  parallel_blocks(reps, workers, [&](std::size_t begin, std::size_t end, std::size_t block) {
    Rng rng(key, /*salt=*/block + 1);
    std::vector<double> z(k_);
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t j = 0; j < k_; ++j) z[j] = rng.normal();
      for (std::size_t i = 0; i < k_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += factor_[i * k_ + j] * z[j];
        out[r * k_ + i] = acc;
      }
    }
  });
  return out;
}

}  // namespace sheetlab
