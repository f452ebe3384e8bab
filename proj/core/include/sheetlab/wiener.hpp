#pragma once

#include <vector>

#include "sheetlab/integrand.hpp"
#include "sheetlab/random_sources.hpp"

namespace sheetlab {

/// Finite-dimensional slice of the limit process X(t) = int_{[0,t]} f dW:
/// evaluation points t^1..t^k inside the box of f.
struct FddSpec {
  SimpleFunction f;
  std::vector<Point> points;
};

/// Exact k x k covariance, entry(i,j) = int_{[0, t^i /\ t^j]} f^2, row-major.
std::vector<double> covariance(const FddSpec& spec);

/// m-th absolute moment of a centered Gaussian with variance sigma2:
/// m! / (2^{m/2} (m/2)!) * sigma2^{m/2}, for even m >= 2.
double limit_moment(int m, double sigma2);

/// Samples the centered Gaussian vector with the spec covariance via a lower
/// Cholesky factor. Near-singular covariances (nested points) are handled by
/// a diagonal jitter ladder eps * trace/k, eps in {0, 1e-14, 1e-12, 1e-10};
/// first success wins. Sampling is deterministic in the key and decomposed
/// into fixed row blocks with derived streams.
class FddSampler {
 public:
  explicit FddSampler(FddSpec spec);

  std::size_t k() const noexcept { return k_; }
  double jitter() const noexcept { return jitter_; }
  const std::vector<double>& factor() const noexcept { return factor_; }
  const std::vector<double>& cov() const noexcept { return cov_; }

  /// reps x k samples, row-major.
  std::vector<double> sample(const StreamKey& key, std::size_t reps, unsigned workers = 1) const;

 private:
  FddSpec spec_;
  std::size_t k_;
  std::vector<double> cov_;
  std::vector<double> factor_;
  double jitter_ = 0.0;
};

}  // namespace sheetlab
