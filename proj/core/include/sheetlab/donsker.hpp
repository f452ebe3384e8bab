#pragma once

#include <span>

#include "sheetlab/integrand.hpp"
#include "sheetlab/random_sources.hpp"

namespace sheetlab {

/// Step kernel built from a lattice field: piecewise constant on the cells
/// [k-1, k)/n with value n^{d/2} Z_k. Immutable and shareable.
class DonskerKernel {
 public:
  explicit DonskerKernel(LatticeField field);

  const LatticeField& field() const noexcept { return field_; }
  int n() const noexcept { return field_.n(); }
  std::size_t dim() const noexcept { return field_.dim(); }
  const Point& box() const noexcept { return field_.box(); }

  /// Kernel value at t; requires t in [0, T) (cells are half-open above).
  double theta_at(const Point& t) const;

  /// Exact integral of the kernel over [0, t]: the interpolated partial-sum
  /// process. Continuous in t, null on the axes, defined on the closed box.
  /// The boundary layer is handled by per-axis overlap factorization.
  double zeta_at(const Point& t) const;

  /// Exact integral of f against the kernel; bilinear in (f, field values).
  double integrate(const SimpleFunction& f) const;

 private:
  LatticeField field_;
};

/// Per-cell integrals of f on the scale-n lattice, shared across replicates:
/// integrating f against any field with the same (n, box) reduces to
/// n^{d/2} * dot(weights, innovations).
class DonskerIntegrator {
 public:
  DonskerIntegrator(const SimpleFunction& f, int n, const Budgets& budgets = {});

  double apply(std::span<const double> innovations) const;
  double apply(const LatticeField& field) const;

  int n() const noexcept { return n_; }
  const Point& box() const noexcept { return box_; }
  std::size_t cell_count() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  int n_;
  Point box_;
  double scale_;  // n^{d/2}
  std::vector<std::int64_t> extents_;
  std::vector<double> weights_;
};

/// Exact second moment of the boundary remainder of the interpolated walk at
/// t: n^{-d} sum_k vol([0,nt]\[0,[nt]] cap [k-1,k))^2, evaluated in closed
/// form from the fractional parts of n*t. Deterministic, no sampling.
double rn_second_moment(int n, const Point& t, const Point& box);

/// Upper bound (prod T_j) * ((n m /(n m - 1))^d - 1) with m = min t_i, valid
/// once n*t_j >= 1 for every axis; +infinity when n*min t <= 1.
double rn_second_moment_bound(int n, const Point& t, const Point& box);

}  // namespace sheetlab
