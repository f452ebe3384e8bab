#pragma once

#include <cstdint>
#include <span>

#include "sheetlab/integrand.hpp"
#include "sheetlab/random_sources.hpp"

namespace sheetlab {

/// Exact partition of the box into cells of constant parity: per-axis
/// breakpoints are 0, the sheet's point coordinates and T_i, and each open
/// cell carries the parity of the count at its lower-left corner. Built once
/// per sheet, read-only afterwards.
class ParityCellGrid {
 public:
  ParityCellGrid(const PoissonSheet& sheet, std::size_t max_cells);

  std::size_t dim() const noexcept { return grid_.dim(); }
  const EvalGrid& grid() const noexcept { return grid_; }
  std::size_t total_cells() const noexcept { return bits_.size(); }

  /// +1 or -1; matches (-1)^{count_points(sheet, t)} everywhere on [0, T].
  int parity_at(const Point& t) const;

  /// Odd-count flags in row-major cell order.
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

 private:
  EvalGrid grid_;
  std::vector<std::uint8_t> bits_;
};

/// Sign-flip kernel driven by a Poisson point set of intensity n:
/// theta_n(t) = n^{d/2} (prod t_i)^{(d-1)/2} (-1)^{N(t)}. The parity factor is
/// piecewise constant on the grid generated by the sheet's coordinates, which
/// makes integrals of simple functions exactly computable.
class KacStroockKernel {
 public:
  explicit KacStroockKernel(PoissonSheet sheet, const Budgets& budgets = {});

  const PoissonSheet& sheet() const noexcept { return sheet_; }
  double intensity() const noexcept { return sheet_.intensity(); }
  std::size_t dim() const noexcept { return sheet_.dim(); }
  const Point& box() const noexcept { return sheet_.box(); }
  const ParityCellGrid& cell_grid() const noexcept { return grid_; }

  /// Kernel value at t in [0, T], via the parity grid.
  double theta_at(const Point& t) const;

  /// Exact integral of f against the kernel: per parity cell, the smooth
  /// weight integrates in closed form axis by axis.
  double integrate(const SimpleFunction& f) const;

 private:
  PoissonSheet sheet_;
  ParityCellGrid grid_;
};

/// Kernel value computed by direct point counting (no grid).
double kac_theta_direct(const PoissonSheet& sheet, const Point& t);

/// (-1)^{sum_j N(u^j)} for one realized sheet.
int parity_sign(const PoissonSheet& sheet, std::span<const Point> us);

/// Product exponential bound on |E[(-1)^{sum_j N(u^j)}]| for an even number of
/// points u^j lying in (s, t] with s strictly positive: per axis, the gaps of
/// the sorted coordinates decay the expectation at rate 2 n S_i with
/// S_i = prod_{l != i} s_l.
double parity_product_bound(double intensity, const Point& lower, std::span<const Point> us);

}  // namespace sheetlab
