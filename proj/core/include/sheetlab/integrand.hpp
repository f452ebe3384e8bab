#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sheetlab/geometry.hpp"

namespace sheetlab {

struct Term {
  double coeff;
  Rect support;
};

/// Simple function: finite sum of coefficients times indicators of pairwise
/// disjoint half-open rectangles inside the ambient box [0, T]. Values on the
/// axes are 0 by the half-open convention. Immutable after construction.
class SimpleFunction {
 public:
  SimpleFunction(Point box, std::vector<Term> terms);

  static SimpleFunction zero(Point box);
  static SimpleFunction constant(double value, const Point& box);

  const Point& box() const noexcept { return box_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  std::span<const Term> terms() const noexcept { return terms_; }

  double operator()(const Point& u) const;

  /// (sum_j |c_j|^p vol_j)^(1/p), exact for simple functions; p >= 1.
  double lp_norm(double p) const;

  /// Supports intersected with r, coefficients unchanged.
  SimpleFunction restrict_to(const Rect& r) const;

  SimpleFunction scaled(double c) const;

 private:
  Point box_;
  std::vector<Term> terms_;
};

/// Canonical disjoint-rectangle refinement of sum_j coeffs[j] * 1_{[0, corners[j]]}:
/// partitions the box by the corner coordinates per axis and merges
/// coefficients per cell, pruning cells whose merged coefficient is zero.
SimpleFunction indicator_combo(const Point& box, std::span<const double> coeffs,
                               std::span<const Point> corners);

/// Pointwise product; exact on the refined pairwise intersections.
SimpleFunction multiply(const SimpleFunction& a, const SimpleFunction& b);

/// Text format: one term per line, "coeff lo_1 ... lo_d hi_1 ... hi_d".
/// Blank lines and '#' comments are skipped.
SimpleFunction parse_integrand(std::istream& in, const Point& box);
std::string format_integrand(const SimpleFunction& f);

}  // namespace sheetlab
