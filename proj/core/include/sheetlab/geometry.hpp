#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sheetlab {

/// Point in the closed parameter box [0,T] of R_+^d. Immutable after construction.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);

  static Point zeros(std::size_t dim);
  static Point ones(std::size_t dim);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  double prod() const noexcept;
  double min_coord() const noexcept;
  bool leq(const Point& other) const;  // componentwise <=
  bool strictly_positive() const noexcept;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// Componentwise minimum.
Point meet(const Point& a, const Point& b);

/// Half-open axis-aligned rectangle (lo, hi], lo <= hi componentwise.
/// Containment uses strict > on the lower face and <= on the upper face,
/// so disjoint supports tile exactly and the box is null on the axes.
class Rect {
 public:
  Rect(Point lo, Point hi);

  /// The box (0, hi] anchored at the origin.
  static Rect box_to(const Point& hi);

  const Point& lo() const noexcept { return lo_; }
  const Point& hi() const noexcept { return hi_; }
  std::size_t dim() const noexcept { return lo_.dim(); }

  double volume() const noexcept;
  bool empty() const noexcept;  // zero volume
  bool contains(const Point& u) const;

 private:
  Point lo_;
  Point hi_;
};

/// Intersection of two half-open rectangles; nullopt when empty.
std::optional<Rect> intersection(const Rect& a, const Rect& b);

/// True when the half-open rectangles share positive volume.
bool overlaps(const Rect& a, const Rect& b);

struct SignedCorner {
  Point corner;
  int sign;  // +1 or -1
};

/// The 2^d corners of r with inclusion-exclusion signs: for any F null on the
/// axes, sum sign * F(corner) equals the increment of F over (lo, hi].
std::vector<SignedCorner> increment_corners(const Rect& r);

/// Lattice multi-index, componentwise >= 1; index k addresses the unit cell
/// [k-1, k).
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<std::int64_t> k);

  std::size_t dim() const noexcept { return k_.size(); }
  std::int64_t operator[](std::size_t i) const { return k_[i]; }
  std::span<const std::int64_t> values() const noexcept { return k_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::int64_t> k_;
};

/// Per-axis breakpoint sequences over [0, T_i]: strictly increasing, starting
/// at 0. Cells along axis i are the intervals between consecutive breakpoints.
class EvalGrid {
 public:
  explicit EvalGrid(std::vector<std::vector<double>> axes);

  std::size_t dim() const noexcept { return axes_.size(); }
  std::span<const double> axis(std::size_t i) const { return axes_[i]; }
  std::size_t cells(std::size_t i) const { return axes_[i].size() - 1; }

  /// Product of per-axis cell counts; throws resource_error above max_cells.
  std::size_t total_cells(std::size_t max_cells) const;

  /// Index of the cell whose closed-from-the-left interval holds x: the last
  /// breakpoint <= x, clamped to [0, cells(i)-1].
  std::size_t locate(std::size_t i, double x) const;

 private:
  std::vector<std::vector<double>> axes_;
};

}  // namespace sheetlab
