#include "sheetlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sheetlab/errors.hpp"

namespace sheetlab {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("point must have dimension >= 1");
  for (double c : coords_) {
    if (!std::isfinite(c) || c < 0.0)
      throw std::invalid_argument("point coordinates must be finite and >= 0");
  }
}

Point Point::zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

Point Point::ones(std::size_t dim) { return Point(std::vector<double>(dim, 1.0)); }

double Point::prod() const noexcept {
  double p = 1.0;
  for (double c : coords_) p *= c;
  return p;
}

double Point::min_coord() const noexcept {
  return *std::min_element(coords_.begin(), coords_.end());
}

bool Point::leq(const Point& other) const {
  require_same_dim(dim(), other.dim());
  for (std::size_t i = 0; i < dim(); ++i)
    if (coords_[i] > other.coords_[i]) return false;
  return true;
}

bool Point::strictly_positive() const noexcept {
  for (double c : coords_)
    if (c <= 0.0) return false;
  return true;
}

Point meet(const Point& a, const Point& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<double> m(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) m[i] = std::min(a[i], b[i]);
  return Point(std::move(m));
}

Rect::Rect(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_same_dim(lo_.dim(), hi_.dim());
  if (!lo_.leq(hi_)) throw std::invalid_argument("rectangle requires lo <= hi componentwise");
}

Rect Rect::box_to(const Point& hi) { return Rect(Point::zeros(hi.dim()), hi); }

double Rect::volume() const noexcept {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= hi_[i] - lo_[i];
  return v;
}

bool Rect::empty() const noexcept {
  for (std::size_t i = 0; i < dim(); ++i)
    if (hi_[i] <= lo_[i]) return true;
  return false;
}

bool Rect::contains(const Point& u) const {
  require_same_dim(dim(), u.dim());
  for (std::size_t i = 0; i < dim(); ++i)
    if (u[i] <= lo_[i] || u[i] > hi_[i]) return false;
  return true;
}

std::optional<Rect> intersection(const Rect& a, const Rect& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<double> lo(a.dim()), hi(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    lo[i] = std::max(a.lo()[i], b.lo()[i]);
    hi[i] = std::min(a.hi()[i], b.hi()[i]);
    if (hi[i] <= lo[i]) return std::nullopt;
  }
  return Rect(Point(std::move(lo)), Point(std::move(hi)));
}

bool overlaps(const Rect& a, const Rect& b) { return intersection(a, b).has_value(); }

std::vector<SignedCorner> increment_corners(const Rect& r) {
  const std::size_t d = r.dim();
  std::vector<SignedCorner> out;
  out.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<double> c(d);
    int lo_picks = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (std::size_t{1} << i)) {
        c[i] = r.lo()[i];
        ++lo_picks;
      } else {
        c[i] = r.hi()[i];
      }
    }
    out.push_back({Point(std::move(c)), (lo_picks % 2 == 0) ? +1 : -1});
  }
  return out;
}

MultiIndex::MultiIndex(std::vector<std::int64_t> k) : k_(std::move(k)) {
  if (k_.empty()) throw std::invalid_argument("multi-index must have dimension >= 1");
  for (std::int64_t v : k_)
    if (v < 1) throw std::invalid_argument("multi-index components must be >= 1");
}

EvalGrid::EvalGrid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("grid must have dimension >= 1");
  for (const auto& axis : axes_) {
    if (axis.size() < 2) throw std::invalid_argument("grid axis needs at least two breakpoints");
    if (axis.front() != 0.0) throw std::invalid_argument("grid axis must start at 0");
    for (std::size_t j = 1; j < axis.size(); ++j)
      if (axis[j] <= axis[j - 1])
        throw std::invalid_argument("grid axis breakpoints must be strictly increasing");
  }
}

std::size_t EvalGrid::total_cells(std::size_t max_cells) const {
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim(); ++i) {
    const std::size_t c = cells(i);
    if (total > max_cells / c) {
      throw resource_error("grid cell count exceeds budget of " + std::to_string(max_cells) +
                           " cells");
    }
    total *= c;
  }
  return total;
}

std::size_t EvalGrid::locate(std::size_t i, double x) const {
  const auto& axis = axes_[i];
  auto it = std::upper_bound(axis.begin(), axis.end(), x);
  std::size_t idx = (it == axis.begin()) ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
  return std::min(idx, axis.size() - 2);
}

}  // namespace sheetlab
