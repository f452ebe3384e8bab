#include "sheetlab/donsker.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sheetlab/errors.hpp"

namespace sheetlab {

namespace {

double lattice_scale(int n, std::size_t d) {
  return std::pow(static_cast<double>(n), static_cast<double>(d) / 2.0);
}

// Overlap lengths of the cells [j, j+1)/n (0-based j) with (lo, hi] along one
// axis; only cells j in [first, last) contribute.
struct AxisOverlap {
  std::int64_t first = 0;
  std::vector<double> len;
};

AxisOverlap axis_overlap(int n, double lo, double hi, std::int64_t extent) {
  AxisOverlap out;
  if (hi <= lo) return out;
  const double dn = static_cast<double>(n);
  out.first = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(lo * dn)));
  const std::int64_t last =
      std::min<std::int64_t>(extent, static_cast<std::int64_t>(std::ceil(hi * dn)));
  if (last <= out.first) return out;
  out.len.resize(static_cast<std::size_t>(last - out.first));
  for (std::int64_t j = out.first; j < last; ++j) {
    const double a = std::max(lo, static_cast<double>(j) / dn);
    const double b = std::min(hi, static_cast<double>(j + 1) / dn);
    out.len[static_cast<std::size_t>(j - out.first)] = std::max(0.0, b - a);
  }
  return out;
}

// sum over the product range of prod_i len_i(idx_i) * values[flat(idx)].
double weighted_cell_sum(const std::vector<AxisOverlap>& axes,
                         std::span<const std::int64_t> extents,
                         std::span<const double> values) {
  const std::size_t d = axes.size();
  std::vector<std::size_t> idx(d, 0);
  double acc = 0.0;
  bool done = false;
  while (!done) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t i = 0; i < d; ++i) {
      w *= axes[i].len[idx[i]];
      flat = flat * static_cast<std::size_t>(extents[i]) +
             static_cast<std::size_t>(axes[i].first) + idx[i];
    }
    acc += w * values[flat];
    done = true;
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < axes[i].len.size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }
  return acc;
}

// Same walk, but scattering coeff * prod(len) into a dense weight table.
void scatter_cell_weights(const std::vector<AxisOverlap>& axes,
                          std::span<const std::int64_t> extents, double coeff,
                          std::vector<double>& weights) {
  const std::size_t d = axes.size();
  std::vector<std::size_t> idx(d, 0);
  bool done = false;
  while (!done) {
    double w = coeff;
    std::size_t flat = 0;
    for (std::size_t i = 0; i < d; ++i) {
      w *= axes[i].len[idx[i]];
      flat = flat * static_cast<std::size_t>(extents[i]) +
             static_cast<std::size_t>(axes[i].first) + idx[i];
    }
    weights[flat] += w;
    done = true;
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < axes[i].len.size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }
}

bool build_term_overlaps(int n, const Rect& support, std::span<const std::int64_t> extents,
                         std::vector<AxisOverlap>& axes) {
  const std::size_t d = support.dim();
  axes.assign(d, {});
  for (std::size_t i = 0; i < d; ++i) {
    axes[i] = axis_overlap(n, support.lo()[i], support.hi()[i], extents[i]);
    if (axes[i].len.empty()) return false;
  }
  return true;
}

}  // namespace

DonskerKernel::DonskerKernel(LatticeField field) : field_(std::move(field)) {}

double DonskerKernel::theta_at(const Point& t) const {
  if (t.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  const double dn = static_cast<double>(n());
  const auto extents = field_.extents();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (t[i] < 0.0 || t[i] >= box()[i])
      throw std::domain_error("theta_at requires t in [0, T) (half-open cells)");
    const auto k = static_cast<std::size_t>(std::floor(t[i] * dn));  // 0-based cell
    idx = idx * static_cast<std::size_t>(extents[i]) + k;
  }
  return lattice_scale(n(), dim()) * field_.values()[idx];
}

double DonskerKernel::zeta_at(const Point& t) const {
  if (t.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  if (!t.leq(box())) throw std::domain_error("zeta_at requires t in [0, T]");
  std::vector<AxisOverlap> axes(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    axes[i] = axis_overlap(n(), 0.0, t[i], field_.extents()[i]);
    if (axes[i].len.empty()) return 0.0;  // t touches an axis
  }
  return lattice_scale(n(), dim()) *
         weighted_cell_sum(axes, field_.extents(), field_.values());
}

double DonskerKernel::integrate(const SimpleFunction& f) const {
  if (!(f.box() == box())) throw std::invalid_argument("integrand box must match the kernel box");
  std::vector<AxisOverlap> axes;
  double total = 0.0;
  for (const Term& term : f.terms()) {
    if (!build_term_overlaps(n(), term.support, field_.extents(), axes)) continue;
    total += term.coeff * weighted_cell_sum(axes, field_.extents(), field_.values());
  }
  return lattice_scale(n(), dim()) * total;
}

DonskerIntegrator::DonskerIntegrator(const SimpleFunction& f, int n, const Budgets& budgets)
    : n_(n),
      box_(f.box()),
      scale_(lattice_scale(n, f.dim())),
      extents_(lattice_extents(n, f.box())) {
  std::size_t total = 1;
  for (std::int64_t e : extents_) {
    const auto ue = static_cast<std::size_t>(e);
    if (total > budgets.lattice_cells / ue)
      throw resource_error("lattice cell count exceeds budget of " +
                           std::to_string(budgets.lattice_cells));
    total *= ue;
  }
  weights_.assign(total, 0.0);
  std::vector<AxisOverlap> axes;
  for (const Term& term : f.terms()) {
    if (!build_term_overlaps(n_, term.support, extents_, axes)) continue;
    scatter_cell_weights(axes, extents_, term.coeff, weights_);
  }
}

double DonskerIntegrator::apply(std::span<const double> innovations) const {
  if (innovations.size() != weights_.size())
    throw std::invalid_argument("innovation count does not match the lattice");
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) acc += weights_[i] * innovations[i];
  return scale_ * acc;
}

double DonskerIntegrator::apply(const LatticeField& field) const {
  if (field.n() != n_ || !(field.box() == box_))
    throw std::invalid_argument("field does not match the integrator lattice");
  return apply(field.values());
}

double rn_second_moment(int n, const Point& t, const Point& box) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (t.dim() != box.dim()) throw std::invalid_argument("dimension mismatch");
  if (!t.leq(box)) throw std::domain_error("t must lie in [0, T]");
  const double dn = static_cast<double>(n);
  double with_frac = 1.0, whole = 1.0;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    const double nt = dn * t[i];
    const double fl = std::floor(nt);
    const double fr = nt - fl;
    with_frac *= fl + fr * fr;
    whole *= fl;
  }
  return (with_frac - whole) / std::pow(dn, static_cast<double>(t.dim()));
}

double rn_second_moment_bound(int n, const Point& t, const Point& box) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (t.dim() != box.dim()) throw std::invalid_argument("dimension mismatch");
  if (!t.leq(box)) throw std::domain_error("t must lie in [0, T]");
  const double nm = static_cast<double>(n) * t.min_coord();
  if (nm <= 1.0) return std::numeric_limits<double>::infinity();
  const double ratio = nm / (nm - 1.0);
  return box.prod() * (std::pow(ratio, static_cast<double>(t.dim())) - 1.0);
}

}  // namespace sheetlab
