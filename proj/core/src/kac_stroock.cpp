#include "sheetlab/kac_stroock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sheetlab/errors.hpp"

namespace sheetlab {

namespace {

// x^((d-1)/2): integer power for odd d, else integer power times sqrt.
double weight_power(double x, std::size_t d) {
  const std::size_t twice = d - 1;  // exponent numerator over 2
  double r = 1.0;
  for (std::size_t i = 0; i < twice / 2; ++i) r *= x;
  if (twice % 2 == 1) r *= std::sqrt(x);
  return r;
}

// Antiderivative of u^((d-1)/2): 2/(d+1) * u^((d+1)/2).
double weight_antiderivative(double u, std::size_t d) {
  const std::size_t twice = d + 1;
  double r = 1.0;
  for (std::size_t i = 0; i < twice / 2; ++i) r *= u;
  if (twice % 2 == 1) r *= std::sqrt(u);
  return 2.0 / static_cast<double>(d + 1) * r;
}

double intensity_scale(double intensity, std::size_t d) {
  return std::pow(intensity, static_cast<double>(d) / 2.0);
}

}  // namespace

ParityCellGrid::ParityCellGrid(const PoissonSheet& sheet, std::size_t max_cells)
    : grid_([&] {
        const std::size_t d = sheet.dim();
        std::vector<std::vector<double>> axes(d);
        for (std::size_t i = 0; i < d; ++i) {
          auto& axis = axes[i];
          axis.reserve(sheet.count() + 2);
          axis.push_back(0.0);
          for (std::size_t p = 0; p < sheet.count(); ++p) axis.push_back(sheet.point(p)[i]);
          axis.push_back(sheet.box()[i]);
          std::sort(axis.begin(), axis.end());
          axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
        }
        return EvalGrid(std::move(axes));
      }()) {
  const std::size_t d = grid_.dim();
  const std::size_t total = grid_.total_cells(max_cells);
  bits_.assign(total, 0);

  // Strides for row-major cell indexing.
  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (std::size_t i = d - 1; i-- > 0;) stride[i] = stride[i + 1] * grid_.cells(i + 1);

  // Mark each point at the cell whose lower corner equals the point, then
  // prefix-accumulate parities along every axis: a cell's bit becomes the
  // parity of #{p : p <= lower corner}.
  for (std::size_t p = 0; p < sheet.count(); ++p) {
    const auto pt = sheet.point(p);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto axis = grid_.axis(i);
      const auto it = std::lower_bound(axis.begin(), axis.end(), pt[i]);
      flat += static_cast<std::size_t>(it - axis.begin()) * stride[i];
    }
    bits_[flat] ^= 1u;
  }
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t cells_i = grid_.cells(i);
    const std::size_t inner = stride[i];
    const std::size_t lines = total / cells_i;
    for (std::size_t o = 0; o < lines; ++o) {
      const std::size_t base = (o / inner) * inner * cells_i + (o % inner);
      for (std::size_t j = 1; j < cells_i; ++j)
        bits_[base + j * inner] ^= bits_[base + (j - 1) * inner];
    }
  }
}

int ParityCellGrid::parity_at(const Point& t) const {
  if (t.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dim(); ++i)
    flat = flat * grid_.cells(i) + grid_.locate(i, t[i]);
  return bits_[flat] ? -1 : +1;
}

KacStroockKernel::KacStroockKernel(PoissonSheet sheet, const Budgets& budgets)
    : sheet_(std::move(sheet)), grid_(sheet_, budgets.parity_cells) {}

double KacStroockKernel::theta_at(const Point& t) const {
  if (!t.leq(box())) throw std::domain_error("theta_at requires t in [0, T]");
  const double w = weight_power(t.prod(), dim());
  return intensity_scale(intensity(), dim()) * w * grid_.parity_at(t);
}

double KacStroockKernel::integrate(const SimpleFunction& f) const {
  if (!(f.box() == box())) throw std::invalid_argument("integrand box must match the kernel box");
  const std::size_t d = dim();

  // Antiderivative of the smooth weight at every breakpoint, per axis.
  std::vector<std::vector<double>> anti(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto axis = grid_.grid().axis(i);
    anti[i].resize(axis.size());
    for (std::size_t j = 0; j < axis.size(); ++j) anti[i][j] = weight_antiderivative(axis[j], d);
  }

  double total = 0.0;
  std::vector<std::size_t> first(d);
  std::vector<std::vector<double>> factor(d);
  for (const Term& term : f.terms()) {
    if (term.support.empty()) continue;
    // Per axis: cells overlapping (lo, hi] and the weight integral over the
    // overlap of each.
    bool degenerate = false;
    for (std::size_t i = 0; i < d; ++i) {
      const auto axis = grid_.grid().axis(i);
      const double lo = term.support.lo()[i];
      const double hi = term.support.hi()[i];
      std::size_t jlo = grid_.grid().locate(i, lo);
      if (axis[jlo + 1] <= lo) ++jlo;  // lo == breakpoint: cell (lo, next]
      const std::size_t jhi = grid_.grid().locate(i, hi);
      if (jlo > jhi) {
        degenerate = true;
        break;
      }
      first[i] = jlo;
      auto& fac = factor[i];
      fac.assign(jhi - jlo + 1, 0.0);
      for (std::size_t j = jlo; j <= jhi; ++j) {
        const double a = std::max(lo, axis[j]);
        const double b = std::min(hi, axis[j + 1]);
        if (b <= a) continue;
        const double lower = (a == axis[j]) ? anti[i][j] : weight_antiderivative(a, d);
        const double upper = (b == axis[j + 1]) ? anti[i][j + 1] : weight_antiderivative(b, d);
        fac[j - jlo] = upper - lower;
      }
    }
    if (degenerate) continue;

    // Signed sum over the cell product range.
    std::vector<std::size_t> idx(d, 0);
    double acc = 0.0;
    bool done = false;
    while (!done) {
      double w = 1.0;
      std::size_t flat = 0;
      for (std::size_t i = 0; i < d; ++i) {
        w *= factor[i][idx[i]];
        flat = flat * grid_.grid().cells(i) + first[i] + idx[i];
      }
      acc += grid_.bits()[flat] ? -w : w;
      done = true;
      for (std::size_t i = d; i-- > 0;) {
        if (++idx[i] < factor[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
    }
    total += term.coeff * acc;
  }
  return intensity_scale(intensity(), d) * total;
}

double kac_theta_direct(const PoissonSheet& sheet, const Point& t) {
  const std::int64_t n = count_points(sheet, t);
  const double w = weight_power(t.prod(), sheet.dim());
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return intensity_scale(sheet.intensity(), sheet.dim()) * w * sign;
}

int parity_sign(const PoissonSheet& sheet, std::span<const Point> us) {
  std::int64_t total = 0;
  for (const Point& u : us) total += count_points(sheet, u);
  return (total % 2 == 0) ? +1 : -1;
}

double parity_product_bound(double intensity, const Point& lower, std::span<const Point> us) {
  if (us.empty() || us.size() % 2 != 0)
    throw std::domain_error("parity bound requires an even number of points");
  if (!lower.strictly_positive())
    throw std::domain_error("parity bound requires a strictly positive lower corner");
  const std::size_t d = lower.dim();
  const std::size_t m = us.size();
  std::vector<double> coords(m);
  double exponent = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double s_other = 1.0;
    for (std::size_t l = 0; l < d; ++l)
      if (l != i) s_other *= lower[l];
    for (std::size_t j = 0; j < m; ++j) {
      if (us[j].dim() != d) throw std::invalid_argument("dimension mismatch");
      if (us[j][i] < lower[i])
        throw std::domain_error("points must lie above the lower corner");
      coords[j] = us[j][i];
    }
    std::sort(coords.begin(), coords.end());
    double gaps = 0.0;
    for (std::size_t j = 0; j + 1 < m; j += 2) gaps += coords[j + 1] - coords[j];
    exponent += s_other * gaps;
  }
  return std::exp(-2.0 * intensity * exponent);
}

}  // namespace sheetlab
