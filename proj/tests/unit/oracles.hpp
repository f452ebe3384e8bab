// Independent reference computations used by the tests. These deliberately
// avoid the closed-form paths in the library: step kernels are integrated by
// enumerating sub-boxes and evaluating at midpoints, boundary moments by
// direct overlap enumeration, and sign-flip integrals by refined midpoint
// quadrature driven by direct point counting.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sheetlab/donsker.hpp"
#include "sheetlab/kac_stroock.hpp"
#include "sheetlab/random_sources.hpp"

namespace oracles {

using sheetlab::DonskerKernel;
using sheetlab::Point;
using sheetlab::PoissonSheet;
using sheetlab::Rect;
using sheetlab::SimpleFunction;

// Axis breakpoints of the lattice grid j/n intersected with (lo, hi],
// including the interval ends.
inline std::vector<double> lattice_axis(int n, double lo, double hi) {
  std::vector<double> pts{lo};
  for (int j = 1; j <= n * 1000; ++j) {
    const double b = static_cast<double>(j) / n;
    if (b >= hi) break;
    if (b > lo) pts.push_back(b);
  }
  pts.push_back(hi);
  return pts;
}

// Integral of the step kernel over the half-open box (lo, t] by sub-box
// midpoint evaluation; exact because the kernel is constant per sub-box.
inline double step_kernel_box_integral(const DonskerKernel& kern, const Point& t) {
  const std::size_t d = kern.dim();
  std::vector<std::vector<double>> axes(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (t[i] <= 0.0) return 0.0;
    axes[i] = lattice_axis(kern.n(), 0.0, t[i]);
  }
  std::vector<std::size_t> idx(d, 0);
  double acc = 0.0;
  bool done = false;
  while (!done) {
    std::vector<double> mid(d);
    double vol = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double a = axes[i][idx[i]], b = axes[i][idx[i] + 1];
      mid[i] = 0.5 * (a + b);
      vol *= b - a;
    }
    acc += vol * kern.theta_at(Point(mid));
    done = true;
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] + 1 < axes[i].size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }
  return acc;
}

// Same sub-box evaluation for a general simple function.
inline double step_kernel_integral(const DonskerKernel& kern, const SimpleFunction& f) {
  double total = 0.0;
  for (const auto& term : f.terms()) {
    const std::size_t d = kern.dim();
    std::vector<std::vector<double>> axes(d);
    bool empty = false;
    for (std::size_t i = 0; i < d; ++i) {
      const double lo = term.support.lo()[i], hi = term.support.hi()[i];
      if (hi <= lo) {
        empty = true;
        break;
      }
      axes[i] = lattice_axis(kern.n(), lo, hi);
    }
    if (empty) continue;
    std::vector<std::size_t> idx(d, 0);
    double acc = 0.0;
    bool done = false;
    while (!done) {
      std::vector<double> mid(d);
      double vol = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double a = axes[i][idx[i]], b = axes[i][idx[i] + 1];
        mid[i] = 0.5 * (a + b);
        vol *= b - a;
      }
      acc += vol * kern.theta_at(Point(mid));
      done = true;
      for (std::size_t i = d; i-- > 0;) {
        if (++idx[i] + 1 < axes[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
    }
    total += term.coeff * acc;
  }
  return total;
}

// E[R_n^2] by direct enumeration of cell overlaps with [0,nt] \ [0,[nt]].
inline double rn_second_moment_enumerated(int n, const Point& t) {
  const std::size_t d = t.dim();
  const double dn = n;
  std::vector<std::int64_t> hi(d);
  for (std::size_t i = 0; i < d; ++i)
    hi[i] = static_cast<std::int64_t>(std::ceil(dn * t[i]));
  for (std::size_t i = 0; i < d; ++i)
    if (hi[i] == 0) return 0.0;
  std::vector<std::int64_t> k(d, 1);
  double acc = 0.0;
  bool done = false;
  while (!done) {
    double full = 1.0, trunc = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double nt = dn * t[i];
      const double fl = std::floor(nt);
      const double a = static_cast<double>(k[i] - 1);
      full *= std::clamp(nt - a, 0.0, 1.0);
      trunc *= std::clamp(fl - a, 0.0, 1.0);
    }
    const double overlap = full - trunc;
    acc += overlap * overlap;
    done = true;
    for (std::size_t i = d; i-- > 0;) {
      if (++k[i] <= hi[i]) {
        done = false;
        break;
      }
      k[i] = 1;
    }
  }
  return acc / std::pow(dn, static_cast<double>(d));
}

// Midpoint quadrature of f * theta for the sign-flip kernel on the union of
// the parity breakpoints and a uniform refinement (per axis), driven by
// direct point counting. A plain uniform grid cannot resolve the parity
// jumps to 1e-6, so each parity-constant stretch is refined uniformly.
inline double kac_integral_quadrature(const PoissonSheet& sheet, const SimpleFunction& f,
                                      int subdivisions) {
  const std::size_t d = sheet.dim();
  double total = 0.0;
  for (const auto& term : f.terms()) {
    std::vector<std::vector<double>> axes(d);
    bool empty = false;
    for (std::size_t i = 0; i < d; ++i) {
      const double lo = term.support.lo()[i], hi = term.support.hi()[i];
      if (hi <= lo) {
        empty = true;
        break;
      }
      std::vector<double> marks{lo, hi};
      for (std::size_t p = 0; p < sheet.count(); ++p) {
        const double c = sheet.point(p)[i];
        if (c > lo && c < hi) marks.push_back(c);
      }
      for (int j = 1; j < subdivisions; ++j)
        marks.push_back(lo + (hi - lo) * static_cast<double>(j) / subdivisions);
      std::sort(marks.begin(), marks.end());
      marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
      axes[i] = std::move(marks);
    }
    if (empty) continue;

    std::vector<std::size_t> idx(d, 0);
    double acc = 0.0;
    bool done = false;
    while (!done) {
      std::vector<double> mid(d);
      double vol = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double a = axes[i][idx[i]], b = axes[i][idx[i] + 1];
        mid[i] = 0.5 * (a + b);
        vol *= b - a;
      }
      acc += vol * sheetlab::kac_theta_direct(sheet, Point(mid));
      done = true;
      for (std::size_t i = d; i-- > 0;) {
        if (++idx[i] + 1 < axes[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
    }
    total += term.coeff * acc;
  }
  return total;
}

// m-th absolute moment of N(0,1): (m-1)!! for even m.
inline double gaussian_moment(int m) {
  double acc = 1.0;
  for (int j = m - 1; j >= 3; j -= 2) acc *= j;
  return acc;
}

namespace detail {

// One composite midpoint pass over the per-axis meshes (d <= 2), evaluating
// the substituted integrand f(x^2) theta(x^2) prod 2 x_i at cell midpoints.
inline double kac_sqrt_midpoint_pass(const PoissonSheet& sheet, const SimpleFunction& f,
                                     const std::vector<std::vector<double>>& axes) {
  const std::size_t d = sheet.dim();
  double acc = 0.0;
  std::vector<std::size_t> idx(d, 0);
  bool done = false;
  while (!done) {
    std::vector<double> u(d);
    double jac = 1.0, vol = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double a = axes[i][idx[i]], b = axes[i][idx[i] + 1];
      const double xm = 0.5 * (a + b);
      u[i] = xm * xm;
      jac *= 2.0 * xm;
      vol *= b - a;
    }
    acc += vol * jac * f(Point(u)) * sheetlab::kac_theta_direct(sheet, Point(u));
    done = true;
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] + 1 < axes[i].size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }
  return acc;
}

}  // namespace detail

// High-precision independent quadrature of int f theta for the sign-flip
// kernel: midpoint Riemann sums in square-root coordinates (u = x^2 per axis
// makes the weight polynomial), on the union of the uniform grid with every
// parity/support breakpoint, at M and 2M subintervals with one Richardson
// step on the exact h^2 midpoint error. Good to ~1e-10 relative at M = 2^10.
inline double kac_integral_quadrature_refined(const PoissonSheet& sheet,
                                              const SimpleFunction& f, int subdivisions) {
  const std::size_t d = sheet.dim();
  std::vector<std::vector<double>> base(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double hi = std::sqrt(sheet.box()[i]);
    std::vector<double> marks;
    for (int j = 0; j <= subdivisions; ++j)
      marks.push_back(hi * static_cast<double>(j) / subdivisions);
    for (std::size_t p = 0; p < sheet.count(); ++p)
      marks.push_back(std::sqrt(sheet.point(p)[i]));
    for (const auto& term : f.terms()) {
      marks.push_back(std::sqrt(term.support.lo()[i]));
      marks.push_back(std::sqrt(term.support.hi()[i]));
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    base[i] = std::move(marks);
  }
  std::vector<std::vector<double>> fine(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j + 1 < base[i].size(); ++j) {
      fine[i].push_back(base[i][j]);
      fine[i].push_back(0.5 * (base[i][j] + base[i][j + 1]));
    }
    fine[i].push_back(base[i].back());
  }
  const double coarse = detail::kac_sqrt_midpoint_pass(sheet, f, base);
  const double refined = detail::kac_sqrt_midpoint_pass(sheet, f, fine);
  return (4.0 * refined - coarse) / 3.0;
}

}  // namespace oracles
