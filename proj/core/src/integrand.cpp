#include "sheetlab/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace sheetlab {

namespace {

double pow_real(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  const double ip = std::floor(p);
  if (ip == p && p <= 64.0) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(ip); ++i) r *= x;
    return r;
  }
  return std::pow(x, p);
}

}  // namespace

SimpleFunction::SimpleFunction(Point box, std::vector<Term> terms)
    : box_(std::move(box)), terms_(std::move(terms)) {
  const Rect ambient = Rect::box_to(box_);
  for (const Term& t : terms_) {
    if (t.support.dim() != box_.dim())
      throw std::invalid_argument("term support dimension mismatch");
    if (!t.support.lo().leq(box_) || !t.support.hi().leq(box_))
      throw std::invalid_argument("term support must lie inside the box");
    (void)ambient;
  }
  for (std::size_t i = 0; i < terms_.size(); ++i)
    for (std::size_t j = i + 1; j < terms_.size(); ++j)
      if (overlaps(terms_[i].support, terms_[j].support))
        throw std::invalid_argument("term supports must be pairwise disjoint");
}

SimpleFunction SimpleFunction::zero(Point box) { return SimpleFunction(std::move(box), {}); }

SimpleFunction SimpleFunction::constant(double value, const Point& box) {
  if (value == 0.0) return zero(box);
  return SimpleFunction(box, {{value, Rect::box_to(box)}});
}

double SimpleFunction::operator()(const Point& u) const {
  double v = 0.0;
  for (const Term& t : terms_)
    if (t.support.contains(u)) v += t.coeff;
  return v;
}

double SimpleFunction::lp_norm(double p) const {
  if (p < 1.0) throw std::invalid_argument("lp_norm requires p >= 1");
  double acc = 0.0;
  for (const Term& t : terms_) acc += pow_real(std::abs(t.coeff), p) * t.support.volume();
  if (acc == 0.0) return 0.0;
  if (p == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / p);
}

SimpleFunction SimpleFunction::restrict_to(const Rect& r) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_)
    if (auto cut = intersection(t.support, r)) out.push_back({t.coeff, *cut});
  return SimpleFunction(box_, std::move(out));
}

SimpleFunction SimpleFunction::scaled(double c) const {
  if (c == 0.0) return zero(box_);
  std::vector<Term> out = terms_;
  for (Term& t : out) t.coeff *= c;
  return SimpleFunction(box_, std::move(out));
}

SimpleFunction indicator_combo(const Point& box, std::span<const double> coeffs,
                               std::span<const Point> corners) {
  if (coeffs.size() != corners.size())
    throw std::invalid_argument("coefficient and corner counts must match");
  const std::size_t d = box.dim();
  for (const Point& c : corners) {
    if (c.dim() != d) throw std::invalid_argument("corner dimension mismatch");
    if (!c.leq(box)) throw std::invalid_argument("corners must lie inside the box");
  }

  // Per-axis breakpoints: 0, the corner coordinates, T_i.
  std::vector<std::vector<double>> axes(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto& axis = axes[i];
    axis.push_back(0.0);
    for (const Point& c : corners)
      if (c[i] > 0.0 && c[i] < box[i]) axis.push_back(c[i]);
    axis.push_back(box[i]);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }

  std::vector<std::size_t> cells(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    cells[i] = axes[i].size() - 1;
    total *= cells[i];
  }

  // A half-open cell (lo, hi] lies in [0, corner] exactly when hi <= corner.
  std::vector<Term> terms;
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = axes[i][idx[i]];
      hi[i] = axes[i][idx[i] + 1];
    }
    double value = 0.0;
    for (std::size_t j = 0; j < corners.size(); ++j) {
      bool inside = true;
      for (std::size_t i = 0; i < d; ++i) {
        if (hi[i] > corners[j][i]) {
          inside = false;
          break;
        }
      }
      if (inside) value += coeffs[j];
    }
    if (value != 0.0)
      terms.push_back({value, Rect(Point(std::move(lo)), Point(std::move(hi)))});

    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < cells[i]) break;
      idx[i] = 0;
    }
  }
  return SimpleFunction(box, std::move(terms));
}

SimpleFunction multiply(const SimpleFunction& a, const SimpleFunction& b) {
  if (!(a.box() == b.box())) throw std::invalid_argument("ambient boxes must match");
  std::vector<Term> out;
  for (const Term& ta : a.terms())
    for (const Term& tb : b.terms())
      if (auto cut = intersection(ta.support, tb.support))
        out.push_back({ta.coeff * tb.coeff, *cut});
  return SimpleFunction(a.box(), std::move(out));
}

SimpleFunction parse_integrand(std::istream& in, const Point& box) {
  const std::size_t d = box.dim();
  std::vector<Term> terms;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double coeff;
    if (!(ls >> coeff)) continue;  // blank or comment-only line
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i)
      if (!(ls >> lo[i]))
        throw std::invalid_argument("integrand line " + std::to_string(line_no) +
                                    ": expected " + std::to_string(2 * d) + " bounds");
    for (std::size_t i = 0; i < d; ++i)
      if (!(ls >> hi[i]))
        throw std::invalid_argument("integrand line " + std::to_string(line_no) +
                                    ": expected " + std::to_string(2 * d) + " bounds");
    double trailing;
    if (ls >> trailing)
      throw std::invalid_argument("integrand line " + std::to_string(line_no) +
                                  ": trailing values");
    terms.push_back({coeff, Rect(Point(std::move(lo)), Point(std::move(hi)))});
  }
  return SimpleFunction(box, std::move(terms));
}

std::string format_integrand(const SimpleFunction& f) {
  std::string out;
  char buf[64];
  for (const Term& t : f.terms()) {
    std::snprintf(buf, sizeof(buf), "%.17g", t.coeff);
    out += buf;
    for (std::size_t i = 0; i < f.dim(); ++i) {
      std::snprintf(buf, sizeof(buf), " %.17g", t.support.lo()[i]);
      out += buf;
    }
    for (std::size_t i = 0; i < f.dim(); ++i) {
      std::snprintf(buf, sizeof(buf), " %.17g", t.support.hi()[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace sheetlab
