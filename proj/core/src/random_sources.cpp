#include "sheetlab/random_sources.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sheetlab/errors.hpp"

namespace sheetlab {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(const StreamKey& key, std::uint64_t salt) {
  std::uint64_t h = splitmix(key.master ^ 0x5348454554ull);
  h = splitmix(h ^ key.replicate);
  h = splitmix(h ^ key.substream);
  h = splitmix(h ^ salt);
  return h;
}

void check_box(const Point& box) {
  if (!box.strictly_positive())
    throw std::invalid_argument("box must be strictly positive componentwise");
}

}  // namespace

const char* to_string(InnovationLaw law) {
  switch (law) {
    case InnovationLaw::rademacher: return "rademacher";
    case InnovationLaw::gaussian: return "gaussian";
    case InnovationLaw::centered_uniform: return "uniform";
  }
  return "?";
}

InnovationLaw parse_innovation_law(std::string_view name) {
  if (name == "rademacher") return InnovationLaw::rademacher;
  if (name == "gaussian") return InnovationLaw::gaussian;
  if (name == "uniform") return InnovationLaw::centered_uniform;
  throw std::invalid_argument("unknown innovation law: " + std::string(name));
}

double fourth_moment(InnovationLaw law) {
  switch (law) {
    case InnovationLaw::rademacher: return 1.0;
    case InnovationLaw::gaussian: return 3.0;
    case InnovationLaw::centered_uniform: return 9.0 / 5.0;
  }
  return 0.0;
}

Rng::Rng(const StreamKey& key, std::uint64_t salt) : gen_(derive_seed(key, salt)) {}

std::uint64_t Rng::next() { return gen_(); }

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
  return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform_open() - 1.0;
    v = 2.0 * uniform_open() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

std::int64_t Rng::poisson(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("poisson intensity must be >= 0");
  // Count of unit-rate exponential arrivals inside [0, lambda]; O(lambda).
  std::int64_t k = 0;
  double acc = -std::log(uniform_open());
  while (acc <= lambda) {
    ++k;
    acc += -std::log(uniform_open());
  }
  return k;
}

double Rng::draw(InnovationLaw law) {
  switch (law) {
    case InnovationLaw::rademacher: return (next() & 1ull) ? 1.0 : -1.0;
    case InnovationLaw::gaussian: return normal();
    case InnovationLaw::centered_uniform: return (2.0 * uniform01() - 1.0) * kSqrt3;
  }
  return 0.0;
}

LatticeField::LatticeField(int n, Point box, InnovationLaw law, StreamKey key,
                           std::vector<std::int64_t> extents, std::vector<double> values)
    : n_(n),
      box_(std::move(box)),
      law_(law),
      key_(key),
      extents_(std::move(extents)),
      values_(std::move(values)) {
  if (n_ < 1) throw std::invalid_argument("lattice scale n must be >= 1");
  if (extents_.size() != box_.dim()) throw std::invalid_argument("extents dimension mismatch");
  std::size_t total = 1;
  for (std::int64_t e : extents_) {
    if (e < 1) throw std::invalid_argument("lattice extents must be >= 1");
    total *= static_cast<std::size_t>(e);
  }
  if (values_.size() != total) throw std::invalid_argument("lattice value count mismatch");
}

std::size_t LatticeField::flat_index(std::span<const std::int64_t> k) const {
  if (k.size() != extents_.size()) throw std::invalid_argument("index dimension mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 1 || k[i] > extents_[i])
      throw std::domain_error("lattice index outside covered range");
    idx = idx * static_cast<std::size_t>(extents_[i]) + static_cast<std::size_t>(k[i] - 1);
  }
  return idx;
}

double LatticeField::at(const MultiIndex& k) const { return values_[flat_index(k.values())]; }

std::vector<std::int64_t> lattice_extents(int n, const Point& box) {
  check_box(box);
  std::vector<std::int64_t> extents(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i)
    extents[i] = static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * box[i]));
  return extents;
}

void fill_innovations(std::span<double> out, InnovationLaw law, Rng& rng) {
  for (double& v : out) v = rng.draw(law);
}

LatticeField sample_lattice_field(int n, const Point& box, InnovationLaw law,
                                  const StreamKey& key, const Budgets& budgets) {
  if (n < 1) throw std::invalid_argument("lattice scale n must be >= 1");
  auto extents = lattice_extents(n, box);
  std::size_t total = 1;
  for (std::int64_t e : extents) {
    const auto ue = static_cast<std::size_t>(e);
    if (total > budgets.lattice_cells / ue)
      throw resource_error("lattice of " + std::to_string(total) + "x" + std::to_string(ue) +
                           " cells exceeds budget of " + std::to_string(budgets.lattice_cells));
    total *= ue;
  }
  std::vector<double> values(total);
  Rng rng(key);
  fill_innovations(values, law, rng);
  return LatticeField(n, box, law, key, std::move(extents), std::move(values));
}

PoissonSheet::PoissonSheet(double intensity, Point box, std::vector<double> flat_coords,
                           StreamKey key)
    : intensity_(intensity), box_(std::move(box)), coords_(std::move(flat_coords)), key_(key) {
  if (intensity_ <= 0.0) throw std::invalid_argument("poisson intensity must be > 0");
  check_box(box_);
  if (coords_.size() % box_.dim() != 0)
    throw std::invalid_argument("flat coordinate count must be a multiple of the dimension");
  for (std::size_t i = 0; i < count(); ++i) {
    auto p = point(i);
    for (std::size_t j = 0; j < box_.dim(); ++j)
      if (p[j] <= 0.0 || p[j] >= box_[j])
        throw std::invalid_argument("sheet points must lie strictly inside the box");
  }
}

PoissonSheet sample_poisson_sheet(double intensity, const Point& box, const StreamKey& key,
                                  const Budgets& budgets) {
  if (intensity <= 0.0) throw std::invalid_argument("poisson intensity must be > 0");
  check_box(box);
  Rng rng(key);
  const double lambda = intensity * box.prod();
  const std::int64_t k = rng.poisson(lambda);
  if (static_cast<std::size_t>(k) > budgets.sheet_points)
    throw resource_error("poisson sheet of " + std::to_string(k) +
                         " points exceeds budget of " + std::to_string(budgets.sheet_points));
  std::vector<double> coords(static_cast<std::size_t>(k) * box.dim());
  for (std::size_t i = 0; i < coords.size(); ++i)
    coords[i] = box[i % box.dim()] * rng.uniform_open();
  return PoissonSheet(intensity, box, std::move(coords), key);
}

std::int64_t count_points(const PoissonSheet& sheet, const Point& t) {
  if (t.dim() != sheet.dim()) throw std::invalid_argument("dimension mismatch");
  if (!t.leq(sheet.box())) throw std::domain_error("evaluation point outside the box");
  const std::size_t d = sheet.dim();
  std::int64_t count = 0;
  const std::span<const double> flat = sheet.flat();
  for (std::size_t i = 0; i < sheet.count(); ++i) {
    bool below = true;
    for (std::size_t j = 0; j < d; ++j) {
      if (flat[i * d + j] > t[j]) {
        below = false;
        break;
      }
    }
    count += below ? 1 : 0;
  }
  return count;
}

}  // namespace sheetlab
