#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sheetlab/geometry.hpp"

namespace sheetlab {

/// Innovation laws for lattice fields. All three are centered with unit
/// variance and have finite moments of every order.
enum class InnovationLaw { rademacher, gaussian, centered_uniform };

const char* to_string(InnovationLaw law);
InnovationLaw parse_innovation_law(std::string_view name);

/// Closed-form E[Z^4] of the law (1, 3 and 9/5 respectively).
double fourth_moment(InnovationLaw law);

/// Addresses one random stream. Distinct (master, replicate, substream)
/// triples yield independent streams; streams are derived by hashing the
/// triple, never by splitting a sequential generator.
struct StreamKey {
  std::uint64_t master = 0;
  std::uint64_t replicate = 0;
  std::uint64_t substream = 0;
};

/// Deterministic stream addressed by a StreamKey (plus an optional salt for
/// internal block decomposition). Gaussian variates use the polar method so
/// draws depend only on the engine stream.
class Rng {
 public:
  explicit Rng(const StreamKey& key, std::uint64_t salt = 0);

  std::uint64_t next();
  double uniform01();     // [0, 1)
  double uniform_open();  // (0, 1)
  double normal();
  std::int64_t poisson(double lambda);
  double draw(InnovationLaw law);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Memory guards for dense structures.
struct Budgets {
  std::size_t lattice_cells = 100'000'000;
  std::size_t parity_cells = 10'000'000;
  std::size_t sheet_points = 50'000'000;
};

/// Realized i.i.d. innovations {Z_k} on the unit lattice covering [0, nT]:
/// one value per multi-index k <= ceil(n*T) componentwise, stored row-major.
class LatticeField {
 public:
  LatticeField(int n, Point box, InnovationLaw law, StreamKey key,
               std::vector<std::int64_t> extents, std::vector<double> values);

  int n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  const Point& box() const noexcept { return box_; }
  InnovationLaw law() const noexcept { return law_; }
  const StreamKey& key() const noexcept { return key_; }

  std::span<const std::int64_t> extents() const noexcept { return extents_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Row-major position of a 1-based lattice index.
  std::size_t flat_index(std::span<const std::int64_t> k) const;
  double at(const MultiIndex& k) const;

 private:
  int n_;
  Point box_;
  InnovationLaw law_;
  StreamKey key_;
  std::vector<std::int64_t> extents_;
  std::vector<double> values_;
};

/// Per-axis lattice extents ceil(n * T_i).
std::vector<std::int64_t> lattice_extents(int n, const Point& box);

/// Draws the field's innovations in flat row-major order. Shared by
/// sample_lattice_field and the replicate engine so both produce identical
/// values for the same stream.
void fill_innovations(std::span<double> out, InnovationLaw law, Rng& rng);

LatticeField sample_lattice_field(int n, const Point& box, InnovationLaw law,
                                  const StreamKey& key, const Budgets& budgets = {});

/// Realized d-parameter Poisson point set of the given intensity: the point
/// count is Poisson(intensity * vol(box)) and locations are i.i.d. uniform in
/// the open box. Coordinates are stored flat, point i at [i*d, (i+1)*d).
class PoissonSheet {
 public:
  PoissonSheet(double intensity, Point box, std::vector<double> flat_coords, StreamKey key);

  double intensity() const noexcept { return intensity_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  const Point& box() const noexcept { return box_; }
  const StreamKey& key() const noexcept { return key_; }

  std::size_t count() const noexcept { return coords_.size() / box_.dim(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * box_.dim(), box_.dim()};
  }
  std::span<const double> flat() const noexcept { return coords_; }

 private:
  double intensity_;
  Point box_;
  std::vector<double> coords_;
  StreamKey key_;
};

PoissonSheet sample_poisson_sheet(double intensity, const Point& box, const StreamKey& key,
                                  const Budgets& budgets = {});

/// #{p in sheet : p <= t componentwise}; t must lie in [0, T].
std::int64_t count_points(const PoissonSheet& sheet, const Point& t);

}  // namespace sheetlab
