#include <doctest.h>

#include <cmath>

#include "sheetlab/errors.hpp"
#include "sheetlab/mc.hpp"
#include "sheetlab/random_sources.hpp"

using namespace sheetlab;

TEST_CASE("lattice field coverage counts") {
  const auto f1 = sample_lattice_field(2, Point({1.0}), InnovationLaw::rademacher,
                                       StreamKey{1, 0, 0});
  CHECK(f1.values().size() == 2);
  for (double v : f1.values()) CHECK(std::abs(v) == 1.0);

  const auto f2 = sample_lattice_field(3, Point({1.0, 2.0}), InnovationLaw::gaussian,
                                       StreamKey{1, 0, 1});
  CHECK(f2.extents()[0] == 3);
  CHECK(f2.extents()[1] == 6);
  CHECK(f2.values().size() == 18);

  // fractional upper edge: ceil(5 * 0.7) = 4 cells
  const auto f3 = sample_lattice_field(5, Point({0.7}), InnovationLaw::rademacher,
                                       StreamKey{1, 0, 2});
  CHECK(f3.values().size() == 4);
}

TEST_CASE("lattice field indexing") {
  const auto f = sample_lattice_field(3, Point({1.0, 2.0}), InnovationLaw::gaussian,
                                      StreamKey{9, 4, 2});
  CHECK(f.at(MultiIndex({1, 1})) == f.values()[0]);
  CHECK(f.at(MultiIndex({1, 2})) == f.values()[1]);
  CHECK(f.at(MultiIndex({2, 1})) == f.values()[6]);
  CHECK_THROWS_AS(f.at(MultiIndex({4, 1})), std::domain_error);
}

TEST_CASE("reproducibility is bitwise in the key") {
  const StreamKey key{123456789, 42, 7};
  const auto a = sample_lattice_field(4, Point({1.0, 1.5}), InnovationLaw::gaussian, key);
  const auto b = sample_lattice_field(4, Point({1.0, 1.5}), InnovationLaw::gaussian, key);
  REQUIRE(a.values().size() == b.values().size());
  for (std::size_t i = 0; i < a.values().size(); ++i) CHECK(a.values()[i] == b.values()[i]);

  const auto s1 = sample_poisson_sheet(11.0, Point({1.0, 1.0}), key);
  const auto s2 = sample_poisson_sheet(11.0, Point({1.0, 1.0}), key);
  REQUIRE(s1.count() == s2.count());
  for (std::size_t i = 0; i < s1.flat().size(); ++i) CHECK(s1.flat()[i] == s2.flat()[i]);

  const auto s3 = sample_poisson_sheet(11.0, Point({1.0, 1.0}), StreamKey{123456789, 43, 7});
  const std::vector<double> v1(s1.flat().begin(), s1.flat().end());
  const std::vector<double> v3(s3.flat().begin(), s3.flat().end());
  CHECK(v1 != v3);
}

TEST_CASE("innovation laws are centered with unit variance") {
  const std::size_t reps = 1'000'000;
  for (auto law : {InnovationLaw::rademacher, InnovationLaw::gaussian,
                   InnovationLaw::centered_uniform}) {
    Rng rng(StreamKey{77, 0, static_cast<std::uint64_t>(law)});
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
      const double z = rng.draw(law);
      sum += z;
      sum2 += z * z;
      sum4 += z * z * z * z;
    }
    const double mean = sum / reps;
    const double var = sum2 / reps;
    CHECK(std::abs(mean) < 3.0e-3);  // 3 / sqrt(reps)
    if (law == InnovationLaw::rademacher) {
      CHECK(var == 1.0);  // Z^2 is identically 1
    } else {
      CHECK(var == doctest::Approx(1.0).epsilon(5e-3));
    }
    const double m4 = sum4 / reps;
    CHECK(m4 == doctest::Approx(fourth_moment(law)).epsilon(0.02));
  }
}

TEST_CASE("distinct stream keys decorrelate") {
  const std::size_t reps = 100000;
  Rng a(StreamKey{5, 1, 0});
  Rng b(StreamKey{5, 2, 0});
  double cross = 0.0;
  for (std::size_t i = 0; i < reps; ++i) cross += a.normal() * b.normal();
  CHECK(std::abs(cross / reps) < 3.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("poisson sheet counts have the right law") {
  // near-zero intensity: empty with overwhelming probability
  for (std::uint64_t r = 0; r < 100; ++r)
    CHECK(sample_poisson_sheet(1e-7, Point({1.0}), StreamKey{3, r, 0}).count() == 0);

  const std::size_t seeds = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t r = 0; r < seeds; ++r) {
    const auto sheet = sample_poisson_sheet(10.0, Point({1.0}), StreamKey{4, r, 0});
    const double c = static_cast<double>(sheet.count());
    sum += c;
    sum2 += c * c;
  }
  const double mean = sum / seeds;
  const double se = std::sqrt(10.0 / static_cast<double>(seeds));
  CHECK(std::abs(mean - 10.0) < 3.0 * se);
  const double var = sum2 / seeds - mean * mean;
  CHECK(var == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("count_points basics") {
  const PoissonSheet sheet(1.0, Point({1.0, 1.0}), {0.2, 0.3, 0.5, 0.1}, StreamKey{});
  CHECK(count_points(sheet, Point({0.4, 0.4})) == 1);
  CHECK(count_points(sheet, Point({1.0, 1.0})) == 2);
  CHECK(count_points(sheet, Point({0.0, 0.9})) == 0);  // null on the axes
  CHECK(count_points(sheet, Point({0.2, 0.3})) == 1);  // closed comparison
  CHECK_THROWS_AS(count_points(sheet, Point({1.1, 0.5})), std::domain_error);
}

TEST_CASE("poisson increments over disjoint rectangles") {
  // increments counted directly over (s, t] are nonnegative and have mean
  // intensity * volume
  const double intensity = 6.0;
  const Point box({1.0, 1.0});
  const Rect r1(Point({0.1, 0.2}), Point({0.5, 0.6}));
  const Rect r2(Point({0.6, 0.6}), Point({0.9, 1.0}));
  const std::size_t seeds = 10000;
  double m1 = 0.0, m2 = 0.0;
  for (std::uint64_t r = 0; r < seeds; ++r) {
    const auto sheet = sample_poisson_sheet(intensity, box, StreamKey{8, r, 0});
    for (const auto* rect : {&r1, &r2}) {
      std::int64_t inc = 0;
      for (std::size_t p = 0; p < sheet.count(); ++p) {
        bool inside = true;
        for (std::size_t a = 0; a < 2; ++a) {
          const double c = sheet.point(p)[a];
          inside &= c > rect->lo()[a] && c <= rect->hi()[a];
        }
        inc += inside ? 1 : 0;
      }
      CHECK(inc >= 0);
      (rect == &r1 ? m1 : m2) += static_cast<double>(inc);
    }
  }
  for (const auto* rect : {&r1, &r2}) {
    const double lambda = intensity * rect->volume();
    const double mean = (rect == &r1 ? m1 : m2) / seeds;
    const double se = std::sqrt(lambda / static_cast<double>(seeds));
    CHECK(std::abs(mean - lambda) < 3.0 * se);
  }
}

TEST_CASE("parity identity for one-dimensional counts") {
  // E[(-1)^{N(t)}] = exp(-2 lambda) with lambda = intensity * t
  const double intensity = 5.0;
  const double t = 0.4;
  const std::size_t seeds = 100000;
  double acc = 0.0;
  for (std::uint64_t r = 0; r < seeds; ++r) {
    const auto sheet = sample_poisson_sheet(intensity, Point({1.0}), StreamKey{12, r, 0});
    acc += (count_points(sheet, Point({t})) % 2 == 0) ? 1.0 : -1.0;
  }
  const double est = acc / seeds;
  const double target = std::exp(-2.0 * intensity * t);
  const double se = std::sqrt((1.0 - target * target) / static_cast<double>(seeds));
  CHECK(std::abs(est - target) < 3.0 * se);
}

TEST_CASE("budgets guard dense structures") {
  Budgets tight;
  tight.lattice_cells = 10;
  CHECK_THROWS_AS(
      sample_lattice_field(4, Point({1.0, 1.0}), InnovationLaw::rademacher, StreamKey{}, tight),
      resource_error);
  Budgets sheet_tight;
  sheet_tight.sheet_points = 2;
  CHECK_THROWS_AS(sample_poisson_sheet(50.0, Point({1.0}), StreamKey{1, 2, 3}, sheet_tight),
                  resource_error);
}

TEST_CASE("law names round-trip") {
  for (auto law : {InnovationLaw::rademacher, InnovationLaw::gaussian,
                   InnovationLaw::centered_uniform})
    CHECK(parse_innovation_law(to_string(law)) == law);
  CHECK_THROWS_AS(parse_innovation_law("cauchy"), std::invalid_argument);
}
