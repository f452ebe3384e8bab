#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sheetlab/errors.hpp"
#include "sheetlab/wiener.hpp"

using namespace sheetlab;

TEST_CASE("covariance entries") {
  SUBCASE("f = 1 in d = 2 gives the product of meets") {
    const auto f = SimpleFunction::constant(1.0, Point({1.0, 1.0}));
    const FddSpec spec{f, {Point({0.3, 0.8}), Point({0.6, 0.4})}};
    const auto cov = covariance(spec);
    CHECK(cov[0] == doctest::Approx(0.3 * 0.8));
    CHECK(cov[3] == doctest::Approx(0.6 * 0.4));
    CHECK(cov[1] == doctest::Approx(0.3 * 0.4));
    CHECK(cov[1] == cov[2]);
  }

  SUBCASE("indicator integrand at the far corner") {
    const Point box({1.0});
    const SimpleFunction f(box, {{1.0, Rect(Point({0.25}), Point({0.75}))}});
    const FddSpec spec{f, {Point({1.0})}};
    CHECK(covariance(spec)[0] == doctest::Approx(0.5));
  }

  SUBCASE("diagonal equals the restricted norm") {
    Rng rng(StreamKey{139, 0, 0});
    const Point box({1.0, 1.0});
    for (int it = 0; it < 40; ++it) {
      std::vector<double> hi(2);
      for (auto& v : hi) v = rng.uniform01();
      const SimpleFunction f(box, {{2.0 * rng.uniform01(), Rect(Point::zeros(2), Point(hi))}});
      const Point t({rng.uniform01(), rng.uniform01()});
      const FddSpec spec{f, {t}};
      const double nn = f.restrict_to(Rect::box_to(t)).lp_norm(2.0);
      CHECK(covariance(spec)[0] == doctest::Approx(nn * nn).epsilon(1e-12));
    }
  }
}

TEST_CASE("covariance is symmetric and positive semidefinite") {
  Rng rng(StreamKey{149, 0, 0});
  for (int it = 0; it < 30; ++it) {
    const std::size_t d = 1 + rng.next() % 2;
    const Point box = Point::ones(d);
    const auto f = SimpleFunction::constant(0.5 + rng.uniform01(), box);
    const std::size_t k = 1 + rng.next() % 4;
    std::vector<Point> pts;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> c(d);
      for (auto& v : c) v = rng.uniform01();
      pts.emplace_back(std::move(c));
    }
    const auto cov = covariance({f, pts});
    double trace = 0.0;
    for (std::size_t i = 0; i < k; ++i) trace += cov[i * k + i];
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) CHECK(cov[i * k + j] == cov[j * k + i]);
    // PSD via quadratic forms on random directions
    for (int dir = 0; dir < 20; ++dir) {
      std::vector<double> w(k);
      for (auto& v : w) v = 2.0 * rng.uniform01() - 1.0;
      double quad = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) quad += w[i] * cov[i * k + j] * w[j];
      CHECK(quad >= -1e-10 * trace);
    }
  }
}

TEST_CASE("limit moments") {
  CHECK(limit_moment(2, 0.7) == doctest::Approx(0.7));
  CHECK(limit_moment(4, 1.0) == doctest::Approx(3.0));
  CHECK(limit_moment(4, 0.0) == 0.0);
  CHECK(limit_moment(6, 1.0) == doctest::Approx(15.0));
  CHECK(limit_moment(8, 1.0) == doctest::Approx(105.0));
  CHECK_THROWS_AS(limit_moment(3, 1.0), std::domain_error);
  CHECK_THROWS_AS(limit_moment(0, 1.0), std::domain_error);

  // double-factorial cross-check (m-1)!! sigma^m
  for (int m : {2, 4, 6, 8, 10, 12}) {
    const double sigma2 = 1.7;
    CHECK(limit_moment(m, sigma2) ==
          doctest::Approx(oracles::gaussian_moment(m) * std::pow(sigma2, m / 2.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("fdd sampling") {
  SUBCASE("zero integrand gives zero samples") {
    const auto f = SimpleFunction::zero(Point({1.0}));
    const FddSampler sampler({f, {Point({0.5}), Point({1.0})}});
    const auto rows = sampler.sample(StreamKey{151, 0, 0}, 100);
    for (double v : rows) CHECK(v == 0.0);
  }

  SUBCASE("variance of the endpoint matches T") {
    const double horizon = 1.3;
    const auto f = SimpleFunction::constant(1.0, Point({horizon}));
    const FddSampler sampler({f, {Point({horizon})}});
    const std::size_t reps = 100000;
    const auto rows = sampler.sample(StreamKey{151, 0, 1}, reps, 2);
    double sum2 = 0.0;
    for (double v : rows) sum2 += v * v;
    const double var = sum2 / static_cast<double>(reps);
    const double band = 3.0 * horizon * std::sqrt(2.0 / static_cast<double>(reps));
    CHECK(std::abs(var - horizon) < band);
  }

  SUBCASE("nested points have uncorrelated increments") {
    const auto f = SimpleFunction::constant(1.0, Point({1.0}));
    const FddSampler sampler({f, {Point({0.4}), Point({1.0})}});
    const std::size_t reps = 100000;
    const auto rows = sampler.sample(StreamKey{151, 0, 2}, reps, 2);
    double cross = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double x1 = rows[2 * r], x2 = rows[2 * r + 1];
      cross += x1 * (x2 - x1);
    }
    const double est = cross / static_cast<double>(reps);
    // var(X1 * inc) = var(X1) var(inc) for independent centered Gaussians
    const double se = std::sqrt(0.4 * 0.6 / static_cast<double>(reps));
    CHECK(std::abs(est) < 3.0 * se);
  }

  SUBCASE("empirical covariance converges entrywise") {
    const auto f = SimpleFunction::constant(1.0, Point({1.0, 1.0}));
    const std::vector<Point> pts{Point({0.5, 0.5}), Point({0.5, 1.0}), Point({1.0, 0.7})};
    const FddSampler sampler({f, pts});
    const auto cov = sampler.cov();
    const std::size_t reps = 100000;
    const auto rows = sampler.sample(StreamKey{151, 0, 3}, reps, 2);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (std::size_t r = 0; r < reps; ++r) acc += rows[3 * r + i] * rows[3 * r + j];
        const double est = acc / static_cast<double>(reps);
        // generous Gaussian product-moment standard error
        const double se = std::sqrt((cov[i * 3 + i] * cov[j * 3 + j] +
                                     cov[i * 3 + j] * cov[i * 3 + j]) /
                                    static_cast<double>(reps));
        CHECK(std::abs(est - cov[i * 3 + j]) < 3.5 * se);
      }
    }
  }

  SUBCASE("duplicated points factor through the jitter ladder") {
    const auto f = SimpleFunction::constant(1.0, Point({1.0}));
    const FddSampler sampler({f, {Point({0.5}), Point({0.5}), Point({0.9})}});
    const auto rows = sampler.sample(StreamKey{151, 0, 4}, 2000);
    for (std::size_t r = 0; r < 2000; ++r)
      CHECK(rows[3 * r] == doctest::Approx(rows[3 * r + 1]).epsilon(1e-6));
  }

  SUBCASE("deterministic in the key and the worker count") {
    const auto f = SimpleFunction::constant(1.0, Point({1.0}));
    const FddSampler sampler({f, {Point({0.3}), Point({0.9})}});
    const auto a = sampler.sample(StreamKey{151, 7, 5}, 10000, 1);
    const auto b = sampler.sample(StreamKey{151, 7, 5}, 10000, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}
