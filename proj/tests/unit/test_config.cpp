#include <doctest.h>

#include "sheetlab/config.hpp"
#include "sheetlab/errors.hpp"

using namespace sheetlab;

TEST_CASE("parse a full config") {
  const auto cfg = parse_config(
      "# experiment setup\n"
      "kernel = kac-stroock\n"
      "dim = 2\n"
      "T = 1.0 2.0\n"
      "law = uniform\n"
      "q = 1.5\n"
      "m = 2 4\n"
      "n_grid = 4 8 16\n"
      "reps = 5000\n"
      "seed = 99\n"
      "workers = 3\n"
      "alpha = 0.05\n"
      "experiments = moments gof\n"
      "eval_point = 0.5 1.5\n");
  CHECK(cfg.kernel == KernelFamily::kac_stroock);
  CHECK(cfg.dim == 2);
  CHECK(cfg.box == Point({1.0, 2.0}));
  CHECK(cfg.law == InnovationLaw::centered_uniform);
  CHECK(cfg.q == 1.5);
  CHECK(cfg.n_grid == std::vector<int>{4, 8, 16});
  CHECK(cfg.reps == 5000);
  CHECK(cfg.seed == 99);
  CHECK(cfg.workers == 3);
  CHECK(cfg.alpha == 0.05);
  REQUIRE(cfg.experiments.size() == 2);
  CHECK(cfg.experiments[0] == ExperimentKind::moments);
  CHECK(cfg.eval_point == Point({0.5, 1.5}));
}

TEST_CASE("defaults") {
  const auto cfg = parse_config("kernel=donsker\n");
  CHECK(cfg.dim == 1);
  CHECK(cfg.box == Point({1.0}));
  CHECK(cfg.eval_point == cfg.box);
  CHECK(cfg.law == InnovationLaw::rademacher);
  CHECK(cfg.q == 1.0);
  CHECK(cfg.moment_orders == std::vector<int>{2, 4});
  CHECK(cfg.n_grid == std::vector<int>{4, 8, 16, 32});
  CHECK(cfg.reps == 10000);
  CHECK(cfg.experiments == std::vector<ExperimentKind>{ExperimentKind::moments});
}

TEST_CASE("validation errors name the field") {
  CHECK_THROWS_WITH_AS(parse_config(""), doctest::Contains("kernel"), config_error);
  CHECK_THROWS_WITH_AS(parse_config("kernel=donsker\nq=0.5\n"), doctest::Contains("q"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config("kernel=donsker\nm=3\n"), doctest::Contains("m"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config("kernel=donsker\nn_grid=8 4\n"),
                       doctest::Contains("n_grid"), config_error);
  CHECK_THROWS_WITH_AS(parse_config("kernel=donsker\nT=1 1\n"), doctest::Contains("T"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config("kernel=donsker\nreps=10\n"), doctest::Contains("reps"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config("kernel=donsker\ndim=9\n"), doctest::Contains("dim"),
                       config_error);
}

TEST_CASE("unknown keys carry line numbers") {
  try {
    parse_config("kernel=donsker\n\nfrobnicate=1\n");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry line numbers") {
  try {
    parse_config("kernel=donsker\nthis is not a pair\n");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("scan constraint ties scan_m to q") {
  CHECK_THROWS_WITH_AS(
      parse_config("kernel=donsker\nq=2\nscan_m=4\nexperiments=bound-scan\n"),
      doctest::Contains("scan_m"), config_error);
  CHECK_NOTHROW(parse_config("kernel=donsker\nq=1.5\nscan_m=4\nexperiments=bound-scan\n"));
}

TEST_CASE("integrand resolution") {
  auto cfg = parse_config("kernel=donsker\ndim=1\n");
  const auto unit = cfg.load_integrand();
  CHECK(unit.terms().size() == 1);
  CHECK(unit.lp_norm(2.0) == doctest::Approx(1.0));

  cfg.integrand = "bogus";
  CHECK_THROWS_AS(cfg.load_integrand(), config_error);
  cfg.integrand = "file:/nonexistent/file.txt";
  CHECK_THROWS_AS(cfg.load_integrand(), config_error);
}
