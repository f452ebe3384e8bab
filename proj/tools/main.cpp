// Command-line harness: runs the named experiment suites against the two
// kernel families and writes CSV reports plus a run manifest.
//
// Exit codes: 0 all gates passed, 2 statistical gate failure, 3 usage error,
// 4 resource budget exceeded, 1 anything else.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sheetlab/errors.hpp"
#include "sheetlab/suite.hpp"
#include "sheetlab/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "Config file (flat key=value)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", args.seed, "Master seed (overrides the config)");
  sub->add_option("--workers", args.workers, "Worker threads (overrides the config; 0 = all)");
  sub->add_option("--out", args.out_dir, "Output directory (overrides the config)");
}

int run(const CommonArgs& args, std::optional<sheetlab::ExperimentKind> forced) {
  auto cfg = sheetlab::parse_config_file(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.workers) cfg.workers = *args.workers;
  if (args.out_dir) cfg.out_dir = *args.out_dir;
  if (forced) cfg.experiments = {*forced};

  const auto base_dir = std::filesystem::path(args.config_path).parent_path();
  const auto manifest = sheetlab::run_suite(cfg, base_dir.empty() ? "." : base_dir);
  for (const auto& e : manifest.experiments) {
    std::printf("%-16s %-12s %s -> %s (%.0f ms)\n", to_string(e.kind), e.status.c_str(),
                e.gate.c_str(), e.csv.c_str(), e.wall_ms);
  }
  std::printf("manifest: %s/manifest.json (config %s)\n", cfg.out_dir.c_str(),
              manifest.config_hash.c_str());
  return sheetlab::exit_code(manifest);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo lab for stochastic integrals against Brownian-sheet approximations"};
  app.set_version_flag("--version", sheetlab::version);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    std::optional<sheetlab::ExperimentKind> kind;
    CommonArgs args;
    CLI::App* cli = nullptr;
  };
  Sub subs[] = {
      {"simulate", "Run the experiments listed in the config", std::nullopt, {}, nullptr},
      {"verify-moments", "Moment estimates against the Gaussian limits",
       sheetlab::ExperimentKind::moments, {}, nullptr},
      {"gof", "Goodness of fit of the marginal law", sheetlab::ExperimentKind::gof, {}, nullptr},
      {"cramer-wold", "Random linear-combination marginals",
       sheetlab::ExperimentKind::cramer_wold, {}, nullptr},
      {"bound-scan", "Normalized moment-ratio scan across n",
       sheetlab::ExperimentKind::bound_scan, {}, nullptr},
      {"appendix", "Lattice covariance limit, parity identity and bound",
       sheetlab::ExperimentKind::appendix_checks, {}, nullptr},
  };
  for (auto& s : subs) {
    s.cli = app.add_subcommand(s.name, s.help);
    add_common(s.cli, s.args);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& s : subs) {
      if (s.cli->parsed()) {
        if (std::string(s.name) == "appendix") {
          // The appendix bundle covers both deterministic appendix checks and
          // the boundary-moment decay ladder.
          auto cfg = sheetlab::parse_config_file(s.args.config_path);
          if (s.args.seed) cfg.seed = *s.args.seed;
          if (s.args.workers) cfg.workers = *s.args.workers;
          if (s.args.out_dir) cfg.out_dir = *s.args.out_dir;
          cfg.experiments = {sheetlab::ExperimentKind::appendix_checks,
                             sheetlab::ExperimentKind::rn_decay};
          const auto base =
              std::filesystem::path(s.args.config_path).parent_path();
          const auto manifest = sheetlab::run_suite(cfg, base.empty() ? "." : base);
          for (const auto& e : manifest.experiments)
            std::printf("%-16s %-12s %s -> %s (%.0f ms)\n", to_string(e.kind), e.status.c_str(),
                        e.gate.c_str(), e.csv.c_str(), e.wall_ms);
          return sheetlab::exit_code(manifest);
        }
        return run(s.args, s.kind);
      }
    }
    std::fprintf(stderr, "no subcommand selected\n");
    return 3;
  } catch (const sheetlab::resource_error& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 3;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
