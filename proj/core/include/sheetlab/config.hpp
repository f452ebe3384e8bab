#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sheetlab/mc.hpp"
#include "sheetlab/stats.hpp"

namespace sheetlab {

enum class ExperimentKind {
  moments,
  gof,
  cramer_wold,
  bound_scan,
  appendix_checks,
  rn_decay,
};

const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

/// One experiment run, parsed from the flat key=value config format.
/// All cross-field constraints are validated before any sampling happens.
struct ExperimentConfig {
  KernelFamily kernel = KernelFamily::donsker;
  int dim = 1;
  Point box;  // T, strictly positive, defaults to ones(dim)
  InnovationLaw law = InnovationLaw::rademacher;

  // unit | file:<path>; resolved by load_integrand().
  std::string integrand = "unit";

  double q = 1.0;
  std::vector<int> moment_orders = {2, 4};
  std::vector<int> n_grid = {4, 8, 16, 32};
  std::size_t reps = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out_dir = ".";
  double alpha = 0.01;
  std::vector<ExperimentKind> experiments = {ExperimentKind::moments};

  Point eval_point;  // defaults to T
  int scan_m = 4;
  std::size_t cw_combos = 10;
  int cw_max_corners = 3;
  int lattice_n = 2000;
  std::vector<int> rn_n_grid = {2, 4, 8, 16, 32, 64, 128, 256};
  int max_dim = 4;
  Budgets budgets;

  /// Raw text the config was parsed from (seed overrides applied on top).
  std::string source_text;

  SimpleFunction load_integrand(const std::filesystem::path& base_dir = ".") const;
};

/// Parses the documented flat key=value format ('#' comments, one key per
/// line). Unknown keys and constraint violations raise config_error with the
/// offending line or field named.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

}  // namespace sheetlab
