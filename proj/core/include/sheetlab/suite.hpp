#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sheetlab/config.hpp"

namespace sheetlab {

struct ExperimentResult {
  ExperimentKind kind;
  std::string status;  // "pass" | "fail" | "report-only"
  std::string gate;    // one-line gate description
  std::string csv;     // output file name (relative to the out dir)
  std::string digest;  // fnv1a-64 of the CSV bytes, hex
  double wall_ms = 0.0;
};

struct RunManifest {
  std::string version;
  std::string config_hash;  // fnv1a-64 of (config text, seed), hex
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::vector<ExperimentResult> experiments;
  bool all_pass = true;  // report-only experiments never fail the run
};

/// Executes the configured experiments, writing one CSV per experiment plus
/// manifest.json into cfg.out_dir. Outputs are a pure function of
/// (config text, seed) for any worker count.
RunManifest run_suite(const ExperimentConfig& cfg,
                      const std::filesystem::path& base_dir = ".");

/// 0 when every gated experiment passed, 2 otherwise.
int exit_code(const RunManifest& manifest);

std::uint64_t fnv1a64(std::string_view bytes);
std::string manifest_to_json(const RunManifest& manifest);

/// Smallest rejection count r >= 1 whose exceedance probability under
/// Binomial(count, level) stays below 0.5%: the slack used to gate repeated
/// hypothesis tests.
std::size_t binomial_slack(std::size_t count, double level);

}  // namespace sheetlab
