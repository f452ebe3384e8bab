#include "sheetlab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "sheetlab/donsker.hpp"
#include "sheetlab/errors.hpp"
#include "sheetlab/kac_stroock.hpp"
#include "sheetlab/version.hpp"

namespace sheetlab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_point(const Point& p) {
  std::string out;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ':';
    out += fmt(p[i]);
  }
  return out;
}

class Csv {
 public:
  explicit Csv(std::string header) { text_ = std::move(header) + "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

struct ExperimentOutput {
  std::string csv_text;
  bool gated = true;
  bool pass = true;
  std::string gate;
};

std::uint64_t substream(std::uint64_t label, std::uint64_t index = 0) {
  return (label << 32) | index;
}

// ---------------------------------------------------------------------------

ExperimentOutput run_moments(const ExperimentConfig& cfg, const SimpleFunction& f,
                             unsigned workers) {
  const SimpleFunction g = f.restrict_to(Rect::box_to(cfg.eval_point));
  const double norm = g.lp_norm(2.0);
  const double sigma2 = norm * norm;

  Csv csv("kernel,law,d,integrand,n,m,reps,estimate,se,target,z");
  ExperimentOutput out;
  bool pass = true;
  std::string gate;
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    const int n = cfg.n_grid[i];
    const IntegralModel model{cfg.kernel, g, n, cfg.law};
    const StreamKey key{cfg.seed, 0, substream(stream_label::moments, i)};
    const auto samples = simulate_integrals(model, key, cfg.reps, workers, cfg.budgets);
    const auto report = empirical_moments(samples, cfg.moment_orders, sigma2);
    const bool gate_row = (i + 1 == cfg.n_grid.size());
    for (const auto& row : report.rows) {
      csv.row({to_string(cfg.kernel), to_string(cfg.law), std::to_string(cfg.dim), cfg.integrand,
               std::to_string(n), std::to_string(row.m), std::to_string(cfg.reps),
               fmt(row.estimate), fmt(row.se), fmt(row.target), fmt(row.z)});
      if (gate_row) {
        const double tol = std::max(3.0 * row.se, 0.05 * row.target);
        if (std::abs(row.estimate - row.target) > tol) {
          pass = false;
          gate += (gate.empty() ? "" : "; ") + ("m=" + std::to_string(row.m)) +
                  " off target at n=" + std::to_string(n);
        }
      }
    }
  }
  out.csv_text = csv.text();
  out.pass = pass;
  out.gate = pass ? "largest-n moments within max(3se, 5% of target)" : gate;
  return out;
}

ExperimentOutput run_gof(const ExperimentConfig& cfg, const SimpleFunction& f, unsigned workers) {
  const SimpleFunction g = f.restrict_to(Rect::box_to(cfg.eval_point));
  const double norm = g.lp_norm(2.0);
  const double sigma2 = norm * norm;
  if (sigma2 <= 0.0) throw config_error("gof: integrand restricted to eval_point is zero");

  Csv csv("kernel,law,d,integrand,n,reps,test,statistic,threshold,level,reject");
  bool pass = true;
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    const int n = cfg.n_grid[i];
    const IntegralModel model{cfg.kernel, g, n, cfg.law};
    const StreamKey key{cfg.seed, 0, substream(stream_label::gof, i)};
    const auto samples = simulate_integrals(model, key, cfg.reps, workers, cfg.budgets);
    const GofReport ks = ks_test(samples, sigma2, cfg.alpha);
    const GofReport ecf = ecf_test(samples, sigma2, cfg.alpha);
    for (const GofReport* r : {&ks, &ecf}) {
      csv.row({to_string(cfg.kernel), to_string(cfg.law), std::to_string(cfg.dim), cfg.integrand,
               std::to_string(n), std::to_string(cfg.reps), to_string(r->test),
               fmt(r->statistic), fmt(r->threshold), fmt(r->level),
               r->reject ? "1" : "0"});
    }
    if (i + 1 == cfg.n_grid.size() && ks.reject) pass = false;
  }
  ExperimentOutput out;
  out.csv_text = csv.text();
  out.pass = pass;
  out.gate = "KS at the largest n does not reject (ECF is report-only)";
  return out;
}

ExperimentOutput run_cramer_wold(const ExperimentConfig& cfg, const SimpleFunction& f,
                                 unsigned workers) {
  const int n = cfg.n_grid.back();
  Rng cfg_rng(StreamKey{cfg.seed, 0, substream(stream_label::cw_config)});
  Csv csv("kernel,law,d,combo,k,n,reps,variance,statistic,threshold,level,reject");
  std::size_t rejections = 0;
  for (std::size_t c = 0; c < cfg.cw_combos; ++c) {
    std::vector<Point> corners;
    std::vector<double> coeffs;
    double variance = 0.0;
    for (int attempt = 0; attempt < 100; ++attempt) {
      const std::size_t k =
          1 + static_cast<std::size_t>(cfg_rng.next() % static_cast<std::uint64_t>(cfg.cw_max_corners));
      corners.clear();
      coeffs.clear();
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> coords(cfg.dim);
        for (int a = 0; a < cfg.dim; ++a) {
          // Corner coordinates on the 1/16 grid of T so lattice kernels stay
          // cell-aligned across the default n grid.
          const auto step = 4 + cfg_rng.next() % 13;  // 4..16 sixteenths
          coords[static_cast<std::size_t>(a)] =
              cfg.box[static_cast<std::size_t>(a)] * static_cast<double>(step) / 16.0;
        }
        corners.emplace_back(std::move(coords));
        const double sign = (cfg_rng.next() & 1ull) ? 1.0 : -1.0;
        coeffs.push_back(sign * (0.5 + cfg_rng.uniform01()));
      }
      const SimpleFunction combo = multiply(f, indicator_combo(f.box(), coeffs, corners));
      const double nn = combo.lp_norm(2.0);
      variance = nn * nn;
      if (variance > 1e-12) break;
    }
    const StreamKey key{cfg.seed, 0, substream(stream_label::cramer_wold, c)};
    const auto check = cramer_wold_check(cfg.kernel, f, corners, coeffs, n, cfg.reps, cfg.law,
                                         key, workers, cfg.alpha, cfg.budgets);
    rejections += check.gof.reject ? 1 : 0;
    csv.row({to_string(cfg.kernel), to_string(cfg.law), std::to_string(cfg.dim),
             std::to_string(c), std::to_string(corners.size()), std::to_string(n),
             std::to_string(cfg.reps), fmt(check.variance), fmt(check.gof.statistic),
             fmt(check.gof.threshold), fmt(check.gof.level), check.gof.reject ? "1" : "0"});
  }
  const std::size_t allowed = binomial_slack(cfg.cw_combos, cfg.alpha);
  ExperimentOutput out;
  out.csv_text = csv.text();
  out.pass = rejections <= allowed;
  out.gate = "at most " + std::to_string(allowed) + " of " + std::to_string(cfg.cw_combos) +
             " rejections; saw " + std::to_string(rejections);
  return out;
}

ExperimentOutput run_bound_scan(const ExperimentConfig& cfg, const SimpleFunction& f,
                                unsigned workers) {
  const StreamKey key{cfg.seed, 0, substream(stream_label::bound_scan)};
  const auto report = bound_constant_scan(cfg.kernel, f, cfg.q, cfg.scan_m, cfg.n_grid, cfg.reps,
                                          cfg.law, key, workers, cfg.budgets);
  Csv csv("kernel,law,d,q,m,n,reps,ratio,se,max_ratio,slope,slope_se,slope_z");
  for (const auto& row : report.rows) {
    csv.row({to_string(cfg.kernel), to_string(cfg.law), std::to_string(cfg.dim), fmt(cfg.q),
             std::to_string(cfg.scan_m), std::to_string(row.n), std::to_string(cfg.reps),
             fmt(row.ratio), fmt(row.se), fmt(report.max_ratio), fmt(report.slope),
             fmt(report.slope_se), fmt(report.slope_z)});
  }
  // The q = 1 scan in d >= 2 for the sign-flip kernels has no proven bound;
  // it is reported without a gate.
  const bool report_only =
      cfg.kernel == KernelFamily::kac_stroock && cfg.q == 1.0 && cfg.dim >= 2;
  ExperimentOutput out;
  out.csv_text = csv.text();
  out.gated = !report_only;
  out.pass = report_only || report.slope_z < 3.0;
  out.gate = report_only ? "report-only (q = 1, d >= 2)"
                         : "log-log slope z = " + fmt(report.slope_z) + " < 3";
  return out;
}

ExperimentOutput run_appendix_checks(const ExperimentConfig& cfg, unsigned workers) {
  Csv csv("check,index,n,estimate,target,se,z,bound,rel_err,pass");
  bool pass = true;

  // Deterministic lattice covariance limits on random positive configurations.
  Rng cfg_rng(StreamKey{cfg.seed, 0, substream(stream_label::appendix)});
  const auto d = static_cast<std::size_t>(cfg.dim);
  for (std::size_t idx = 0; idx < 20; ++idx) {
    const std::size_t m = 1 + static_cast<std::size_t>(cfg_rng.next() % 3);
    std::vector<Point> corners;
    std::vector<double> coeffs;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> coords(d);
      for (std::size_t a = 0; a < d; ++a)
        coords[a] = cfg.box[a] * (0.4 + 0.6 * cfg_rng.uniform01());
      corners.emplace_back(std::move(coords));
      coeffs.push_back(0.3 + 0.7 * cfg_rng.uniform01());
    }
    const auto lc = lattice_covariance_limit(coeffs, corners, cfg.lattice_n);
    const double rel = std::abs(lc.finite_n - lc.limit) / std::abs(lc.limit);
    const bool ok = rel <= 0.01;
    pass &= ok;
    csv.row({"lattice_cov", std::to_string(idx), std::to_string(cfg.lattice_n), fmt(lc.finite_n),
             fmt(lc.limit), "", "", "", fmt(rel), ok ? "1" : "0"});
  }

  // Parity identity E[(-1)^{N(t)}] = exp(-2 n prod t) at random (n, t) pairs.
  for (std::size_t idx = 0; idx < 10; ++idx) {
    const double intensity = 1.0 + static_cast<double>(cfg_rng.next() % 20);
    std::vector<double> coords(d);
    for (std::size_t a = 0; a < d; ++a) coords[a] = cfg.box[a] * (0.3 + 0.7 * cfg_rng.uniform01());
    const Point t(std::move(coords));
    const double target = std::exp(-2.0 * intensity * t.prod());

    std::vector<double> signs(cfg.reps);
    parallel_blocks(cfg.reps, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
      for (std::size_t r = begin; r < end; ++r) {
        const StreamKey key{cfg.seed, r, substream(stream_label::parity, idx)};
        const auto sheet = sample_poisson_sheet(intensity, cfg.box, key, cfg.budgets);
        signs[r] = (count_points(sheet, t) % 2 == 0) ? 1.0 : -1.0;
      }
    });
    const double est = pairwise_mean(signs);
    const double se =
        std::sqrt(std::max(0.0, 1.0 - est * est) / static_cast<double>(cfg.reps));
    const double z = se > 0.0 ? (est - target) / se : 0.0;
    const bool ok = std::abs(z) <= 3.0;
    pass &= ok;
    csv.row({"parity", std::to_string(idx), fmt(intensity), fmt(est), fmt(target), fmt(se),
             fmt(z), "", "", ok ? "1" : "0"});
  }

  // Product exponential bound on |E[(-1)^{sum N(u^j)}]| for configurations
  // with 0 < s < t < 2s.
  for (std::size_t idx = 0; idx < 20; ++idx) {
    const double intensity = 2.0 + static_cast<double>(cfg_rng.next() % 7);
    std::vector<double> slo(d), shi(d);
    for (std::size_t a = 0; a < d; ++a) {
      slo[a] = cfg.box[a] * (0.5 + 0.35 * cfg_rng.uniform01());
      shi[a] = slo[a] * (1.05 + 0.10 * cfg_rng.uniform01());
    }
    const Point s(std::move(slo));
    const Point t(std::move(shi));
    const std::size_t m = (cfg_rng.next() & 1ull) ? 2 : 4;
    std::vector<Point> us;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> coords(d);
      for (std::size_t a = 0; a < d; ++a)
        coords[a] = s[a] + (t[a] - s[a]) * cfg_rng.uniform_open();
      us.emplace_back(std::move(coords));
    }
    const double bound = parity_product_bound(intensity, s, us);

    std::vector<double> signs(cfg.reps);
    parallel_blocks(cfg.reps, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
      for (std::size_t r = begin; r < end; ++r) {
        const StreamKey key{cfg.seed, r, substream(stream_label::parity, 0x100 + idx)};
        const auto sheet = sample_poisson_sheet(intensity, cfg.box, key, cfg.budgets);
        signs[r] = parity_sign(sheet, us);
      }
    });
    const double est = pairwise_mean(signs);
    const double se =
        std::sqrt(std::max(0.0, 1.0 - est * est) / static_cast<double>(cfg.reps));
    const bool ok = std::abs(est) <= bound + 3.0 * se;
    pass &= ok;
    csv.row({"parity_bound", std::to_string(idx), fmt(intensity), fmt(est), "", fmt(se), "",
             fmt(bound), "", ok ? "1" : "0"});
  }

  ExperimentOutput out;
  out.csv_text = csv.text();
  out.pass = pass;
  out.gate = "lattice rel err <= 1%, parity |z| <= 3, bound holds within 3se";
  return out;
}

ExperimentOutput run_rn_decay(const ExperimentConfig& cfg) {
  // Fixed upper-dyadic fractions: along doubling n the fractional parts of
  // n*t never move up, which keeps the exact boundary moment non-increasing.
  const double ladder[] = {0.5, 0.75, 0.875, 0.9375, 0.96875, 1.0};
  const auto d = static_cast<std::size_t>(cfg.dim);
  std::vector<Point> ts;
  for (std::size_t base = 0; base < 6 && ts.size() < 20; ++base) {
    for (std::size_t shift = 0; shift < 6 && ts.size() < 20; ++shift) {
      std::vector<double> coords(d);
      for (std::size_t a = 0; a < d; ++a)
        coords[a] = cfg.box[a] * ladder[(base + shift * (a + 1)) % 6];
      ts.emplace_back(std::move(coords));
    }
  }

  Csv csv("index,t,n,value,bound,pass");
  bool pass = true;
  for (std::size_t idx = 0; idx < ts.size(); ++idx) {
    double prev = std::numeric_limits<double>::infinity();
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < cfg.rn_n_grid.size(); ++i) {
      const int n = cfg.rn_n_grid[i];
      const double value = rn_second_moment(n, ts[idx], cfg.box);
      const double bound = rn_second_moment_bound(n, ts[idx], cfg.box);
      bool ok = value <= prev + 1e-12;
      bool bound_applies = true;
      for (std::size_t a = 0; a < d; ++a)
        bound_applies &= static_cast<double>(n) * ts[idx][a] >= 1.0;
      if (bound_applies) ok &= value <= bound;
      pass &= ok;
      csv.row({std::to_string(idx), fmt_point(ts[idx]), std::to_string(n), fmt(value), fmt(bound),
               ok ? "1" : "0"});
      prev = value;
      if (i == 0) first = value;
      last = value;
    }
    if (first > 0.0) pass &= last <= 0.05 * first + 1e-12;
  }
  ExperimentOutput out;
  out.csv_text = csv.text();
  out.pass = pass;
  out.gate = "boundary moment non-increasing along the n ladder, within the bound, decaying";
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::size_t binomial_slack(std::size_t count, double level) {
  // P(Bin(count, level) > r) < 0.005, exact tail sum.
  std::vector<double> pmf(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    double logp = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      logp += std::log(static_cast<double>(count - i)) - std::log(static_cast<double>(i + 1));
    logp += static_cast<double>(k) * std::log(level) +
            static_cast<double>(count - k) * std::log1p(-level);
    pmf[k] = std::exp(logp);
  }
  for (std::size_t r = 1; r <= count; ++r) {
    double tail = 0.0;
    for (std::size_t k = r + 1; k <= count; ++k) tail += pmf[k];
    if (tail < 0.005) return r;
  }
  return count;
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["version"] = manifest.version;
  j["config_hash"] = manifest.config_hash;
  j["seed"] = manifest.seed;
  j["workers"] = manifest.workers;
  j["all_pass"] = manifest.all_pass;
  j["experiments"] = nlohmann::json::array();
  for (const auto& e : manifest.experiments) {
    j["experiments"].push_back({{"name", to_string(e.kind)},
                                {"status", e.status},
                                {"gate", e.gate},
                                {"csv", e.csv},
                                {"digest", e.digest},
                                {"wall_ms", e.wall_ms}});
  }
  return j.dump(2) + "\n";
}

RunManifest run_suite(const ExperimentConfig& cfg, const std::filesystem::path& base_dir) {
  namespace fs = std::filesystem;
  const fs::path out_dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir))
    throw config_error("output directory not writable: " + out_dir.string());

  const SimpleFunction f = cfg.load_integrand(base_dir);

  RunManifest manifest;
  manifest.version = version;
  {
    char buf[32];
    const std::uint64_t h =
        fnv1a64(cfg.source_text + "\n@seed=" + std::to_string(cfg.seed));
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    manifest.config_hash = buf;
  }
  manifest.seed = cfg.seed;
  manifest.workers = cfg.workers;

  for (ExperimentKind kind : cfg.experiments) {
    const auto started = std::chrono::steady_clock::now();
    ExperimentOutput result;
    switch (kind) {
      case ExperimentKind::moments: result = run_moments(cfg, f, cfg.workers); break;
      case ExperimentKind::gof: result = run_gof(cfg, f, cfg.workers); break;
      case ExperimentKind::cramer_wold: result = run_cramer_wold(cfg, f, cfg.workers); break;
      case ExperimentKind::bound_scan: result = run_bound_scan(cfg, f, cfg.workers); break;
      case ExperimentKind::appendix_checks: result = run_appendix_checks(cfg, cfg.workers); break;
      case ExperimentKind::rn_decay: result = run_rn_decay(cfg); break;
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    std::string name = to_string(kind);
    for (char& c : name)
      if (c == '-') c = '_';
    const std::string file_name = name + ".csv";
    std::ofstream out(out_dir / file_name, std::ios::binary);
    out << result.csv_text;
    out.close();

    ExperimentResult er;
    er.kind = kind;
    er.status = !result.gated ? "report-only" : (result.pass ? "pass" : "fail");
    er.gate = result.gate;
    er.csv = file_name;
    {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(fnv1a64(result.csv_text)));
      er.digest = buf;
    }
    er.wall_ms = elapsed;
    if (result.gated && !result.pass) manifest.all_pass = false;
    manifest.experiments.push_back(std::move(er));
  }

  std::ofstream mout(out_dir / "manifest.json", std::ios::binary);
  mout << manifest_to_json(manifest);
  return manifest;
}

int exit_code(const RunManifest& manifest) { return manifest.all_pass ? 0 : 2; }

}  // namespace sheetlab
