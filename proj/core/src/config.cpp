#include "sheetlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sheetlab/errors.hpp"

namespace sheetlab {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::moments: return "moments";
    case ExperimentKind::gof: return "gof";
    case ExperimentKind::cramer_wold: return "cramer-wold";
    case ExperimentKind::bound_scan: return "bound-scan";
    case ExperimentKind::appendix_checks: return "appendix-checks";
    case ExperimentKind::rn_decay: return "rn-decay";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "moments") return ExperimentKind::moments;
  if (name == "gof") return ExperimentKind::gof;
  if (name == "cramer-wold") return ExperimentKind::cramer_wold;
  if (name == "bound-scan") return ExperimentKind::bound_scan;
  if (name == "appendix-checks") return ExperimentKind::appendix_checks;
  if (name == "rn-decay") return ExperimentKind::rn_decay;
  throw std::invalid_argument("unknown experiment: " + std::string(name));
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& value, const std::string& field, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw config_error("field \"" + field + "\": expected a real number, got \"" + value + "\"",
                       line);
  }
}

long long parse_int(const std::string& value, const std::string& field, int line) {
  long long v = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw config_error("field \"" + field + "\": expected an integer, got \"" + value + "\"",
                       line);
  return v;
}

std::uint64_t parse_u64(const std::string& value, const std::string& field, int line) {
  std::uint64_t v = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw config_error("field \"" + field + "\": expected an unsigned integer, got \"" + value +
                           "\"",
                       line);
  return v;
}

}  // namespace

SimpleFunction ExperimentConfig::load_integrand(const std::filesystem::path& base_dir) const {
  if (integrand == "unit") return SimpleFunction::constant(1.0, box);
  if (integrand.rfind("file:", 0) == 0) {
    std::filesystem::path path(integrand.substr(5));
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw config_error("integrand file not readable: " + path.string());
    return parse_integrand(in, box);
  }
  throw config_error("field \"integrand\": expected \"unit\" or \"file:<path>\"");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.source_text = text;

  bool saw_kernel = false;
  std::optional<std::vector<double>> box_values;
  std::optional<std::vector<double>> eval_values;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("expected key=value, got \"" + line + "\"", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("empty key", line_no);
    if (value.empty()) throw config_error("field \"" + key + "\": empty value", line_no);

    if (key == "kernel") {
      try {
        cfg.kernel = parse_kernel_family(value);
      } catch (const std::invalid_argument& e) {
        throw config_error(std::string("field \"kernel\": ") + e.what(), line_no);
      }
      saw_kernel = true;
    } else if (key == "dim") {
      cfg.dim = static_cast<int>(parse_int(value, key, line_no));
    } else if (key == "T") {
      std::vector<double> vals;
      for (const auto& tok : split_ws(value)) vals.push_back(parse_real(tok, key, line_no));
      box_values = std::move(vals);
    } else if (key == "law") {
      try {
        cfg.law = parse_innovation_law(value);
      } catch (const std::invalid_argument& e) {
        throw config_error(std::string("field \"law\": ") + e.what(), line_no);
      }
    } else if (key == "integrand") {
      cfg.integrand = value;
    } else if (key == "q") {
      cfg.q = parse_real(value, key, line_no);
    } else if (key == "m") {
      cfg.moment_orders.clear();
      for (const auto& tok : split_ws(value))
        cfg.moment_orders.push_back(static_cast<int>(parse_int(tok, key, line_no)));
    } else if (key == "n_grid") {
      cfg.n_grid.clear();
      for (const auto& tok : split_ws(value))
        cfg.n_grid.push_back(static_cast<int>(parse_int(tok, key, line_no)));
    } else if (key == "reps") {
      cfg.reps = static_cast<std::size_t>(parse_int(value, key, line_no));
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, key, line_no);
    } else if (key == "workers") {
      cfg.workers = static_cast<unsigned>(parse_int(value, key, line_no));
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "alpha") {
      cfg.alpha = parse_real(value, key, line_no);
    } else if (key == "experiments") {
      cfg.experiments.clear();
      for (const auto& tok : split_ws(value)) {
        try {
          cfg.experiments.push_back(parse_experiment_kind(tok));
        } catch (const std::invalid_argument& e) {
          throw config_error(std::string("field \"experiments\": ") + e.what(), line_no);
        }
      }
    } else if (key == "eval_point") {
      std::vector<double> vals;
      for (const auto& tok : split_ws(value)) vals.push_back(parse_real(tok, key, line_no));
      eval_values = std::move(vals);
    } else if (key == "scan_m") {
      cfg.scan_m = static_cast<int>(parse_int(value, key, line_no));
    } else if (key == "cw_combos") {
      cfg.cw_combos = static_cast<std::size_t>(parse_int(value, key, line_no));
    } else if (key == "cw_max_corners") {
      cfg.cw_max_corners = static_cast<int>(parse_int(value, key, line_no));
    } else if (key == "lattice_n") {
      cfg.lattice_n = static_cast<int>(parse_int(value, key, line_no));
    } else if (key == "rn_n_grid") {
      cfg.rn_n_grid.clear();
      for (const auto& tok : split_ws(value))
        cfg.rn_n_grid.push_back(static_cast<int>(parse_int(tok, key, line_no)));
    } else if (key == "max_dim") {
      cfg.max_dim = static_cast<int>(parse_int(value, key, line_no));
    } else if (key == "lattice_cells") {
      cfg.budgets.lattice_cells = static_cast<std::size_t>(parse_int(value, key, line_no));
    } else if (key == "parity_cells") {
      cfg.budgets.parity_cells = static_cast<std::size_t>(parse_int(value, key, line_no));
    } else if (key == "sheet_points") {
      cfg.budgets.sheet_points = static_cast<std::size_t>(parse_int(value, key, line_no));
    } else {
      throw config_error("unknown key \"" + key + "\"", line_no);
    }
  }

  if (!saw_kernel) throw config_error("missing required field \"kernel\"");
  if (cfg.dim < 1) throw config_error("field \"dim\": must be >= 1");
  if (cfg.max_dim < 1) throw config_error("field \"max_dim\": must be >= 1");
  if (cfg.dim > cfg.max_dim)
    throw config_error("field \"dim\": exceeds max_dim of " + std::to_string(cfg.max_dim));

  const auto d = static_cast<std::size_t>(cfg.dim);
  if (box_values) {
    if (box_values->size() != d)
      throw config_error("field \"T\": expected " + std::to_string(cfg.dim) + " values");
    for (double v : *box_values)
      if (v <= 0.0) throw config_error("field \"T\": coordinates must be > 0");
    cfg.box = Point(std::move(*box_values));
  } else {
    cfg.box = Point::ones(d);
  }
  if (eval_values) {
    if (eval_values->size() != d)
      throw config_error("field \"eval_point\": expected " + std::to_string(cfg.dim) + " values");
    for (double v : *eval_values)
      if (v < 0.0) throw config_error("field \"eval_point\": coordinates must be >= 0");
    cfg.eval_point = Point(std::move(*eval_values));
    if (!cfg.eval_point.leq(cfg.box))
      throw config_error("field \"eval_point\": must lie inside [0, T]");
  } else {
    cfg.eval_point = cfg.box;
  }

  if (cfg.q < 1.0) throw config_error("field \"q\": must be >= 1");
  if (cfg.moment_orders.empty()) throw config_error("field \"m\": needs at least one order");
  for (int m : cfg.moment_orders)
    if (m < 2 || m % 2 != 0)
      throw config_error("field \"m\": orders must be even and >= 2, got " + std::to_string(m));
  if (cfg.n_grid.empty()) throw config_error("field \"n_grid\": needs at least one value");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < 1) throw config_error("field \"n_grid\": values must be >= 1");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1])
      throw config_error("field \"n_grid\": values must be increasing");
  }
  if (cfg.reps < 100) throw config_error("field \"reps\": must be >= 100");
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0) throw config_error("field \"alpha\": must lie in (0, 1)");
  if (cfg.scan_m < 2 || cfg.scan_m % 2 != 0)
    throw config_error("field \"scan_m\": must be even and >= 2");
  bool scans = false;
  for (ExperimentKind k : cfg.experiments) scans |= (k == ExperimentKind::bound_scan);
  if (scans && static_cast<double>(cfg.scan_m) <= 2.0 * cfg.q)
    throw config_error("field \"scan_m\": must exceed 2q for the bound scan");
  if (cfg.cw_combos < 1) throw config_error("field \"cw_combos\": must be >= 1");
  if (cfg.cw_max_corners < 1 || cfg.cw_max_corners > 8)
    throw config_error("field \"cw_max_corners\": must lie in [1, 8]");
  if (cfg.lattice_n < 1) throw config_error("field \"lattice_n\": must be >= 1");
  for (std::size_t i = 0; i < cfg.rn_n_grid.size(); ++i) {
    if (cfg.rn_n_grid[i] < 1) throw config_error("field \"rn_n_grid\": values must be >= 1");
    if (i > 0 && cfg.rn_n_grid[i] <= cfg.rn_n_grid[i - 1])
      throw config_error("field \"rn_n_grid\": values must be increasing");
  }
  if (cfg.experiments.empty()) throw config_error("field \"experiments\": needs at least one");
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config file not readable: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace sheetlab
