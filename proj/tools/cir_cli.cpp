// SPDX-License-Identifier: Apache-2.0
// Command-line front end: fit tallied dose-response data, or run the
// simulation bench from a config file. See README.md for the file formats.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cir/curve.hpp"
#include "cir/errors.hpp"
#include "cir/intervals.hpp"
#include "cir/inverse_intervals.hpp"
#include "cir/isotonic.hpp"
#include "cir/simbench.hpp"
#include "cir/summary_table.hpp"

using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr const char* kSchemaVersion = "1";

struct CsvRow {
  double dose, events, trials;
};

double parse_number(const std::string& cell, int line, int col) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty()) {
    std::ostringstream msg;
    msg << "parse error at line " << line << ", column " << col
        << ": expected a number, got '" << cell << "'";
    throw cir::ConfigError(msg.str());
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding spaces
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

// Tolerant reader: locates the dose/events/trials columns by header name and
// ignores anything else, so emitted reports re-ingest cleanly.
cir::DoseResponseData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cir::ConfigError("cannot open input file: " + path);
  std::string line;
  int lineno = 0;
  int c_dose = -1, c_events = -1, c_trials = -1;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto cells = split_csv_line(line);
    if (c_dose < 0) {
      for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
        if (cells[i] == "dose") c_dose = i;
        if (cells[i] == "events") c_events = i;
        if (cells[i] == "trials") c_trials = i;
      }
      if (c_dose < 0 || c_events < 0 || c_trials < 0)
        throw cir::ConfigError(
            "parse error at line 1: header must name dose, events and trials "
            "columns");
      continue;
    }
    const int need = std::max({c_dose, c_events, c_trials});
    if (static_cast<int>(cells.size()) <= need) {
      std::ostringstream msg;
      msg << "parse error at line " << lineno << ": expected at least "
          << need + 1 << " columns, got " << cells.size();
      throw cir::ConfigError(msg.str());
    }
    rows.push_back({parse_number(cells[c_dose], lineno, c_dose + 1),
                    parse_number(cells[c_events], lineno, c_events + 1),
                    parse_number(cells[c_trials], lineno, c_trials + 1)});
  }
  if (rows.empty()) throw cir::ConfigError("input file has no data rows");
  if (!std::is_sorted(rows.begin(), rows.end(),
                      [](const CsvRow& a, const CsvRow& b) {
                        return a.dose < b.dose;
                      })) {
    std::cerr << "warning: input rows not sorted by dose; sorting\n";
    std::stable_sort(rows.begin(), rows.end(),
                     [](const CsvRow& a, const CsvRow& b) {
                       return a.dose < b.dose;
                     });
  }
  std::vector<double> x, events, trials;
  for (const CsvRow& r : rows) {
    x.push_back(r.dose);
    events.push_back(r.events);
    trials.push_back(r.trials);
  }
  return cir::DoseResponseData::from_counts(std::move(x), std::move(events),
                                            std::move(trials));
}

cir::BoundMethod method_from_string(const std::string& s) {
  if (s == "combined") return cir::BoundMethod::Combined;
  if (s == "morris") return cir::BoundMethod::Morris;
  if (s == "wilson") return cir::BoundMethod::Wilson;
  if (s == "clopper-pearson") return cir::BoundMethod::ClopperPearson;
  if (s == "jeffreys") return cir::BoundMethod::Jeffreys;
  if (s == "agresti-coull") return cir::BoundMethod::AgrestiCoull;
  throw cir::ConfigError("unknown interval method: " + s);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct FitReport {
  cir::DoseResponseData data{std::vector<double>{0.0},
                             std::vector<double>{0.0},
                             std::vector<double>{1.0}};
  cir::MonotoneFit ir, cf;
  cir::IntervalBand band;
  std::vector<double> grid_x, grid_y;
  struct InverseRow {
    double p;
    double point = std::nan("");
    double lower = std::nan(""), upper = std::nan("");
    std::string note;  // empty when estimable
  };
  std::vector<InverseRow> inverse;
};

json report_to_json(const FitReport& r) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["level"] = r.band.level;
  out["interval_method"] = cir::to_string(r.band.method);
  json pts = json::array();
  for (std::size_t j = 0; j < r.data.size(); ++j) {
    auto [lo, hi] = cir::band_at_x(r.band, r.data.x[j]);
    pts.push_back({{"dose", r.data.x[j]},
                   {"events", r.data.n[j] * r.data.y[j]},
                   {"trials", r.data.n[j]},
                   {"ir", r.ir.fs[j]},
                   {"cir", cir::curve_from_fit(r.cf).evaluate(r.data.x[j])},
                   {"lower", lo},
                   {"upper", hi}});
  }
  out["design_points"] = pts;
  json knots = json::array();
  for (std::size_t j = 0; j < r.cf.xs.size(); ++j)
    knots.push_back({{"x", r.cf.xs[j]},
                     {"f", r.cf.fs[j]},
                     {"n", r.cf.ns[j]},
                     {"synthetic", static_cast<bool>(r.cf.synthetic[j])}});
  out["shrinkage_points"] = knots;
  json grid = json::array();
  for (std::size_t j = 0; j < r.grid_x.size(); ++j)
    grid.push_back({{"x", r.grid_x[j]}, {"f", r.grid_y[j]}});
  out["curve_grid"] = grid;
  json inv = json::array();
  for (const auto& row : r.inverse) {
    json e;
    e["p"] = row.p;
    if (row.note.empty()) {
      e["point"] = row.point;
      e["lower"] = std::isinf(row.lower) ? json() : json(row.lower);
      e["upper"] = std::isinf(row.upper) ? json() : json(row.upper);
    } else {
      e["note"] = row.note;
    }
    inv.push_back(e);
  }
  out["inverse"] = inv;
  return out;
}

// CSV report: the leading section re-ingests through read_csv (round trip);
// later sections are prefixed with '#' so the tolerant reader skips nothing
// it needs.
std::string report_to_csv(const FitReport& r) {
  std::ostringstream out;
  out << "dose,events,trials,ir,cir,lower,upper\n";
  auto curve = cir::curve_from_fit(r.cf);
  for (std::size_t j = 0; j < r.data.size(); ++j) {
    auto [lo, hi] = cir::band_at_x(r.band, r.data.x[j]);
    out << fmt(r.data.x[j]) << ',' << fmt(r.data.n[j] * r.data.y[j]) << ','
        << fmt(r.data.n[j]) << ',' << fmt(r.ir.fs[j]) << ','
        << fmt(curve.evaluate(r.data.x[j])) << ',' << fmt(lo) << ',' << fmt(hi)
        << '\n';
  }
  out << "# shrinkage points: x,f,n,synthetic\n";
  for (std::size_t j = 0; j < r.cf.xs.size(); ++j)
    out << "# " << fmt(r.cf.xs[j]) << ',' << fmt(r.cf.fs[j]) << ','
        << fmt(r.cf.ns[j]) << ',' << int(r.cf.synthetic[j]) << '\n';
  out << "# curve grid: x,f\n";
  for (std::size_t j = 0; j < r.grid_x.size(); ++j)
    out << "# " << fmt(r.grid_x[j]) << ',' << fmt(r.grid_y[j]) << '\n';
  out << "# inverse: p,point,lower,upper\n";
  for (const auto& row : r.inverse) {
    out << "# " << fmt(row.p) << ',';
    if (row.note.empty())
      out << fmt(row.point) << ',' << fmt(row.lower) << ',' << fmt(row.upper);
    else
      out << "NA,NA,NA";
    out << '\n';
  }
  return out.str();
}

std::string report_to_text(const FitReport& r) {
  cir::SummaryTable t;
  t.title = "design points (level " + fmt(r.band.level) + ", " +
            cir::to_string(r.band.method) + ")";
  t.columns = {"dose", "events", "trials", "ir", "cir", "lower", "upper"};
  auto curve = cir::curve_from_fit(r.cf);
  for (std::size_t j = 0; j < r.data.size(); ++j) {
    auto [lo, hi] = cir::band_at_x(r.band, r.data.x[j]);
    t.rows.push_back({fmt(r.data.x[j]), fmt(r.data.n[j] * r.data.y[j]),
                      fmt(r.data.n[j]), fmt(r.ir.fs[j]),
                      fmt(curve.evaluate(r.data.x[j])), fmt(lo), fmt(hi)});
  }
  std::string out = t.to_text();

  cir::SummaryTable k;
  k.title = "shrinkage points";
  k.columns = {"x", "f", "n", "synthetic"};
  for (std::size_t j = 0; j < r.cf.xs.size(); ++j)
    k.rows.push_back({fmt(r.cf.xs[j]), fmt(r.cf.fs[j]), fmt(r.cf.ns[j]),
                      r.cf.synthetic[j] ? "yes" : "no"});
  out += "\n" + k.to_text();

  if (!r.inverse.empty()) {
    cir::SummaryTable inv;
    inv.title = "inverse estimates";
    inv.columns = {"p", "dose", "lower", "upper"};
    for (const auto& row : r.inverse) {
      if (row.note.empty())
        inv.rows.push_back(
            {fmt(row.p), fmt(row.point), fmt(row.lower), fmt(row.upper)});
      else
        inv.rows.push_back({fmt(row.p), "NA", "NA", "NA"});
    }
    out += "\n" + inv.to_text();
  }
  return out;
}

std::string default_out_dir() {
  const char* env = std::getenv("CIR_OUT_DIR");
  return env && *env ? env : ".";
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cir::ConfigError("cannot write output file: " + path);
  out << bytes;
}

int cmd_fit(const std::string& input, double level,
            std::vector<double> percentiles, const std::string& method,
            const std::string& inverse_method, bool sequential,
            const std::string& format, int grid_n, std::string out_path) {
  if (!(level > 0.0 && level < 1.0)) {
    std::cerr << "error: --level must lie in (0,1)\n";
    return kExitUsage;
  }
  for (double p : percentiles)
    if (!(p > 0.0 && p < 1.0)) {
      std::cerr << "error: --percentile values must lie in (0,1)\n";
      return kExitUsage;
    }

  FitReport r;
  r.data = read_csv(input);
  r.ir = cir::pava(r.data);
  r.cf = cir::cir_fit(r.data);
  auto curve = cir::curve_from_fit(r.cf);

  // analytic bounds are taken around the fitted estimates, not the raw
  // per-dose proportions
  std::vector<double> center(r.data.size());
  for (std::size_t j = 0; j < r.data.size(); ++j)
    center[j] = curve.evaluate(r.data.x[j]);

  const cir::BoundMethod bm = method_from_string(method);
  switch (bm) {
    case cir::BoundMethod::Combined:
      r.band = cir::combined_band(r.data, level, cir::BoundMethod::Wilson,
                                  center);
      break;
    case cir::BoundMethod::Morris:
      r.band = cir::morris_band(r.data, level);
      break;
    default:
      r.band = cir::pointwise_band(r.data, level, bm, center);
  }
  if (sequential)
    r.band = cir::sequential_inflation(r.band, r.data.total_n(), center);

  for (int g = 0; g < grid_n; ++g) {
    const double t = grid_n == 1 ? 0.0 : double(g) / (grid_n - 1);
    const double x = curve.x_min() + t * (curve.x_max() - curve.x_min());
    r.grid_x.push_back(x);
    r.grid_y.push_back(curve.evaluate(x));
  }

  for (double p : percentiles) {
    FitReport::InverseRow row;
    row.p = p;
    try {
      if (inverse_method == "global") {
        const auto pt = curve.invert(p);
        const auto iv = cir::global_inverse(r.band, p, pt.x);
        row.point = pt.x;
        row.lower = iv.lower;
        row.upper = iv.upper;
      } else {
        const auto iv = cir::local_inverse(curve, r.band, p);
        row.point = iv.point;
        row.lower = iv.lower;
        row.upper = iv.upper;
      }
    } catch (const cir::NotEstimableError& e) {
      row.note = e.what();
    } catch (const cir::NoIntervalError& e) {
      row.note = e.what();
    }
    r.inverse.push_back(row);
  }

  std::string bytes;
  if (format == "json")
    bytes = report_to_json(r).dump(2) + "\n";
  else if (format == "csv")
    bytes = report_to_csv(r);
  else
    bytes = report_to_text(r);

  if (out_path.empty())
    std::cout << bytes;
  else
    write_file(out_path, bytes);
  return 0;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cir::ConfigError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config parse error at line " << lineno << ": expected key = value";
      throw cir::ConfigError(msg.str());
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

int cmd_simulate(const std::string& config_path,
                 std::optional<std::uint64_t> seed_flag, std::string out_dir) {
  const auto cfg = read_config(config_path);
  const auto need = [&](const char* key) {
    auto it = cfg.find(key);
    if (it == cfg.end())
      throw cir::ConfigError(std::string("config missing required key: ") + key);
    return it->second;
  };

  const std::string table_id = need("table");
  std::uint64_t master_seed;
  if (seed_flag) {
    master_seed = *seed_flag;
  } else {
    master_seed = std::stoull(need("master_seed"));
  }
  const int ensemble = std::stoi(need("ensemble"));
  if (ensemble < 1) throw cir::ConfigError("ensemble must be >= 1");

  std::vector<cir::bench::Family> families = {cir::bench::Family::Logistic,
                                              cir::bench::Family::Weibull,
                                              cir::bench::Family::Staircase};
  if (auto it = cfg.find("families"); it != cfg.end()) {
    families.clear();
    for (const auto& name : split_list(it->second))
      families.push_back(cir::bench::family_from_string(name));
    if (families.empty()) throw cir::ConfigError("families list is empty");
  }
  std::vector<int> n_values = {20, 40, 80};
  if (auto it = cfg.find("n"); it != cfg.end()) {
    n_values.clear();
    for (const auto& v : split_list(it->second)) n_values.push_back(std::stoi(v));
    if (n_values.empty()) throw cir::ConfigError("n list is empty");
  }

  const cir::SummaryTable table = cir::bench::reproduce_table(
      table_id, ensemble, master_seed, families, n_values);

  if (out_dir.empty()) out_dir = default_out_dir();
  write_file(out_dir + "/" + table_id + ".csv", table.to_csv());
  write_file(out_dir + "/" + table_id + ".txt", table.to_text());
  std::cout << "wrote " << out_dir << "/" << table_id << ".{csv,txt}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"centered isotonic regression for binary dose-response data"};
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "fit a tallied dataset");
  std::string input, format = "text", method = "combined";
  std::string inverse_method = "local", out_path;
  double level = 0.90;
  std::vector<double> percentiles;
  bool sequential = false;
  int grid_n = 50;
  fit->add_option("input", input, "CSV file with dose,events,trials columns")
      ->required();
  fit->add_option("--level", level, "confidence level (default 0.90)");
  fit->add_option("--percentile", percentiles,
                  "target response rate for inverse estimation (repeatable)");
  fit->add_option("--interval-method", method,
                  "combined|morris|wilson|clopper-pearson|jeffreys|agresti-coull")
      ->check(CLI::IsMember({"combined", "morris", "wilson", "clopper-pearson",
                             "jeffreys", "agresti-coull"}));
  fit->add_option("--inverse-method", inverse_method, "local|global")
      ->check(CLI::IsMember({"local", "global"}));
  fit->add_flag("--sequential", sequential,
                "inflate bounds for a sequential dose-allocation design");
  fit->add_option("--format", format, "json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  fit->add_option("--grid", grid_n, "number of plot-grid samples (default 50)")
      ->check(CLI::PositiveNumber);
  fit->add_option("--out", out_path, "output file (default stdout)");

  auto* sim = app.add_subcommand("simulate", "run a simulation table");
  std::string config_path, sim_out;
  std::optional<std::uint64_t> seed_flag;
  sim->add_option("config", config_path, "key = value config file")->required();
  sim->add_option("--seed", seed_flag, "override the config's master_seed");
  sim->add_option("--out", sim_out,
                  "output directory (default $CIR_OUT_DIR or '.')");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    if (fit->parsed())
      return cmd_fit(input, level, percentiles, method, inverse_method,
                     sequential, format, grid_n, out_path);
    return cmd_simulate(config_path, seed_flag, sim_out);
  } catch (const cir::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cir::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
