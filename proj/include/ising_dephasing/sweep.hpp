#pragma once

#include <algorithm>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ising_dephasing/correlators.hpp"
#include "ising_dephasing/cumulant.hpp"
#include "ising_dephasing/errors.hpp"
#include "ising_dephasing/exact.hpp"
#include "ising_dephasing/model.hpp"

namespace ising_dephasing {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct SweepConfig {
  std::vector<double> lambdas{0.5};
  std::vector<double> gs{0.01};
  int N = 1000;
  double t_max = 5.0;
  int t_steps = 64;
  int orders = 3;
  std::filesystem::path outputs = "out";
  bool emit_exact = false;
  bool correlators = false;
  int quadrature_points = 128;
  bool verify_order3 = false;
  unsigned jobs = 1;
  double omega0 = 0.0;
  SecondOrderKernel kernel = kDefaultSecondOrderKernel;

  void validate() const {
    if (lambdas.empty()) throw ConfigError("lambdas must not be empty");
    if (gs.empty()) throw ConfigError("gs must not be empty");
    for (double l : lambdas)
      if (!(l >= 0.0) || !std::isfinite(l)) throw ConfigError("every lambda must be >= 0");
    for (double g : gs)
      if (!std::isfinite(g)) throw ConfigError("every g must be finite");
    if (N < 2 || N % 2 != 0) throw ConfigError("N must be an even integer >= 2");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be positive");
    if (t_steps < 2) throw ConfigError("t_steps must be >= 2");
    if (orders < 1 || orders > 3) throw ConfigError("orders must be 1, 2 or 3");
    if (quadrature_points < 8) throw ConfigError("quadrature_points must be >= 8");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("invalid number '" + text + "' for key '" + key + "'");
  return value;
}

inline long parse_integer(const std::string& key, const std::string& text) {
  long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("invalid integer '" + text + "' for key '" + key + "'");
  return value;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list element for key '" + key + "'");
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("list for key '" + key + "' is empty");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean '" + text + "' for key '" + key + "'");
}

}  // namespace detail

inline SecondOrderKernel parse_kernel(const std::string& text) {
  if (text == "consistent" || text == "exact-consistent") return SecondOrderKernel::ExactConsistent;
  if (text == "printed" || text == "as-printed") return SecondOrderKernel::AsPrinted;
  throw ConfigError("unknown second-order kernel '" + text + "' (expected consistent|printed)");
}

/// Applies one `key = value` entry. Keys mirror the long CLI flags, with '-'
/// and '_' interchangeable.
inline void apply_config_entry(SweepConfig& config, std::string key, const std::string& value) {
  std::replace(key.begin(), key.end(), '-', '_');
  using namespace detail;
  if (key == "lambdas" || key == "lambda") {
    config.lambdas = parse_list(key, value);
  } else if (key == "gs" || key == "g") {
    config.gs = parse_list(key, value);
  } else if (key == "N" || key == "n") {
    config.N = static_cast<int>(parse_integer(key, value));
  } else if (key == "t_max") {
    config.t_max = parse_double(key, value);
  } else if (key == "t_steps") {
    config.t_steps = static_cast<int>(parse_integer(key, value));
  } else if (key == "orders") {
    config.orders = static_cast<int>(parse_integer(key, value));
  } else if (key == "out" || key == "outputs") {
    config.outputs = value;
  } else if (key == "emit_exact") {
    config.emit_exact = parse_bool(key, value);
  } else if (key == "correlators") {
    config.correlators = parse_bool(key, value);
  } else if (key == "quadrature_points") {
    config.quadrature_points = static_cast<int>(parse_integer(key, value));
  } else if (key == "verify_order3") {
    config.verify_order3 = parse_bool(key, value);
  } else if (key == "jobs") {
    const long jobs = parse_integer(key, value);
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    config.jobs = static_cast<unsigned>(jobs);
  } else if (key == "omega0") {
    config.omega0 = parse_double(key, value);
  } else if (key == "kernel" || key == "second_order_kernel") {
    config.kernel = parse_kernel(value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

/// Flat `key = value` text; '#' starts a comment; list values are
/// comma-separated.
inline SweepConfig parse_config(std::istream& in, SweepConfig config = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(std::string_view(line).substr(0, eq));
    const auto value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": missing key");
    apply_config_entry(config, key, value);
  }
  return config;
}

inline SweepConfig load_config(const std::filesystem::path& path, SweepConfig config = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, std::move(config));
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCurveHeader =
    "t,re_g1,im_g1,re_g2,im_g2,re_g3,im_g3,re_series,im_series,re_exact,im_exact,abs_g2,abs_g3";
inline constexpr std::string_view kSummaryHeader =
    "lambda,g,t_star,max_abs_exact_minus_series,near_critical";
inline constexpr std::string_view kCorrelatorHeader = "t,c1,c2_irr,c3_irr";

/// 17 significant digits; negative zero is written as 0.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

/// Shortest round-trip representation, used in file names.
inline std::string format_label(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string curve_filename(double lambda, double g) {
  return "curve_lambda" + format_label(lambda) + "_g" + format_label(g) + ".csv";
}

inline std::string correlator_filename(double lambda) {
  return "correlators_lambda" + format_label(lambda) + ".csv";
}

struct CurveData {
  double lambda = 0.0;
  double g = 0.0;
  std::vector<CumulantTerms> series;
  std::optional<std::vector<complex>> exact;  // series convention
};

inline ModelParams params_for(const SweepConfig& config, double lambda, double g) {
  ModelParams p;
  p.N = config.N;
  p.lambda = lambda;
  p.g = g;
  p.omega0 = config.omega0;
  return p;
}

inline CurveData compute_curve(const SweepConfig& config, double lambda, double g) {
  const auto params = params_for(config, lambda, g);
  const auto grid = make_kgrid(params);
  const auto times = uniform_times(config.t_max, config.t_steps);
  SeriesOptions options;
  options.kernel = config.kernel;
  options.order3.quadrature_points = config.quadrature_points;
  options.order3.verify = config.verify_order3;

  CurveData data;
  data.lambda = lambda;
  data.g = g;
  data.series = gamma_series(params, grid, times, config.orders, options);
  if (config.emit_exact) data.exact = series_convention(gamma_exact(params, grid, times), grid);
  return data;
}

inline void write_curve_csv(std::ostream& out, const CurveData& data) {
  out << kCurveHeader << '\n';
  for (std::size_t i = 0; i < data.series.size(); ++i) {
    const auto& r = data.series[i];
    const std::string exact_re = data.exact ? format_number((*data.exact)[i].real()) : "";
    const std::string exact_im = data.exact ? format_number((*data.exact)[i].imag()) : "";
    out << format_number(r.t) << ',' << format_number(r.gamma1.real()) << ','
        << format_number(r.gamma1.imag()) << ',' << format_number(r.gamma2.real()) << ','
        << format_number(r.gamma2.imag()) << ',' << format_number(r.gamma3.real()) << ','
        << format_number(r.gamma3.imag()) << ',' << format_number(r.truncated_sum.real()) << ','
        << format_number(r.truncated_sum.imag()) << ',' << exact_re << ',' << exact_im << ','
        << format_number(std::abs(r.gamma2)) << ',' << format_number(std::abs(r.gamma3)) << '\n';
  }
}

struct SummaryRow {
  double lambda = 0.0;
  double g = 0.0;
  std::optional<double> t_star;        // first sampled t with |gamma3| > |gamma2|
  std::optional<double> max_deviation;  // max |exact - series|
  bool near_critical = false;
};

inline constexpr double kNearCriticalWindow = 0.05;

inline SummaryRow summarize(const CurveData& data) {
  SummaryRow row;
  row.lambda = data.lambda;
  row.g = data.g;
  row.near_critical = std::abs(data.lambda - 1.0) <= kNearCriticalWindow;
  for (const auto& r : data.series) {
    if (r.t > 0.0 && std::abs(r.gamma3) > std::abs(r.gamma2)) {
      row.t_star = r.t;
      break;
    }
  }
  if (data.exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < data.series.size(); ++i)
      worst = std::max(worst, std::abs((*data.exact)[i] - data.series[i].truncated_sum));
    row.max_deviation = worst;
  }
  return row;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.lambda) << ',' << format_number(r.g) << ','
        << (r.t_star ? format_number(*r.t_star) : "") << ','
        << (r.max_deviation ? format_number(*r.max_deviation) : "") << ','
        << (r.near_critical ? 1 : 0) << '\n';
  }
}

inline void write_correlator_csv(std::ostream& out, const SweepConfig& config, double lambda) {
  const auto params = params_for(config, lambda, 0.0);
  const auto grid = make_kgrid(params);
  const double first = c1(params, grid).value.real();
  out << kCorrelatorHeader << '\n';
  for (double t : uniform_times(config.t_max, config.t_steps)) {
    out << format_number(t) << ',' << format_number(first) << ','
        << format_number(c2_irreducible(params, grid, t, 0.0, config.kernel).value.real()) << ','
        << format_number(c3_irreducible(params, grid, t, 0.5 * t, 0.0).value.real()) << '\n';
  }
}

inline void write_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  writer(out);
  out.flush();
  if (!out) throw ConfigError("failed writing " + path.string());
}

struct SweepResult {
  std::vector<std::filesystem::path> files;
  std::vector<SummaryRow> summary;
};

/// Runs every (lambda, g) point, writes one curve CSV per point and a
/// summary.csv (or, in correlator mode, one correlator CSV per lambda).
/// Points are distributed over `config.jobs` workers; every file is produced
/// by a single worker, so output does not depend on the job count.
inline SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.outputs, ec);
  if (ec || !std::filesystem::is_directory(config.outputs))
    throw ConfigError("cannot create output directory " + config.outputs.string());

  SweepResult result;
  if (config.correlators) {
    for (double lambda : config.lambdas) {
      const auto path = config.outputs / correlator_filename(lambda);
      write_file(path, [&](std::ostream& out) { write_correlator_csv(out, config, lambda); });
      result.files.push_back(path);
    }
    return result;
  }

  std::vector<std::pair<double, double>> points;
  for (double lambda : config.lambdas)
    for (double g : config.gs) points.emplace_back(lambda, g);

  result.summary.resize(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  auto work = [&](std::size_t i) {
    try {
      const auto [lambda, g] = points[i];
      const auto data = compute_curve(config, lambda, g);
      write_file(config.outputs / curve_filename(lambda, g),
                 [&](std::ostream& out) { write_curve_csv(out, data); });
      result.summary[i] = summarize(data);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const unsigned workers = std::min<unsigned>(config.jobs, static_cast<unsigned>(points.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < workers; ++id)
      pool.emplace_back([&, id] {
        for (std::size_t i = id; i < points.size(); i += workers) work(i);
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& [lambda, g] : points) result.files.push_back(config.outputs / curve_filename(lambda, g));
  const auto summary_path = config.outputs / "summary.csv";
  write_file(summary_path, [&](std::ostream& out) { write_summary_csv(out, result.summary); });
  result.files.push_back(summary_path);
  return result;
}

// ---------------------------------------------------------------------------
// Qualitative checks against the emitted CSVs
// ---------------------------------------------------------------------------

struct CurveRow {
  double t, re_g1, im_g1, re_g2, im_g2, re_g3, im_g3, re_series, im_series;
  std::optional<double> re_exact, im_exact;
  double abs_g2, abs_g3;
};

inline std::vector<CurveRow> read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("missing curve file " + path.string() + " (run `sweep` first)");
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader)
    throw ConfigError("unexpected header in " + path.string());
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 13) throw ConfigError("malformed row in " + path.string());
    auto num = [&](int i) { return detail::parse_double("csv", f[i]); };
    auto opt = [&](int i) -> std::optional<double> {
      if (f[i].empty()) return std::nullopt;
      return num(i);
    };
    rows.push_back({num(0), num(1), num(2), num(3), num(4), num(5), num(6), num(7), num(8), opt(9),
                    opt(10), num(11), num(12)});
  }
  return rows;
}

struct ClaimVerdict {
  std::string claim;
  std::string scope;
  bool passed;
  std::string detail;
};

struct CheckReport {
  std::vector<ClaimVerdict> verdicts;
  bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.passed; });
  }
};

inline constexpr double kWeakCoupling = 0.01;
inline constexpr double kStrongCoupling = 1.0;
inline constexpr double kScalingTolerance = 1e-6;
inline constexpr double kMonotoneSlack = 1e-9;

/// Evaluates the weak/strong coupling regime claims, the g^3 scaling of the
/// third order, near-critical monotone growth, and the row identities on the
/// CSVs written by run_sweep for the same configuration.
inline CheckReport check_figures(const SweepConfig& config) {
  config.validate();
  CheckReport report;
  auto scope = [](double lambda, double g) {
    return "lambda=" + format_label(lambda) + " g=" + format_label(g);
  };
  auto witness = [](double lambda, double g, double t) {
    std::ostringstream os;
    os << "witness (lambda, g, t) = (" << format_label(lambda) << ", " << format_label(g) << ", "
       << format_number(t) << ")";
    return os.str();
  };

  std::map<std::pair<double, double>, std::vector<CurveRow>> curves;
  for (double lambda : config.lambdas)
    for (double g : config.gs)
      curves[{lambda, g}] = read_curve_csv(config.outputs / curve_filename(lambda, g));

  for (const auto& [key, rows] : curves) {
    const auto [lambda, g] = key;
    // Row identities.
    bool ok = true;
    std::string detail = "series = sum of orders on every row";
    for (const auto& r : rows) {
      const double gap = std::abs(r.im_g1 + r.im_g3 - r.im_series) + std::abs(r.re_g2 - r.re_series);
      if (config.orders == 3 && gap >= 1e-12) {
        ok = false;
        detail = "assembly gap " + format_number(gap) + ", " + witness(lambda, g, r.t);
        break;
      }
      if (r.re_exact && *r.re_exact > 1e-10) {
        ok = false;
        detail = "Re exact > 0, " + witness(lambda, g, r.t);
        break;
      }
    }
    report.verdicts.push_back({"row identities", scope(lambda, g), ok, detail});

    if (config.orders < 3) continue;
    if (g != 0.0 && std::abs(g) <= kWeakCoupling) {
      bool weak_ok = true;
      std::string d = "|gamma3| < |gamma2| for all sampled t > 0";
      for (const auto& r : rows)
        if (r.t > 0.0 && !(r.abs_g3 < r.abs_g2)) {
          weak_ok = false;
          d = "|gamma3| >= |gamma2|, " + witness(lambda, g, r.t);
          break;
        }
      report.verdicts.push_back({"weak-coupling ordering", scope(lambda, g), weak_ok, d});
    }
    if (std::abs(g) >= kStrongCoupling) {
      std::optional<double> crossing;
      for (const auto& r : rows)
        if (r.t > 0.0 && r.abs_g3 > r.abs_g2) {
          crossing = r.t;
          break;
        }
      report.verdicts.push_back(
          {"strong-coupling crossing", scope(lambda, g), crossing.has_value(),
           crossing ? "t* = " + format_number(*crossing)
                    : "no t <= " + format_number(config.t_max) + " with |gamma3| > |gamma2|"});
      if (lambda >= 0.9 && lambda < 1.0) {
        bool mono = true;
        std::string d = "|gamma3| non-decreasing on [0, t_max]";
        double peak = 0.0;
        for (const auto& r : rows) peak = std::max(peak, r.abs_g3);
        for (std::size_t i = 1; i < rows.size(); ++i)
          if (rows[i].abs_g3 < rows[i - 1].abs_g3 - kMonotoneSlack * peak) {
            mono = false;
            d = "|gamma3| decreases, " + witness(lambda, g, rows[i].t);
            break;
          }
        report.verdicts.push_back({"near-critical monotone growth", scope(lambda, g), mono, d});
      }
    }
  }

  // g^3 scaling across the configured couplings, per lambda.
  if (config.orders == 3) {
    for (double lambda : config.lambdas) {
      std::vector<double> nonzero;
      for (double g : config.gs)
        if (g != 0.0) nonzero.push_back(g);
      if (nonzero.size() < 2) continue;
      const double g_ref = nonzero.front();
      const auto& ref = curves[{lambda, g_ref}];
      bool ok = true;
      double worst = 0.0;
      std::string d;
      for (double g : nonzero) {
        const auto& rows = curves[{lambda, g}];
        const double expected = std::pow(std::abs(g / g_ref), 3);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (ref[i].abs_g3 == 0.0) continue;
          const double dev = std::abs(rows[i].abs_g3 / ref[i].abs_g3 - expected) / expected;
          worst = std::max(worst, dev);
          if (dev > kScalingTolerance && ok) {
            ok = false;
            d = "ratio off by " + format_number(dev) + ", " + witness(lambda, g, rows[i].t);
          }
        }
      }
      if (ok) d = "max relative deviation " + format_number(worst);
      report.verdicts.push_back({"g^3 scaling of gamma3", "lambda=" + format_label(lambda), ok, d});
    }
  }
  return report;
}

}  // namespace ising_dephasing
