// Command-line front end: parameter sweeps, figure checks and single curves.
//
//   isingdeph sweep  --config <path> [--jobs n] [--orders 1|2|3] [--emit-exact]
//                    [--correlators] [--out dir]
//   isingdeph check  --config <path>
//   isingdeph single --lambda x --g x --N n --t-max x --t-steps n
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 check failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ising_dephasing/ising_dephasing.hpp"

namespace {

using namespace ising_dephasing;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheck = 3;

/// Flags shared by `sweep` and `check`; each one overrides the config file.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> lambdas, gs, kernel, out;
  std::optional<int> N, t_steps, orders, quadrature_points;
  std::optional<double> t_max, omega0;
  std::optional<unsigned> jobs;
  bool emit_exact = false;
  bool correlators = false;
  bool verify_order3 = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "flat key = value configuration file");
    app->add_option("--lambdas", lambdas, "comma-separated transverse fields");
    app->add_option("--gs", gs, "comma-separated couplings");
    app->add_option("--N", N, "number of bath sites (even)");
    app->add_option("--t-max", t_max, "final time");
    app->add_option("--t-steps", t_steps, "number of uniform time samples (>= 2)");
    app->add_option("--orders", orders, "highest cumulant order (1-3)");
    app->add_option("--quadrature-points", quadrature_points, "order-3 quadrature points");
    app->add_option("--kernel", kernel, "second-order kernel: consistent|printed");
    app->add_option("--omega0", omega0, "qubit splitting");
    app->add_option("--jobs", jobs, "worker threads over (lambda, g) points");
    app->add_option("--out", out, "output directory");
    app->add_flag("--emit-exact", emit_exact, "also compute the exact decoherence function");
    app->add_flag("--correlators", correlators, "dump correlator values instead of curves");
    app->add_flag("--verify-order3", verify_order3,
                  "cross-check every third-order value against cube quadrature");
  }

  SweepConfig resolve() const {
    SweepConfig config = config_path ? load_config(*config_path) : SweepConfig{};
    if (lambdas) apply_config_entry(config, "lambdas", *lambdas);
    if (gs) apply_config_entry(config, "gs", *gs);
    if (kernel) config.kernel = parse_kernel(*kernel);
    if (out) config.outputs = *out;
    if (N) config.N = *N;
    if (t_steps) config.t_steps = *t_steps;
    if (orders) config.orders = *orders;
    if (quadrature_points) config.quadrature_points = *quadrature_points;
    if (t_max) config.t_max = *t_max;
    if (omega0) config.omega0 = *omega0;
    if (jobs) config.jobs = *jobs;
    if (emit_exact) config.emit_exact = true;
    if (correlators) config.correlators = true;
    if (verify_order3) config.verify_order3 = true;
    config.validate();
    return config;
  }
};

int run_sweep_command(const Overrides& o) {
  const auto config = o.resolve();
  const auto result = run_sweep(config);
  for (const auto& f : result.files) std::cerr << "wrote " << f.string() << '\n';
  return 0;
}

int run_check_command(const Overrides& o) {
  const auto config = o.resolve();
  const auto report = check_figures(config);
  for (const auto& v : report.verdicts)
    std::cout << (v.passed ? "PASS" : "FAIL") << "  " << v.claim << " [" << v.scope << "]  "
              << v.detail << '\n';
  return report.passed() ? 0 : kExitCheck;
}

struct SingleArgs {
  double lambda = 0.5;
  double g = 0.01;
  int N = 1000;
  double t_max = 5.0;
  int t_steps = 64;
  int orders = 3;
  int quadrature_points = 128;
  double omega0 = 0.0;
  std::string kernel = "consistent";
};

int run_single_command(const SingleArgs& a) {
  SweepConfig config;
  config.lambdas = {a.lambda};
  config.gs = {a.g};
  config.N = a.N;
  config.t_max = a.t_max;
  config.t_steps = a.t_steps;
  config.orders = a.orders;
  config.quadrature_points = a.quadrature_points;
  config.omega0 = a.omega0;
  config.kernel = parse_kernel(a.kernel);
  config.emit_exact = true;
  config.validate();
  write_curve_csv(std::cout, compute_curve(config, a.lambda, a.g));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit dephasing in a transverse-field Ising bath: cumulant series vs exact"};
  app.require_subcommand(1);

  Overrides sweep_opts, check_opts;
  auto* sweep = app.add_subcommand("sweep", "run a (lambda, g) sweep and write CSV curves");
  sweep_opts.attach(sweep);
  auto* check = app.add_subcommand("check", "evaluate the qualitative regime claims on sweep CSVs");
  check_opts.attach(check);

  SingleArgs single_args;
  auto* single = app.add_subcommand("single", "write one curve (series and exact) to stdout");
  single->add_option("--lambda", single_args.lambda, "transverse field")->required();
  single->add_option("--g", single_args.g, "coupling")->required();
  single->add_option("--N", single_args.N, "number of bath sites (even)")->required();
  single->add_option("--t-max", single_args.t_max, "final time")->required();
  single->add_option("--t-steps", single_args.t_steps, "number of time samples")->required();
  single->add_option("--orders", single_args.orders, "highest cumulant order (1-3)");
  single->add_option("--quadrature-points", single_args.quadrature_points,
                     "order-3 quadrature points");
  single->add_option("--omega0", single_args.omega0, "qubit splitting");
  single->add_option("--kernel", single_args.kernel, "second-order kernel: consistent|printed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sweep) return run_sweep_command(sweep_opts);
    if (*check) return run_check_command(check_opts);
    if (*single) return run_single_command(single_args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedParameter& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DegenerateInput& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
