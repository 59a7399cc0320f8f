// Benchmark front end: runs the variance-reduction experiments and the
// numerical-analysis checks, writing CSV (plus a gnuplot script for the
// sweep).  Exit codes: 0 ok, 2 config error, 3 parameter/regime error,
// 4 runtime error.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hestonis/bench/config.hpp"
#include "hestonis/bench/csv.hpp"
#include "hestonis/bench/experiments.hpp"

namespace {

using namespace hestonis;
using namespace hestonis::bench;

struct CliOverrides {
  std::string config_path;
  std::optional<std::size_t> paths;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<std::string> out;
  std::optional<std::string> regime;
  std::optional<int> threads;
  std::optional<double> strike;
  std::optional<double> maturity;
  std::optional<double> s0;
};

ExperimentConfig build_config(ExperimentKind kind, const CliOverrides& o) {
  ExperimentConfig cfg = default_config(kind);
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) throw ConfigError("cannot read config file: " + o.config_path);
    std::ostringstream buf;
    buf << f.rdbuf();
    cfg = parse_config(buf.str(), cfg);
    cfg.kind = kind;  // the subcommand wins over any kind= in the file
  }
  if (o.paths) cfg.sim.n_paths = *o.paths;
  if (o.steps) cfg.sim.n_steps = *o.steps;
  if (o.seed) cfg.sim.seed = *o.seed;
  if (o.scheme) cfg.sim.scheme = scheme_from_name(*o.scheme);
  if (o.out) cfg.out = *o.out;
  if (o.regime) cfg.regime = regime_from_name(*o.regime);
  if (o.threads) cfg.sim.n_threads = *o.threads;
  if (o.strike) cfg.strike = *o.strike;
  if (o.maturity) cfg.maturity = *o.maturity;
  if (o.s0) cfg.s0 = *o.s0;
  return cfg;
}

void emit(const ExperimentConfig& cfg, const CsvTable& table) {
  const std::string text = table.to_string();
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  write_file(cfg.out, text);
  std::cout << "wrote " << cfg.out << "\n";
  if (cfg.kind == ExperimentKind::VrrSweep) {
    const std::string gp = cfg.out + ".gp";
    write_file(gp, sweep_plot_script(cfg, cfg.out));
    std::cout << "wrote " << gp << "\n";
  }
}

int run(ExperimentKind kind, const CliOverrides& o) {
  const ExperimentConfig cfg = build_config(kind, o);
  switch (kind) {
    case ExperimentKind::Table1: emit(cfg, run_table1(cfg)); break;
    case ExperimentKind::VrrSweep: emit(cfg, run_vrr_sweep(cfg)); break;
    case ExperimentKind::ScgfCheck: emit(cfg, run_scgf_check(cfg)); break;
    case ExperimentKind::OptimalityReport: emit(cfg, run_optimality_report(cfg)); break;
    case ExperimentKind::Price: emit(cfg, run_price(cfg)); break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heston importance-sampling benchmark harness"};
  app.require_subcommand(1);

  CliOverrides o;
  ExperimentKind kind = ExperimentKind::Price;

  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--config", o.config_path, "sectioned key=value config file");
    cmd->add_option("--paths", o.paths, "Monte Carlo paths M");
    cmd->add_option("--steps", o.steps, "time steps per path (0 = per-maturity default)");
    cmd->add_option("--seed", o.seed, "master RNG seed");
    cmd->add_option("--scheme", o.scheme, "euler|milstein")
        ->check(CLI::IsMember({"euler", "milstein"}));
    cmd->add_option("--out", o.out, "output CSV path (empty = stdout)");
    cmd->add_option("--regime", o.regime, "short|deep|both")
        ->check(CLI::IsMember({"short", "deep", "both"}));
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    cmd->add_option("--strike", o.strike, "strike K");
    cmd->add_option("--maturity", o.maturity, "maturity T in years");
    cmd->add_option("--s0", o.s0, "spot price");
  };

  auto* table1 = app.add_subcommand("table1", "BMC vs IS comparison at two maturities");
  table1->callback([&kind]() { kind = hestonis::bench::ExperimentKind::Table1; });
  add_common(table1);
  auto* sweep = app.add_subcommand("vrr-sweep", "VRR across a strike grid and maturities");
  sweep->callback([&kind]() { kind = hestonis::bench::ExperimentKind::VrrSweep; });
  add_common(sweep);
  auto* scgf = app.add_subcommand("scgf-check", "closed-form SCGFs against the ODE oracle");
  scgf->callback([&kind]() { kind = hestonis::bench::ExperimentKind::ScgfCheck; });
  add_common(scgf);
  auto* opt = app.add_subcommand("optimality-report", "Hoelder bound minimiser and gap");
  opt->callback([&kind]() { kind = hestonis::bench::ExperimentKind::OptimalityReport; });
  add_common(opt);
  auto* price = app.add_subcommand("price", "all three pricers on one (K, T)");
  price->callback([&kind]() { kind = hestonis::bench::ExperimentKind::Price; });
  add_common(price);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    return run(kind, o);
  } catch (const hestonis::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hestonis::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hestonis::RegimeError& e) {
    std::cerr << "parameter-regime error: " << e.what() << "\n";
    return 3;
  } catch (const hestonis::DomainError& e) {
    std::cerr << "parameter-regime error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 4;
  }
}
