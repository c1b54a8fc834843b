// selk — 2-Selmer invariants of quadratic twists over Q(sqrt(theta)).
//
// Subcommands: sweep, cnc-densities, identity-check, ek-stats, selmer-of-d.

#include <iostream>

#include <CLI11.hpp>

#include "selk/harness.hpp"

using selk::harness::ConfigError;
using selk::harness::RunConfig;
using selk::numtheory::i64;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string curve_spec;
  std::string gamma_spec;
  RunConfig cfg;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value config file");
    app->add_option("--curve", curve_spec, "curve roots a1,a2,a3");
    app->add_option("--theta", cfg.theta, "squarefree theta defining K = Q(sqrt(theta))");
    app->add_option("--xmax", cfg.range_max, "sweep bound");
    app->add_option("--gamma", gamma_spec, "weight gamma as P/Q");
    app->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    app->add_flag("--exact-g", cfg.exact_g, "compute the exact local sum g(d)");
    app->add_option("--out", cfg.out, "output path (default stdout)");
    app->add_flag("--json", cfg.json, "emit JSON instead of CSV/text");
  }

  RunConfig finalize(CLI::App* app) {
    RunConfig base;
    if (!config_path.empty()) selk::harness::load_config_file(config_path, base);
    // Command-line values override the config file.
    if (app->count("--theta")) base.theta = cfg.theta;
    if (app->count("--xmax")) base.range_max = cfg.range_max;
    if (app->count("--threads")) base.threads = cfg.threads;
    if (app->count("--exact-g")) base.exact_g = cfg.exact_g;
    if (app->count("--json")) base.json = cfg.json;
    if (app->count("--out")) base.out = cfg.out;
    if (!curve_spec.empty()) {
      i64 a1, a2, a3;
      char c1, c2;
      std::istringstream is(curve_spec);
      if (!(is >> a1 >> c1 >> a2 >> c2 >> a3) || c1 != ',' || c2 != ',')
        throw ConfigError("curve", "expected a1,a2,a3");
      base.a1 = a1;
      base.a2 = a2;
      base.a3 = a3;
    }
    if (!gamma_spec.empty()) {
      auto slash = gamma_spec.find('/');
      try {
        if (slash == std::string::npos) {
          base.gamma_num = std::stoll(gamma_spec);
          base.gamma_den = 1;
        } else {
          base.gamma_num = std::stoll(gamma_spec.substr(0, slash));
          base.gamma_den = std::stoll(gamma_spec.substr(slash + 1));
        }
      } catch (const std::exception&) {
        throw ConfigError("gamma", "expected P/Q");
      }
    }
    base.validate();
    return base;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-Selmer statistics for quadratic twists over Q(sqrt(theta))"};
  app.require_subcommand(1);

  CommonFlags sweep_f, dens_f, ident_f, ek_f, sel_f;
  auto* sweep = app.add_subcommand("sweep", "per-twist invariants as CSV");
  sweep_f.attach(sweep);
  auto* dens = app.add_subcommand("cnc-densities", "G-module densities for CNC prime twists");
  dens_f.attach(dens);
  auto* ident = app.add_subcommand("identity-check", "exact Jacobi-sum identity check");
  ident_f.attach(ident);
  std::vector<i64> xs;
  ident->add_option("x", xs, "cutoffs X (default 5 20 50 100)");
  auto* ek = app.add_subcommand("ek-stats", "Erdos-Kac empirics for omega_{E,K}");
  ek_f.attach(ek);
  auto* sel = app.add_subcommand("selmer-of-d", "S_d, Sel_Ctilde and g for one twist");
  sel_f.attach(sel);
  i64 dvalue = 0;
  sel->add_option("d", dvalue, "squarefree twist")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return selk::harness::run_sweep(sweep_f.finalize(sweep));
    if (dens->parsed()) return selk::harness::run_cnc_densities(dens_f.finalize(dens));
    if (ident->parsed()) {
      if (xs.empty()) xs = {5, 20, 50, 100};
      return selk::harness::run_identity_check(ident_f.finalize(ident), xs);
    }
    if (ek->parsed()) return selk::harness::run_ek_stats(ek_f.finalize(ek));
    if (sel->parsed()) return selk::harness::run_selmer_of_d(sel_f.finalize(sel), dvalue);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return selk::harness::kExitConfig;
  } catch (const selk::numtheory::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return selk::harness::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
