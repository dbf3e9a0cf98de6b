// Command-line front end: preset or custom runs, eta sweeps, CSV emission,
// and oracle comparison reports.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mixsim/csv.hpp"
#include "mixsim/dicke.hpp"
#include "mixsim/integrator.hpp"
#include "mixsim/model.hpp"
#include "mixsim/moments.hpp"
#include "mixsim/observables.hpp"
#include "mixsim/scenario.hpp"

namespace {

using namespace mixsim;

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

struct FlagSet {
  std::string scenario = "custom";
  std::string config;
  std::vector<std::pair<std::string, std::string>> overrides;  // applied in given order
};

void add_common_flags(CLI::App* cmd, FlagSet& fs) {
  cmd->add_option("preset", fs.scenario, "preset name (fig2|fig3|fig4|fig5|custom)");
  cmd->add_option("--scenario", fs.scenario, "preset name (same as the positional)");
  cmd->add_option("--config", fs.config, "flat key=value config file");

  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"--eta", "eta"},           {"--order", "order"},
      {"--cutoff", "cutoff"},     {"--cutoff1", "cutoff1"},
      {"--cutoff2", "cutoff2"},   {"--t-end", "t_end"},
      {"--dt", "dt"},             {"--sample-interval", "sample_interval"},
      {"--probe-times", "probe_times"},
      {"--output", "output"},     {"--oracle", "oracle"},
      {"--n", "n"},               {"--n1", "n1"},
      {"--n2", "n2"},             {"--gamma1", "gamma1"},
      {"--gamma2", "gamma2"},     {"--beta1", "beta1"},
      {"--beta2", "beta2"},       {"--delta1", "delta1"},
      {"--delta2", "delta2"},     {"--omega1", "omega1"},
      {"--omega2", "omega2"},     {"--omega", "omega"},
      {"--delta-omega", "delta_omega"}, {"--phi0", "phi0"},
      {"--method", "method"},     {"--grid", "eta_grid"},
  };
  for (const auto& [flag, key] : keys) {
    cmd->add_option_function<std::string>(
        flag, [&fs, key = key](const std::string& v) { fs.overrides.emplace_back(key, v); });
  }
  cmd->add_flag_callback("--distribution",
                         [&fs]() { fs.overrides.emplace_back("distribution", "1"); },
                         "emit the excitation-number distribution at the probe times");
}

Scenario assemble(const FlagSet& fs) {
  Scenario sc = make_scenario(fs.scenario);
  if (!fs.config.empty()) apply_config_file(sc, fs.config);
  for (const auto& [key, value] : fs.overrides) apply_setting(sc, key, value);
  sc.params.validate();
  return sc;
}

void emit_oracle_report(const Scenario& sc, const TimeSeries& ts) {
  const MixParams& p = sc.params;
  struct Ref { double t, ne1, ne2; };
  std::vector<Ref> ref;
  if (sc.oracle == "moments") {
    if (p.hp_order != HpOrder::Zeroth)
      throw std::invalid_argument("--oracle moments requires --order 0 (closed moments)");
    const GeneratorParts gen = build_generator(p);
    const double dt = sc.evolve.dt > 0 ? sc.evolve.dt : default_dt(gen, build_superop(gen));
    for (const auto& r : moment_evolve(p, sc.evolve.t_end, dt, sc.evolve.sample_interval))
      ref.push_back({r.t, r.ne1, r.ne2});
  } else {  // dicke
    for (const auto& r : dicke_evolve(p, sc.evolve.t_end, sc.evolve.dt, sc.evolve.sample_interval))
      ref.push_back({r.t, r.ne1, r.ne2});
  }

  const std::string path = with_suffix(sc.output_path, ".oracle");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# oracle=" << sc.oracle << " vs full density-matrix run\n";
  out << "t,Ne1_run,Ne1_oracle,dNe1,Ne2_run,Ne2_oracle,dNe2\n";
  double max1 = 0.0, max2 = 0.0;
  size_t j = 0;
  for (const auto& row : ts.rows) {
    while (j + 1 < ref.size() && std::abs(ref[j + 1].t - row.t) <= std::abs(ref[j].t - row.t)) ++j;
    if (j >= ref.size() || std::abs(ref[j].t - row.t) > 1e-9 * std::max(1.0, row.t)) continue;
    const double d1 = std::abs(row.ne1 - ref[j].ne1), d2 = std::abs(row.ne2 - ref[j].ne2);
    max1 = std::max(max1, d1);
    max2 = std::max(max2, d2);
    out << format_full(row.t) << ',' << format_full(row.ne1) << ',' << format_full(ref[j].ne1)
        << ',' << format_full(d1) << ',' << format_full(row.ne2) << ','
        << format_full(ref[j].ne2) << ',' << format_full(d2) << "\n";
  }
  std::cout << "oracle " << sc.oracle << ": max |dNe1| = " << format_full(max1)
            << ", max |dNe2| = " << format_full(max2) << " -> " << path << "\n";
}

int do_run(const Scenario& sc) {
  EvolveConfig cfg = sc.evolve;
  const std::vector<double> probes = probe_times_or_default(sc);
  if (sc.emit_distribution) cfg.snapshot_times = probes;

  const TimeSeries ts = evolve(vacuum_state(sc.params), cfg, build_generator(sc.params));
  write_series_csv(sc.output_path, sc, ts);
  std::cout << "wrote " << sc.output_path << " (" << ts.rows.size() << " rows)\n";

  if (sc.emit_distribution) {
    std::vector<DistributionEntry> entries;
    for (const auto& [t, rho] : ts.snapshots)
      for (int ens : {1, 2}) {
        const ExcitationDistribution d = excitation_distribution(rho, ens, sc.params);
        for (int i = 0; i < int(d.probabilities.size()); ++i)
          entries.push_back({ens, t, i, d.probabilities[i]});
      }
    const std::string dist_path = with_suffix(sc.output_path, ".dist");
    write_distribution_csv(dist_path, sc, entries);
    std::cout << "wrote " << dist_path << "\n";
  }
  if (!sc.oracle.empty()) emit_oracle_report(sc, ts);
  return 0;
}

int do_sweep(const Scenario& sc) {
  if (sc.eta_grid.empty())
    throw std::invalid_argument("sweep needs --grid (or a preset with a default grid)");
  const auto rows = sweep_eta(sc, sc.eta_grid, probe_times_or_default(sc));
  write_sweep_csv(sc.output_path, sc, rows);
  std::cout << "wrote " << sc.output_path << " (" << rows.size() << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-ensemble mixing simulator"};
  app.require_subcommand(1);

  FlagSet run_flags, sweep_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "evolve one parameter set and write a series CSV");
  add_common_flags(run_cmd, run_flags);
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "evolve over an eta grid and record Ne1 at probe times");
  add_common_flags(sweep_cmd, sweep_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return do_run(assemble(run_flags));
    return do_sweep(assemble(sweep_flags));
  } catch (const mixsim::CutoffExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mixsim::ValidityViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const mixsim::NumericalBlowup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
