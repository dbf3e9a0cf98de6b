#pragma once

// Named parameter presets, flat key=value config handling, and the eta sweep.

#include <string>
#include <vector>

#include "mixsim/integrator.hpp"
#include "mixsim/types.hpp"

namespace mixsim {

struct Scenario {
  std::string name = "custom";  // fig2 | fig3 | fig4 | fig5 | custom
  MixParams params;
  EvolveConfig evolve;
  std::vector<double> probe_times;  // empty: {1/4, 1/2, 3/4, 1} * t_end
  std::vector<double> eta_grid;     // sweep grid; presets fill a default
  std::string output_path = "series.csv";
  bool emit_distribution = false;
  std::string oracle;  // "", "moments", "dicke"
};

Scenario make_scenario(const std::string& name);

// One key=value override; throws std::invalid_argument on unknown key or bad value.
void apply_setting(Scenario& sc, const std::string& key, const std::string& value);

// Flat key=value file ('#' comments, blank lines ignored).
void apply_config_file(Scenario& sc, const std::string& path);

std::vector<double> probe_times_or_default(const Scenario& sc);

struct SweepRow {
  double eta = 0.0;
  double t_probe = 0.0;
  double ne1 = 0.0;
};

// One evolve per grid point (worker pool), Ne1 read at the sample row nearest
// each probe time; rows sorted by (eta, t_probe).
std::vector<SweepRow> sweep_eta(const Scenario& sc, const std::vector<double>& grid,
                                const std::vector<double>& probe_times);

}  // namespace mixsim
