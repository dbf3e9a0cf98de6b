// Time marching of the master equation with truncation/validity guards and
// sampled observables. Fixed-step classical RK4 is the default; an embedded
// Dormand-Prince 5(4) pair provides adaptive stepping.
#pragma once

#include <utility>
#include <vector>

#include "mixsim/liouvillian.hpp"
#include "mixsim/model.hpp"
#include "mixsim/types.hpp"

namespace mixsim {

enum class StepMethod { FixedRK4, AdaptiveEmbedded };

struct EvolveConfig {
  double t_end = 2.85;
  double dt = 0.0;  // base step; 0 selects the default (scale formula + stability cap)
  double sample_interval = 1e-3;
  StepMethod method = StepMethod::FixedRK4;
  double rel_tol = 1e-6;
  double abs_tol = 1e-8;
  double cutoff_guard = 1e-6;    // max allowed top-level population
  double validity_guard = 0.1;   // max allowed <n_a>/N_a
  std::vector<double> snapshot_times;  // density matrices stored at these times
};

struct TimeSeriesRow {
  double t = 0, ne1 = 0, ne2 = 0, imix = 0;
  double trace_err = 0, herm_err = 0, min_diag = 0, top1 = 0, top2 = 0, phi = 0;
};

struct TimeSeries {
  std::vector<TimeSeriesRow> rows;
  std::vector<std::pair<double, DensityMatrix>> snapshots;
};

// Default step: (1/40) * min(2 pi / d_omega, 1/Obar_max, 1/(gamma N)_max, 1/bbar_max)
// with the collective scales Obar = Omega sqrt(N), bbar = max(|Dbar_1|, |Dbar_2|, B),
// additionally capped by 2.5 / spectral_bound for explicit-RK stability.
double default_dt(const GeneratorParts& gen, const Superop& s);

// Dense reference RK4 step (phi evaluated at t, t+dt/2, t+dt), then re-hermitize.
DensityMatrix step(const DensityMatrix& rho, double t, double dt, const GeneratorParts& gen);

// March rho0 to t_end, sampling every sample_interval.
// Throws CutoffExceeded / ValidityViolated / NumericalBlowup.
TimeSeries evolve(const DensityMatrix& rho0, const EvolveConfig& cfg, const GeneratorParts& gen);

// Ground-state start |0,0><0,0|.
DensityMatrix vacuum_state(const MixParams& p);

// Pilot-run cutoff search: doubles M from 4 until the top-level population guard
// holds; per-mode cutoffs are capped at the atom number; gives up above M=64.
std::pair<int, int> auto_cutoff(MixParams params, const EvolveConfig& cfg);

}  // namespace mixsim
