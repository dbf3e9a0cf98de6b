#pragma once

// Plot-ready CSV emission with '#' parameter-echo headers, full-precision
// (17 significant digit) decimal formatting, LF line endings — plus parsers
// for round-trip checks.

#include <string>
#include <vector>

#include "mixsim/integrator.hpp"
#include "mixsim/scenario.hpp"

namespace mixsim {

struct DistributionEntry {
  int ensemble = 1;
  double t_probe = 0.0;
  int i = 0;
  double p = 0.0;
};

std::string format_full(double v);  // shortest decimal that round-trips (17 sig digits)

std::vector<std::string> parameter_echo(const Scenario& sc);

void write_series_csv(const std::string& path, const Scenario& sc, const TimeSeries& series);
void write_sweep_csv(const std::string& path, const Scenario& sc,
                     const std::vector<SweepRow>& rows);
void write_distribution_csv(const std::string& path, const Scenario& sc,
                            const std::vector<DistributionEntry>& entries);

TimeSeries read_series_csv(const std::string& path);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

}  // namespace mixsim
