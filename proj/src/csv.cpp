#include "mixsim/csv.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mixsim {

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> parameter_echo(const Scenario& sc) {
  const MixParams& p = sc.params;
  const EvolveConfig& e = sc.evolve;
  auto mode_line = [](const char* tag, const ModeSpec& m) {
    std::ostringstream os;
    os << "# " << tag << ": n=" << m.atom_number << " gamma=" << format_full(m.gamma)
       << " beta=" << format_full(m.beta) << " delta=" << format_full(m.delta)
       << " omega=" << format_full(m.omega_rabi) << " cutoff=" << m.cutoff;
    return os.str();
  };
  std::vector<std::string> lines;
  lines.push_back("# two-ensemble mixing simulator");
  lines.push_back("# units: rates in gamma1, times in 1/gamma1");
  {
    std::ostringstream os;
    os << "# scenario=" << sc.name << " order=" << (p.hp_order == HpOrder::Zeroth ? 0 : 1)
       << " eta=" << format_full(p.eta) << " delta_omega=" << format_full(p.delta_omega)
       << " phi0=" << format_full(p.phi0);
    lines.push_back(os.str());
  }
  lines.push_back(mode_line("mode1", p.mode1));
  lines.push_back(mode_line("mode2", p.mode2));
  {
    std::ostringstream os;
    os << "# evolve: t_end=" << format_full(e.t_end) << " dt=" << format_full(e.dt)
       << " sample_interval=" << format_full(e.sample_interval)
       << " method=" << (e.method == StepMethod::FixedRK4 ? "rk4" : "dp54");
    lines.push_back(os.str());
  }
  return lines;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void write_echo(std::ofstream& out, const Scenario& sc) {
  for (const auto& line : parameter_echo(sc)) out << line << "\n";
}

bool data_line(const std::string& line) {
  return !line.empty() && line[0] != '#' &&
         (std::isdigit((unsigned char)line[0]) || line[0] == '-' || line[0] == '+' ||
          line[0] == '.' || line[0] == 'n' || line[0] == 'i');
}

std::vector<double> split_doubles(const std::string& line, size_t expected,
                                  const std::string& path) {
  std::vector<double> vals;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::strtod(item.c_str(), nullptr));
  if (vals.size() != expected)
    throw std::runtime_error(path + ": expected " + std::to_string(expected) +
                             " columns, got " + std::to_string(vals.size()));
  return vals;
}

}  // namespace

void write_series_csv(const std::string& path, const Scenario& sc, const TimeSeries& series) {
  auto out = open_out(path);
  write_echo(out, sc);
  out << "t,Ne1,Ne2,Imix_over_Ngamma,trace_err,herm_err,min_diag,top1,top2,phi\n";
  for (const auto& r : series.rows)
    out << format_full(r.t) << ',' << format_full(r.ne1) << ',' << format_full(r.ne2) << ','
        << format_full(r.imix) << ',' << format_full(r.trace_err) << ','
        << format_full(r.herm_err) << ',' << format_full(r.min_diag) << ','
        << format_full(r.top1) << ',' << format_full(r.top2) << ',' << format_full(r.phi)
        << "\n";
}

void write_sweep_csv(const std::string& path, const Scenario& sc,
                     const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  write_echo(out, sc);
  out << "eta,t_probe,Ne1\n";
  for (const auto& r : rows)
    out << format_full(r.eta) << ',' << format_full(r.t_probe) << ',' << format_full(r.ne1)
        << "\n";
}

void write_distribution_csv(const std::string& path, const Scenario& sc,
                            const std::vector<DistributionEntry>& entries) {
  auto out = open_out(path);
  write_echo(out, sc);
  out << "ensemble,t_probe,i,P_i\n";
  for (const auto& d : entries)
    out << d.ensemble << ',' << format_full(d.t_probe) << ',' << d.i << ',' << format_full(d.p)
        << "\n";
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  TimeSeries ts;
  std::string line;
  while (std::getline(in, line)) {
    if (!data_line(line)) continue;
    const auto v = split_doubles(line, 10, path);
    TimeSeriesRow r;
    r.t = v[0]; r.ne1 = v[1]; r.ne2 = v[2]; r.imix = v[3]; r.trace_err = v[4];
    r.herm_err = v[5]; r.min_diag = v[6]; r.top1 = v[7]; r.top2 = v[8]; r.phi = v[9];
    ts.rows.push_back(r);
  }
  return ts;
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<SweepRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!data_line(line)) continue;
    const auto v = split_doubles(line, 3, path);
    rows.push_back({v[0], v[1], v[2]});
  }
  return rows;
}

}  // namespace mixsim
