#include "mixsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mixsim {

namespace {

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    out.push_back(v);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric value for '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw std::invalid_argument("expected integer for '" + key + "'");
  return int(v);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Scenario make_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  // Baseline: gamma1,2 = 1, Delta1,2 = 0, beta1,2 = 10, delta_omega = 50,
  // Omega1,2 = 30, phi0 = 0, N1,2 = 100 (the MixParams/ModeSpec defaults).
  if (name == "custom" || name == "fig2") {
    return sc;
  }
  if (name == "fig3") {
    // Larger-ensemble variant of the fig2 run; N in {100, 200, 500} in the
    // source figures — 200 here, override for the other panels.
    sc.params.mode1.atom_number = 200;
    sc.params.mode2.atom_number = 200;
    return sc;
  }
  if (name == "fig4" || name == "fig5") {
    sc.params.mode1.atom_number = 1000;
    sc.params.mode2.atom_number = 1000;
    sc.params.hp_order = HpOrder::Zeroth;
    // One eighth of the slow beat period 2 pi / delta_omega: the excitation
    // jump develops well inside it.
    sc.evolve.t_end = 2.0 * M_PI / sc.params.delta_omega / 8.0;
    sc.evolve.sample_interval = sc.evolve.t_end / 512.0;
    for (int i = 0; i <= 19; ++i) sc.eta_grid.push_back(0.05 * i);
    if (name == "fig5") {
      sc.params.eta = 0.85;  // panel (a); 0.95 is panel (b)
      sc.emit_distribution = true;
    }
    return sc;
  }
  throw std::invalid_argument("unknown scenario '" + name +
                              "' (expected fig2|fig3|fig4|fig5|custom)");
}

void apply_setting(Scenario& sc, const std::string& key, const std::string& value) {
  MixParams& p = sc.params;
  EvolveConfig& e = sc.evolve;
  auto both = [&](double ModeSpec::* field, double v) {
    p.mode1.*field = v;
    p.mode2.*field = v;
  };
  if (key == "eta") p.eta = parse_double(key, value);
  else if (key == "delta_omega") p.delta_omega = parse_double(key, value);
  else if (key == "phi0") p.phi0 = parse_double(key, value);
  else if (key == "order") {
    const int o = parse_int(key, value);
    if (o != 0 && o != 1) throw std::invalid_argument("order must be 0 or 1");
    p.hp_order = o == 0 ? HpOrder::Zeroth : HpOrder::First;
  } else if (key == "n1") p.mode1.atom_number = parse_int(key, value);
  else if (key == "n2") p.mode2.atom_number = parse_int(key, value);
  else if (key == "n") { p.mode1.atom_number = p.mode2.atom_number = parse_int(key, value); }
  else if (key == "cutoff1") p.mode1.cutoff = parse_int(key, value);
  else if (key == "cutoff2") p.mode2.cutoff = parse_int(key, value);
  else if (key == "cutoff") { p.mode1.cutoff = p.mode2.cutoff = parse_int(key, value); }
  else if (key == "gamma1") p.mode1.gamma = parse_double(key, value);
  else if (key == "gamma2") p.mode2.gamma = parse_double(key, value);
  else if (key == "gamma") both(&ModeSpec::gamma, parse_double(key, value));
  else if (key == "beta1") p.mode1.beta = parse_double(key, value);
  else if (key == "beta2") p.mode2.beta = parse_double(key, value);
  else if (key == "beta") both(&ModeSpec::beta, parse_double(key, value));
  else if (key == "delta1") p.mode1.delta = parse_double(key, value);
  else if (key == "delta2") p.mode2.delta = parse_double(key, value);
  else if (key == "delta") both(&ModeSpec::delta, parse_double(key, value));
  else if (key == "omega1") p.mode1.omega_rabi = parse_double(key, value);
  else if (key == "omega2") p.mode2.omega_rabi = parse_double(key, value);
  else if (key == "omega") both(&ModeSpec::omega_rabi, parse_double(key, value));
  else if (key == "t_end") e.t_end = parse_double(key, value);
  else if (key == "dt") e.dt = parse_double(key, value);
  else if (key == "sample_interval") e.sample_interval = parse_double(key, value);
  else if (key == "rel_tol") e.rel_tol = parse_double(key, value);
  else if (key == "abs_tol") e.abs_tol = parse_double(key, value);
  else if (key == "cutoff_guard") e.cutoff_guard = parse_double(key, value);
  else if (key == "validity_guard") e.validity_guard = parse_double(key, value);
  else if (key == "method") {
    if (value == "rk4") e.method = StepMethod::FixedRK4;
    else if (value == "dp54") e.method = StepMethod::AdaptiveEmbedded;
    else throw std::invalid_argument("method must be rk4 or dp54");
  } else if (key == "probe_times") sc.probe_times = parse_double_list(value);
  else if (key == "eta_grid") sc.eta_grid = parse_double_list(value);
  else if (key == "output") sc.output_path = value;
  else if (key == "distribution") sc.emit_distribution = parse_int(key, value) != 0;
  else if (key == "oracle") {
    if (value != "moments" && value != "dicke" && !value.empty())
      throw std::invalid_argument("oracle must be moments or dicke");
    sc.oracle = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void apply_config_file(Scenario& sc, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    try {
      apply_setting(sc, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + err.what());
    }
  }
}

std::vector<double> probe_times_or_default(const Scenario& sc) {
  if (!sc.probe_times.empty()) return sc.probe_times;
  const double T = sc.evolve.t_end;
  return {0.25 * T, 0.5 * T, 0.75 * T, T};
}

std::vector<SweepRow> sweep_eta(const Scenario& sc, const std::vector<double>& grid,
                                const std::vector<double>& probe_times) {
  for (double eta : grid)
    if (!(eta >= 0.0 && eta <= 1.0))
      throw std::invalid_argument("sweep_eta: grid values must lie in [0,1]");
  if (grid.empty()) throw std::invalid_argument("sweep_eta: empty grid");
  if (probe_times.empty()) throw std::invalid_argument("sweep_eta: no probe times");

  const int n = int(grid.size());
  std::vector<std::vector<SweepRow>> per_point(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};

  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= n) return;
      try {
        Scenario local = sc;
        local.params.eta = grid[idx];
        EvolveConfig cfg = local.evolve;
        cfg.snapshot_times.clear();
        const TimeSeries ts = evolve(vacuum_state(local.params), cfg, build_generator(local.params));
        for (double tp : probe_times) {
          const TimeSeriesRow* best = &ts.rows.front();
          for (const auto& r : ts.rows)
            if (std::abs(r.t - tp) < std::abs(best->t - tp)) best = &r;
          per_point[idx].push_back({grid[idx], tp, best->ne1});
        }
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_threads = int(std::min<unsigned>(hw, n));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (int i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);  // earliest grid point wins

  std::vector<SweepRow> rows;
  for (auto& v : per_point) rows.insert(rows.end(), v.begin(), v.end());
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.eta != b.eta ? a.eta < b.eta : a.t_probe < b.t_probe;
  });
  return rows;
}

}  // namespace mixsim
