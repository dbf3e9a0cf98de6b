// Acceptance gate: every release-blocking property of the simulator, each
// checked at its stated tolerance and reported as a single [PASS]/[FAIL] line.
// Exit status is the number of failed criteria (0 = all green).

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mixsim/csv.hpp"
#include "mixsim/dicke.hpp"
#include "mixsim/fock.hpp"
#include "mixsim/integrator.hpp"
#include "mixsim/model.hpp"
#include "mixsim/moments.hpp"
#include "mixsim/observables.hpp"
#include "mixsim/scenario.hpp"
#include "mixsim/types.hpp"

using namespace mixsim;

namespace {

constexpr double kTEnd = 2.85;          // oscillation-family horizon
constexpr double kCut = 0.30;           // transient cut: leaves > 20 beat periods
constexpr double kDt = 5e-5;            // forced step for the oscillation family
constexpr double kSample = 1e-3;

struct Conservation {
  double trace = 0.0, herm = 0.0, diag = 0.0, eigmin = 0.0;
  int runs = 0, states = 0;
  void absorb(const TimeSeries& ts) {
    ++runs;
    for (const auto& r : ts.rows) {
      trace = std::max(trace, r.trace_err);
      herm = std::max(herm, r.herm_err);
      diag = std::min(diag, r.min_diag);
    }
    for (const auto& [t, rho] : ts.snapshots) {
      Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
      eigmin = std::min(eigmin, es.eigenvalues().minCoeff());
      ++states;
    }
  }
};

Conservation conservation;

TimeSeries run_tracked(const char* label, const MixParams& p, const EvolveConfig& cfg) {
  std::fprintf(stderr, "[run] %s...\n", label);
  TimeSeries ts = evolve(vacuum_state(p), cfg, build_generator(p));
  conservation.absorb(ts);
  return ts;
}

MixParams oscillation_params() {
  MixParams p;  // fig2 baseline; eta = 0.5, First order
  p.mode1.cutoff = p.mode2.cutoff = 8;
  return p;
}

EvolveConfig oscillation_config() {
  EvolveConfig cfg;
  cfg.t_end = kTEnd;
  cfg.dt = kDt;
  cfg.sample_interval = kSample;
  cfg.snapshot_times = {0.5, 1.5, kTEnd};
  return cfg;
}

struct Tone {
  double omega = 0.0, amp = 0.0;
};

Tone tone(const TimeSeries& ts, double a, double b) {
  const auto [w, amp] = dominant_frequency(ts, Column::Ne1, a, b);
  return {w, amp};
}

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

template <class F>
void criterion(std::map<int, Result>& out, int id, F&& body) {
  try {
    out[id] = body();
  } catch (const std::exception& e) {
    out[id] = {false, std::string("aborted: ") + e.what()};
  }
}

}  // namespace

int main() {
  std::map<int, Result> results;
  std::map<std::string, TimeSeries> cache;

  // ---- Oscillation family: shared runs -------------------------------------
  try {
    const MixParams base = oscillation_params();
    cache["base"] = run_tracked("baseline", base, oscillation_config());

    MixParams dw = base;
    dw.delta_omega = 80.0;
    cache["dw80"] = run_tracked("detuning 80", dw, oscillation_config());

    MixParams n200 = base;
    n200.mode1.atom_number = n200.mode2.atom_number = 200;
    cache["n200"] = run_tracked("N = 200", n200, oscillation_config());

    MixParams pq = base;
    pq.phi0 = M_PI / 4.0;
    cache["phi_q"] = run_tracked("phi0 = pi/4", pq, oscillation_config());

    // The pi phase origin points the drive at the weakly damped pair mode
    // (detuning dbar - B, decay g - g12), so the transient swing climbs to
    // <n> ~ 1 and needs a taller space; the long-time state matches the rest.
    MixParams pp = base;
    pp.phi0 = M_PI;
    pp.mode1.cutoff = pp.mode2.cutoff = 12;
    cache["phi_p"] = run_tracked("phi0 = pi", pp, oscillation_config());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[run] family run failed: %s\n", e.what());
  }

  const double bin = 2.0 * M_PI / (kTEnd - kCut);

  // ---- 2: steady state at eta = 0 ------------------------------------------
  criterion(results, 2, [&]() -> Result {
    MixParams p = oscillation_params();  // M = 8: the transient swing puts
    p.eta = 0.0;                         // ~4e-5 at level 5, tripping smaller spaces
    EvolveConfig cfg;
    cfg.t_end = 10.0;
    cfg.dt = 8e-5;
    cfg.sample_interval = 2e-3;
    cfg.snapshot_times = {5.0, 10.0};
    const TimeSeries ts = run_tracked("uncoupled steady state", p, cfg);
    double lo = 1e300, hi = -1e300, mean = 0.0;
    int n = 0;
    for (const auto& r : ts.rows) {
      if (r.t < 8.0) continue;
      lo = std::min(lo, r.ne1);
      hi = std::max(hi, r.ne1);
      mean += r.ne1;
      ++n;
    }
    mean /= n;
    const double rel = (hi - lo) / mean;
    return {rel < 1e-3,
            fmt("uncoupled steady state: Ne1 relative variation %.3g over the final 20%% "
                "(limit 1e-3), mean %.6g", rel, mean)};
  });

  // ---- 3: oscillation frequency tracks the laser difference ----------------
  criterion(results, 3, [&]() -> Result {
    const Tone t50 = tone(cache["base"], kCut, kTEnd);
    const Tone t80 = tone(cache["dw80"], kCut, kTEnd);
    const bool ok = std::abs(t50.omega - 50.0) <= bin && std::abs(t80.omega - 80.0) <= bin;
    return {ok, fmt("dominant frequency %.4f (target 50) and %.4f (target 80), "
                    "bin width %.3f", t50.omega, t80.omega, bin)};
  });

  // ---- 4: oscillations persist (amplitude stable across late windows) ------
  criterion(results, 4, [&]() -> Result {
    const Tone w1 = tone(cache["base"], 0.6 * kTEnd, 0.8 * kTEnd);
    const Tone w2 = tone(cache["base"], 0.8 * kTEnd, kTEnd);
    const double rel = std::abs(w1.amp - w2.amp) / std::max(w1.amp, w2.amp);
    return {rel < 0.10, fmt("late-window amplitudes %.6g vs %.6g, relative drift %.3g "
                            "(limit 0.10)", w1.amp, w2.amp, rel)};
  });

  // ---- 5: particle number moves the amplitude, not the frequency -----------
  criterion(results, 5, [&]() -> Result {
    const Tone a = tone(cache["base"], kCut, kTEnd);
    const Tone b = tone(cache["n200"], kCut, kTEnd);
    const double amp_rel = std::abs(b.amp - a.amp) / a.amp;
    const double freq_diff = std::abs(b.omega - a.omega);
    const bool ok = amp_rel > 0.10 && freq_diff <= bin;
    return {ok, fmt("N 100->200: amplitude change %.1f%% (need > 10%%), frequency shift "
                    "%.4f (bin %.3f)", 100.0 * amp_rel, freq_diff, bin)};
  });

  // ---- 6: moment-oracle equivalence at reduced drive ------------------------
  criterion(results, 6, [&]() -> Result {
    MixParams p;
    p.hp_order = HpOrder::Zeroth;
    p.mode1.omega_rabi = p.mode2.omega_rabi = 1.5;  // <n> ~ 2e-4, far below 2
    p.mode1.cutoff = p.mode2.cutoff = 3;
    EvolveConfig cfg;
    cfg.t_end = 2.0;
    cfg.dt = 2e-5;
    cfg.sample_interval = 1e-3;
    const TimeSeries dm = run_tracked("moment-oracle comparison", p, cfg);
    const auto mm = moment_evolve(p, cfg.t_end, cfg.dt, cfg.sample_interval);
    double worst = 0.0;
    const size_t n = std::min(dm.rows.size(), mm.size());
    for (size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(dm.rows[i].ne1 - mm[i].ne1));
      worst = std::max(worst, std::abs(dm.rows[i].ne2 - mm[i].ne2));
    }
    return {dm.rows.size() == mm.size() && worst <= 1e-6,
            fmt("density-matrix vs moment routes: max |dNe| = %.3g over %zu samples "
                "(limit 1e-6)", worst, n)};
  });

  // ---- 7: exact-spin oracle convergence in N --------------------------------
  criterion(results, 7, [&]() -> Result {
    std::vector<double> d_half, d_one;
    double peak_occ = 0.0;
    for (const int N : {10, 20, 40}) {
      MixParams p;
      p.mode1.atom_number = p.mode2.atom_number = N;
      p.mode1.omega_rabi = p.mode2.omega_rabi = 1.0;
      p.mode1.beta = p.mode2.beta = 0.5;
      p.mode1.cutoff = p.mode2.cutoff = 10;
      p.eta = 0.4;
      p.delta_omega = 3.0;
      EvolveConfig cfg;
      cfg.t_end = 1.0;
      cfg.dt = 2e-4;
      cfg.sample_interval = 0.05;
      const TimeSeries hp = run_tracked(fmt("spin oracle, N = %d", N).c_str(), p, cfg);
      const auto exact = dicke_evolve(p, cfg.t_end, cfg.dt, cfg.sample_interval);
      auto at = [&](double t) {
        double dh = 0.0;
        for (size_t i = 0; i < std::min(hp.rows.size(), exact.size()); ++i)
          if (std::abs(hp.rows[i].t - t) < 1e-9)
            dh = std::abs(hp.rows[i].ne1 - exact[i].ne1);
        return dh;
      };
      d_half.push_back(at(0.5));
      d_one.push_back(at(1.0));
      for (const auto& r : exact) peak_occ = std::max(peak_occ, r.ne1);
    }
    const bool mono = d_half[0] > d_half[1] && d_half[1] > d_half[2] &&
                      d_one[0] > d_one[1] && d_one[1] > d_one[2];
    return {mono && peak_occ <= 0.3,
            fmt("|exact - bosonized| at t=0.5: %.2e -> %.2e -> %.2e; at t=1.0: "
                "%.2e -> %.2e -> %.2e across N in {10,20,40} (peak occupation %.3f)",
                d_half[0], d_half[1], d_half[2], d_one[0], d_one[1], d_one[2], peak_occ)};
  });

  // ---- 8: fast phase rotation averages the coupling away --------------------
  // Checked on the closed moment system, which is exact for the linear model
  // the averaging statement is about. (On the number basis this point is out
  // of reach: 20x the baseline detuning lands within the linewidth of the
  // collective detuning 990, and the resulting parametric sideband drives
  // mode 2 to <n> ~ 10 transiently -- fine at N = 100, but far above any
  // practical dense truncation.)
  criterion(results, 8, [&]() -> Result {
    auto moment_series = [](double delta_omega) {
      MixParams p;  // fig2 baseline, linear order
      p.hp_order = HpOrder::Zeroth;
      p.delta_omega = delta_omega;
      TimeSeries ts;
      for (const auto& r : moment_evolve(p, kTEnd, 1e-5, 2e-4))
        ts.rows.push_back({.t = r.t, .ne1 = r.ne1, .ne2 = r.ne2});
      return ts;
    };
    const Tone slow_tone = tone(moment_series(50.0), 1.85, kTEnd);
    const Tone fast_tone = tone(moment_series(1000.0), 1.85, kTEnd);
    const double ratio = slow_tone.amp / std::max(fast_tone.amp, 1e-300);
    return {ratio >= 5.0, fmt("20x detuning spread: amplitude %.4g -> %.4g, reduction "
                              "%.1fx (need >= 5x)", slow_tone.amp, fast_tone.amp, ratio)};
  });

  // ---- 9: excitation jump sweep ---------------------------------------------
  auto jump_scenario = []() {
    Scenario sc = make_scenario("fig4");
    sc.params.mode1.cutoff = sc.params.mode2.cutoff = 8;
    return sc;
  };

  criterion(results, 9, [&]() -> Result {
    const Scenario sc = jump_scenario();
    const std::vector<double> grid = {0.0, 0.1, 0.2,  0.3,  0.4,  0.5, 0.6,
                                      0.7, 0.8, 0.85, 0.9, 0.94, 0.95};
    const double T = sc.evolve.t_end;
    const std::vector<double> probes = {T / 2.0, 0.75 * T, T};
    std::fprintf(stderr, "[run] coupling sweep, 13 points...\n");
    const auto rows = sweep_eta(sc, grid, probes);

    bool rise_ok = true;
    double worst_low = 0.0, worst_flat = 0.0;
    for (const double tp : probes) {
      std::vector<std::pair<double, double>> curve;  // (eta, ne1)
      for (const auto& r : rows)
        if (std::abs(r.t_probe - tp) < 1e-12) curve.emplace_back(r.eta, r.ne1);
      double maxv = 0.0;
      for (const auto& [e, v] : curve) maxv = std::max(maxv, v);
      for (const auto& [e, v] : curve)
        if (e <= 0.2 + 1e-12) worst_low = std::max(worst_low, v / maxv);
      bool crossed = false;
      for (const auto& [e, v] : curve)
        if (e < 0.95 - 1e-12 && v > 0.5 * maxv) crossed = true;
      rise_ok = rise_ok && crossed;
      std::vector<double> top;
      for (const auto& [e, v] : curve)
        if (e >= 0.9 - 1e-12) top.push_back(v);
      const double tmax = *std::max_element(top.begin(), top.end());
      const double tmin = *std::min_element(top.begin(), top.end());
      worst_flat = std::max(worst_flat, (tmax - tmin) / tmax);
    }
    const bool low_ok = worst_low <= 0.05;
    const bool flat_ok = worst_flat < 0.15;
    return {low_ok && rise_ok && flat_ok,
            fmt("jump shape: below-threshold fraction %.3f (limit 0.05, %s), 50%%-rise "
                "before 0.95 %s, top-three variation %.2f (limit 0.15, %s)",
                worst_low, low_ok ? "ok" : "VIOLATED", rise_ok ? "ok" : "VIOLATED",
                worst_flat, flat_ok ? "ok" : "VIOLATED: the occupation still climbs at "
                "reachable probe times; see the README limitations note")};
  });

  // ---- 10: excitation statistics on the jump's two sides --------------------
  criterion(results, 10, [&]() -> Result {
    const Scenario sc = jump_scenario();
    const double T = sc.evolve.t_end;
    double means[2], dists[2];
    const double etas[2] = {0.85, 0.95};
    for (int i = 0; i < 2; ++i) {
      MixParams p = sc.params;
      p.eta = etas[i];
      EvolveConfig cfg = sc.evolve;
      cfg.snapshot_times = {T};
      const TimeSeries ts = run_tracked(fmt("statistics, eta = %.2f", etas[i]).c_str(), p, cfg);
      const auto& [t_snap, rho] = ts.snapshots.front();
      const auto dist = excitation_distribution(rho, 1, p);
      dists[i] = poisson_distance(dist);
      double mean = 0.0, norm = 0.0;
      for (size_t k = 0; k < dist.probabilities.size(); ++k) {
        mean += double(k) * dist.probabilities[k];
        norm += dist.probabilities[k];
      }
      means[i] = mean / norm;
    }
    return {dists[0] <= 0.05 && dists[1] <= 0.05 && means[1] > means[0],
            fmt("distribution vs same-mean reference: distance %.4f / %.4f at eta "
                "0.85 / 0.95 (limit 0.05); means %.4f < %.4f", dists[0], dists[1],
                means[0], means[1])};
  });

  // ---- 11: phase offset leaves amplitude and frequency alone ----------------
  criterion(results, 11, [&]() -> Result {
    const Tone t0 = tone(cache["base"], kCut, kTEnd);
    const Tone tq = tone(cache["phi_q"], kCut, kTEnd);
    const Tone tp = tone(cache["phi_p"], kCut, kTEnd);
    const double f[] = {t0.omega, tq.omega, tp.omega};
    const double a[] = {t0.amp, tq.amp, tp.amp};
    auto spread = [](const double* v) {
      const double mx = std::max({v[0], v[1], v[2]}), mn = std::min({v[0], v[1], v[2]});
      return (mx - mn) / (0.5 * (mx + mn) + 1e-300);
    };
    const double fs = spread(f), as = spread(a);
    return {fs <= 0.01 && as <= 0.01,
            fmt("phase-offset spread across {0, pi/4, pi}: frequency %.3g, amplitude "
                "%.3g (limits 0.01)", fs, as)};
  });

  // ---- 12: the coupled ensembles synchronize --------------------------------
  criterion(results, 12, [&]() -> Result {
    const double lag = synchronization_lag(cache["base"], Column::Ne1, Column::Ne2, kCut, kTEnd);
    return {std::abs(lag) <= kSample + 1e-12,
            fmt("post-transient trace alignment: lag %.4g (limit one sample "
                "interval, %.0e)", lag, kSample)};
  });

  // ---- 1: conservation suite over every gate run ----------------------------
  {
    const Conservation& c = conservation;
    const bool ok = c.trace <= 1e-8 && c.herm <= 1e-10 && c.eigmin >= -1e-8;
    results[1] = {ok, fmt("across %d runs: max trace drift %.2e (limit 1e-8), max "
                          "hermiticity error %.2e (limit 1e-10), min eigenvalue %.2e over "
                          "%d stored states (limit -1e-8)",
                          c.runs, c.trace, c.herm, c.eigmin, c.states)};
  }

  static const char* kNames[] = {"",
      "conservation suite",      "uncoupled steady state",  "oscillation frequency",
      "oscillation persistence", "particle-number scaling", "moment-oracle equivalence",
      "exact-spin convergence",  "averaging-out condition", "excitation jump shape",
      "excitation statistics",   "phase-offset invariance", "ensemble synchronization"};

  int failures = 0;
  for (const auto& [id, r] : results) {
    if (!r.pass) ++failures;
    std::printf("[%s] %2d. %s: %s\n", r.pass ? "PASS" : "FAIL", id, kNames[id],
                r.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(results.size()) - failures, results.size());
  return failures;
}
