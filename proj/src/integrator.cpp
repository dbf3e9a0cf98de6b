#include "mixsim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixsim/fock.hpp"
#include "mixsim/observables.hpp"

namespace mixsim {

DensityMatrix vacuum_state(const MixParams& p) {
  Mat rho = Mat::Zero(p.dim(), p.dim());
  rho(0, 0) = 1.0;
  return rho;
}

double default_dt(const GeneratorParts& gen, const Superop& s) {
  const MixParams& p = gen.params;
  const double inf = std::numeric_limits<double>::infinity();
  auto inv_or_inf = [&](double x) { return x > 0.0 ? 1.0 / x : inf; };

  const double n1 = p.mode1.atom_number, n2 = p.mode2.atom_number;
  const double obar = std::max(p.mode1.omega_rabi * std::sqrt(n1), p.mode2.omega_rabi * std::sqrt(n2));
  const double gn = std::max(p.mode1.gamma * n1, p.mode2.gamma * n2);
  const double dbar1 = std::abs(p.mode1.delta + (n1 - 1) * p.mode1.beta);
  const double dbar2 = std::abs(p.mode2.delta + (n2 - 1) * p.mode2.beta);
  const double bbar = std::max({dbar1, dbar2, p.beta12() * std::sqrt(n1 * n2)});

  double dt = std::min({p.delta_omega > 0 ? 2.0 * M_PI / p.delta_omega : inf,
                        inv_or_inf(obar), inv_or_inf(gn), inv_or_inf(bbar)}) /
              40.0;

  // Explicit-RK stability cap from the assembled generator's row sums.
  const double bound = spectral_bound(s);
  if (bound > 0.0) dt = std::min(dt, 2.5 / bound);
  if (!std::isfinite(dt) || dt <= 0.0) dt = bound > 0.0 ? 2.5 / bound : 1e-3;
  return dt;
}

DensityMatrix step(const DensityMatrix& rho, double t, double dt, const GeneratorParts& gen) {
  const Mat k1 = apply_rhs(rho, t, gen);
  const Mat k2 = apply_rhs(rho + 0.5 * dt * k1, t + 0.5 * dt, gen);
  const Mat k3 = apply_rhs(rho + 0.5 * dt * k2, t + 0.5 * dt, gen);
  const Mat k4 = apply_rhs(rho + dt * k3, t + dt, gen);
  Mat out = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) throw NumericalBlowup(t);
  out = 0.5 * (out + out.adjoint()).eval();
  return out;
}

namespace {

void rehermitize(Vec& x, int D) {
  Eigen::Map<Mat> r(x.data(), D, D);
  Mat h = 0.5 * (r + r.adjoint());
  r = h;
}

TimeSeriesRow make_row(const Vec& x, double t, const MixParams& p) {
  const int D = p.dim();
  Eigen::Map<const Mat> rho_map(x.data(), D, D);
  Mat rho = rho_map;

  TimeSeriesRow row;
  row.t = t;
  auto [ne1, ne2] = excitations(rho, p);
  row.ne1 = ne1;
  row.ne2 = ne2;
  const bool symmetric = p.mode1.atom_number == p.mode2.atom_number && p.mode1.gamma == p.mode2.gamma;
  row.imix = symmetric ? intensity(rho, t, p) : std::numeric_limits<double>::quiet_NaN();
  row.trace_err = trace_error(rho);
  row.herm_err = hermiticity_error(rho);
  row.min_diag = min_diagonal(rho);
  auto [top1, top2] = top_level_populations(rho, p);
  row.top1 = top1;
  row.top2 = top2;
  row.phi = phase(t, p);
  return row;
}

void check_guards(const TimeSeriesRow& row, const EvolveConfig& cfg, const MixParams& p) {
  if (!std::isfinite(row.ne1) || !std::isfinite(row.ne2) || !std::isfinite(row.trace_err))
    throw NumericalBlowup(row.t);
  // Any physical state keeps |rho_ij| <= 1; entries many orders beyond that
  // are an exploded (yet still finite) integration, not a truncation issue.
  const double sane = 1e6 * double(p.mode1.cutoff + p.mode2.cutoff + 1);
  if (std::abs(row.ne1) + std::abs(row.ne2) > sane || row.min_diag < -1e6 ||
      row.trace_err > 1e6)
    throw NumericalBlowup(row.t);
  if (row.top1 > cfg.cutoff_guard) throw CutoffExceeded(1, row.t);
  if (row.top2 > cfg.cutoff_guard) throw CutoffExceeded(2, row.t);
  if (row.ne1 / p.mode1.atom_number > cfg.validity_guard) throw ValidityViolated(1, row.t);
  if (row.ne2 / p.mode2.atom_number > cfg.validity_guard) throw ValidityViolated(2, row.t);
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

TimeSeries evolve(const DensityMatrix& rho0, const EvolveConfig& cfg, const GeneratorParts& gen) {
  const MixParams& p = gen.params;
  const int D = p.dim();
  if (rho0.rows() != D || rho0.cols() != D) throw std::invalid_argument("evolve: rho0 dimension mismatch");
  if (cfg.t_end <= 0) throw std::invalid_argument("evolve: t_end must be > 0");

  const Superop s = build_superop(gen);
  double dt = cfg.dt > 0 ? cfg.dt : default_dt(gen, s);
  if (cfg.sample_interval < dt && cfg.method == StepMethod::FixedRK4)
    dt = cfg.sample_interval;  // sample_interval >= dt invariant

  Vec x(D * D);
  Eigen::Map<Mat>(x.data(), D, D) = rho0;

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  size_t next_snap = 0;

  TimeSeries series;
  auto push_sample = [&](double t) {
    TimeSeriesRow row = make_row(x, t, p);
    series.rows.push_back(row);
    check_guards(row, cfg, p);
  };
  auto maybe_snapshot = [&](double t, double half_step) {
    while (next_snap < snaps.size() && snaps[next_snap] <= t + half_step) {
      series.snapshots.emplace_back(snaps[next_snap],
                                    Mat(Eigen::Map<const Mat>(x.data(), D, D)));
      ++next_snap;
    }
  };

  Vec k1(D * D), k2(D * D), k3(D * D), k4(D * D), tmp(D * D), scratch(D * D);

  if (cfg.method == StepMethod::FixedRK4) {
    // March sample boundary to sample boundary so rows land on exact
    // sample_interval multiples; the substep is dt shrunk to divide evenly.
    const long long n_samples =
        std::max(1LL, (long long)std::ceil(cfg.t_end / cfg.sample_interval - 1e-9));
    push_sample(0.0);
    double t = 0.0;
    maybe_snapshot(0.0, dt / 2);
    for (long long si = 1; si <= n_samples; ++si) {
      const double t_target = std::min(si * cfg.sample_interval, cfg.t_end);
      const long long m = std::max(1LL, (long long)std::ceil((t_target - t) / dt - 1e-9));
      const double h = (t_target - t) / double(m);
      for (long long k = 0; k < m; ++k) {
        const double tk = t + k * h;
        superop_apply(s, x, tk, k1, scratch);
        tmp = x + (0.5 * h) * k1;
        superop_apply(s, tmp, tk + 0.5 * h, k2, scratch);
        tmp = x + (0.5 * h) * k2;
        superop_apply(s, tmp, tk + 0.5 * h, k3, scratch);
        tmp = x + h * k3;
        superop_apply(s, tmp, tk + h, k4, scratch);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rehermitize(x, D);
        maybe_snapshot(tk + h, h / 2);
      }
      t = t_target;
      push_sample(t);
    }
    return series;
  }

  // AdaptiveEmbedded: Dormand-Prince 5(4), stepping exactly onto sample boundaries.
  Vec k5(D * D), k6(D * D), k7(D * D), y5(D * D);
  const long long n_samples = std::max(1LL, (long long)std::ceil(cfg.t_end / cfg.sample_interval - 1e-12));
  double h = dt;
  double t = 0.0;
  push_sample(0.0);
  maybe_snapshot(0.0, cfg.sample_interval / 2);
  for (long long si = 1; si <= n_samples; ++si) {
    const double t_target = std::min(si * cfg.sample_interval, cfg.t_end);
    while (t < t_target - 1e-15 * cfg.t_end) {
      h = std::min(h, t_target - t);
      superop_apply(s, x, t, k1, scratch);
      tmp = x + h * (a21 * k1);
      superop_apply(s, tmp, t + c2 * h, k2, scratch);
      tmp = x + h * (a31 * k1 + a32 * k2);
      superop_apply(s, tmp, t + c3 * h, k3, scratch);
      tmp = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
      superop_apply(s, tmp, t + c4 * h, k4, scratch);
      tmp = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      superop_apply(s, tmp, t + c5 * h, k5, scratch);
      tmp = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      superop_apply(s, tmp, t + h, k6, scratch);
      y5 = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      superop_apply(s, y5, t + h, k7, scratch);
      tmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);  // y5 - y4

      double err = 0.0;
      for (Eigen::Index i = 0; i < tmp.size(); ++i) {
        const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(tmp[i]) / sc);
      }
      if (!std::isfinite(err)) throw NumericalBlowup(t);
      if (err <= 1.0) {
        t += h;
        x = y5;
        rehermitize(x, D);
      }
      const double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(factor, 0.2, 5.0);
      if (h < 1e-14 * cfg.t_end) throw NumericalBlowup(t);
    }
    t = t_target;
    maybe_snapshot(t, cfg.sample_interval / 2);
    push_sample(t);
  }
  return series;
}

std::pair<int, int> auto_cutoff(MixParams params, const EvolveConfig& cfg) {
  EvolveConfig pilot = cfg;
  pilot.t_end = std::min(cfg.t_end, 0.5);
  pilot.sample_interval = std::min(cfg.sample_interval, pilot.t_end / 64.0);
  pilot.dt = 0.0;
  pilot.snapshot_times.clear();

  int prev_m1 = -1, prev_m2 = -1;
  for (int M = 4; M <= 64; M *= 2) {
    const int m1 = std::min(M, params.mode1.atom_number);
    const int m2 = std::min(M, params.mode2.atom_number);
    if (m1 == prev_m1 && m2 == prev_m2) break;  // both capped by N, no progress
    prev_m1 = m1;
    prev_m2 = m2;
    params.mode1.cutoff = m1;
    params.mode2.cutoff = m2;
    try {
      evolve(vacuum_state(params), pilot, build_generator(params));
      return {m1, m2};
    } catch (const CutoffExceeded&) {
      continue;
    }
  }
  throw std::runtime_error("auto_cutoff: no adequate cutoff at or below M=64");
}

}  // namespace mixsim
