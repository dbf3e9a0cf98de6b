#include "mixsim/dicke.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "mixsim/fock.hpp"
#include "mixsim/liouvillian.hpp"

namespace mixsim {

SpinSpace spin_space(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("spin_space: need at least one atom");
  SpinSpace s;
  s.n_atoms = n_atoms;
  const int d = n_atoms + 1;
  s.sm = Mat::Zero(d, d);
  for (int k = 1; k <= n_atoms; ++k) s.sm(k - 1, k) = std::sqrt(double(k) * (n_atoms - k + 1));
  s.sp = s.sm.adjoint();
  s.sz = Mat::Zero(d, d);
  for (int k = 0; k <= n_atoms; ++k) s.sz(k, k) = k - 0.5 * n_atoms;
  return s;
}

namespace {

// Collective lowering matrix restricted to excitation levels 0..K (same su(2)
// elements as spin_space; exact as long as population never reaches level K).
Mat windowed_lowering(int n_atoms, int K) {
  Mat sm = Mat::Zero(K + 1, K + 1);
  for (int k = 1; k <= K; ++k) sm(k - 1, k) = std::sqrt(double(k) * (n_atoms - k + 1));
  return sm;
}

Mat windowed_hamiltonian(const ModeSpec& m, int K) {
  const Mat sm = windowed_lowering(m.atom_number, K);
  const Mat sp = sm.adjoint();
  Mat h = m.beta * (sp * sm) + m.omega_rabi * (sp + sm);
  for (int k = 0; k <= K; ++k) h(k, k) += (m.delta - m.beta) * k;
  return h;
}

struct WindowRun {
  std::optional<std::vector<DickeRow>> rows;  // empty if a window edge was reached
  bool trip1 = false, trip2 = false;
};

WindowRun run_window(const MixParams& p, int K1, int K2, double t_end, double dt,
                     double sample_interval, std::pair<int, int> init) {
  const int d1 = K1 + 1, d2 = K2 + 1, D = d1 * d2;
  const int N1 = p.mode1.atom_number, N2 = p.mode2.atom_number;

  const Mat L1 = embed(windowed_lowering(N1, K1), 1, d1, d2);
  const Mat L2 = embed(windowed_lowering(N2, K2), 2, d1, d2);
  const Mat Hs =
      embed(windowed_hamiltonian(p.mode1, K1), 1, d1, d2) +
      embed(windowed_hamiltonian(p.mode2, K2), 2, d1, d2);
  const Mat Hc = p.beta12() * (L1.adjoint() * L2);
  const Superop s = build_superop(Hs, Hc, L1, L2, p.mode1.gamma, p.mode2.gamma,
                                  p.eta * p.gamma12(), p.delta_omega, p.phi0);

  double h = dt > 0 ? dt : 0.1 / std::max(spectral_bound(s), 1e-12);
  const long long n_steps = std::max(1LL, (long long)std::ceil(t_end / h - 1e-12));
  h = t_end / double(n_steps);
  const long long per_sample =
      sample_interval > 0 ? std::max(1LL, (long long)std::llround(sample_interval / h)) : 1;

  Vec x = Vec::Zero(D * D);
  const int start = init.first * d2 + init.second;  // |k1, k2><k1, k2|
  x[start * D + start] = 1.0;
  Vec k1(D * D), k2(D * D), k3(D * D), k4(D * D), tmp(D * D), scratch(D * D);

  WindowRun out;
  std::vector<DickeRow> rows;
  const double sentinel = 1e-10;

  auto sample = [&](double t) -> bool {  // false: window too small, widen and retry
    Eigen::Map<const Mat> rho(x.data(), D, D);
    DickeRow row;
    row.t = t;
    double top1 = 0.0, top2 = 0.0;
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) {
        const double pop = rho(i * d2 + j, i * d2 + j).real();
        row.ne1 += i * pop;
        row.ne2 += j * pop;
        if (i == K1) top1 += pop;
        if (j == K2) top2 += pop;
      }
    row.trace_err = std::abs(rho.trace() - cx(1, 0));
    row.herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    row.min_diag = rho.diagonal().real().minCoeff();
    if (!std::isfinite(row.ne1) || !std::isfinite(row.ne2) || !std::isfinite(row.trace_err))
      throw NumericalBlowup(t);
    out.trip1 = K1 < N1 && top1 > sentinel;  // a full-height window cannot "leak"
    out.trip2 = K2 < N2 && top2 > sentinel;
    rows.push_back(row);
    return !(out.trip1 || out.trip2);
  };

  if (!sample(0.0)) return out;
  for (long long k = 0; k < n_steps; ++k) {
    const double t = k * h;
    superop_apply(s, x, t, k1, scratch);
    tmp = x + (0.5 * h) * k1;
    superop_apply(s, tmp, t + 0.5 * h, k2, scratch);
    tmp = x + (0.5 * h) * k2;
    superop_apply(s, tmp, t + 0.5 * h, k3, scratch);
    tmp = x + h * k3;
    superop_apply(s, tmp, t + h, k4, scratch);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    {
      Eigen::Map<Mat> r(x.data(), D, D);
      Mat herm = 0.5 * (r + r.adjoint());
      r = herm;
    }
    if ((k + 1) % per_sample == 0 || k + 1 == n_steps)
      if (!sample((k + 1) * h)) return out;
  }
  out.rows = std::move(rows);
  return out;
}

}  // namespace

std::vector<DickeRow> dicke_evolve(const MixParams& p, double t_end, double dt,
                                   double sample_interval, std::pair<int, int> initial_excitation) {
  const int N1 = p.mode1.atom_number, N2 = p.mode2.atom_number;
  if (N1 < 1 || N2 < 1) throw std::invalid_argument("dicke_evolve: atom numbers must be >= 1");
  if ((long long)(N1 + 1) * (N2 + 1) > 4096)
    throw std::invalid_argument("dicke_evolve: joint dimension (N1+1)(N2+1) exceeds 4096");
  if (t_end <= 0) throw std::invalid_argument("dicke_evolve: t_end must be > 0");
  if (!(p.eta >= 0 && p.eta <= 1)) throw std::invalid_argument("dicke_evolve: eta out of range");
  const auto [i1, i2] = initial_excitation;
  if (i1 < 0 || i1 > N1 || i2 < 0 || i2 > N2)
    throw std::invalid_argument("dicke_evolve: initial excitation outside 0..N");

  int K1 = std::min(N1, std::max(10, i1 + 2));
  int K2 = std::min(N2, std::max(10, i2 + 2));
  for (;;) {
    WindowRun r = run_window(p, K1, K2, t_end, dt, sample_interval, initial_excitation);
    if (r.rows) return *std::move(r.rows);
    bool grew = false;
    if (r.trip1 && K1 < N1) { K1 = std::min(2 * K1, N1); grew = true; }
    if (r.trip2 && K2 < N2) { K2 = std::min(2 * K2, N2); grew = true; }
    if (!grew) throw std::logic_error("dicke_evolve: window sentinel tripped at full height");
  }
}

}  // namespace mixsim
