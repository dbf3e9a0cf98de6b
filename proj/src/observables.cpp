#include "mixsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mixsim/fock.hpp"
#include "mixsim/model.hpp"

namespace mixsim {

std::pair<double, double> excitations(const DensityMatrix& rho, const MixParams& p) {
  double ne1 = 0.0, ne2 = 0.0;
  for (int m1 = 0; m1 <= p.mode1.cutoff; ++m1)
    for (int m2 = 0; m2 <= p.mode2.cutoff; ++m2) {
      const double pop = rho(flat_index(m1, m2, p), flat_index(m1, m2, p)).real();
      ne1 += m1 * pop;
      ne2 += m2 * pop;
    }
  return {ne1, ne2};
}

double intensity(const DensityMatrix& rho, double t, const MixParams& p) {
  if (p.mode1.atom_number != p.mode2.atom_number || p.mode1.gamma != p.mode2.gamma)
    throw AsymmetricParams();
  const int M1 = p.mode1.cutoff, M2 = p.mode2.cutoff;
  auto [ne1, ne2] = excitations(rho, p);

  cx sum_down(0, 0);  // sum sqrt(m1 (m2+1)) rho[(m1-1, m2+1), (m1, m2)]
  for (int m1 = 1; m1 <= M1; ++m1)
    for (int m2 = 0; m2 < M2; ++m2)
      sum_down += std::sqrt(double(m1) * (m2 + 1)) *
                  rho(flat_index(m1 - 1, m2 + 1, p), flat_index(m1, m2, p));
  cx sum_up(0, 0);  // sum sqrt((m1+1) m2) rho[(m1+1, m2-1), (m1, m2)]
  for (int m1 = 0; m1 < M1; ++m1)
    for (int m2 = 1; m2 <= M2; ++m2)
      sum_up += std::sqrt(double(m1 + 1) * m2) *
                rho(flat_index(m1 + 1, m2 - 1, p), flat_index(m1, m2, p));

  const cx z = std::exp(cx(0, -phase(t, p)));
  const cx val = ne1 + ne2 + p.eta * (z * sum_down + std::conj(z) * sum_up);
  if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val)))
    throw std::runtime_error("intensity: imaginary residue exceeds tolerance (rho not Hermitian?)");
  return val.real();
}

ExcitationDistribution excitation_distribution(const DensityMatrix& rho, int ensemble,
                                               const MixParams& p) {
  if (ensemble != 1 && ensemble != 2)
    throw std::invalid_argument("excitation_distribution: ensemble must be 1 or 2");
  ExcitationDistribution d;
  d.ensemble = ensemble;
  const int M = ensemble == 1 ? p.mode1.cutoff : p.mode2.cutoff;
  const int Mo = ensemble == 1 ? p.mode2.cutoff : p.mode1.cutoff;
  d.probabilities.assign(M + 1, 0.0);
  for (int m = 0; m <= M; ++m)
    for (int mo = 0; mo <= Mo; ++mo) {
      const int k = ensemble == 1 ? flat_index(m, mo, p) : flat_index(mo, m, p);
      d.probabilities[m] += rho(k, k).real();
    }
  return d;
}

std::vector<double> extract_column(const TimeSeries& series, Column c) {
  std::vector<double> out;
  out.reserve(series.rows.size());
  for (const auto& r : series.rows)
    out.push_back(c == Column::Ne1 ? r.ne1 : c == Column::Ne2 ? r.ne2 : r.imix);
  return out;
}

namespace {

struct WindowedSignal {
  std::vector<double> values;  // mean-subtracted
  double dt = 0.0;
  double raw_min = 0.0, raw_max = 0.0;
};

WindowedSignal window_signal(const TimeSeries& series, Column c, double t_a, double t_b) {
  WindowedSignal w;
  std::vector<double> times;
  for (const auto& r : series.rows) {
    if (r.t < t_a - 1e-12 || r.t > t_b + 1e-12) continue;
    times.push_back(r.t);
    w.values.push_back(c == Column::Ne1 ? r.ne1 : c == Column::Ne2 ? r.ne2 : r.imix);
  }
  if (w.values.size() < 32)
    throw std::invalid_argument("window too short: need at least 32 samples in [t_a, t_b]");
  w.dt = (times.back() - times.front()) / double(times.size() - 1);
  w.raw_min = *std::min_element(w.values.begin(), w.values.end());
  w.raw_max = *std::max_element(w.values.begin(), w.values.end());
  const double mean =
      std::accumulate(w.values.begin(), w.values.end(), 0.0) / double(w.values.size());
  for (double& v : w.values) v -= mean;
  return w;
}

}  // namespace

std::pair<double, double> dominant_frequency(const TimeSeries& series, Column column, double t_a,
                                             double t_b) {
  const WindowedSignal w = window_signal(series, column, t_a, t_b);
  const int n = int(w.values.size());
  const double amplitude = 0.5 * (w.raw_max - w.raw_min);

  double scale = 0.0;
  for (double v : w.values) scale = std::max(scale, std::abs(v));
  if (scale <= 1e-12 * std::max(1.0, std::abs(w.raw_max))) return {0.0, 0.0};

  // Hann-windowed direct DFT over the positive-frequency bins.
  std::vector<double> mag(n / 2 + 1, 0.0);
  for (int k = 0; k <= n / 2; ++k) {
    cx acc(0, 0);
    for (int i = 0; i < n; ++i) {
      const double hann = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));
      acc += w.values[i] * hann * std::exp(cx(0, -2.0 * M_PI * k * i / n));
    }
    mag[k] = std::abs(acc);
  }
  int kp = 1;
  for (int k = 2; k <= n / 2; ++k)
    if (mag[k] > mag[kp]) kp = k;

  // Refine with a parabola through log magnitudes of the neighbouring bins.
  double delta = 0.0;
  if (kp > 0 && kp < n / 2 && mag[kp - 1] > 0 && mag[kp] > 0 && mag[kp + 1] > 0) {
    const double l = std::log(mag[kp - 1]), m = std::log(mag[kp]), r = std::log(mag[kp + 1]);
    const double denom = l - 2.0 * m + r;
    if (std::abs(denom) > 1e-300) delta = std::clamp(0.5 * (l - r) / denom, -0.5, 0.5);
  }
  const double omega = 2.0 * M_PI * (kp + delta) / (n * w.dt);
  return {omega, amplitude};
}

double poisson_distance(const ExcitationDistribution& dist) {
  const auto& pr = dist.probabilities;
  const int M = int(pr.size()) - 1;
  double norm = 0.0, mean = 0.0;
  for (int i = 0; i <= M; ++i) {
    norm += pr[i];
    mean += i * pr[i];
  }
  if (norm <= 0.0) throw std::invalid_argument("poisson_distance: distribution has no weight");
  mean /= norm;

  std::vector<double> pois(M + 1, 0.0);
  if (mean <= 0.0) {
    pois[0] = 1.0;
  } else {
    double wsum = 0.0;
    for (int i = 0; i <= M; ++i) {
      pois[i] = std::exp(i * std::log(mean) - mean - std::lgamma(double(i) + 1.0));
      wsum += pois[i];
    }
    for (double& v : pois) v /= wsum;  // renormalize the truncated law
  }
  double tv = 0.0;
  for (int i = 0; i <= M; ++i) tv += std::abs(pr[i] / norm - pois[i]);
  return 0.5 * tv;
}

double synchronization_lag(const TimeSeries& series, Column column1, Column column2, double t_a,
                           double t_b) {
  const WindowedSignal w1 = window_signal(series, column1, t_a, t_b);
  const WindowedSignal w2 = window_signal(series, column2, t_a, t_b);
  const int n = int(w1.values.size());
  if (int(w2.values.size()) != n)
    throw std::invalid_argument("synchronization_lag: traces have mismatched sampling");

  double p1 = 0.0, p2 = 0.0;
  for (int i = 0; i < n; ++i) {
    p1 += w1.values[i] * w1.values[i];
    p2 += w2.values[i] * w2.values[i];
  }
  // A trace that is constant up to rounding noise correlates at zero lag.
  const auto floor_of = [n](const WindowedSignal& w) {
    const double s = std::pow(1e-12 * std::max({1.0, std::abs(w.raw_max), std::abs(w.raw_min)}), 2);
    return n * s;
  };
  if (p1 <= floor_of(w1) || p2 <= floor_of(w2)) return 0.0;

  // corr(l) = sum_i x1[i - l] x2[i]; positive lag means trace2 trails trace1.
  // Scan lags outward from zero so ties resolve to the smallest |lag|.
  double best = -std::numeric_limits<double>::infinity();
  int best_lag = 0;
  for (int a = 0; a <= n - 1; ++a) {
    for (int side = 0; side < (a == 0 ? 1 : 2); ++side) {
      const int l = side == 0 ? a : -a;
      double acc = 0.0;
      for (int i = std::max(0, l); i < std::min(n, n + l); ++i)
        acc += w1.values[i - l] * w2.values[i];
      if (acc > best) {
        best = acc;
        best_lag = l;
      }
    }
  }
  return best_lag * w1.dt;
}

}  // namespace mixsim
