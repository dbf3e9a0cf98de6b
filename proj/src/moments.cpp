#include "mixsim/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mixsim/model.hpp"

namespace mixsim {

namespace {

std::array<cx, 8> to_array(const MomentState& s) {
  return {s.a1, s.a2, s.n1, s.n2, s.m12, s.u, s.s1, s.s2};
}

MomentState from_array(const std::array<cx, 8>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

// Collective scales of the linearized model.
struct Scales {
  double dbar1, dbar2, obar1, obar2, g1, g2, big_b, g12;
};

Scales collective_scales(const MixParams& p) {
  const double n1 = p.mode1.atom_number, n2 = p.mode2.atom_number;
  Scales s;
  s.dbar1 = p.mode1.delta + (n1 - 1) * p.mode1.beta;
  s.dbar2 = p.mode2.delta + (n2 - 1) * p.mode2.beta;
  s.obar1 = p.mode1.omega_rabi * std::sqrt(n1);
  s.obar2 = p.mode2.omega_rabi * std::sqrt(n2);
  s.g1 = p.mode1.gamma * n1;
  s.g2 = p.mode2.gamma * n2;
  s.big_b = p.beta12() * std::sqrt(n1 * n2);
  s.g12 = p.eta * p.gamma12() * std::sqrt(n1 * n2);
  return s;
}

}  // namespace

MomentState moment_rhs(const MomentState& st, double t, const MixParams& p) {
  if (p.hp_order != HpOrder::Zeroth)
    throw std::invalid_argument("moment_rhs: moments close only for the Zeroth-order model");

  const Scales sc = collective_scales(p);
  const cx I(0, 1);
  const cx z = std::exp(I * phase(t, p));
  const cx zb = std::conj(z);
  const cx K = I * sc.big_b + sc.g12;  // coherent + dissipative cross coupling

  MomentState d;
  d.a1 = -(I * sc.dbar1 + sc.g1) * st.a1 - I * sc.obar1 - K * z * st.a2;
  d.a2 = -(I * sc.dbar2 + sc.g2) * st.a2 - I * sc.obar2 - K * zb * st.a1;

  const cx zm = z * st.m12;
  d.n1 = -2.0 * sc.obar1 * st.a1.imag() + 2.0 * sc.big_b * zm.imag() - 2.0 * sc.g1 * st.n1 -
         2.0 * sc.g12 * zm.real();
  d.n2 = -2.0 * sc.obar2 * st.a2.imag() - 2.0 * sc.big_b * zm.imag() - 2.0 * sc.g2 * st.n2 -
         2.0 * sc.g12 * zm.real();

  d.m12 = (I * (sc.dbar1 - sc.dbar2) - (sc.g1 + sc.g2)) * st.m12 + I * sc.obar1 * st.a2 -
          I * sc.obar2 * std::conj(st.a1) + I * sc.big_b * zb * (st.n2 - st.n1) -
          sc.g12 * zb * (st.n1 + st.n2);

  d.u = (-I * (sc.dbar1 + sc.dbar2) - (sc.g1 + sc.g2)) * st.u - I * sc.obar1 * st.a2 -
        I * sc.obar2 * st.a1 - K * (z * st.s2 + zb * st.s1);

  d.s1 = -2.0 * (I * sc.dbar1 + sc.g1) * st.s1 - 2.0 * I * sc.obar1 * st.a1 - 2.0 * K * z * st.u;
  d.s2 = -2.0 * (I * sc.dbar2 + sc.g2) * st.s2 - 2.0 * I * sc.obar2 * st.a2 - 2.0 * K * zb * st.u;
  return d;
}

std::vector<MomentRow> moment_evolve(const MixParams& p, double t_end, double dt,
                                     double sample_interval) {
  if (t_end <= 0 || dt <= 0) throw std::invalid_argument("moment_evolve: t_end and dt must be > 0");
  p.validate();

  const long long n_steps = std::max(1LL, (long long)std::ceil(t_end / dt - 1e-12));
  const double h = t_end / double(n_steps);
  const long long per_sample =
      sample_interval > 0 ? std::max(1LL, (long long)std::llround(sample_interval / h)) : 1;

  auto rk4 = [&](const MomentState& s, double t) {
    const auto k1 = to_array(moment_rhs(s, t, p));
    std::array<cx, 8> y = to_array(s);
    std::array<cx, 8> tmp;
    for (int i = 0; i < 8; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const auto k2 = to_array(moment_rhs(from_array(tmp), t + 0.5 * h, p));
    for (int i = 0; i < 8; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const auto k3 = to_array(moment_rhs(from_array(tmp), t + 0.5 * h, p));
    for (int i = 0; i < 8; ++i) tmp[i] = y[i] + h * k3[i];
    const auto k4 = to_array(moment_rhs(from_array(tmp), t + h, p));
    for (int i = 0; i < 8; ++i) y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return from_array(y);
  };

  MomentState st;  // vacuum: all moments zero
  std::vector<MomentRow> rows;
  rows.push_back({0.0, 0.0, 0.0});
  for (long long k = 0; k < n_steps; ++k) {
    st = rk4(st, k * h);
    if ((k + 1) % per_sample == 0 || k + 1 == n_steps) {
      const double t = (k + 1) * h;
      if (!std::isfinite(st.n1.real()) || !std::isfinite(st.n2.real())) throw NumericalBlowup(t);
      rows.push_back({t, st.n1.real(), st.n2.real()});
    }
  }
  return rows;
}

}  // namespace mixsim
