#include "mixsim/model.hpp"

#include <cmath>

#include "mixsim/fock.hpp"

namespace mixsim {

double phase(double t, const MixParams& p) { return -p.phi0 + p.delta_omega * t; }

OperatorMatrix hp_lowering(HpOrder order, const ModeSpec& mode) {
  const int M = mode.cutoff;
  const double N = double(mode.atom_number);
  Mat s = Mat::Zero(M + 1, M + 1);
  for (int m = 1; m <= M; ++m) {
    double v = std::sqrt(N * m);
    if (order == HpOrder::First) v *= 1.0 - (m - 1) / (2.0 * N);
    s(m - 1, m) = v;
  }
  return s;
}

OperatorMatrix number_interaction(const ModeSpec& mode) {
  const int M = mode.cutoff;
  const double N = double(mode.atom_number);
  Mat d = Mat::Zero(M + 1, M + 1);
  for (int m = 0; m <= M; ++m) d(m, m) = N * m - double(m) * (m - 1);
  return d;
}

GeneratorParts build_generator(const MixParams& p) {
  p.validate();
  GeneratorParts g;
  g.params = p;

  auto single_mode_h = [](const ModeSpec& mode, HpOrder order) {
    const int M = mode.cutoff;
    Mat n = Mat::Zero(M + 1, M + 1);
    for (int m = 0; m <= M; ++m) n(m, m) = m;
    Mat s = hp_lowering(order, mode);
    // (delta - beta) a^dag a + Omega (S+ + S-) + beta (N a^dag a - a^dag^2 a^2);
    // the constant -N/2 from S_z is dropped (commutes with everything).
    return Mat{(mode.delta - mode.beta) * n + mode.omega_rabi * (s + s.adjoint()) +
               mode.beta * number_interaction(mode)};
  };

  g.H_static = embed(single_mode_h(p.mode1, p.hp_order), 1, p) +
               embed(single_mode_h(p.mode2, p.hp_order), 2, p);
  g.L1 = embed(hp_lowering(p.hp_order, p.mode1), 1, p);
  g.L2 = embed(hp_lowering(p.hp_order, p.mode2), 2, p);
  g.Q1 = g.L1.adjoint() * g.L1;
  g.Q2 = g.L2.adjoint() * g.L2;
  g.C = g.L1.adjoint() * g.L2;  // truncate-then-multiply
  g.H_cross = p.beta12() * g.C;
  g.gamma1 = p.mode1.gamma;
  g.gamma2 = p.mode2.gamma;
  g.cross_rate = p.eta * p.gamma12();
  return g;
}

DensityMatrix apply_rhs(const DensityMatrix& rho, double t, const GeneratorParts& gen) {
  const int D = gen.params.dim();
  if (rho.rows() != D || rho.cols() != D) throw std::invalid_argument("apply_rhs: dimension mismatch");

  const cx z = std::exp(cx(0, 1) * phase(t, gen.params));
  const Mat H = gen.H_static + z * gen.H_cross + std::conj(z) * gen.H_cross.adjoint();

  Mat out = cx(0, -1) * (H * rho - rho * H);
  out -= gen.gamma1 * (gen.Q1 * rho + rho * gen.Q1 - 2.0 * (gen.L1 * rho * gen.L1.adjoint()));
  out -= gen.gamma2 * (gen.Q2 * rho + rho * gen.Q2 - 2.0 * (gen.L2 * rho * gen.L2.adjoint()));
  if (gen.cross_rate != 0.0) {
    const Mat Cd = gen.C.adjoint();
    out -= gen.cross_rate * z *
           (gen.C * rho + rho * gen.C - 2.0 * (gen.L2 * rho * gen.L1.adjoint()));
    out -= gen.cross_rate * std::conj(z) *
           (Cd * rho + rho * Cd - 2.0 * (gen.L1 * rho * gen.L2.adjoint()));
  }
  return out;
}

}  // namespace mixsim
