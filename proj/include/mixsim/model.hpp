// Time-dependent generator of the two-ensemble master equation under the
// Holstein-Primakoff mapping at zeroth or first order:
//   rhodot = -i[H(t), rho] - D(rho, t)
//   H(t)   = H_static + e^{i phi(t)} H_cross + e^{-i phi(t)} H_cross^dag
//   phi(t) = -phi0 + delta_omega * t
// The dissipator D couples the two collective modes with rate eta*gamma12 and
// rotates with the same phase.
#pragma once

#include "mixsim/types.hpp"

namespace mixsim {

struct GeneratorParts {
  Mat H_static;  // all phi-independent Hamiltonian terms (Hermitian)
  Mat H_cross;   // beta12 * Stilde+_1 Stilde-_2, phased by e^{i phi(t)}
  Mat L1, L2;    // embedded collective lowering operators (jump blocks)
  Mat Q1, Q2;    // L^dag L per mode (precomputed dissipator blocks)
  Mat C;         // L1^dag L2 (cross dissipator block; H_cross = beta12 * C)
  double gamma1 = 1.0, gamma2 = 1.0;
  double cross_rate = 0.0;  // eta * gamma12
  MixParams params;
};

// Laser phase difference, unwrapped (callers take e^{i phi}).
double phase(double t, const MixParams& p);

// Single-mode collective lowering operator Stilde^- on levels 0..M.
//   Zeroth: sqrt(N) a
//   First:  <m-1|S|m> = sqrt(N m) (1 - (m-1)/(2N))
// Stilde^+ is the conjugate transpose, level by level.
OperatorMatrix hp_lowering(HpOrder order, const ModeSpec& mode);

// Single-mode Stilde^+ Stilde^- as the exact diagonal N m - m(m-1)
// (an operator identity, used for the beta_a Hamiltonian term at both orders).
OperatorMatrix number_interaction(const ModeSpec& mode);

GeneratorParts build_generator(const MixParams& p);

// Dense reference evaluation of the right-hand side at time t.
// Output is Hermitian and traceless for Hermitian input.
DensityMatrix apply_rhs(const DensityMatrix& rho, double t, const GeneratorParts& gen);

}  // namespace mixsim
