// Sparse superoperator form of the master equation on vec(rho):
//   d vec(rho)/dt = [ S0 + e^{i phi(t)} Sp + e^{-i phi(t)} Sm ] vec(rho)
// with the three phi-independent blocks precomputed once per generator.
// vec is column-major; vec(A rho B) = kron(B^T, A) vec(rho).
#pragma once

#include "mixsim/model.hpp"
#include "mixsim/types.hpp"

namespace mixsim {

struct Superop {
  SpMat S0, Sp, Sm;
  double delta_omega = 0.0;
  double phi0 = 0.0;
  int D = 0;  // rho is D x D; the blocks are D^2 x D^2
};

// Generic Lindblad assembly from explicit parts (also used by the Dicke oracle,
// which supplies its own operator matrices). Q and C blocks are formed from the
// given jump matrices (truncate-then-multiply).
Superop build_superop(const Mat& H_static, const Mat& H_cross, const Mat& L1, const Mat& L2,
                      double gamma1, double gamma2, double cross_rate,
                      double delta_omega, double phi0);

Superop build_superop(const GeneratorParts& gen);

// out = S0 x + e^{i phi(t)} (Sp x) + e^{-i phi(t)} (Sm x); scratch is reused storage.
void superop_apply(const Superop& s, const Vec& x, double t, Vec& out, Vec& scratch);

// Row-sum (Gershgorin-type) bound on the spectral radius of the full generator,
// used to cap the explicit step size.
double spectral_bound(const Superop& s);

}  // namespace mixsim
