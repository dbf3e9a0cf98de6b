// Truncated two-mode Fock space: index maps, ladder operators, tensor embedding,
// and density-matrix diagnostics.
#pragma once

#include <utility>

#include "mixsim/types.hpp"

namespace mixsim {

// Flat basis index, mode 2 fastest: k = m1*(M2+1) + m2.
int flat_index(int m1, int m2, const MixParams& p);
std::pair<int, int> unflatten(int k, const MixParams& p);

// Single-mode annihilation/creation pair on levels 0..M.
std::pair<OperatorMatrix, OperatorMatrix> ladder_ops(int M);

// op (x) identity (mode 1) or identity (x) op (mode 2) on the joint space.
OperatorMatrix embed(const OperatorMatrix& op, int which_mode, int d1, int d2);
OperatorMatrix embed(const OperatorMatrix& op, int which_mode, const MixParams& p);

// Diagnostics used by the integrator's sampled rows.
double trace_error(const DensityMatrix& rho);        // |tr(rho) - 1|
double hermiticity_error(const DensityMatrix& rho);  // max |rho - rho^dag| entry
double min_diagonal(const DensityMatrix& rho);
// Populations of the top retained level of each mode (truncation monitors).
std::pair<double, double> top_level_populations(const DensityMatrix& rho, const MixParams& p);

}  // namespace mixsim
