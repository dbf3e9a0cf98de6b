#pragma once

// Exact collective-spin oracle: integrates the same master equation in the
// symmetric Dicke subspace (no bosonization), feasible for small atom numbers.
// Basis per ensemble: |j, m> with j = N/2, indexed by excitation count
// k = m + j in 0..N.

#include <utility>
#include <vector>

#include "mixsim/types.hpp"

namespace mixsim {

struct SpinSpace {
  int n_atoms = 0;
  Mat sp, sm, sz;  // (N+1) x (N+1) collective su(2) matrices
};

// Full collective-spin matrices for one ensemble of N atoms:
// <k-1| S- |k> = sqrt(k (N - k + 1)), sz = diag(k - N/2).
SpinSpace spin_space(int n_atoms);

struct DickeRow {
  double t = 0.0;
  double ne1 = 0.0, ne2 = 0.0;  // <S_z> + N/2 per ensemble
  double trace_err = 0.0, herm_err = 0.0, min_diag = 0.0;
};

// Exact master-equation march from the product state with initial_excitation
// = {k1, k2} atoms excited per ensemble (all-ground by default). Joint
// dimension (N1+1)(N2+1) must not exceed 4096. Internally the basis is
// windowed to the lowest excitation levels and widened automatically whenever
// population reaches the window edge, up to the full space. dt <= 0 selects a
// stable step automatically; sample_interval <= 0 records every step.
std::vector<DickeRow> dicke_evolve(const MixParams& p, double t_end, double dt,
                                   double sample_interval = 0.0,
                                   std::pair<int, int> initial_excitation = {0, 0});

}  // namespace mixsim
