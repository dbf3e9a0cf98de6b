#pragma once

// Closed moment-equation oracle for the linearized (Zeroth-order) model.
// The eight tracked moments close under the quadratic generator; the ODE
// system is derived in docs/moment_equations.md.

#include <vector>

#include "mixsim/types.hpp"

namespace mixsim {

struct MomentState {
  cx a1{0, 0}, a2{0, 0};    // <a1>, <a2>
  cx n1{0, 0}, n2{0, 0};    // <a1^dag a1>, <a2^dag a2>
  cx m12{0, 0};             // <a1^dag a2>
  cx u{0, 0};               // <a1 a2>
  cx s1{0, 0}, s2{0, 0};    // <a1^2>, <a2^2>
};

struct MomentRow {
  double t = 0.0;
  double ne1 = 0.0;
  double ne2 = 0.0;
};

// Time derivative of the moment vector. Requires hp_order == Zeroth
// (the system is closed only for the linear model); throws otherwise.
MomentState moment_rhs(const MomentState& state, double t, const MixParams& p);

// RK4 march of the moment system from vacuum; emits (t, Ne1, Ne2) rows every
// sample_interval (<= 0 means every step).
std::vector<MomentRow> moment_evolve(const MixParams& p, double t_end, double dt,
                                     double sample_interval = 0.0);

}  // namespace mixsim
