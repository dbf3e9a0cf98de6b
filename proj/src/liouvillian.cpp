#include "mixsim/liouvillian.hpp"

#include <cmath>
#include <vector>

namespace mixsim {

namespace {

using Triplet = Eigen::Triplet<cx>;

// Accumulate coeff * kron(P, Q) acting on column-major vec(rho):
// row index i1*D + i2 pairs P-row i1 with Q-row i2.
void add_kron(std::vector<Triplet>& trips, cx coeff, const Mat& P, const Mat& Q) {
  const int D = int(P.rows());
  for (int i1 = 0; i1 < D; ++i1)
    for (int j1 = 0; j1 < D; ++j1) {
      const cx pv = P(i1, j1);
      if (pv == cx(0, 0)) continue;
      for (int i2 = 0; i2 < D; ++i2)
        for (int j2 = 0; j2 < D; ++j2) {
          const cx qv = Q(i2, j2);
          if (qv == cx(0, 0)) continue;
          trips.emplace_back(i1 * D + i2, j1 * D + j2, coeff * pv * qv);
        }
    }
}

SpMat assemble(int D2, std::vector<Triplet>& trips) {
  SpMat s(D2, D2);
  s.setFromTriplets(trips.begin(), trips.end());
  s.makeCompressed();
  trips.clear();
  return s;
}

}  // namespace

Superop build_superop(const Mat& H_static, const Mat& H_cross, const Mat& L1, const Mat& L2,
                      double gamma1, double gamma2, double cross_rate,
                      double delta_omega, double phi0) {
  const int D = int(H_static.rows());
  const int D2 = D * D;
  const Mat I = Mat::Identity(D, D);
  const cx mi(0, -1);

  Superop s;
  s.delta_omega = delta_omega;
  s.phi0 = phi0;
  s.D = D;

  std::vector<Triplet> trips;
  trips.reserve(size_t(20) * D2);

  // static block: -i[H_s, rho] - sum_a gamma_a (Q rho + rho Q - 2 L rho L^dag)
  add_kron(trips, mi, I, H_static);
  add_kron(trips, -mi, H_static.transpose(), I);
  auto add_decay = [&](double g, const Mat& L) {
    if (g == 0.0) return;
    const Mat Q = L.adjoint() * L;
    add_kron(trips, -g, I, Q);
    add_kron(trips, -g, Q.transpose(), I);
    add_kron(trips, 2.0 * g, L.conjugate(), L);
  };
  add_decay(gamma1, L1);
  add_decay(gamma2, L2);
  s.S0 = assemble(D2, trips);

  // e^{+i phi} block: -i[H_c, .] - cg (C rho + rho C - 2 L2 rho L1^dag), C = L1^dag L2
  const Mat C = L1.adjoint() * L2;
  add_kron(trips, mi, I, H_cross);
  add_kron(trips, -mi, H_cross.transpose(), I);
  if (cross_rate != 0.0) {
    add_kron(trips, -cross_rate, I, C);
    add_kron(trips, -cross_rate, C.transpose(), I);
    add_kron(trips, 2.0 * cross_rate, L1.conjugate(), L2);
  }
  s.Sp = assemble(D2, trips);

  // e^{-i phi} block: the adjoint partner terms
  const Mat Hcd = H_cross.adjoint(), Cd = C.adjoint();
  add_kron(trips, mi, I, Hcd);
  add_kron(trips, -mi, Hcd.transpose(), I);
  if (cross_rate != 0.0) {
    add_kron(trips, -cross_rate, I, Cd);
    add_kron(trips, -cross_rate, Cd.transpose(), I);
    add_kron(trips, 2.0 * cross_rate, L2.conjugate(), L1);
  }
  s.Sm = assemble(D2, trips);

  return s;
}

Superop build_superop(const GeneratorParts& gen) {
  return build_superop(gen.H_static, gen.H_cross, gen.L1, gen.L2, gen.gamma1, gen.gamma2,
                       gen.cross_rate, gen.params.delta_omega, gen.params.phi0);
}

void superop_apply(const Superop& s, const Vec& x, double t, Vec& out, Vec& scratch) {
  const double phi = -s.phi0 + s.delta_omega * t;
  const cx z = std::exp(cx(0, 1) * phi);
  out.noalias() = s.S0 * x;
  scratch.noalias() = s.Sp * x;
  out += z * scratch;
  scratch.noalias() = s.Sm * x;
  out += std::conj(z) * scratch;
}

double spectral_bound(const Superop& s) {
  const int D2 = s.D * s.D;
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(D2);
  for (const SpMat* m : {&s.S0, &s.Sp, &s.Sm})
    for (int r = 0; r < m->outerSize(); ++r)
      for (SpMat::InnerIterator it(*m, r); it; ++it) row_sums[r] += std::abs(it.value());
  return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

}  // namespace mixsim
