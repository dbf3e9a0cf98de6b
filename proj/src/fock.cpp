#include "mixsim/fock.hpp"

#include <cmath>

namespace mixsim {

int flat_index(int m1, int m2, const MixParams& p) {
  if (m1 < 0 || m1 > p.mode1.cutoff || m2 < 0 || m2 > p.mode2.cutoff)
    throw std::out_of_range("flat_index: Fock level out of range");
  return m1 * p.mode2.dim() + m2;
}

std::pair<int, int> unflatten(int k, const MixParams& p) {
  if (k < 0 || k >= p.dim()) throw std::out_of_range("unflatten: index out of range");
  const int d2 = p.mode2.dim();
  return {k / d2, k % d2};
}

std::pair<OperatorMatrix, OperatorMatrix> ladder_ops(int M) {
  if (M < 1) throw std::invalid_argument("ladder_ops: cutoff must be >= 1");
  Mat a = Mat::Zero(M + 1, M + 1);
  for (int m = 1; m <= M; ++m) a(m - 1, m) = std::sqrt(double(m));
  return {a, a.adjoint()};
}

OperatorMatrix embed(const OperatorMatrix& op, int which_mode, int d1, int d2) {
  if (which_mode == 1) {
    if (op.rows() != d1 || op.cols() != d1) throw std::invalid_argument("embed: dimension mismatch for mode 1");
    Mat out = Mat::Zero(d1 * d2, d1 * d2);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        if (op(i, j) != cx(0, 0))
          for (int m = 0; m < d2; ++m) out(i * d2 + m, j * d2 + m) = op(i, j);
    return out;
  }
  if (which_mode == 2) {
    if (op.rows() != d2 || op.cols() != d2) throw std::invalid_argument("embed: dimension mismatch for mode 2");
    Mat out = Mat::Zero(d1 * d2, d1 * d2);
    for (int i = 0; i < d1; ++i)
      for (int a = 0; a < d2; ++a)
        for (int b = 0; b < d2; ++b)
          if (op(a, b) != cx(0, 0)) out(i * d2 + a, i * d2 + b) = op(a, b);
    return out;
  }
  throw std::invalid_argument("embed: which_mode must be 1 or 2");
}

OperatorMatrix embed(const OperatorMatrix& op, int which_mode, const MixParams& p) {
  return embed(op, which_mode, p.mode1.dim(), p.mode2.dim());
}

double trace_error(const DensityMatrix& rho) { return std::abs(rho.trace() - cx(1, 0)); }

double hermiticity_error(const DensityMatrix& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_diagonal(const DensityMatrix& rho) { return rho.diagonal().real().minCoeff(); }

std::pair<double, double> top_level_populations(const DensityMatrix& rho, const MixParams& p) {
  const int d2 = p.mode2.dim();
  const int M1 = p.mode1.cutoff, M2 = p.mode2.cutoff;
  double top1 = 0.0, top2 = 0.0;
  for (int m2 = 0; m2 <= M2; ++m2) top1 += rho(M1 * d2 + m2, M1 * d2 + m2).real();
  for (int m1 = 0; m1 <= M1; ++m1) top2 += rho(m1 * d2 + M2, m1 * d2 + M2).real();
  return {top1, top2};
}

}  // namespace mixsim
