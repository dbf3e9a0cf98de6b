// Core parameter types and error taxonomy for the two-ensemble mixing simulator.
// All rates are in units of gamma1, all times in 1/gamma1.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mixsim {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cx, Eigen::RowMajor>;

// A density matrix and a (generally non-Hermitian) operator share the same
// dense representation on the truncated joint Fock space.
using DensityMatrix = Mat;
using OperatorMatrix = Mat;

enum class HpOrder { Zeroth, First };

struct ModeSpec {
  int cutoff = 10;        // M: highest retained Fock level
  int atom_number = 100;  // N
  double gamma = 1.0;
  double beta = 10.0;
  double delta = 0.0;
  double omega_rabi = 30.0;

  int dim() const { return cutoff + 1; }
};

struct MixParams {
  ModeSpec mode1{};
  ModeSpec mode2{};
  double eta = 0.5;         // cross-coupling, in [0,1]
  double delta_omega = 50.0;
  double phi0 = 0.0;
  HpOrder hp_order = HpOrder::First;

  // Derived couplings, always recomputed from constituents.
  double beta12() const { return eta * std::sqrt(mode1.beta * mode2.beta); }
  double gamma12() const { return std::sqrt(mode1.gamma * mode2.gamma); }
  int dim() const { return mode1.dim() * mode2.dim(); }

  void validate() const {
    auto check_mode = [](const ModeSpec& m, const char* which) {
      if (m.cutoff < 1) throw std::invalid_argument(std::string(which) + ": cutoff must be >= 1");
      if (m.atom_number < 1) throw std::invalid_argument(std::string(which) + ": atom_number must be >= 1");
      if (m.cutoff > m.atom_number)
        throw std::invalid_argument(std::string(which) + ": cutoff must not exceed atom_number");
      if (m.gamma < 0) throw std::invalid_argument(std::string(which) + ": gamma must be >= 0");
      for (double v : {m.gamma, m.beta, m.delta, m.omega_rabi})
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(which) + ": non-finite rate");
    };
    check_mode(mode1, "mode1");
    check_mode(mode2, "mode2");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in [0,1]");
    if (!std::isfinite(delta_omega) || !std::isfinite(phi0))
      throw std::invalid_argument("non-finite delta_omega or phi0");
  }
};

// Integration failures carry the offending mode (0 = global) and time.
struct CutoffExceeded : std::runtime_error {
  int mode;
  double t;
  CutoffExceeded(int mode_, double t_)
      : std::runtime_error("Fock cutoff inadequate: top-level population exceeded guard on mode " +
                           std::to_string(mode_) + " at t=" + std::to_string(t_)),
        mode(mode_), t(t_) {}
};

struct ValidityViolated : std::runtime_error {
  int mode;
  double t;
  ValidityViolated(int mode_, double t_)
      : std::runtime_error("low-excitation validity violated: <n>/N exceeded guard on mode " +
                           std::to_string(mode_) + " at t=" + std::to_string(t_)),
        mode(mode_), t(t_) {}
};

struct NumericalBlowup : std::runtime_error {
  double t;
  explicit NumericalBlowup(double t_)
      : std::runtime_error("non-finite state during integration at t=" + std::to_string(t_)), t(t_) {}
};

struct AsymmetricParams : std::runtime_error {
  AsymmetricParams()
      : std::runtime_error("intensity formula requires N1=N2 and gamma1=gamma2") {}
};

}  // namespace mixsim
