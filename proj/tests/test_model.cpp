#include <doctest.h>

#include <random>

#include "mixsim/fock.hpp"
#include "mixsim/integrator.hpp"
#include "mixsim/liouvillian.hpp"
#include "mixsim/model.hpp"

using namespace mixsim;

namespace {

Mat random_hermitian_unit_trace(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cx(u(rng), u(rng));
  Mat h = 0.5 * (m + m.adjoint());
  h -= ((h.trace() - cx(1, 0)) / double(d)) * Mat::Identity(d, d);
  return h;
}

MixParams tiny_params(int m1 = 3, int m2 = 3) {
  MixParams p;
  p.mode1.cutoff = m1;
  p.mode2.cutoff = m2;
  p.mode1.atom_number = 100;
  p.mode2.atom_number = 100;
  return p;
}

}  // namespace

TEST_CASE("phase is unwrapped: -phi0 + delta_omega * t") {
  MixParams p;
  p.phi0 = 0.3;
  p.delta_omega = 50.0;
  CHECK(phase(0.0, p) == doctest::Approx(-0.3));
  CHECK(phase(1.0, p) == doctest::Approx(49.7));
  CHECK(phase(10.0, p) == doctest::Approx(499.7));  // no 2*pi wrapping
}

TEST_CASE("collective lowering matrix elements") {
  ModeSpec m;
  m.atom_number = 100;
  m.cutoff = 4;

  const Mat s0 = hp_lowering(HpOrder::Zeroth, m);
  CHECK(s0(0, 1).real() == doctest::Approx(10.0));  // sqrt(N) sqrt(1)
  CHECK(s0(1, 2).real() == doctest::Approx(10.0 * std::sqrt(2.0)));

  const Mat s1 = hp_lowering(HpOrder::First, m);
  CHECK(s1(0, 1).real() == doctest::Approx(10.0));  // m=1 correction factor is 1
  CHECK(s1(1, 2).real() == doctest::Approx(10.0 * std::sqrt(2.0) * (1.0 - 1.0 / 200.0)));
  CHECK(s1(1, 2).real() == doctest::Approx(14.0714).epsilon(1e-4));

  // First-order entries converge to Zeroth as N grows at fixed m.
  ModeSpec big = m;
  big.atom_number = 100000;
  const Mat sb = hp_lowering(HpOrder::First, big);
  const Mat zb = hp_lowering(HpOrder::Zeroth, big);
  CHECK((sb - zb).cwiseAbs().maxCoeff() / zb.cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("number interaction is the exact diagonal N m - m(m-1)") {
  ModeSpec m;
  m.atom_number = 100;
  m.cutoff = 3;
  const Mat q = number_interaction(m);
  CHECK(q(0, 0).real() == 0.0);
  CHECK(q(1, 1).real() == doctest::Approx(100.0));
  CHECK(q(2, 2).real() == doctest::Approx(198.0));
  CHECK(q(3, 3).real() == doctest::Approx(294.0));
  CHECK(q.cwiseAbs().sum() == doctest::Approx(q.diagonal().cwiseAbs().sum()));  // diagonal
}

TEST_CASE("static Hamiltonian: trivial zero, effective detuning, cross term scaling") {
  MixParams p = tiny_params();
  p.mode1.omega_rabi = p.mode2.omega_rabi = 0.0;
  p.mode1.beta = p.mode2.beta = 0.0;
  p.mode1.delta = p.mode2.delta = 0.0;
  CHECK(build_generator(p).H_static.cwiseAbs().maxCoeff() == 0.0);

  // Level m=1 diagonal equals the effective detuning Delta + (N-1) beta.
  MixParams q = tiny_params();
  q.hp_order = HpOrder::Zeroth;
  q.mode1.delta = 0.7;
  q.mode2.delta = -0.2;
  const GeneratorParts gen = build_generator(q);
  const double dbar1 = q.mode1.delta + (q.mode1.atom_number - 1) * q.mode1.beta;
  const double dbar2 = q.mode2.delta + (q.mode2.atom_number - 1) * q.mode2.beta;
  const int k10 = flat_index(1, 0, q), k01 = flat_index(0, 1, q);
  CHECK(gen.H_static(k10, k10).real() == doctest::Approx(dbar1).epsilon(1e-12));
  CHECK(gen.H_static(k01, k01).real() == doctest::Approx(dbar2).epsilon(1e-12));

  // eta = 0 turns off both cross channels.
  MixParams r = tiny_params();
  r.eta = 0.0;
  const GeneratorParts g0 = build_generator(r);
  CHECK(g0.H_cross.cwiseAbs().maxCoeff() == 0.0);
  CHECK(g0.cross_rate == 0.0);
}

TEST_CASE("Zeroth-order Hamiltonian vs the literal collective-scale matrix") {
  // On the two-level-per-mode space the quartic ladder term vanishes and the
  // static Hamiltonian IS the bilinear collective form; on larger spaces the
  // two differ exactly by the beta * m(m-1) diagonal.
  auto literal = [](const MixParams& p) {
    const double dbar1 = p.mode1.delta + (p.mode1.atom_number - 1) * p.mode1.beta;
    const double dbar2 = p.mode2.delta + (p.mode2.atom_number - 1) * p.mode2.beta;
    const double obar1 = p.mode1.omega_rabi * std::sqrt(double(p.mode1.atom_number));
    const double obar2 = p.mode2.omega_rabi * std::sqrt(double(p.mode2.atom_number));
    const auto [a1, a1d] = ladder_ops(p.mode1.cutoff);
    const auto [a2, a2d] = ladder_ops(p.mode2.cutoff);
    const Mat n1 = a1d * a1, n2 = a2d * a2;
    return Mat(embed(dbar1 * n1 + obar1 * (a1 + a1d), 1, p) +
               embed(dbar2 * n2 + obar2 * (a2 + a2d), 2, p));
  };

  MixParams p = tiny_params(1, 1);
  p.hp_order = HpOrder::Zeroth;
  p.mode1.delta = 0.3;
  const GeneratorParts gen = build_generator(p);
  CHECK((gen.H_static - literal(p)).cwiseAbs().maxCoeff() < 1e-10);
  // Cross part: beta12 sqrt(N1 N2) a1^dag a2 at Zeroth order.
  const auto [a1, a1d] = ladder_ops(1);
  const Mat cross = p.beta12() * std::sqrt(double(p.mode1.atom_number) * p.mode2.atom_number) *
                    (embed(a1d, 1, p) * embed(a1, 2, p));
  CHECK((gen.H_cross - cross).cwiseAbs().maxCoeff() < 1e-10);

  MixParams q = tiny_params(4, 3);
  q.hp_order = HpOrder::Zeroth;
  const GeneratorParts gq = build_generator(q);
  Mat quartic = Mat::Zero(q.dim(), q.dim());
  for (int m1 = 0; m1 <= 4; ++m1)
    for (int m2 = 0; m2 <= 3; ++m2) {
      const int k = flat_index(m1, m2, q);
      quartic(k, k) = q.mode1.beta * m1 * (m1 - 1) + q.mode2.beta * m2 * (m2 - 1);
    }
  CHECK((gq.H_static + quartic - literal(q)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("generator maps the top Fock level only downward") {
  for (HpOrder order : {HpOrder::Zeroth, HpOrder::First}) {
    MixParams p = tiny_params(3, 3);
    p.hp_order = order;
    p.eta = 0.0;
    p.mode1.beta = p.mode2.beta = 0.0;
    p.mode1.omega_rabi = p.mode2.omega_rabi = 0.0;
    const GeneratorParts gen = build_generator(p);

    // Jump matrices are strict single-level lowerings: every nonzero entry of
    // L1 sits at (m1-1, m2) <- (m1, m2), and of L2 at (m1, m2-1) <- (m1, m2).
    for (int r = 0; r < p.dim(); ++r)
      for (int c = 0; c < p.dim(); ++c) {
        const auto [r1, r2] = unflatten(r, p);
        const auto [c1, c2] = unflatten(c, p);
        if (std::abs(gen.L1(r, c)) > 0) CHECK((r1 == c1 - 1 && r2 == c2));
        if (std::abs(gen.L2(r, c)) > 0) CHECK((r1 == c1 && r2 == c2 - 1));
      }

    // An undriven top-level state strictly loses population; nothing flows up.
    Mat rho = Mat::Zero(p.dim(), p.dim());
    const int top = flat_index(3, 0, p);
    rho(top, top) = 1.0;
    const Mat der = apply_rhs(rho, 0.0, gen);
    CHECK(der(top, top).real() < 0.0);
    for (int m2 = 0; m2 <= 3; ++m2) {
      const int other_top = flat_index(3, m2, p);
      if (other_top != top) CHECK(std::abs(der(other_top, other_top).real()) < 1e-14);
    }
  }
}

TEST_CASE("apply_rhs: stationary vacuum, decay identity, conservation, linearity") {
  MixParams p = tiny_params();
  p.mode1.omega_rabi = p.mode2.omega_rabi = 0.0;
  const GeneratorParts gen = build_generator(p);
  const Mat rhs0 = apply_rhs(vacuum_state(p), 0.0, gen);
  CHECK(rhs0.cwiseAbs().maxCoeff() == 0.0);  // undriven vacuum exactly stationary

  // Zeroth order, one undriven decoupled mode in |1>: d<n>/dt = -2 gamma N <n>.
  MixParams q = tiny_params();
  q.hp_order = HpOrder::Zeroth;
  q.eta = 0.0;
  q.mode1.omega_rabi = q.mode2.omega_rabi = 0.0;
  q.mode1.gamma = 0.37;
  const GeneratorParts gq = build_generator(q);
  Mat one = Mat::Zero(q.dim(), q.dim());
  one(flat_index(1, 0, q), flat_index(1, 0, q)) = 1.0;
  const Mat d = apply_rhs(one, 0.0, gq);
  double dn1 = 0.0;
  for (int m1 = 0; m1 <= 3; ++m1)
    for (int m2 = 0; m2 <= 3; ++m2) dn1 += m1 * d(flat_index(m1, m2, q), flat_index(m1, m2, q)).real();
  CHECK(dn1 == doctest::Approx(-2.0 * 0.37 * 100.0).epsilon(1e-10));

  // Hermitian + traceless + linear on random Hermitian input.
  MixParams r = tiny_params();
  r.phi0 = 0.4;
  const GeneratorParts gr = build_generator(r);
  const Mat rho1 = random_hermitian_unit_trace(r.dim(), 7);
  const Mat rho2 = random_hermitian_unit_trace(r.dim(), 8);
  const Mat d1 = apply_rhs(rho1, 0.13, gr);
  const double scale = d1.cwiseAbs().maxCoeff();
  CHECK((d1 - d1.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  CHECK(std::abs(d1.trace()) <= 1e-12 * double(r.dim()) * scale);
  const Mat dmix = apply_rhs(0.3 * rho1 + 0.6 * rho2, 0.13, gr);
  const Mat dlin = 0.3 * d1 + 0.6 * apply_rhs(rho2, 0.13, gr);
  CHECK((dmix - dlin).cwiseAbs().maxCoeff() <= 1e-11 * scale);

  Mat wrong = Mat::Zero(3, 3);
  CHECK_THROWS_AS(apply_rhs(wrong, 0.0, gr), std::invalid_argument);
}

TEST_CASE("eta=0 decoupling: reduced mode-1 state ignores mode-2 dynamics") {
  // Same mode-1 parameters, very different mode-2 drive; at eta=0 the partial
  // trace over mode 2 must evolve identically.
  MixParams a = tiny_params();
  a.eta = 0.0;
  MixParams b = a;
  b.mode2.omega_rabi = 0.0;
  b.mode2.gamma = 3.0;

  const Mat rho1 = random_hermitian_unit_trace(4, 11);
  const Mat rho2 = random_hermitian_unit_trace(4, 12);
  Mat full = Mat::Zero(16, 16);
  for (int i1 = 0; i1 < 4; ++i1)
    for (int i2 = 0; i2 < 4; ++i2)
      for (int j1 = 0; j1 < 4; ++j1)
        for (int j2 = 0; j2 < 4; ++j2)
          full(i1 * 4 + i2, j1 * 4 + j2) = rho1(i1, j1) * rho2(i2, j2);

  auto ptrace2 = [](const Mat& rho) {
    Mat red = Mat::Zero(4, 4);
    for (int i1 = 0; i1 < 4; ++i1)
      for (int j1 = 0; j1 < 4; ++j1)
        for (int m = 0; m < 4; ++m) red(i1, j1) += rho(i1 * 4 + m, j1 * 4 + m);
    return red;
  };

  const GeneratorParts ga = build_generator(a), gb = build_generator(b);
  Mat ra = full, rb = full;
  const double dt = 1e-5;
  for (int k = 0; k < 40; ++k) {
    ra = step(ra, k * dt, dt, ga);
    rb = step(rb, k * dt, dt, gb);
  }
  CHECK((ptrace2(ra) - ptrace2(rb)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sparse superoperator reproduces the dense right-hand side") {
  MixParams p = tiny_params(3, 2);
  p.phi0 = 0.25;
  p.mode1.delta = 0.4;
  p.eta = 0.8;
  for (HpOrder order : {HpOrder::Zeroth, HpOrder::First}) {
    p.hp_order = order;
    const GeneratorParts gen = build_generator(p);
    const Superop s = build_superop(gen);
    const int D = p.dim();
    const Mat rho = random_hermitian_unit_trace(D, 21 + int(order));
    for (double t : {0.0, 0.077, 1.3}) {
      const Mat dense = apply_rhs(rho, t, gen);
      Vec x(D * D), out(D * D), scratch(D * D);
      Eigen::Map<Mat>(x.data(), D, D) = rho;
      superop_apply(s, x, t, out, scratch);
      const Mat via_sparse = Eigen::Map<const Mat>(out.data(), D, D);
      CHECK((via_sparse - dense).cwiseAbs().maxCoeff() <=
            1e-12 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("spectral bound dominates the generator's action") {
  MixParams p = tiny_params(2, 2);
  const GeneratorParts gen = build_generator(p);
  const Superop s = build_superop(gen);
  const double bound = spectral_bound(s);
  CHECK(bound > 0.0);
  // ||L x||_inf <= bound * ||x||_inf for a sample vector.
  const int D = p.dim();
  Vec x = Vec::Ones(D * D), out(D * D), scratch(D * D);
  superop_apply(s, x, 0.3, out, scratch);
  CHECK(out.cwiseAbs().maxCoeff() <= bound * 1.0 + 1e-9);
}

TEST_CASE("parameter validation") {
  MixParams p;
  p.mode1.cutoff = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MixParams{};
  p.mode1.cutoff = 200;  // exceeds atom_number=100
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MixParams{};
  p.eta = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MixParams{};
  p.mode2.gamma = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MixParams{};
  CHECK_NOTHROW(p.validate());
}
