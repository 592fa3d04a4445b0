#include "momentkit/models.hpp"
#include "momentkit/moment.hpp"
#include "momentkit/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace momentkit;

namespace {

AlgebraElement unit(int dim, int k) { return AlgebraElement::Unit(dim, k); }

CVec e(int n, int k) { return CVec::Unit(n, k); }

CVec tangent_at(Rng& rng, const CVec& psi) {
  CVec u = rng.gaussian_cvec(psi.size());
  u -= inner(psi, u) * psi;
  return u / u.norm();
}

// state supported on the lowest `levels` coordinates
CVec low_state(Rng& rng, Eigen::Index n, int levels) {
  CVec v = CVec::Zero(n);
  v.head(levels) = rng.gaussian_cvec(levels);
  return v / v.norm();
}

const CentralExtension& spin_half() {
  static const CentralExtension ext = central_extension(su2_spin(1));
  return ext;
}

}  // namespace

TEST_CASE("momentum of the highest-weight qubit state") {
  const CentralExtension& ext = spin_half();
  const Covector mu = momentum(ext, e(2, 0));
  REQUIRE(mu.coords.size() == 4);
  REQUIRE(mu.coords(0) == 0.0);
  REQUIRE(mu.coords(1) == 0.0);
  REQUIRE(mu.coords(2) == 0.5);
  REQUIRE(mu.coords(3) == -1.0);  // central coordinate, exact

  REQUIRE(mu(unit(4, 2)) == 0.5);
  REQUIRE_THROWS_AS(mu(AlgebraElement::Zero(3)), std::invalid_argument);
  REQUIRE_THROWS_AS(momentum(ext, CVec::Zero(2)), std::invalid_argument);
}

TEST_CASE("momentum is a function of the ray") {
  const CentralExtension& ext = spin_half();
  Rng rng(31, "moment/ray");
  for (int s = 0; s < 20; ++s) {
    const CVec psi = rng.unit_state(2);
    const Complex z = (0.5 + rng.uniform01()) * std::exp(kI * (2.0 * rng.uniform01() - 1.0));
    const Covector a = momentum(ext, psi);
    const Covector b = momentum(ext, z * psi);
    REQUIRE((a.coords - b.coords).lpNorm<Eigen::Infinity>() < 1e-15);
    REQUIRE(b.coords(3) == -1.0);
  }
}

TEST_CASE("qubit momentum sits on the radius-1/2 Bloch sphere") {
  const CentralExtension& ext = spin_half();
  Rng rng(32, "moment/bloch");
  for (int s = 0; s < 200; ++s) {
    const Covector mu = momentum(ext, rng.unit_state(2));
    REQUIRE(std::abs(mu.coords.head(3).norm() - 0.5) < 1e-15);
  }
}

TEST_CASE("fundamental field and the connection route to the momentum") {
  const CentralExtension& ext = spin_half();
  REQUIRE((fundamental_field(ext, ext.lift(unit(3, 0)), e(2, 0)) + 0.5 * kI * e(2, 1)).norm() ==
          0.0);

  REQUIRE(comomentum_via_alpha(ext, ext.lift(unit(3, 2)), e(2, 0)) == 0.5);

  Rng rng(33, "moment/alpha");
  for (int s = 0; s < 30; ++s) {
    const CVec psi = rng.unit_state(3);
    const CentralExtension ex2 = central_extension(su2_spin(2));
    const AlgebraElement xi = rng.gaussian_rvec(4);
    REQUIRE(std::abs(comomentum_via_alpha(ex2, xi, psi) - momentum(ex2, psi)(xi)) < 1e-14);
  }
}

TEST_CASE("local fundamental field matches the chart flow derivative") {
  const CentralExtension& ext = spin_half();
  Rng rng(34, "moment/flow");
  for (int s = 0; s < 10; ++s) {
    const CVec psi = rng.unit_state(2);
    CVec v = rng.gaussian_cvec(2);
    v -= inner(psi, v).real() * psi;  // sphere tangent
    v *= 0.3;
    const AlgebraElement xi = rng.gaussian_rvec(4);
    const CMat a = drho(ext, xi);
    auto curve = [&](double t) -> CVec {
      const CVec moved = matrix_exp(a, t) * (psi + v);
      return chart_s(psi, moved / moved.norm());
    };
    const CVec fd = fd_derivative(curve, 0.0, 1e-4);
    REQUIRE((fd - fundamental_field_local(ext, xi, psi, v)).norm() < 1e-6);
  }
}

TEST_CASE("momentum derivative: frozen value and fd cross-check") {
  const CentralExtension& ext = spin_half();
  const Covector dmu = momentum_derivative(ext, e(2, 0), e(2, 1));
  REQUIRE(dmu(ext.lift(unit(3, 0))) == 1.0);

  Rng rng(35, "moment/dmu");
  const CentralExtension ex2 = central_extension(su2_spin(2));
  for (int s = 0; s < 15; ++s) {
    const CVec psi = rng.unit_state(3);
    const CVec dv = tangent_at(rng, psi);
    REQUIRE(momentum_derivative_fd_residual(ex2, psi, dv, 1e-4) < 1e-7);
  }
}

TEST_CASE("Hamiltonian identity holds to roundoff") {
  Rng rng(36, "moment/hamiltonian");
  const CentralExtension models[] = {spin_half(), central_extension(su2_spin(2)),
                                     central_extension(torus_diag({1, 2, 3}))};
  for (const CentralExtension& ext : models) {
    for (int s = 0; s < 25; ++s) {
      const CVec psi = rng.unit_state(ext.hdim());
      const CVec dv = tangent_at(rng, psi);
      const AlgebraElement xi = rng.gaussian_rvec(ext.dim());
      REQUIRE(check_hamiltonian(ext, psi, xi, dv) < 1e-13);
    }
  }
  // truncated model: the identity is closure-free, so full-support states work
  const CentralExtension weyl = central_extension(weyl_truncated(8));
  for (int s = 0; s < 25; ++s) {
    const CVec psi = rng.unit_state(8);
    const CVec dv = tangent_at(rng, psi);
    REQUIRE(check_hamiltonian(weyl, psi, rng.gaussian_rvec(3), dv) < 1e-12);
  }
}

TEST_CASE("Kostant-Souriau cocycle on the qubit") {
  const CentralExtension& ext = spin_half();
  const TwoCocycle omega = ks_cocycle(ext, e(2, 0));
  REQUIRE(omega.mat.rows() == 3);
  REQUIRE(omega.mat(0, 1) == 0.5);
  REQUIRE(omega.mat(1, 0) == -0.5);
  REQUIRE(omega.mat(0, 2) == 0.0);
  REQUIRE(omega.mat(1, 2) == 0.0);
  REQUIRE((omega.mat + omega.mat.transpose()).norm() == 0.0);
  REQUIRE(omega.identity_residual(ext.base.algebra) == 0.0);
  REQUIRE_THROWS_AS(omega.identity_residual(ext.algebra), std::invalid_argument);
  REQUIRE_THROWS_AS(ks_cocycle(ext, CVec::Zero(2)), std::invalid_argument);
}

TEST_CASE("delta of the momentum covector") {
  const CentralExtension& ext = spin_half();
  const TwoCocycle d = delta_map(ext, momentum(ext, e(2, 0)));
  REQUIRE(d.mat(0, 1) == 0.5);  // lambda([e1#, e2#]) = mu(e3#)
  REQUIRE(d.mat(0, 2) == 0.0);
  Covector wrong{RVec::Zero(3)};
  REQUIRE_THROWS_AS(delta_map(ext, wrong), std::invalid_argument);
}

TEST_CASE("omega equals delta mu, and the difference is cohomologically exact") {
  Rng rng(37, "moment/omega");
  const CentralExtension models[] = {spin_half(), central_extension(su2_spin(3)),
                                     central_extension(torus_diag({2, -1, 3}))};
  for (const CentralExtension& ext : models) {
    for (int s = 0; s < 25; ++s) {
      const CVec psi = rng.unit_state(ext.hdim());
      REQUIRE(check_omega_equals_delta_mu(ext, psi) < 1e-14);
    }
    // cohomologous pairs
    for (int s = 0; s < 10; ++s) {
      const CVec psi = rng.unit_state(ext.hdim());
      const CVec phi = rng.unit_state(ext.hdim());
      const RMat lhs = ks_cocycle(ext, psi).mat - ks_cocycle(ext, phi).mat;
      const Covector diff{momentum(ext, psi).coords - momentum(ext, phi).coords};
      REQUIRE((lhs - delta_map(ext, diff).mat).lpNorm<Eigen::Infinity>() < 1e-14);
    }
  }
}

TEST_CASE("hermitian form h: frozen qubit matrix, PSD, Im h = omega") {
  const CentralExtension& ext = spin_half();
  const HermitianFormOnAlgebra h = hermitian_h(ext, e(2, 0));
  CMat expect(3, 3);
  expect << 0.5, Complex(0, 0.5), 0, Complex(0, -0.5), 0.5, 0, 0, 0, 0;
  REQUIRE((h.mat - expect).norm() == 0.0);
  REQUIRE(h.min_eigenvalue() >= -1e-14);
  REQUIRE((h.mat.imag() - ks_cocycle(ext, e(2, 0)).mat).norm() == 0.0);

  Rng rng(38, "moment/psd");
  const CentralExtension ex3 = central_extension(su2_spin(3));
  for (int s = 0; s < 25; ++s) {
    const CVec psi = rng.unit_state(4);
    const HermitianFormOnAlgebra hh = hermitian_h(ex3, psi);
    REQUIRE(hh.min_eigenvalue() >= -1e-12);
    REQUIRE((hh.mat - hh.mat.adjoint()).norm() < 1e-15);
    REQUIRE((hh.mat.imag() - ks_cocycle(ex3, psi).mat).lpNorm<Eigen::Infinity>() < 1e-15);
  }
}

TEST_CASE("equivariance under exact exponentials") {
  Rng rng(39, "moment/equivariance");
  const CentralExtension models[] = {spin_half(), central_extension(torus_diag({1, 4}))};
  for (const CentralExtension& ext : models) {
    for (int s = 0; s < 20; ++s) {
      const CVec psi = rng.unit_state(ext.hdim());
      const AlgebraElement eta = rng.gaussian_rvec(ext.dim());
      const AlgebraElement xi = rng.gaussian_rvec(ext.dim());
      REQUIRE(check_equivariance(ext, eta, psi, xi) < 1e-10);
    }
  }
  // truncated model: small displacements of safe-domain states
  const CentralExtension weyl = central_extension(weyl_truncated(12));
  for (int s = 0; s < 20; ++s) {
    const CVec psi = low_state(rng, 12, 10);
    AlgebraElement eta = rng.gaussian_rvec(3);
    eta *= 0.01 / eta.norm();
    REQUIRE(check_equivariance(weyl, eta, psi, rng.gaussian_rvec(3)) < 1e-9);
  }
}

TEST_CASE("unitary pushforward preserves the Hermitean form") {
  Rng rng(40, "moment/kahler");
  const CentralExtension ext = central_extension(su2_spin(2));
  for (int s = 0; s < 20; ++s) {
    const CVec psi = rng.unit_state(3);
    const CVec dv = tangent_at(rng, psi);
    const CVec dw = tangent_at(rng, psi);
    REQUIRE(kahler_invariance_check(ext, rng.gaussian_rvec(4), psi, dv, dw) < 1e-12);
  }
}

TEST_CASE("kernel of the momentum derivative: immersed qubit") {
  const CentralExtension& ext = spin_half();
  Rng rng(41, "moment/kernel2");
  for (int s = 0; s < 15; ++s) {
    const KernelResult kr = momentum_kernel(ext, rng.unit_state(2));
    REQUIRE(kr.direct.cols() == 0);
    REQUIRE(kr.injective);
    REQUIRE(kr.spans);
    REQUIRE(kr.angle == 0.0);
    REQUIRE_FALSE(kr.derivative_zero);
  }
}

TEST_CASE("kernel of the momentum derivative: torus basis state is fully degenerate") {
  const CentralExtension ext = central_extension(torus_diag({1, 1, 1}));
  const KernelResult kr = momentum_kernel(ext, e(3, 1));
  REQUIRE(kr.direct.cols() == 4);  // the whole tangent space
  REQUIRE(kr.derivative_zero);
  REQUIRE_FALSE(kr.injective);
  REQUIRE_FALSE(kr.spans);
  REQUIRE(kr.angle < 1e-8);

  // two routes agree on generic states as well
  Rng rng(42, "moment/kernel3");
  for (int s = 0; s < 15; ++s) {
    const KernelResult k2 = momentum_kernel(ext, rng.unit_state(3));
    REQUIRE(k2.angle < 1e-8);
    REQUIRE(k2.injective == k2.spans);
    REQUIRE(k2.direct.cols() == k2.complement.cols());
  }
}

TEST_CASE("stabilizer of the highest-weight qubit state") {
  const CentralExtension& ext = spin_half();
  const StabilizerBasis stab = stabilizer(ext, e(2, 0));
  REQUIRE(stab.dim() == 2);

  RMat span(4, 2);
  span.setZero();
  span(2, 0) = 1.0;  // xi_3 direction
  span(3, 1) = 1.0;  // center
  RMat basis(4, 2);
  basis.col(0) = stab.basis[0];
  basis.col(1) = stab.basis[1];
  REQUIRE(max_principal_angle(basis, span) < 1e-12);

  // the fitted eigenvalue is -mu on each stabilizer element
  const Covector mu = momentum(ext, e(2, 0));
  for (int k = 0; k < stab.dim(); ++k)
    REQUIRE(std::abs(stab.eigen[k] + mu(stab.basis[k])) < 1e-14);
}

TEST_CASE("stabilizer dimension by model") {
  Rng rng(43, "moment/stabdim");
  REQUIRE(stabilizer(spin_half(), rng.unit_state(2)).dim() == 2);
  const CentralExtension torus = central_extension(torus_diag({1, 1, 1}));
  REQUIRE(stabilizer(torus, e(3, 0)).dim() == 4);
  REQUIRE(stabilizer(torus, rng.unit_state(3)).dim() == 2);  // equal-phase direction + center
  const CentralExtension ex2 = central_extension(su2_spin(2));
  REQUIRE(stabilizer(ex2, rng.unit_state(3)).dim() == 1);  // center only, generically
}

TEST_CASE("characters integrate stabilizer eigenvalues") {
  const CentralExtension& ext = spin_half();
  const RVec grid = character_t_grid();
  REQUIRE(grid.size() == 64);
  REQUIRE(grid(0) == 0.0);
  REQUIRE(grid(63) == Catch::Approx(2.0 * std::numbers::pi));

  // center: F(exp t center) = e^{it}, mu(center) = -1
  const CharacterResult center = character_check(ext, e(2, 0), unit(4, 3), grid);
  REQUIRE(center.in_stabilizer);
  REQUIRE(center.stab_residual < 1e-15);
  REQUIRE(center.max_residual < 1e-12);
  REQUIRE(center.max_unit_residual < 1e-13);

  // xi_3: F = e^{-it/2}
  const CharacterResult spin = character_check(ext, e(2, 0), ext.lift(unit(3, 2)), grid);
  REQUIRE(spin.in_stabilizer);
  REQUIRE(spin.max_residual < 1e-12);

  // xi_1 does not stabilize e1
  const CharacterResult off = character_check(ext, e(2, 0), ext.lift(unit(3, 0)), grid);
  REQUIRE_FALSE(off.in_stabilizer);
  REQUIRE(off.stab_residual == 0.5);

  const CentralExtension torus = central_extension(torus_diag({1, 2, 5}));
  const StabilizerBasis stab = stabilizer(torus, e(3, 2));
  REQUIRE(stab.dim() == 4);
  for (const AlgebraElement& xi : stab.basis) {
    const CharacterResult cr = character_check(torus, e(3, 2), xi, grid);
    REQUIRE(cr.in_stabilizer);
    REQUIRE(cr.max_residual < 1e-12);
  }
}

TEST_CASE("stabilizer flows fix the momentum covector") {
  const CentralExtension& ext = spin_half();
  Rng rng(44, "moment/inclusion");
  for (int s = 0; s < 15; ++s) {
    const CVec psi = rng.unit_state(2);
    const StabilizerBasis stab = stabilizer(ext, psi);
    AlgebraElement eta = AlgebraElement::Zero(4);
    for (const AlgebraElement& b : stab.basis) eta += rng.normal() * b;
    const AlgebraElement xi = rng.gaussian_rvec(4);
    REQUIRE(stabilizer_momentum_inclusion_check(ext, psi, eta, xi) < 1e-12);
  }
}

TEST_CASE("truncated Weyl pair: ground state and central contribution") {
  const CentralExtension ext = central_extension(weyl_truncated(8));
  const Covector mu = momentum(ext, e(8, 0));
  REQUIRE(mu.coords(0) == 0.0);
  REQUIRE(mu.coords(1) == 0.0);
  REQUIRE(mu.coords(2) == -1.0);

  const TwoCocycle omega = ks_cocycle(ext, e(8, 0));
  REQUIRE(std::abs(omega.mat(0, 1) + 1.0) < 1e-15);  // = (-1) * w(q,p)
  REQUIRE(check_omega_equals_delta_mu(ext, e(8, 0)) < 1e-15);

  // on the safe domain the cocycle is state-independent
  Rng rng(45, "moment/weyl");
  for (int s = 0; s < 15; ++s) {
    const CVec psi = low_state(rng, 8, 6);
    REQUIRE((ks_cocycle(ext, psi).mat + ext.base.cocycle).lpNorm<Eigen::Infinity>() < 1e-14);
    REQUIRE(check_omega_equals_delta_mu(ext, psi) < 1e-14);
  }
}
