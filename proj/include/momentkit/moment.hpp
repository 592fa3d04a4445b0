#pragma once

#include "momentkit/core.hpp"
#include "momentkit/lie.hpp"
#include "momentkit/projective.hpp"

#include <vector>

namespace momentkit {

// Real functional on g#; momentum values always have coords(center) = -1.
struct Covector {
  RVec coords;

  double operator()(const AlgebraElement& xi) const {
    if (xi.size() != coords.size()) throw std::invalid_argument("Covector: length mismatch");
    return coords.dot(xi);
  }
};

// Values of a Lie-algebra 2-cocycle on base basis pairs.
struct TwoCocycle {
  RMat mat;

  // max-abs of omega([e_i,e_j], e_k) + cyclic: the cocycle identity defect
  double identity_residual(const LieAlgebra& g) const {
    if (mat.rows() != g.dim || mat.cols() != g.dim)
      throw std::invalid_argument("TwoCocycle: dimension mismatch");
    auto omega = [this](const AlgebraElement& a, const AlgebraElement& b) {
      return a.dot(mat * b);
    };
    std::vector<AlgebraElement> e(g.dim);
    for (int i = 0; i < g.dim; ++i) e[i] = AlgebraElement::Unit(g.dim, i);
    double worst = 0.0;
    for (int i = 0; i < g.dim; ++i)
      for (int j = i + 1; j < g.dim; ++j)
        for (int k = j + 1; k < g.dim; ++k) {
          const double r = omega(g.bracket(e[i], e[j]), e[k]) +
                           omega(g.bracket(e[j], e[k]), e[i]) +
                           omega(g.bracket(e[k], e[i]), e[j]);
          worst = std::max(worst, std::abs(r));
        }
    return worst;
  }
};

struct HermitianFormOnAlgebra {
  CMat mat;

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMat> es(mat, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

// The fundamental vector field X_xi(psi) = drho#(xi) psi; a sphere tangent
// by anti-Hermiticity.
inline CVec fundamental_field(const CentralExtension& ext, const AlgebraElement& xi,
                              const CVec& psi) {
  return drho(ext, xi) * psi;
}

// The same field in the sphere chart at psi, evaluated at chart point v:
// d/dt kappa_psi(exp(t drho) (psi+v)/||psi+v||)|_0
//   = drho(xi)(psi+v) - Re<psi, drho(xi) v> (psi+v).
inline CVec fundamental_field_local(const CentralExtension& ext, const AlgebraElement& xi,
                                    const CVec& psi, const CVec& v) {
  detail::require_unit(psi, "fundamental_field_local");
  detail::require_tangent_s(psi, v, "fundamental_field_local");
  const CMat a = drho(ext, xi);
  const CVec u = psi + v;
  return a * u - inner(psi, a * v).real() * u;
}

// mu_[psi](xi) = <psi, i drho(xi) psi> / <psi,psi>. The center contributes
// <psi, i(i psi)> = -<psi,psi>, so the central coordinate is exactly -1.
inline Covector momentum(const CentralExtension& ext, const CVec& psi) {
  if (!all_finite(psi)) throw std::invalid_argument("momentum: non-finite state");
  const double n2 = inner(psi, psi).real();
  if (!(n2 > 0.0)) throw std::invalid_argument("momentum: zero vector");
  RVec mu(ext.dim());
  for (int i = 0; i < ext.dim(); ++i)
    mu(i) = (kI * inner(psi, ext.generators[i] * psi)).real() / n2;
  return {std::move(mu)};
}

// Cross-check route through the connection form: mu_[psi](xi) = alpha_psi(-X_xi).
inline double comomentum_via_alpha(const CentralExtension& ext, const AlgebraElement& xi,
                                   const CVec& psi) {
  detail::require_unit(psi, "comomentum_via_alpha");
  return alpha(psi, -fundamental_field(ext, xi, psi));
}

// D_[psi]mu(dv)(xi) = 2 Re<i drho(xi) psi, dv> on chart tangents dv.
inline Covector momentum_derivative(const CentralExtension& ext, const CVec& psi, const CVec& dv) {
  detail::require_unit(psi, "momentum_derivative");
  detail::require_tangent_p(psi, dv, "momentum_derivative");
  RVec out(ext.dim());
  for (int i = 0; i < ext.dim(); ++i)
    out(i) = real_inner(kI * (ext.generators[i] * psi).eval(), dv);
  return {std::move(out)};
}

// Centered-difference oracle for momentum_derivative along the chart curve
// [psi + t dv]; returns the max-abs coordinate disagreement.
inline double momentum_derivative_fd_residual(const CentralExtension& ext, const CVec& psi,
                                              const CVec& dv, double h) {
  auto curve = [&](double t) -> RVec {
    return momentum(ext, chart_p_inv(psi, t * dv).rep).coords;
  };
  const RVec fd = fd_derivative(curve, 0.0, h);
  const RVec exact = momentum_derivative(ext, psi, dv).coords;
  return (fd - exact).lpNorm<Eigen::Infinity>();
}

struct KernelResult {
  RMat direct;       // orthonormal columns in the R^{2n} picture
  RMat complement;   // same, from the orthogonal-complement formula
  double angle = 0.0;            // largest principal angle between the two
  bool injective = false;        // direct kernel is {0}
  bool spans = false;            // drho(g#) psi spans psi^{perp_R}
  bool derivative_zero = false;  // D mu vanishes on all of T_[psi]
};

// Ker D_[psi]mu computed two ways: (a) the nullspace of dv -> D mu(dv)
// restricted to T_[psi], and (b) the real orthogonal complement of
// iR psi + i drho(g#) psi. The injectivity flag reports whether drho(g#) psi
// spans psi^{perp_R} (rank 2n-1 in the real picture).
inline KernelResult momentum_kernel(const CentralExtension& ext, const CVec& psi,
                                    const Tolerance& tol = {}) {
  detail::require_unit(psi, "momentum_kernel");
  const Eigen::Index n = psi.size();
  const int dd = ext.dim();

  RMat t_rows(2, 2 * n);
  t_rows.row(0) = to_realvec(psi);
  t_rows.row(1) = to_realvec(kI * psi);
  const RMat tangent_basis = real_nullspace(t_rows, tol);  // 2n x (2n-2)

  RMat dmu(dd, 2 * n);
  RMat comp_rows(dd + 1, 2 * n);
  comp_rows.row(0) = to_realvec(kI * psi);
  RMat span_cols(2 * n, dd);
  for (int i = 0; i < dd; ++i) {
    const CVec ai_psi = ext.generators[i] * psi;
    dmu.row(i) = 2.0 * to_realvec(kI * ai_psi);
    comp_rows.row(i + 1) = to_realvec(kI * ai_psi);
    span_cols.col(i) = to_realvec(ai_psi);
  }

  KernelResult out;
  const RMat restricted = dmu * tangent_basis;
  const RMat null_in_tangent = real_nullspace(restricted, tol);
  out.direct = tangent_basis * null_in_tangent;
  out.complement = real_nullspace(comp_rows, tol);
  out.angle = max_principal_angle(out.direct, out.complement);
  out.injective = out.direct.cols() == 0;
  out.spans = real_rank(span_cols, tol) == 2 * n - 1;
  out.derivative_zero = out.direct.cols() == tangent_basis.cols();
  return out;
}

// Kostant-Souriau cocycle omega_[psi](xi,eta) = 2 Im<drho(xi#)psi, drho(eta#)psi>
// on base basis pairs, lifts taken with central coordinate 0.
inline TwoCocycle ks_cocycle(const CentralExtension& ext, const CVec& psi) {
  const double n2 = inner(psi, psi).real();
  if (!(n2 > 0.0)) throw std::invalid_argument("ks_cocycle: zero vector");
  const int d = ext.base_dim();
  std::vector<CVec> delta(d);
  for (int i = 0; i < d; ++i) delta[i] = ext.generators[i] * psi;
  RMat m = RMat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      m(i, j) = 2.0 * inner(delta[i], delta[j]).imag() / n2;
      m(j, i) = -m(i, j);
    }
  return {std::move(m)};
}

// Chevalley-Eilenberg differential: (delta lambda)(xi,eta) = lambda([xi#, eta#]),
// with the twisted bracket of g#.
inline TwoCocycle delta_map(const CentralExtension& ext, const Covector& lambda) {
  if (lambda.coords.size() != ext.dim())
    throw std::invalid_argument("delta_map: covector length mismatch");
  const int d = ext.base_dim();
  RMat m = RMat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const AlgebraElement br = ext.algebra.bracket(AlgebraElement::Unit(ext.dim(), i),
                                                    AlgebraElement::Unit(ext.dim(), j));
      m(i, j) = lambda.coords.dot(br);
      m(j, i) = -m(i, j);
    }
  return {std::move(m)};
}

// max-entry |ks_cocycle - delta_map(momentum)|; zero in exact arithmetic.
inline double check_omega_equals_delta_mu(const CentralExtension& ext, const CVec& psi) {
  const TwoCocycle omega = ks_cocycle(ext, psi);
  const TwoCocycle dmu = delta_map(ext, momentum(ext, psi));
  return (omega.mat - dmu.mat).lpNorm<Eigen::Infinity>();
}

// h_ij = 2 <P delta_i, P delta_j> with delta_i = drho(xi_i#) psi and P the
// projection removing the psi-component: the pullback of H along the orbit
// map. A Gram matrix, hence positive semidefinite; Im h recovers omega.
inline HermitianFormOnAlgebra hermitian_h(const CentralExtension& ext, const CVec& psi) {
  const double n2 = inner(psi, psi).real();
  if (!(n2 > 0.0)) throw std::invalid_argument("hermitian_h: zero vector");
  const CVec psin = psi / psi.norm();
  const int d = ext.base_dim();
  std::vector<CVec> pdelta(d);
  for (int i = 0; i < d; ++i) {
    const CVec di = ext.generators[i] * psin;
    pdelta[i] = di - inner(psin, di) * psin;
  }
  CMat h(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) h(i, j) = 2.0 * inner(pdelta[i], pdelta[j]);
  return {std::move(h)};
}

// Hamiltonian identity at [psi]: Omega(P X_xi, dv) = D mu(dv)(xi) on chart
// tangents, both evaluated independently.
inline double check_hamiltonian(const CentralExtension& ext, const CVec& psi,
                                const AlgebraElement& xi, const CVec& dv) {
  detail::require_unit(psi, "check_hamiltonian");
  detail::require_tangent_p(psi, dv, "check_hamiltonian");
  const CVec x = fundamental_field(ext, xi, psi);
  const CVec px = x - inner(psi, x) * psi;
  const double lhs = 2.0 * inner(px, dv).imag();  // Omega at the chart center
  const double rhs = momentum_derivative(ext, psi, dv)(xi);
  return std::abs(lhs - rhs);
}

// Equivariance of mu under g = exp(drho#(eta)):
// mu_[g psi](xi) = mu_[psi](Ad_{g^{-1}} xi).
inline double check_equivariance(const CentralExtension& ext, const AlgebraElement& eta,
                                 const CVec& psi, const AlgebraElement& xi) {
  const CMat u = matrix_exp(drho(ext, eta));
  const double lhs = momentum(ext, u * psi)(xi);
  const double rhs = momentum(ext, psi)(adjoint(ext, -eta, xi));
  return std::abs(lhs - rhs);
}

// g acts by Kaehler automorphisms: pushing chart-center tangents with
// exp(drho#(eta)) and re-projecting preserves the Hermitean form values.
inline double kahler_invariance_check(const CentralExtension& ext, const AlgebraElement& eta,
                                      const CVec& psi, const CVec& dv, const CVec& dw) {
  detail::require_unit(psi, "kahler_invariance_check");
  detail::require_tangent_p(psi, dv, "kahler_invariance_check");
  detail::require_tangent_p(psi, dw, "kahler_invariance_check");
  const CMat u = matrix_exp(drho(ext, eta));
  const CVec psi2 = u * psi;
  CVec dv2 = u * dv;
  CVec dw2 = u * dw;
  dv2 -= inner(psi2, dv2) * psi2;
  dw2 -= inner(psi2, dw2) * psi2;
  const Complex before = 2.0 * inner(dv, dw);  // H at a chart center
  const Complex after = 2.0 * inner(dv2, dw2);
  return std::abs(before - after);
}

// Basis of g#_[psi] = {xi : drho(xi) psi in iR psi} with the fitted
// eigenvalue a per element (drho(xi)psi = i a psi, least squares).
struct StabilizerBasis {
  std::vector<AlgebraElement> basis;
  std::vector<double> eigen;

  int dim() const { return static_cast<int>(basis.size()); }
};

inline StabilizerBasis stabilizer(const CentralExtension& ext, const CVec& psi,
                                  const Tolerance& tol = {}) {
  detail::require_unit(psi, "stabilizer");
  const Eigen::Index n = psi.size();
  RMat m(2 * n, ext.dim());
  for (int i = 0; i < ext.dim(); ++i) {
    const CVec di = ext.generators[i] * psi;
    m.col(i) = to_realvec(di - inner(psi, di) * psi);
  }
  const RMat null = real_nullspace(m, tol);
  StabilizerBasis out;
  for (Eigen::Index c = 0; c < null.cols(); ++c) {
    AlgebraElement xi = null.col(c);
    const CVec x = drho(ext, xi) * psi;
    out.basis.push_back(std::move(xi));
    out.eigen.push_back(inner(psi, x).imag());  // least-squares fit of x against i psi
  }
  return out;
}

struct CharacterResult {
  bool in_stabilizer = false;
  double stab_residual = 0.0;    // ||drho(xi)psi - i a psi||
  double max_residual = 0.0;     // max_t |F(exp t xi) - exp(-i t mu(xi))|
  double max_unit_residual = 0.0;  // max_t ||F| - 1|
};

inline RVec character_t_grid() {
  return RVec::LinSpaced(64, 0.0, 2.0 * std::numbers::pi);
}

// F(g) = <psi, rho(g) psi> restricted to one-parameter stabilizer subgroups
// integrates the character: F(exp t xi) = exp(-i t mu_[psi](xi)), |F| = 1.
inline CharacterResult character_check(const CentralExtension& ext, const CVec& psi,
                                       const AlgebraElement& xi, const RVec& t_grid,
                                       const Tolerance& tol = {}) {
  detail::require_unit(psi, "character_check");
  const CMat a = drho(ext, xi);
  const double fit = inner(psi, a * psi).imag();
  CharacterResult out;
  out.stab_residual = (a * psi - kI * fit * psi).norm();
  out.in_stabilizer = out.stab_residual <= tol.nullspace_tol;
  const double mu_xi = momentum(ext, psi)(xi);
  for (Eigen::Index k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid(k);
    const Complex f = inner(psi, matrix_exp(a, t) * psi);
    out.max_unit_residual = std::max(out.max_unit_residual, std::abs(std::abs(f) - 1.0));
    const Complex target = std::exp(Complex(0.0, -t * mu_xi));
    out.max_residual = std::max(out.max_residual, std::abs(f - target));
  }
  return out;
}

// Stabilizer elements fix the ray, so they fix the momentum covector:
// |mu(exp(drho(eta)) psi)(xi) - mu(psi)(xi)|.
inline double stabilizer_momentum_inclusion_check(const CentralExtension& ext, const CVec& psi,
                                                  const AlgebraElement& eta,
                                                  const AlgebraElement& xi) {
  const CMat u = matrix_exp(drho(ext, eta));
  return std::abs(momentum(ext, u * psi)(xi) - momentum(ext, psi)(xi));
}

}  // namespace momentkit
