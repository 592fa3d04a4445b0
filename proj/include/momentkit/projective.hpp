#pragma once

#include "momentkit/core.hpp"

#include <utility>

namespace momentkit {

// "first nonzero entry" threshold of the phase convention
inline constexpr double kPhaseEps = 1e-12;
// chart-domain guard: |<psi,chi>| (projective) or Re<psi,chi> (sphere) must
// exceed this, relative to ||chi||
inline constexpr double kChartGuard = 1e-10;

namespace detail {

inline void require_unit(const CVec& psi, const char* who) {
  if (!all_finite(psi) || std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument(std::string(who) + ": base point must be a unit vector");
}

inline void require_tangent_p(const CVec& psi, const CVec& dv, const char* who) {
  if (std::abs(inner(psi, dv)) > 1e-8 * std::max(1.0, dv.norm()))
    throw std::invalid_argument(std::string(who) + ": not complex-orthogonal to the base point");
}

inline void require_tangent_s(const CVec& psi, const CVec& dv, const char* who) {
  if (std::abs(inner(psi, dv).real()) > 1e-8 * std::max(1.0, dv.norm()))
    throw std::invalid_argument(std::string(who) + ": Re<psi,dv> != 0");
}

}  // namespace detail

// Rotates a unit vector so its first entry above kPhaseEps is real positive.
inline CVec phase_fix(const CVec& unit_chi) {
  for (Eigen::Index i = 0; i < unit_chi.size(); ++i) {
    const double a = std::abs(unit_chi(i));
    if (a > kPhaseEps) return (std::conj(unit_chi(i)) / a) * unit_chi;
  }
  throw std::invalid_argument("phase_fix: vector is numerically zero");
}

// A point of P(V) held as its canonical representative: unit norm, first
// nonzero entry real positive. Equality of rays is then plain vector equality.
struct ProjectivePoint {
  CVec rep;

  static ProjectivePoint from(const CVec& chi) {
    if (!all_finite(chi)) throw std::invalid_argument("ProjectivePoint: non-finite entries");
    const double n = chi.norm();
    if (!(n > 0.0)) throw std::invalid_argument("ProjectivePoint: zero vector has no ray");
    return ProjectivePoint{phase_fix(chi / n)};
  }

  double distance(const ProjectivePoint& other) const { return (rep - other.rep).norm(); }
};

// Tangent at [psi] in the projective chart: <psi, vec> = 0.
struct TangentP {
  CVec base;
  CVec vec;

  TangentP(CVec psi, CVec dv) : base(std::move(psi)), vec(std::move(dv)) {
    if (std::abs(inner(base, vec)) > 1e-12 * std::max(1.0, vec.norm()))
      throw std::invalid_argument("TangentP: <psi, dv> != 0");
  }
};

// Tangent to the unit sphere at psi: Re<psi, vec> = 0.
struct TangentS {
  CVec base;
  CVec vec;

  TangentS(CVec psi, CVec dv) : base(std::move(psi)), vec(std::move(dv)) {
    if (std::abs(inner(base, vec).real()) > 1e-12 * std::max(1.0, vec.norm()))
      throw std::invalid_argument("TangentS: Re<psi, dv> != 0");
  }
};

// kappa_psi([chi]) = <psi,chi>^{-1} chi - psi, the chart of P(V) on the
// hyperplane <psi, v> = 0.
inline CVec chart_p(const CVec& psi, const CVec& chi) {
  detail::require_unit(psi, "chart_p");
  const Complex z = inner(psi, chi);
  if (std::abs(z) <= kChartGuard * chi.norm())
    throw std::domain_error("chart_p: [chi] outside the chart domain of psi");
  return chi / z - psi;
}

inline ProjectivePoint chart_p_inv(const CVec& psi, const CVec& v) {
  detail::require_unit(psi, "chart_p_inv");
  detail::require_tangent_p(psi, v, "chart_p_inv");
  return ProjectivePoint::from(psi + v);  // ||psi+v||^2 = 1 + ||v||^2, never zero
}

// Chart transition kappa_{psi psi'}: v -> (psi+v)/<psi', psi+v> - psi'.
inline CVec transition_p(const CVec& psi, const CVec& psi2, const CVec& v) {
  detail::require_unit(psi, "transition_p");
  detail::require_unit(psi2, "transition_p");
  const CVec u = psi + v;
  const Complex z = inner(psi2, u);
  if (std::abs(z) <= kChartGuard * u.norm())
    throw std::domain_error("transition_p: charts do not overlap at this point");
  return u / z - psi2;
}

// Derivative of the transition out of the chart at psi, evaluated at v and
// re-centred at psi' = (psi+v)/||psi+v||:
// D_v kappa(dv) = (dv - <psi', dv> psi') / ||psi+v||.
inline CVec transition_tangent(const CVec& psi, const CVec& v, const CVec& dv) {
  detail::require_unit(psi, "transition_tangent");
  detail::require_tangent_p(psi, v, "transition_tangent");
  detail::require_tangent_p(psi, dv, "transition_tangent");
  const CVec u = psi + v;
  const double nu = u.norm();
  const CVec psi2 = u / nu;
  return (dv - inner(psi2, dv) * psi2) / nu;
}

// Fubini-Study Hermitean form in chart coordinates,
// H_v(dv, dw) = 2(<dv,dw>/(1+||v||^2) - <dv,v><v,dw>/(1+||v||^2)^2).
inline Complex hermitean_local(const CVec& v, const CVec& dv, const CVec& dw) {
  const double s = 1.0 + v.squaredNorm();
  return 2.0 * (inner(dv, dw) / s - inner(dv, v) * inner(v, dw) / (s * s));
}

inline double metric_g(const CVec& v, const CVec& dv, const CVec& dw) {
  return hermitean_local(v, dv, dw).real();
}

inline double symplectic_omega(const CVec& v, const CVec& dv, const CVec& dw) {
  return hermitean_local(v, dv, dw).imag();
}

// Sphere chart kappa_psi(chi) = (Re<psi,chi>)^{-1} chi - psi on the open
// hemisphere Re<psi,chi> > 0.
inline CVec chart_s(const CVec& psi, const CVec& chi) {
  detail::require_unit(psi, "chart_s");
  detail::require_unit(chi, "chart_s");
  const double r = inner(psi, chi).real();
  if (r <= kChartGuard) throw std::domain_error("chart_s: chi outside the hemisphere of psi");
  return chi / r - psi;
}

inline CVec chart_s_inv(const CVec& psi, const CVec& v) {
  detail::require_unit(psi, "chart_s_inv");
  detail::require_tangent_s(psi, v, "chart_s_inv");
  const CVec u = psi + v;
  return u / u.norm();
}

// Connection 1-form of the sphere bundle, alpha_psi(dv) = -i<psi,dv>, real
// on sphere tangents where it equals Im<psi,dv>.
inline double alpha(const CVec& psi, const CVec& dv) {
  detail::require_unit(psi, "alpha");
  detail::require_tangent_s(psi, dv, "alpha");
  return inner(psi, dv).imag();
}

// alpha pulled back through chart_s_inv: Im<v,dv> / (1+||v||^2).
inline double alpha_local(const CVec& v, const CVec& dv) {
  return inner(v, dv).imag() / (1.0 + v.squaredNorm());
}

struct CurvatureResult {
  double d_alpha = 0.0;
  double omega = 0.0;
  double residual = 0.0;
};

// d(alpha)(dv,dw) at chart point v by centered differences along the
// constant extensions of dv, dw (their Lie bracket vanishes, so
// d(alpha) = L_dv[alpha(dw)] - L_dw[alpha(dv)]), compared against Omega.
inline CurvatureResult curvature_check(const CVec& v, const CVec& dv, const CVec& dw, double h) {
  auto along_dv = [&](double e) { return alpha_local(v + e * dv, dw); };
  auto along_dw = [&](double e) { return alpha_local(v + e * dw, dv); };
  const double da = fd_derivative(along_dv, 0.0, h) - fd_derivative(along_dw, 0.0, h);
  const double om = symplectic_omega(v, dv, dw);
  return {da, om, std::abs(da - om)};
}

// U(1) clutching function g_{psi psi'}([chi]) = (<psi',chi>/<psi,chi>) / |..|.
inline Complex clutching(const CVec& psi, const CVec& psi2, const CVec& chi) {
  detail::require_unit(psi, "clutching");
  detail::require_unit(psi2, "clutching");
  const Complex a = inner(psi, chi);
  const Complex b = inner(psi2, chi);
  const double scale = chi.norm();
  if (std::abs(a) <= kChartGuard * scale || std::abs(b) <= kChartGuard * scale)
    throw std::domain_error("clutching: [chi] must lie in both chart domains");
  const Complex r = b / a;
  return r / std::abs(r);
}

// Tautological line bundle in chart coordinates:
// (v, z) over psi -> (kappa_{psi psi'}(v), <psi', psi+v> z) over psi'.
inline std::pair<CVec, Complex> bundle_transition(const CVec& psi, const CVec& psi2,
                                                  const CVec& v, Complex z) {
  CVec v2 = transition_p(psi, psi2, v);
  const Complex factor = inner(psi2, psi + v);
  return {std::move(v2), factor * z};
}

}  // namespace momentkit
