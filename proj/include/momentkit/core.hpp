#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace momentkit {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

// Raised on malformed files or unparseable model addresses.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a structurally sound model fails its algebraic residual checks.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric knobs shared across the library. nullspace_tol is relative to the
// largest singular value; fd_step is the centered-difference step.
struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  double nullspace_tol = 1e-8;
  double fd_step = 1e-4;

  bool valid() const {
    return std::isfinite(abs_tol) && abs_tol >= 0.0 && std::isfinite(rel_tol) &&
           rel_tol >= 0.0 && std::isfinite(nullspace_tol) && nullspace_tol >= 0.0 &&
           std::isfinite(fd_step) && fd_step > 0.0;
  }
};

inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}
template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

// <v,w>, antilinear in the first argument.
inline Complex inner(const CVec& v, const CVec& w) {
  if (v.size() != w.size()) throw std::invalid_argument("inner: dimension mismatch");
  return v.dot(w);
}

// (v,w)_R = 2 Re<v,w>, the real inner product underlying all R-linear maps here.
inline double real_inner(const CVec& v, const CVec& w) {
  return 2.0 * inner(v, w).real();
}

namespace detail {

// Everything stays dense; the cap keeps every suite interactive.
inline constexpr Eigen::Index kDenseDimCap = 512;

template <class Mat>
Mat exp_impl(const Mat& a, double t) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exp: matrix not square");
  if (a.rows() > kDenseDimCap)
    throw std::invalid_argument("matrix_exp: dimension exceeds dense cap 512");
  if (!all_finite(a) || !std::isfinite(t))
    throw std::invalid_argument("matrix_exp: non-finite input");
  Mat r = (t * a).exp();
  if (!all_finite(r)) throw std::overflow_error("matrix_exp: overflow for extreme ||tA||");
  return r;
}

}  // namespace detail

// exp(tA) by scaling-and-squaring with a Pade approximant. Anti-Hermitian
// input gives a unitary result to working precision.
inline CMat matrix_exp(const CMat& a, double t = 1.0) { return detail::exp_impl(a, t); }
inline RMat matrix_exp(const RMat& a, double t = 1.0) { return detail::exp_impl(a, t); }

// Orthonormal basis, as columns, of the kernel of a real-linear map.
// Directions with sigma <= nullspace_tol * sigma_max count as null, so the
// zero map yields the whole space and injective maps yield zero columns.
inline RMat real_nullspace(const RMat& map, const Tolerance& tol = {}) {
  if (!all_finite(map)) throw std::invalid_argument("real_nullspace: non-finite entries");
  const Eigen::Index n = map.cols();
  if (map.rows() == 0 || n == 0) return RMat::Identity(n, n);
  Eigen::JacobiSVD<RMat> svd(map, Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.nullspace_tol * smax) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

inline Eigen::Index real_rank(const RMat& m, const Tolerance& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<RMat> svd(m);
  const RVec& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.nullspace_tol * smax) ++rank;
  return rank;
}

// Centered difference (f(x+h) - f(x-h)) / 2h; exact on polynomials of
// degree <= 2, second order otherwise.
template <class F>
auto fd_derivative(F&& f, double x, double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("fd_derivative: step must be positive and finite");
  using R = std::decay_t<decltype(f(x))>;
  R hi = f(x + h);
  R lo = f(x - h);
  R out = (hi - lo) / (2.0 * h);
  if (!all_finite(out)) throw std::domain_error("fd_derivative: non-finite evaluation");
  return out;
}

// C^n as R^{2n} with interleaved coordinates (Re_1, Im_1, Re_2, Im_2, ...),
// so multiplication by i is a fixed permutation-with-signs.
inline RVec to_realvec(const CVec& v) {
  RVec r(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    r(2 * i) = v(i).real();
    r(2 * i + 1) = v(i).imag();
  }
  return r;
}

inline CVec from_realvec(const RVec& r) {
  if (r.size() % 2 != 0) throw std::invalid_argument("from_realvec: odd length");
  CVec v(r.size() / 2);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(r(2 * i), r(2 * i + 1));
  return v;
}

// Largest principal angle between subspaces given by orthonormal column
// bases. Mismatched dimensions count as maximally apart. Uses the sine
// formulation sin(theta_k) = sigma_k((I - a a^T) b), which stays accurate
// for nearly identical subspaces where acos of the Gram spectrum cannot
// resolve angles below sqrt(machine epsilon).
inline double max_principal_angle(const RMat& a, const RMat& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("max_principal_angle: ambient dimension mismatch");
  if (a.cols() != b.cols()) return std::numbers::pi / 2.0;
  if (a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<RMat> svd(b - a * (a.transpose() * b));
  double s = svd.singularValues().maxCoeff();
  if (s > 1.0) s = 1.0;
  return std::asin(s);
}

}  // namespace momentkit
