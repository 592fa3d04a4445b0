#pragma once

#include "momentkit/core.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

namespace momentkit {

// Coordinates in a fixed basis; length d, or d+1 for extension elements.
using AlgebraElement = RVec;

// One sparse entry of the bracket tensor: [e_i, e_j] += value * e_k, i < j.
// The i > j half is implied by antisymmetry.
struct StructureTerm {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0.0;
};

struct LieAlgebra {
  int dim = 0;
  std::vector<std::string> basis_names;
  std::vector<StructureTerm> terms;

  // Normalizes raw terms to i < j (flipping signs), drops zeros, rejects
  // i == j and duplicate (i,j,k) slots. Empty names produce xi_1..xi_d.
  static LieAlgebra make(int dim, std::vector<std::string> names,
                         std::vector<StructureTerm> raw) {
    if (dim < 1) throw std::invalid_argument("LieAlgebra: dim must be positive");
    if (names.empty()) {
      names.reserve(dim);
      for (int i = 0; i < dim; ++i) names.push_back("xi_" + std::to_string(i + 1));
    }
    if (static_cast<int>(names.size()) != dim)
      throw std::invalid_argument("LieAlgebra: basis name count mismatch");
    std::vector<StructureTerm> terms;
    for (StructureTerm t : raw) {
      if (t.i < 0 || t.i >= dim || t.j < 0 || t.j >= dim || t.k < 0 || t.k >= dim)
        throw std::invalid_argument("LieAlgebra: structure index out of range");
      if (!std::isfinite(t.value))
        throw std::invalid_argument("LieAlgebra: non-finite structure constant");
      if (t.i == t.j) {
        if (t.value != 0.0)
          throw std::invalid_argument("LieAlgebra: [x,x] term violates antisymmetry");
        continue;
      }
      if (t.i > t.j) {
        std::swap(t.i, t.j);
        t.value = -t.value;
      }
      if (t.value != 0.0) terms.push_back(t);
    }
    std::sort(terms.begin(), terms.end(), [](const StructureTerm& a, const StructureTerm& b) {
      return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
    });
    for (std::size_t m = 1; m < terms.size(); ++m)
      if (terms[m - 1].i == terms[m].i && terms[m - 1].j == terms[m].j &&
          terms[m - 1].k == terms[m].k)
        throw std::invalid_argument("LieAlgebra: duplicate structure constant slot");
    return LieAlgebra{dim, std::move(names), std::move(terms)};
  }

  AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) const {
    if (a.size() != dim || b.size() != dim)
      throw std::invalid_argument("bracket: coordinate length mismatch");
    AlgebraElement out = AlgebraElement::Zero(dim);
    for (const StructureTerm& t : terms)
      out(t.k) += t.value * (a(t.i) * b(t.j) - a(t.j) * b(t.i));
    return out;
  }

  // Matrix of ad(xi): column j holds [xi, e_j].
  RMat ad(const AlgebraElement& xi) const {
    if (xi.size() != dim) throw std::invalid_argument("ad: coordinate length mismatch");
    RMat m = RMat::Zero(dim, dim);
    for (const StructureTerm& t : terms) {
      m(t.k, t.j) += t.value * xi(t.i);
      m(t.k, t.i) -= t.value * xi(t.j);
    }
    return m;
  }

  // max-abs component of [[e_i,e_j],e_k] + cyclic over basis triples
  double jacobi_residual() const {
    double worst = 0.0;
    std::vector<AlgebraElement> e(dim);
    for (int i = 0; i < dim; ++i) e[i] = AlgebraElement::Unit(dim, i);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k) {
          AlgebraElement r = bracket(bracket(e[i], e[j]), e[k]) +
                             bracket(bracket(e[j], e[k]), e[i]) +
                             bracket(bracket(e[k], e[i]), e[j]);
          worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
        }
    return worst;
  }
};

// A unitary representation presented infinitesimally: anti-Hermitian
// generators A_i = drho(e_i), with closure [A_i,A_j] = sum_k c_ijk A_k
// + i w_ij. For truncated models closure only holds on states in the span
// of the first safe_levels coordinates.
struct Representation {
  std::string name;
  LieAlgebra algebra;
  int hilbert_dim = 0;
  std::vector<CMat> generators;
  RMat cocycle;
  int safe_levels = 0;

  bool has_safe_domain() const { return safe_levels > 0; }

  CMat safe_projector() const {
    CMat p = CMat::Zero(hilbert_dim, hilbert_dim);
    const int m = has_safe_domain() ? safe_levels : hilbert_dim;
    for (int i = 0; i < m; ++i) p(i, i) = 1.0;
    return p;
  }
};

inline Representation make_representation(std::string name, LieAlgebra algebra,
                                          std::vector<CMat> generators, RMat cocycle = {},
                                          int safe_levels = 0) {
  const int d = algebra.dim;
  if (static_cast<int>(generators.size()) != d)
    throw std::invalid_argument("Representation: generator count != algebra dim");
  if (generators.empty() || generators[0].rows() < 1)
    throw std::invalid_argument("Representation: empty Hilbert space");
  const Eigen::Index n = generators[0].rows();
  for (const CMat& a : generators) {
    if (a.rows() != n || a.cols() != n)
      throw std::invalid_argument("Representation: generators not square of equal size");
    if (!all_finite(a)) throw std::invalid_argument("Representation: non-finite generator");
  }
  if (cocycle.size() == 0) cocycle = RMat::Zero(d, d);
  if (cocycle.rows() != d || cocycle.cols() != d)
    throw std::invalid_argument("Representation: cocycle shape mismatch");
  if (!all_finite(cocycle)) throw std::invalid_argument("Representation: non-finite cocycle");
  if (safe_levels < 0 || safe_levels > n)
    throw std::invalid_argument("Representation: safe_levels out of range");
  return Representation{std::move(name), std::move(algebra), static_cast<int>(n),
                        std::move(generators), std::move(cocycle), safe_levels};
}

struct ValidationEntry {
  std::string check;
  int i = 0;  // 1-based generator indices for display; 0 when not applicable
  int j = 0;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool pass = true;
  double max_residual = 0.0;

  // human-readable tag of the first failing entry, e.g. "closure (1,2)"
  std::string first_failure() const {
    for (const ValidationEntry& e : entries)
      if (!e.pass) {
        std::string s = e.check;
        if (e.i > 0) {
          s += " (" + std::to_string(e.i);
          if (e.j > 0) s += "," + std::to_string(e.j);
          s += ")";
        }
        return s;
      }
    return {};
  }
};

// Residual checks of the representation axioms: per-generator
// anti-Hermiticity, per-pair closure (restricted to the safe domain when one
// is declared), exact cocycle antisymmetry, and the Jacobi identity.
inline ValidationReport validate(const Representation& rep, const Tolerance& tol = {}) {
  ValidationReport report;
  auto push = [&report](std::string check, int i, int j, double residual, double threshold) {
    const bool pass = residual <= threshold;
    report.entries.push_back({std::move(check), i, j, residual, threshold, pass});
    report.pass = report.pass && pass;
    report.max_residual = std::max(report.max_residual, residual);
  };

  const int d = rep.algebra.dim;
  const Eigen::Index n = rep.hilbert_dim;
  for (int i = 0; i < d; ++i) {
    const double r = (rep.generators[i] + rep.generators[i].adjoint()).norm();
    push("anti_hermitian", i + 1, 0, r, tol.abs_tol);
  }

  const CMat p = rep.safe_projector();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      CMat defect = rep.generators[i] * rep.generators[j] -
                    rep.generators[j] * rep.generators[i] -
                    kI * rep.cocycle(i, j) * CMat::Identity(n, n);
      for (const StructureTerm& t : rep.algebra.terms)
        if (t.i == i && t.j == j) defect -= t.value * rep.generators[t.k];
      const double r = rep.has_safe_domain() ? (defect * p).norm() : defect.norm();
      push("closure", i + 1, j + 1, r, tol.abs_tol);
    }

  push("cocycle_antisymmetry", 0, 0, (rep.cocycle + rep.cocycle.transpose()).lpNorm<Eigen::Infinity>(), 0.0);
  push("jacobi", 0, 0, rep.algebra.jacobi_residual(), 1e-12);
  return report;
}

// g# = g + R with bracket [(xi,a),(eta,b)] = ([xi,eta], w(xi,eta)); the
// central generator acts as i*I so the momentum of the center is -1.
struct CentralExtension {
  Representation base;
  LieAlgebra algebra;              // dimension d+1; center is the last slot
  std::vector<CMat> generators;    // base generators then i*I

  int dim() const { return algebra.dim; }
  int base_dim() const { return base.algebra.dim; }
  int hdim() const { return base.hilbert_dim; }
  int center_index() const { return base.algebra.dim; }

  AlgebraElement lift(const AlgebraElement& xi) const {
    if (xi.size() != base_dim()) throw std::invalid_argument("lift: expected base coordinates");
    AlgebraElement out = AlgebraElement::Zero(dim());
    out.head(base_dim()) = xi;
    return out;
  }
};

inline CentralExtension central_extension(const Representation& rep) {
  const int d = rep.algebra.dim;
  std::vector<StructureTerm> terms = rep.algebra.terms;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (rep.cocycle(i, j) != 0.0) terms.push_back({i, j, d, rep.cocycle(i, j)});
  std::vector<std::string> names = rep.algebra.basis_names;
  names.push_back("center");
  LieAlgebra ext = LieAlgebra::make(d + 1, std::move(names), std::move(terms));
  // Jacobi for the twisted bracket is exactly the 2-cocycle identity for w.
  const double jr = ext.jacobi_residual();
  if (jr > 1e-12)
    throw validation_error("central_extension: cocycle fails the 2-cocycle identity, residual " +
                           std::to_string(jr));
  std::vector<CMat> gens = rep.generators;
  gens.push_back(kI * CMat::Identity(rep.hilbert_dim, rep.hilbert_dim));
  return CentralExtension{rep, std::move(ext), std::move(gens)};
}

inline CMat drho(const Representation& rep, const AlgebraElement& xi) {
  if (xi.size() != rep.algebra.dim) throw std::invalid_argument("drho: coordinate length mismatch");
  if (!all_finite(xi)) throw std::invalid_argument("drho: non-finite coordinates");
  CMat out = CMat::Zero(rep.hilbert_dim, rep.hilbert_dim);
  for (int i = 0; i < rep.algebra.dim; ++i) out += xi(i) * rep.generators[i];
  return out;
}

inline CMat drho(const CentralExtension& ext, const AlgebraElement& xi_sharp) {
  if (xi_sharp.size() != ext.dim())
    throw std::invalid_argument("drho: expected extension coordinates");
  if (!all_finite(xi_sharp)) throw std::invalid_argument("drho: non-finite coordinates");
  CMat out = CMat::Zero(ext.hdim(), ext.hdim());
  for (int i = 0; i < ext.dim(); ++i) out += xi_sharp(i) * ext.generators[i];
  return out;
}

// Ordered product drho(xi_1) ... drho(xi_k).
template <class Rep>
CMat drho_k(const Rep& rep, const std::vector<AlgebraElement>& tuple) {
  if (tuple.empty()) throw std::invalid_argument("drho_k: empty tuple");
  CMat out = drho(rep, tuple.front());
  for (std::size_t m = 1; m < tuple.size(); ++m) out *= drho(rep, tuple[m]);
  return out;
}

// p_B(psi) = max over tuples of ||drho(xi_1)...drho(xi_k) psi||. Finite B
// stands in for the bounded sets of the strong topology; all tuples must
// share one length k >= 1.
template <class Rep>
double seminorm_pB(const Rep& rep, const std::vector<std::vector<AlgebraElement>>& B,
                   const CVec& psi) {
  if (B.empty()) throw std::invalid_argument("seminorm_pB: empty B");
  const std::size_t k = B.front().size();
  if (k == 0) throw std::invalid_argument("seminorm_pB: empty tuple");
  double best = 0.0;
  for (const std::vector<AlgebraElement>& tuple : B) {
    if (tuple.size() != k) throw std::invalid_argument("seminorm_pB: mixed tuple lengths");
    CVec cur = psi;
    for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) cur = drho(rep, *it) * cur;
    best = std::max(best, cur.norm());
  }
  return best;
}

// Ad_{exp(eta)} = exp(ad_eta) on g#, via the exact exponential of the
// (d+1)-dimensional ad-matrix; the twisted structure constants carry the
// cocycle contribution into the central coordinate.
inline AlgebraElement adjoint(const CentralExtension& ext, const AlgebraElement& eta,
                              const AlgebraElement& xi) {
  if (eta.size() != ext.dim() || xi.size() != ext.dim())
    throw std::invalid_argument("adjoint: expected extension coordinates");
  return matrix_exp(ext.algebra.ad(eta)) * xi;
}

// Polynomial path t -> sum_m coeffs[m] t^m over a vector space.
template <class Vec>
struct Poly {
  std::vector<Vec> coeffs;

  Vec eval(double t) const {
    if (coeffs.empty()) throw std::invalid_argument("Poly: no coefficients");
    Vec acc = coeffs.back();
    for (std::size_t m = coeffs.size() - 1; m-- > 0;) acc = t * acc + coeffs[m];
    return acc;
  }

  Vec deriv(double t) const {
    if (coeffs.empty()) throw std::invalid_argument("Poly: no coefficients");
    Vec acc = Vec::Zero(coeffs.front().size());
    for (std::size_t m = coeffs.size(); m-- > 1;)
      acc = t * acc + static_cast<double>(m) * coeffs[m];
    return acc;
  }
};

using AlgebraPath = Poly<AlgebraElement>;
using StatePath = Poly<CVec>;

// Product rule for (s,t) -> drho(xi_s) psi_t along the diagonal direction:
// centered difference against drho(xi'_s) psi_t + drho(xi_s) psi'_t.
template <class Rep>
double plot_derivative_check(const Rep& rep, const AlgebraPath& xi_path,
                             const StatePath& psi_path, double s, double t, double h) {
  auto f = [&](double e) -> CVec { return drho(rep, xi_path.eval(s + e)) * psi_path.eval(t + e); };
  const CVec fd = fd_derivative(f, 0.0, h);
  const CVec exact =
      drho(rep, xi_path.deriv(s)) * psi_path.eval(t) + drho(rep, xi_path.eval(s)) * psi_path.deriv(t);
  return (fd - exact).norm();
}

}  // namespace momentkit
