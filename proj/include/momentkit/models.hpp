#pragma once

#include "momentkit/lie.hpp"

#include <string>
#include <vector>

namespace momentkit {

// Diagonal torus action: d = n, A_k = i * weight_k * E_kk, abelian, no cocycle.
inline Representation torus_diag(const std::vector<long long>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n < 1) throw std::invalid_argument("torus_diag: need at least one weight");
  std::vector<std::string> names;
  std::vector<CMat> gens;
  std::string label = "torus:(";
  for (int k = 0; k < n; ++k) {
    names.push_back("phi_" + std::to_string(k + 1));
    CMat a = CMat::Zero(n, n);
    a(k, k) = kI * static_cast<double>(weights[k]);
    gens.push_back(std::move(a));
    label += std::to_string(weights[k]) + (k + 1 < n ? "," : ")");
  }
  return make_representation(label, LieAlgebra::make(n, std::move(names), {}), std::move(gens));
}

// Spin-j representation of su(2), two_j = 2j: d = 3, hdim = two_j + 1,
// A_a = -i J_a in the ladder convention J+|j,m> = sqrt(j(j+1)-m(m+1))|j,m+1>,
// basis ordered by descending m. Structure constants c[1][2][3] = 1 cyclic.
inline Representation su2_spin(int two_j) {
  if (two_j < 1) throw std::invalid_argument("su2_spin: two_j must be >= 1");
  const int n = two_j + 1;
  const double j = 0.5 * two_j;
  CMat jp = CMat::Zero(n, n);
  CMat jz = CMat::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const double m = j - r;
    jz(r, r) = m;
    if (r >= 1) jp(r - 1, r) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const CMat jm = jp.adjoint();
  const CMat jx = 0.5 * (jp + jm);
  const CMat jy = (jp - jm) / (2.0 * kI);
  std::vector<CMat> gens{-kI * jx, -kI * jy, -kI * jz};
  std::vector<StructureTerm> terms{{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}};
  LieAlgebra su2 = LieAlgebra::make(3, {"xi_1", "xi_2", "xi_3"}, std::move(terms));
  return make_representation("su2:" + std::to_string(two_j), std::move(su2), std::move(gens));
}

// Truncated Weyl pair on n_levels Fock states, a|k> = sqrt(k)|k-1>:
// A_q = i(a + a^dag)/sqrt(2), A_p = (a^dag - a)/sqrt(2), abelian base with
// cocycle w(q,p) = 1. The commutator defect of the truncation lives entirely
// at the top level, so closure is exact on the lowest n_levels - 2 levels.
inline Representation weyl_truncated(int n_levels) {
  if (n_levels < 4) throw std::invalid_argument("weyl_truncated: need n_levels >= 4");
  const int n = n_levels;
  CMat a = CMat::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const CMat ad = a.adjoint();
  const double s = std::numbers::sqrt2;
  std::vector<CMat> gens{kI * (a + ad) / s, (ad - a) / s};
  RMat w(2, 2);
  w << 0.0, 1.0, -1.0, 0.0;
  LieAlgebra base = LieAlgebra::make(2, {"q", "p"}, {});
  return make_representation("weyl:" + std::to_string(n_levels), std::move(base),
                             std::move(gens), std::move(w), n - 2);
}

}  // namespace momentkit
