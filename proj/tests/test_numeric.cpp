#include "momentkit/core.hpp"
#include "momentkit/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace momentkit;

TEST_CASE("inner product is antilinear in the first slot") {
  CVec v(2), w(2);
  v << Complex(1, 2), Complex(3, 0);
  w << Complex(0, 1), Complex(1, 0);
  // conj(1+2i)*i + conj(3)*1 = (1-2i)i + 3 = 5 + i
  REQUIRE(inner(v, w) == Complex(5, 1));
  REQUIRE(real_inner(v, w) == 10.0);
  REQUIRE(inner(kI * v, w) == -kI * Complex(5, 1));
  REQUIRE(inner(v, kI * w) == kI * Complex(5, 1));

  CVec bad(3);
  bad.setZero();
  REQUIRE_THROWS_AS(inner(v, bad), std::invalid_argument);
}

TEST_CASE("matrix_exp matches closed forms") {
  RMat rot(2, 2);
  rot << 0, -1, 1, 0;
  const double t = std::numbers::pi / 3.0;
  const RMat r = matrix_exp(rot, t);
  REQUIRE(std::abs(r(0, 0) - std::cos(t)) < 1e-14);
  REQUIRE(std::abs(r(1, 0) - std::sin(t)) < 1e-14);
  REQUIRE(std::abs(r(0, 1) + std::sin(t)) < 1e-14);

  CMat d = kI * CMat::Identity(3, 3);
  const CMat e = matrix_exp(d, std::numbers::pi);
  REQUIRE((e + CMat::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("matrix_exp of anti-Hermitian input is unitary") {
  Rng rng(7, "numeric/unitary");
  const CMat g = rng.gaussian_cvec(5 * 5).reshaped(5, 5);
  const CMat a = g - g.adjoint();
  const CMat u = matrix_exp(a);
  REQUIRE((u * u.adjoint() - CMat::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("matrix_exp rejects bad input") {
  REQUIRE_THROWS_AS(matrix_exp(RMat(RMat::Zero(2, 3))), std::invalid_argument);
  REQUIRE_THROWS_AS(matrix_exp(RMat(RMat::Identity(513, 513))), std::invalid_argument);
  RMat nan1(1, 1);
  nan1 << std::nan("");
  REQUIRE_THROWS_AS(matrix_exp(nan1), std::invalid_argument);
  RMat one(1, 1);
  one << 1.0;
  REQUIRE_THROWS_AS(matrix_exp(one, 1000.0), std::overflow_error);
}

TEST_CASE("fd_derivative is second order and exact on quadratics") {
  const double fd = fd_derivative([](double x) { return std::sin(x); }, 0.3, 1e-4);
  REQUIRE(std::abs(fd - std::cos(0.3)) < 1e-8);

  const double quad = fd_derivative([](double x) { return x * x; }, 1.7, 1e-3);
  REQUIRE(std::abs(quad - 3.4) < 1e-11);

  // cubic: centered-difference error is exactly h^2
  const double cube = fd_derivative([](double x) { return x * x * x; }, 2.0, 1e-3);
  REQUIRE(std::abs(cube - 12.0) == Catch::Approx(1e-6).margin(1e-8));

  REQUIRE_THROWS_AS(fd_derivative([](double x) { return x; }, 0.0, 0.0),
                    std::invalid_argument);
  // sqrt(x - h) is NaN at x = 0, so the centered difference is non-finite
  REQUIRE_THROWS_AS(fd_derivative([](double x) { return std::sqrt(x); }, 0.0, 1e-4),
                    std::domain_error);
}

TEST_CASE("realvec interleaves re/im pairs") {
  CVec v(2);
  v << Complex(1, 2), Complex(3, 4);
  RVec r = to_realvec(v);
  REQUIRE(r.size() == 4);
  REQUIRE(r(0) == 1.0);
  REQUIRE(r(1) == 2.0);
  REQUIRE(r(2) == 3.0);
  REQUIRE(r(3) == 4.0);
  REQUIRE((from_realvec(r) - v).norm() == 0.0);

  // multiplication by i in the interleaved picture: (a,b) -> (-b,a)
  RVec ri = to_realvec(kI * v);
  REQUIRE(ri(0) == -2.0);
  REQUIRE(ri(1) == 1.0);

  RVec odd(3);
  odd.setZero();
  REQUIRE_THROWS_AS(from_realvec(odd), std::invalid_argument);
}

TEST_CASE("real_nullspace finds kernels with orthonormal columns") {
  RMat m(2, 2);
  m << 1, 0, 0, 0;
  const RMat k = real_nullspace(m);
  REQUIRE(k.cols() == 1);
  REQUIRE(std::abs(std::abs(k(1, 0)) - 1.0) < 1e-14);
  REQUIRE(std::abs(k(0, 0)) < 1e-14);

  REQUIRE(real_nullspace(RMat::Zero(3, 3)).cols() == 3);
  REQUIRE(real_nullspace(RMat::Identity(3, 3)).cols() == 0);
  REQUIRE(real_nullspace(RMat(), Tolerance{}).cols() == 0);

  RMat wide(1, 3);
  wide << 1, 1, 1;
  const RMat kw = real_nullspace(wide);
  REQUIRE(kw.cols() == 2);
  REQUIRE((kw.transpose() * kw - RMat::Identity(2, 2)).norm() < 1e-13);
  REQUIRE((wide * kw).norm() < 1e-13);
}

TEST_CASE("real_rank uses the relative singular-value cutoff") {
  RMat m(2, 2);
  m << 1, 2, 2, 4;
  REQUIRE(real_rank(m) == 1);
  REQUIRE(real_rank(RMat::Identity(4, 4)) == 4);
  REQUIRE(real_rank(RMat::Zero(2, 2)) == 0);
}

TEST_CASE("max_principal_angle separates subspaces") {
  RMat e1 = RMat::Zero(2, 1);
  e1(0, 0) = 1;
  RMat e2 = RMat::Zero(2, 1);
  e2(1, 0) = 1;
  REQUIRE(max_principal_angle(e1, e1) == 0.0);
  REQUIRE(std::abs(max_principal_angle(e1, e2) - std::numbers::pi / 2) < 1e-14);

  // same plane, rotated basis
  RMat a = RMat::Identity(3, 2);
  RMat b(3, 2);
  const double c = std::cos(0.4), s = std::sin(0.4);
  b << c, -s, s, c, 0, 0;
  REQUIRE(max_principal_angle(a, b) < 1e-7);

  REQUIRE(max_principal_angle(RMat::Zero(3, 0), RMat::Zero(3, 0)) == 0.0);
  // column-count mismatch counts as maximally apart
  REQUIRE(std::abs(max_principal_angle(a, RMat::Identity(3, 1)) - std::numbers::pi / 2) < 1e-14);
  REQUIRE_THROWS_AS(max_principal_angle(RMat::Identity(3, 1), RMat::Identity(4, 1)),
                    std::invalid_argument);
}

TEST_CASE("Tolerance validity") {
  REQUIRE(Tolerance{}.valid());
  Tolerance t;
  t.fd_step = 0.0;
  REQUIRE_FALSE(t.valid());
  t = Tolerance{};
  t.abs_tol = -1.0;
  REQUIRE_FALSE(t.valid());
  t = Tolerance{};
  t.nullspace_tol = std::nan("");
  REQUIRE_FALSE(t.valid());
}

TEST_CASE("rng streams are deterministic and label-separated") {
  Rng a(42, "check/a");
  Rng b(42, "check/a");
  Rng c(42, "check/b");
  const std::uint64_t a1 = a.next_u64();
  REQUIRE(a1 == b.next_u64());
  REQUIRE(a1 != c.next_u64());

  Rng u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform01();
    REQUIRE(x > 0.0);
    REQUIRE(x <= 1.0);
  }

  // moments sanity for Box-Muller
  Rng g(11);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = g.normal();
    mean += x;
    var += x * x;
  }
  mean /= n;
  var = var / n - mean * mean;
  REQUIRE(std::abs(mean) < 0.03);
  REQUIRE(std::abs(var - 1.0) < 0.05);

  Rng s(3);
  const CVec psi = s.unit_state(6);
  REQUIRE(std::abs(psi.norm() - 1.0) < 1e-14);
}
