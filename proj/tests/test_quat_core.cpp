// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "quarma/quat_vector.hpp"

#include "test_util.hpp"

using namespace quarma;

TEST_CASE("hamilton product basics") {
  const Quat i = unit(Axis::i), j = unit(Axis::j), k = unit(Axis::k);
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * i == j);
  CHECK(i * i == Quat::real(-1.0));
  CHECK(j * j == Quat::real(-1.0));
  CHECK(k * k == Quat::real(-1.0));

  const Quat one_i{1, 1, 0, 0}, one_j{1, 0, 1, 0};
  CHECK(one_i * one_j == Quat{1, 1, 1, 1});

  const Quat p{1, 2, 3, 4}, q{5, 6, 7, 8};
  CHECK(p * q == Quat{-60, 12, 30, 24});
}

TEST_CASE("conjugation") {
  CHECK(conj(Quat{1, 2, 3, 4}) == Quat{1, -2, -3, -4});
  const Quat i = unit(Axis::i), j = unit(Axis::j);
  CHECK(conj(i * j) == -unit(Axis::k));
  CHECK(conj(i * j) == conj(j) * conj(i));
  CHECK(conj(conj(Quat{1, 1, 0, 0})) == Quat{1, 1, 0, 0});
}

TEST_CASE("involution sign patterns") {
  const Quat q{1, 2, 3, 4};
  CHECK(involution(q, Axis::i) == Quat{1, 2, -3, -4});
  CHECK(involution(q, Axis::j) == Quat{1, -2, 3, -4});
  CHECK(involution(q, Axis::k) == Quat{1, -2, -3, 4});
  CHECK(involution(unit(Axis::i), Axis::i) == unit(Axis::i));
  CHECK(involution(unit(Axis::k), Axis::i) == -unit(Axis::k));

  // Definition check: q^mu = -mu q mu.
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    const Quat r = testutil::random_quat(rng, 3.0);
    for (Axis mu : {Axis::i, Axis::j, Axis::k}) {
      const Quat direct = involution(r, mu);
      const Quat def = -(unit(mu) * r * unit(mu));
      CHECK(abs(direct - def) == doctest::Approx(0.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("algebra laws on random cases") {
  std::mt19937_64 rng(1234);
  for (int n = 0; n < 1000; ++n) {
    const Quat p = testutil::random_quat(rng, 2.0), q = testutil::random_quat(rng, 2.0);
    const double lhs = abs(p * q), rhs = abs(p) * abs(q);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
    CHECK(abs(conj(p * q) - conj(q) * conj(p)) <= 1e-14 * std::max(1.0, rhs));
    for (Axis mu : {Axis::i, Axis::j, Axis::k}) CHECK(involution(involution(q, mu), mu) == q);
  }
}

TEST_CASE("lift examples") {
  const AugmentedVector u1 = lift(RealQuadVector{1, 0, 0, 0});
  CHECK(u1.q == QuatVector{Quat::real(1), Quat::real(1), Quat::real(1), Quat::real(1)});

  const AugmentedVector ui = lift(RealQuadVector{0, 1, 0, 0});
  const Quat i = unit(Axis::i);
  CHECK(ui.q == QuatVector{i, i, -i, -i});

  CHECK_THROWS_AS(lift(RealQuadVector{1, 2, 3}), DimensionError);
}

TEST_CASE("flatten examples and round trips") {
  const RealQuadVector r0{0.5, -1, 2, 3};
  CHECK(flatten(lift(r0)) == r0);

  // Four identical real blocks flatten to a pure real coordinate vector.
  AugmentedVector ones{QuatVector{Quat::real(1), Quat::real(1), Quat::real(1), Quat::real(1)}};
  CHECK(flatten(ones) == RealQuadVector{1, 0, 0, 0});

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    RealQuadVector r(4 * n);
    for (double& x : r) x = u(rng);
    const AugmentedVector lifted = lift(r);
    CHECK(consistency_defect(lifted) == 0.0);
    const RealQuadVector back = flatten(lifted);
    for (std::size_t idx = 0; idx < r.size(); ++idx) CHECK(back[idx] == doctest::Approx(r[idx]).epsilon(1e-15));
    // J preserves norm up to the factor 4.
    CHECK(norm2(lifted.q) == doctest::Approx(4.0 * norm2(r)).epsilon(1e-12));
  }
}

TEST_CASE("flatten rejects inconsistent input") {
  AugmentedVector u = lift(RealQuadVector{0.5, -1, 2, 3});
  u.q[2].a += 1e-3;
  CHECK(consistency_defect(u) > kConsistencyTol);
  CHECK_THROWS_AS(flatten(u), InconsistencyError);
  // The unchecked variant is the least-squares fit and must not throw.
  CHECK_NOTHROW(flatten_unchecked(u));

  // Right at machine-level perturbations the checked path still accepts.
  AugmentedVector v = lift(RealQuadVector{0.5, -1, 2, 3});
  v.q[2].a += 1e-15;
  CHECK_NOTHROW(flatten(v));
}

TEST_CASE("extract") {
  const Quat i = unit(Axis::i);
  const AugmentedVector u{QuatVector{i, i, -i, -i}};
  CHECK(extract(u) == QuatVector{i});

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  RealQuadVector r(8);
  for (double& x : r) x = d(rng);
  const AugmentedVector lifted = lift(r);
  const QuatVector head = extract(lifted);
  REQUIRE(head.size() == 2);
  CHECK(head[0] == Quat{r[0], r[2], r[4], r[6]});
  CHECK(head[1] == Quat{r[1], r[3], r[5], r[7]});

  // A mixed (inconsistent) vector still yields its first block untouched.
  AugmentedVector mixed = lifted;
  mixed.q[5] = Quat{9, 9, 9, 9};
  CHECK(extract(mixed) == head);
}

TEST_CASE("J matrix identities") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
    const std::size_t d = 4 * n;
    const std::vector<Quat> J = make_J(n);

    // J J^H = J^H J = 4 I.
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Quat right, left;
        for (std::size_t l = 0; l < d; ++l) {
          right += J[i * d + l] * conj(J[j * d + l]);
          left += conj(J[l * d + i]) * J[l * d + j];
        }
        const Quat expect = (i == j) ? Quat::real(4.0) : Quat{};
        CHECK(abs(right - expect) <= 1e-14);
        CHECK(abs(left - expect) <= 1e-14);
      }

    // lift agrees with the explicit matrix action on random real vectors.
    RealQuadVector r(d);
    for (double& x : r) x = u(rng);
    const AugmentedVector lifted = lift(r);
    for (std::size_t i = 0; i < d; ++i) {
      Quat acc;
      for (std::size_t j = 0; j < d; ++j) acc += J[i * d + j] * r[j];
      CHECK(abs(acc - lifted.q[i]) <= 1e-14);
    }

    // flatten_unchecked agrees with (1/4) Re(J^H w) on arbitrary w.
    QuatVector w(d);
    for (Quat& x : w) x = testutil::random_quat(rng, 2.0);
    const RealQuadVector f = flatten_unchecked(AugmentedVector{w});
    for (std::size_t i = 0; i < d; ++i) {
      Quat acc;
      for (std::size_t j = 0; j < d; ++j) acc += conj(J[j * d + i]) * w[j];
      CHECK(f[i] == doctest::Approx(0.25 * acc.a).epsilon(1e-13));
    }
  }
}

TEST_CASE("hermitian dot and norms") {
  std::mt19937_64 rng(17);
  QuatVector x(5), y(5);
  for (int t = 0; t < 100; ++t) {
    for (Quat& q : x) q = testutil::random_quat(rng, 2.0);
    for (Quat& q : y) q = testutil::random_quat(rng, 2.0);
    const Quat xy = hermitian_dot(x, y);
    const Quat yx = hermitian_dot(y, x);
    CHECK(abs(xy - conj(yx)) <= 1e-13);
    const Quat xx = hermitian_dot(x, x);
    CHECK(xx.a == doctest::Approx(norm2(x)).epsilon(1e-13));
    CHECK(std::abs(xx.b) <= 1e-13);
    CHECK(std::abs(xx.c) <= 1e-13);
    CHECK(std::abs(xx.d) <= 1e-13);
  }
  CHECK_THROWS_AS(hermitian_dot(x, QuatVector(3)), DimensionError);
}

TEST_CASE("real_coeff gathers block-major coordinates") {
  const RealQuadVector r{1, 2, 10, 20, 100, 200, 1000, 2000};  // n = 2
  double out[4];
  real_coeff(r, 2, 0, out);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 10.0);
  CHECK(out[2] == 100.0);
  CHECK(out[3] == 1000.0);
  real_coeff(r, 2, 1, out);
  CHECK(out[0] == 2.0);
  CHECK(out[1] == 20.0);
  CHECK(out[2] == 200.0);
  CHECK(out[3] == 2000.0);
}
