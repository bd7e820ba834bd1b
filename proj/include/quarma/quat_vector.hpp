// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "quarma/errors.hpp"
#include "quarma/quaternion.hpp"

namespace quarma {

using QuatVector = std::vector<Quat>;

// Real coordinate vector of a QuatVector, stored block-major:
// [a_0..a_{n-1}, b_0..b_{n-1}, c_0..c_{n-1}, d_0..d_{n-1}].
using RealQuadVector = std::vector<double>;

// Augmented vector [u; u^i; u^j; u^k], stored flat as 4n quaternions in block
// order. Equals J * r_u for the coordinate vector r_u of u, so a consistent
// augmented vector always lies in the range of J.
struct AugmentedVector {
  QuatVector q;

  AugmentedVector() = default;
  explicit AugmentedVector(QuatVector flat) : q(std::move(flat)) {}

  std::size_t n() const { return q.size() / 4; }
  std::size_t flat_size() const { return q.size(); }
};

inline double norm2(const QuatVector& v) {
  double s = 0.0;
  for (const Quat& x : v) s += norm2(x);
  return s;
}

inline double norm2(const RealQuadVector& r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return s;
}

// Sum of conj(x_i) * y_i. Real part is the Euclidean inner product of the
// underlying 4n real coordinates.
inline Quat hermitian_dot(const QuatVector& x, const QuatVector& y) {
  if (x.size() != y.size()) throw DimensionError("hermitian_dot: length mismatch");
  Quat s;
  for (std::size_t i = 0; i < x.size(); ++i) s += conj(x[i]) * y[i];
  return s;
}

inline QuatVector involution(const QuatVector& v, Axis mu) {
  QuatVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = involution(v[i], mu);
  return out;
}

// lift: RealQuadVector -> AugmentedVector, the action of J on the
// block structure: block 0 reassembles the quaternions, blocks 1..3 are the
// i/j/k involutions of block 0.
inline AugmentedVector lift(const RealQuadVector& r) {
  if (r.size() % 4 != 0) throw DimensionError("lift: size must be a multiple of 4");
  const std::size_t n = r.size() / 4;
  QuatVector flat(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Quat q{r[i], r[n + i], r[2 * n + i], r[3 * n + i]};
    flat[i] = q;
    flat[n + i] = involution(q, Axis::i);
    flat[2 * n + i] = involution(q, Axis::j);
    flat[3 * n + i] = involution(q, Axis::k);
  }
  return AugmentedVector{std::move(flat)};
}

// First block of the augmented vector.
inline QuatVector extract(const AugmentedVector& u) {
  const std::size_t n = u.n();
  return QuatVector(u.q.begin(), u.q.begin() + static_cast<std::ptrdiff_t>(n));
}

// (1/4) J^H u without the consistency check; averages the four blocks back to
// one coordinate vector. Exact inverse of lift on consistent input, least
// squares fit otherwise.
inline RealQuadVector flatten_unchecked(const AugmentedVector& u) {
  if (u.q.size() % 4 != 0) throw DimensionError("flatten: size must be a multiple of 4");
  const std::size_t n = u.n();
  RealQuadVector r(4 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Quat& q0 = u.q[i];
    const Quat q1 = involution(u.q[n + i], Axis::i);
    const Quat q2 = involution(u.q[2 * n + i], Axis::j);
    const Quat q3 = involution(u.q[3 * n + i], Axis::k);
    // Involutions are self-inverse, so each term is an estimate of block 0.
    r[i] = 0.25 * (q0.a + q1.a + q2.a + q3.a);
    r[n + i] = 0.25 * (q0.b + q1.b + q2.b + q3.b);
    r[2 * n + i] = 0.25 * (q0.c + q1.c + q2.c + q3.c);
    r[3 * n + i] = 0.25 * (q0.d + q1.d + q2.d + q3.d);
  }
  return r;
}

// Relative deviation of u from the involution-consistent manifold, measured
// against the block-0-derived reference.
inline double consistency_defect(const AugmentedVector& u) {
  const std::size_t n = u.n();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Quat& q = u.q[i];
    const Quat refs[3] = {involution(q, Axis::i), involution(q, Axis::j), involution(q, Axis::k)};
    den += norm2(q);
    for (int blk = 0; blk < 3; ++blk) {
      num += norm2(u.q[(blk + 1) * n + i] - refs[blk]);
      den += norm2(u.q[(blk + 1) * n + i]);
    }
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

inline constexpr double kConsistencyTol = 1e-12;

// Checked inverse of lift.
inline RealQuadVector flatten(const AugmentedVector& u) {
  if (u.q.size() % 4 != 0) throw DimensionError("flatten: size must be a multiple of 4");
  if (consistency_defect(u) > kConsistencyTol)
    throw InconsistencyError("flatten: augmented vector is not involution-consistent");
  return flatten_unchecked(u);
}

// The J transform as an explicit 4n x 4n quaternion matrix (row-major).
// Row block mu, column block nu holds s(mu,nu) * e_nu * I_n with
// e = (1, i, j, k) and the involution sign pattern s. Mostly for tests; the
// library itself applies J through lift/flatten.
inline std::vector<Quat> make_J(std::size_t n) {
  static constexpr double kSign[4][4] = {
      {1.0, 1.0, 1.0, 1.0},
      {1.0, 1.0, -1.0, -1.0},
      {1.0, -1.0, 1.0, -1.0},
      {1.0, -1.0, -1.0, 1.0},
  };
  const Quat units[4] = {Quat::real(1.0), unit(Axis::i), unit(Axis::j), unit(Axis::k)};
  std::vector<Quat> J(16 * n * n);
  const std::size_t dim = 4 * n;
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu)
      for (std::size_t i = 0; i < n; ++i) J[(mu * n + i) * dim + (nu * n + i)] = kSign[mu][nu] * units[nu];
  return J;
}

// Gathers coefficient j of a block-major real coordinate vector.
inline void real_coeff(const RealQuadVector& r, std::size_t n, std::size_t j, double out[4]) {
  out[0] = r[j];
  out[1] = r[n + j];
  out[2] = r[2 * n + j];
  out[3] = r[3 * n + j];
}

}  // namespace quarma
