// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "quarma/quat_vector.hpp"

namespace quarma {

// Dense quaternion matrix intended to be Hermitian: entry(j,i) == conj(entry(i,j))
// and real diagonal. The structure is not enforced at construction; is_hermitian()
// and the positive-definite checks are on-demand validators.
struct HermitianQuatMatrix {
  int n = 0;
  std::vector<Quat> e;  // row-major, n*n

  HermitianQuatMatrix() = default;
  explicit HermitianQuatMatrix(int dim) : n(dim), e(static_cast<std::size_t>(dim) * dim) {}

  static HermitianQuatMatrix scaled_identity(int dim, double s);

  Quat& at(int i, int j) { return e[static_cast<std::size_t>(i) * n + j]; }
  const Quat& at(int i, int j) const { return e[static_cast<std::size_t>(i) * n + j]; }

  bool is_hermitian(double tol = 1e-12) const;
  double frobenius_norm() const;
};

QuatVector matvec(const HermitianQuatMatrix& A, const QuatVector& v);

// General quaternion matrix product on the same storage convention. Used by
// property tests; O(n^3) with no blocking.
HermitianQuatMatrix matmul(const HermitianQuatMatrix& A, const HermitianQuatMatrix& B);

// Complex adjoint representation: q = z1 + z2 j maps to the 2x2 block
// [[z1, z2], [-conj(z2), conj(z1)]], giving a 2n x 2n complex matrix.
Eigen::MatrixXcd complex_adjoint(const HermitianQuatMatrix& A);

// Reads a quaternion matrix back out of a complex adjoint image.
HermitianQuatMatrix from_complex_adjoint(const Eigen::MatrixXcd& M);

// q-determinant: |det(complex_adjoint(A))|, the product of squared moduli of
// the standard eigenvalues. Real and nonnegative.
double qdet(const HermitianQuatMatrix& A);

// log of qdet, accumulated in the log domain through an LU factorization so
// that long benchmark runs cannot overflow.
double log_qdet(const HermitianQuatMatrix& A);

// Inverts through the complex adjoint; the result is re-Hermitianized.
HermitianQuatMatrix inverse_via_adjoint(const HermitianQuatMatrix& A);

// Running pair (A, A^{-1}) under rank-1 Hermitian updates A <- A + u u^H.
// The inverse follows by the Sherman-Morrison identity; every
// kRefreshInterval updates it is recomputed from the complex adjoint to
// arrest floating-point drift.
struct InverseTracker {
  HermitianQuatMatrix matrix;
  HermitianQuatMatrix inverse;
  std::int64_t update_count = 0;

  static constexpr int kRefreshInterval = 512;

  InverseTracker() = default;
  // A = scale * I with its trivially known inverse.
  InverseTracker(int dim, double scale);

  // Applies A <- A + u u^H. Returns q = real(u^H A_prev^{-1} u), the
  // Sherman-Morrison scalar; it is nonnegative for positive definite input
  // and feeds the regret telemetry (u^H A_new^{-1} u = q / (1 + q)).
  double rank1_update(const QuatVector& u);

  // Frobenius norm of matrix * inverse - I. On-demand diagnostic.
  double residual() const;

 private:
  void refresh();
};

}  // namespace quarma
