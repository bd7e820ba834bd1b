// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "quarma/quat_linalg.hpp"

#include <cmath>

#include <Eigen/LU>

namespace quarma {

HermitianQuatMatrix HermitianQuatMatrix::scaled_identity(int dim, double s) {
  HermitianQuatMatrix A(dim);
  for (int i = 0; i < dim; ++i) A.at(i, i) = Quat::real(s);
  return A;
}

bool HermitianQuatMatrix::is_hermitian(double tol) const {
  for (int i = 0; i < n; ++i) {
    const Quat& d = at(i, i);
    if (std::abs(d.b) > tol || std::abs(d.c) > tol || std::abs(d.d) > tol) return false;
    for (int j = i + 1; j < n; ++j) {
      const Quat diff = at(i, j) - conj(at(j, i));
      if (std::sqrt(norm2(diff)) > tol) return false;
    }
  }
  return true;
}

double HermitianQuatMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Quat& q : e) s += norm2(q);
  return std::sqrt(s);
}

QuatVector matvec(const HermitianQuatMatrix& A, const QuatVector& v) {
  if (static_cast<int>(v.size()) != A.n) throw DimensionError("matvec: dimension mismatch");
  QuatVector out(v.size());
  for (int i = 0; i < A.n; ++i) {
    const Quat* row = &A.e[static_cast<std::size_t>(i) * A.n];
    Quat acc;
    for (int j = 0; j < A.n; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

HermitianQuatMatrix matmul(const HermitianQuatMatrix& A, const HermitianQuatMatrix& B) {
  if (A.n != B.n) throw DimensionError("matmul: dimension mismatch");
  HermitianQuatMatrix C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int k = 0; k < A.n; ++k) {
      const Quat aik = A.at(i, k);
      for (int j = 0; j < A.n; ++j) C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

Eigen::MatrixXcd complex_adjoint(const HermitianQuatMatrix& A) {
  using cd = std::complex<double>;
  Eigen::MatrixXcd M(2 * A.n, 2 * A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      const Quat& q = A.at(i, j);
      const cd z1(q.a, q.b);
      const cd z2(q.c, q.d);
      M(2 * i, 2 * j) = z1;
      M(2 * i, 2 * j + 1) = z2;
      M(2 * i + 1, 2 * j) = -std::conj(z2);
      M(2 * i + 1, 2 * j + 1) = std::conj(z1);
    }
  return M;
}

HermitianQuatMatrix from_complex_adjoint(const Eigen::MatrixXcd& M) {
  const int n = static_cast<int>(M.rows()) / 2;
  HermitianQuatMatrix A(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::complex<double> z1 = M(2 * i, 2 * j);
      const std::complex<double> z2 = M(2 * i, 2 * j + 1);
      A.at(i, j) = Quat{z1.real(), z1.imag(), z2.real(), z2.imag()};
    }
  return A;
}

double log_qdet(const HermitianQuatMatrix& A) {
  const Eigen::MatrixXcd M = complex_adjoint(A);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  double acc = 0.0;
  for (int i = 0; i < M.rows(); ++i) acc += std::log(std::abs(lu.matrixLU()(i, i)));
  return acc;
}

double qdet(const HermitianQuatMatrix& A) { return std::exp(log_qdet(A)); }

HermitianQuatMatrix inverse_via_adjoint(const HermitianQuatMatrix& A) {
  const Eigen::MatrixXcd inv = complex_adjoint(A).inverse();
  HermitianQuatMatrix out = from_complex_adjoint(inv);
  // Reinforce the Hermitian structure against rounding.
  for (int i = 0; i < out.n; ++i) {
    Quat& d = out.at(i, i);
    d = Quat::real(d.a);
    for (int j = i + 1; j < out.n; ++j) {
      const Quat avg = 0.5 * (out.at(i, j) + conj(out.at(j, i)));
      out.at(i, j) = avg;
      out.at(j, i) = conj(avg);
    }
  }
  return out;
}

InverseTracker::InverseTracker(int dim, double scale)
    : matrix(HermitianQuatMatrix::scaled_identity(dim, scale)),
      inverse(HermitianQuatMatrix::scaled_identity(dim, 1.0 / scale)) {}

double InverseTracker::rank1_update(const QuatVector& u) {
  const int n = matrix.n;
  if (static_cast<int>(u.size()) != n) throw DimensionError("rank1_update: dimension mismatch");

  const QuatVector w = matvec(inverse, u);
  // u^H A^{-1} u is real for Hermitian A^{-1}; keep only the real part so the
  // imaginary rounding residue cannot leak into the update.
  const double q = hermitian_dot(u, w).a;
  const double s = 1.0 + q;
  if (s <= 1e-14) throw BreakdownError("rank1_update: Sherman-Morrison denominator not positive");

  const double inv_s = 1.0 / s;
  for (int i = 0; i < n; ++i) {
    // inverse -= w w^H / s, matrix += u u^H; both written symmetrically.
    const Quat wi = w[i];
    const Quat ui = u[i];
    Quat* inv_row = &inverse.e[static_cast<std::size_t>(i) * n];
    Quat* mat_row = &matrix.e[static_cast<std::size_t>(i) * n];
    for (int j = i; j < n; ++j) {
      const Quat dw = (wi * conj(w[j])) * inv_s;
      const Quat dm = ui * conj(u[j]);
      inv_row[j] -= dw;
      mat_row[j] += dm;
      if (j != i) {
        inverse.at(j, i) = conj(inv_row[j]);
        matrix.at(j, i) = conj(mat_row[j]);
      }
    }
    // Diagonal entries stay real by construction; clear rounding residue.
    inv_row[i] = Quat::real(inv_row[i].a);
    mat_row[i] = Quat::real(mat_row[i].a);
  }

  if (++update_count % kRefreshInterval == 0) refresh();
  return q;
}

void InverseTracker::refresh() { inverse = inverse_via_adjoint(matrix); }

double InverseTracker::residual() const {
  const HermitianQuatMatrix P = matmul(matrix, inverse);
  double s = 0.0;
  for (int i = 0; i < P.n; ++i)
    for (int j = 0; j < P.n; ++j) {
      Quat d = P.at(i, j);
      if (i == j) d.a -= 1.0;
      s += norm2(d);
    }
  return std::sqrt(s);
}

}  // namespace quarma
