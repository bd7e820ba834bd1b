// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "quarma/quat_linalg.hpp"
#include "quarma/signal_model.hpp"

namespace quarma {

// Product of per-coefficient modulus balls: K = { gamma : |gamma_j| <= c }.
struct DecisionSet {
  double c = 2.0;
  int dim = 1;

  bool contains(const QuatVector& gamma, double tol = 1e-12) const;
};

struct HyperParams {
  // Model-side constants for the truncation-depth rule.
  double lambda_max = 0.5;
  double L = 1.0;
  double M_max = 1.0;
  long T = 10000;

  // Algorithm constants. G, D, lambda and eta are resolved per run when not
  // given: D = 4c sqrt(p+m), G = 4 (1 + c (p+m)) B^2 with B the series
  // magnitude bound, lambda = 1 / (8 G D), eta from ons_rate.
  double H = 0.1;
  double c = 2.0;
  std::optional<double> G;
  std::optional<double> D;
  std::optional<double> lambda;
  std::optional<double> eta;       // online Newton step rate override
  std::optional<double> qogd_eta;  // fixed gradient-descent rate instead of 1/(H t)
};

// Smallest truncation depth m with lambda_max^m <= 1 / (T L M_max q), never
// negative. A pure AR model (q = 0) needs no truncation memory.
int select_m(const HyperParams& h, int q_order);

// 1/eta = (1/2) min{ 1/(4 G D), lambda }.
double ons_rate(double G, double D, double lambda);

// Euclidean projection onto K: per-coefficient radial scaling.
QuatVector project_K(QuatVector gamma, const DecisionSet& set);

struct QogdState {
  QuatVector gamma;
  long t = 1;
  double H = 0.1;
  std::optional<double> fixed_eta;

  static QogdState init(int dim, const HyperParams& hp);
};

// One gradient-descent round: predict, descend by 4 eta_t along the conjugate
// gradient, project. Returns the prediction loss at the pre-update gamma.
double qogd_step(QogdState& state, const SeriesWindow& window, const Quat& x_t, const DecisionSet& set);

struct QonsState {
  AugmentedVector gamma_aug;   // 4(p+m) quaternions, involution-consistent
  QuatVector gamma;            // cached first block
  InverseTracker tracker;      // A_qt and its tracked inverse
  std::vector<double> M;       // real metric J^H A J, (4n) x (4n) row-major
  long t = 1;
  double eta = 1.0;
  double logdet_lhs = 0.0;     // running sum of grad^H A_t^{-1} grad

  static QonsState init(int dim, double eta, double D);
};

// One Newton-step round per the augmented update rule; the tracker absorbs
// the gradient outer product before the descent direction is formed.
double qons_step(QonsState& state, const SeriesWindow& window, const Quat& x_t, const DecisionSet& set);

// argmin over involution-consistent, feasible augmented vectors y of
// real((y - phi)^H A (y - phi)). Solved in real coordinates by projected
// gradient descent (movement tolerance 1e-10, cap 1e4 iterations), optionally
// warm-started. A must be positive definite.
AugmentedVector project_A_norm(const AugmentedVector& phi, const HermitianQuatMatrix& A, const DecisionSet& set,
                               const RealQuadVector* warm_start = nullptr);

// Real-coordinate core of the projection: minimizes s^T M s - 2 v^T s over
// the per-coefficient 4-ball product. Exposed for reuse and testing.
RealQuadVector project_quadratic(const std::vector<double>& M, std::size_t n_coeffs, const RealQuadVector& v,
                                 double c, const RealQuadVector* warm_start = nullptr);

// Real symmetric metric of the A-induced norm, Re(J^H A J).
std::vector<double> real_metric(const HermitianQuatMatrix& A);

enum class Algo { qogd, qons };

struct TraceStep {
  long t = 0;
  double loss = 0.0;
  double avg_mse = 0.0;
};
using Trace = std::vector<TraceStep>;

struct RunResult {
  Trace trace;
  QuatVector final_gamma;
  // Newton-step telemetry for the log-determinant regret inequality;
  // zero for .algo == qogd runs.
  double logdet_lhs = 0.0;
  double log_qdet_final = 0.0;
  double log_qdet_initial = 0.0;
};

// Streams through the series from gamma_1 = 0, applying the chosen step and
// recording per-step loss and the running mean.
RunResult run_learner(Algo algo, const QuatVector& series, const HyperParams& params, const DecisionSet& set);

// Trace CSV rows "run,algo,t,loss,avg_mse" (no header).
void export_trace_csv(std::ostream& out, int run, const std::string& algo, const Trace& trace);

}  // namespace quarma
