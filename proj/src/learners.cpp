// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "quarma/learners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace quarma {

bool DecisionSet::contains(const QuatVector& gamma, double tol) const {
  if (static_cast<int>(gamma.size()) != dim) return false;
  for (const Quat& g : gamma)
    if (abs(g) > c + tol) return false;
  return true;
}

int select_m(const HyperParams& h, int q_order) {
  if (!(h.lambda_max > 0.0 && h.lambda_max < 1.0))
    throw InvalidParameterError("select_m: lambda_max must lie in (0, 1)");
  if (q_order < 0) throw InvalidParameterError("select_m: q_order must be >= 0");
  if (q_order == 0) return 0;
  const double product = static_cast<double>(h.T) * h.L * h.M_max * static_cast<double>(q_order);
  if (product <= 0.0) throw InvalidParameterError("select_m: T, L, M_max must be positive");
  // ceil(log(1/product) / log(lambda_max)); the 1e-12 guard keeps exact
  // integer ratios from being bumped up by rounding.
  const double v = std::log(1.0 / product) / std::log(h.lambda_max);
  const long m = static_cast<long>(std::ceil(v - 1e-12));
  return static_cast<int>(std::max(0L, m));
}

double ons_rate(double G, double D, double lambda) {
  if (G <= 0.0 || D <= 0.0 || lambda <= 0.0) throw InvalidParameterError("ons_rate: arguments must be positive");
  return 2.0 * std::max(4.0 * G * D, 1.0 / lambda);
}

QuatVector project_K(QuatVector gamma, const DecisionSet& set) {
  for (Quat& g : gamma) {
    const double m = abs(g);
    if (m > set.c) g *= set.c / m;
  }
  return gamma;
}

QogdState QogdState::init(int dim, const HyperParams& hp) {
  QogdState s;
  s.gamma.assign(static_cast<std::size_t>(dim), Quat{});
  s.H = hp.H;
  s.fixed_eta = hp.qogd_eta;
  return s;
}

double qogd_step(QogdState& state, const SeriesWindow& window, const Quat& x_t, const DecisionSet& set) {
  const Quat pred = qar_predict(state.gamma, window);
  const double loss = squared_loss(x_t, pred);
  const QuatVector g = ghr_gradient(state.gamma, window, x_t);
  const double eta = state.fixed_eta ? *state.fixed_eta : 1.0 / (state.H * static_cast<double>(state.t));
  for (std::size_t i = 0; i < state.gamma.size(); ++i) state.gamma[i] -= 4.0 * eta * g[i];
  state.gamma = project_K(std::move(state.gamma), set);
  ++state.t;
  return loss;
}

QonsState QonsState::init(int dim, double eta, double D) {
  if (eta <= 0.0 || D <= 0.0) throw InvalidParameterError("QonsState: eta and D must be positive");
  const double eps = eta * eta / (D * D);
  QonsState s;
  s.gamma_aug = AugmentedVector{QuatVector(static_cast<std::size_t>(4 * dim))};
  s.gamma.assign(static_cast<std::size_t>(dim), Quat{});
  s.tracker = InverseTracker(4 * dim, eps);
  // Real metric of eps * I is 4 eps * I (J^H J = 4 I).
  const std::size_t d4 = static_cast<std::size_t>(4 * dim);
  s.M.assign(d4 * d4, 0.0);
  for (std::size_t r = 0; r < d4; ++r) s.M[r * d4 + r] = 4.0 * eps;
  s.eta = eta;
  return s;
}

namespace {

bool feasible_blocks(const RealQuadVector& r, std::size_t n, double c) {
  for (std::size_t j = 0; j < n; ++j) {
    double q[4];
    real_coeff(r, n, j, q);
    if (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3] > c * c) return false;
  }
  return true;
}

void project_blocks_inplace(RealQuadVector& r, std::size_t n, double c) {
  for (std::size_t j = 0; j < n; ++j) {
    double q[4];
    real_coeff(r, n, j, q);
    const double m2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
    if (m2 > c * c) {
      const double s = c / std::sqrt(m2);
      r[j] *= s;
      r[n + j] *= s;
      r[2 * n + j] *= s;
      r[3 * n + j] *= s;
    }
  }
}

double spectral_bound(const std::vector<double>& M, std::size_t d) {
  // Power iteration; a slight overestimate is harmless (smaller step).
  std::vector<double> x(d, 1.0), y(d);
  double lam = 0.0;
  for (int it = 0; it < 60; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      const double* row = &M[i * d];
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
    double ny = 0.0;
    for (double v : y) ny += v * v;
    ny = std::sqrt(ny);
    if (ny == 0.0) return 1.0;
    lam = ny;
    for (std::size_t i = 0; i < d; ++i) x[i] = y[i] / ny;
  }
  return lam * 1.05;
}

}  // namespace

RealQuadVector project_quadratic(const std::vector<double>& M, std::size_t n_coeffs, const RealQuadVector& v,
                                 double c, const RealQuadVector* warm_start) {
  const std::size_t d = 4 * n_coeffs;
  if (M.size() != d * d || v.size() != d) throw DimensionError("project_quadratic: dimension mismatch");

  RealQuadVector s = warm_start ? *warm_start : RealQuadVector(d, 0.0);
  project_blocks_inplace(s, n_coeffs, c);

  const double lam = spectral_bound(M, d);
  const double step = 1.0 / lam;
  std::vector<double> grad(d);

  constexpr int kMaxIters = 10000;
  constexpr double kMoveTol = 1e-10;
  for (int it = 0; it < kMaxIters; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      double acc = -v[i];
      const double* row = &M[i * d];
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * s[j];
      grad[i] = acc;  // (1/2) gradient of s^T M s - 2 v^T s
    }
    double move = 0.0;
    RealQuadVector next = s;
    for (std::size_t i = 0; i < d; ++i) next[i] -= step * grad[i];
    project_blocks_inplace(next, n_coeffs, c);
    for (std::size_t i = 0; i < d; ++i) move = std::max(move, std::abs(next[i] - s[i]));
    s = std::move(next);
    if (move < kMoveTol) return s;
  }
  throw ConvergenceError("project_quadratic: no convergence within 10000 iterations");
}

std::vector<double> real_metric(const HermitianQuatMatrix& A) {
  const std::size_t d = static_cast<std::size_t>(A.n);
  if (d % 4 != 0) throw DimensionError("real_metric: dimension must be a multiple of 4");
  const std::size_t n = d / 4;
  std::vector<double> M(d * d);
  RealQuadVector e(d, 0.0);
  for (std::size_t col = 0; col < d; ++col) {
    e[col] = 1.0;
    const AugmentedVector Je = lift(e);
    const RealQuadVector mcol = flatten_unchecked(AugmentedVector{matvec(A, Je.q)});
    // column of Re(J^H A J) = 4 * (1/4) Re(J^H (A J e)).
    for (std::size_t row = 0; row < d; ++row) M[row * d + col] = 4.0 * mcol[row];
    e[col] = 0.0;
  }
  // Symmetrize: exact for Hermitian A, cheap insurance otherwise.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double avg = 0.5 * (M[i * d + j] + M[j * d + i]);
      M[i * d + j] = avg;
      M[j * d + i] = avg;
    }
  (void)n;
  return M;
}

AugmentedVector project_A_norm(const AugmentedVector& phi, const HermitianQuatMatrix& A, const DecisionSet& set,
                               const RealQuadVector* warm_start) {
  if (static_cast<int>(phi.flat_size()) != A.n) throw DimensionError("project_A_norm: dimension mismatch");
  const std::size_t n = phi.n();

  // Fast path: an involution-consistent, feasible phi is its own projection.
  if (consistency_defect(phi) <= kConsistencyTol) {
    const RealQuadVector r = flatten_unchecked(phi);
    if (feasible_blocks(r, n, set.c)) return lift(r);
  }

  const std::vector<double> M = real_metric(A);
  // Linear term of the expanded objective: v = Re(J^H A phi).
  const RealQuadVector v = [&] {
    RealQuadVector f = flatten_unchecked(AugmentedVector{matvec(A, phi.q)});
    for (double& x : f) x *= 4.0;
    return f;
  }();
  return lift(project_quadratic(M, n, v, set.c, warm_start));
}

double qons_step(QonsState& state, const SeriesWindow& window, const Quat& x_t, const DecisionSet& set) {
  const std::size_t n = state.gamma.size();
  const std::size_t d4 = 4 * n;

  const Quat pred = qar_predict(state.gamma, window);
  const double loss = squared_loss(x_t, pred);
  const QuatVector g = ghr_gradient(state.gamma, window, x_t);

  if (norm2(g) == 0.0) {
    // A zero outer product cannot move the tracker or the iterate.
    ++state.t;
    return loss;
  }

  const AugmentedVector g_aug = augmented_gradient(g);

  const double q = state.tracker.rank1_update(g_aug.q);
  state.logdet_lhs += q / (1.0 + q);

  // Real metric keeps pace with A: increment by grad_r grad_r^T with
  // grad_r = J^H g_aug = 4 r_g.
  const RealQuadVector rg = flatten_unchecked(g_aug);
  for (std::size_t i = 0; i < d4; ++i) {
    const double wi = 16.0 * rg[i];
    double* row = &state.M[i * d4];
    for (std::size_t j = 0; j < d4; ++j) row[j] += wi * rg[j];
  }

  const QuatVector dir = matvec(state.tracker.inverse, g_aug.q);
  AugmentedVector phi = state.gamma_aug;
  for (std::size_t i = 0; i < d4; ++i) phi.q[i] -= state.eta * dir[i];

  // The descent image of a consistent point stays consistent up to rounding;
  // re-lifting through real coordinates restores it exactly.
  RealQuadVector r_phi = flatten_unchecked(phi);
  if (!feasible_blocks(r_phi, n, set.c)) {
    const RealQuadVector warm = flatten_unchecked(state.gamma_aug);
    r_phi = project_quadratic(state.M, n, [&] {
      // Consistent target: v = M r_phi.
      RealQuadVector v(d4, 0.0);
      for (std::size_t i = 0; i < d4; ++i) {
        double acc = 0.0;
        const double* row = &state.M[i * d4];
        for (std::size_t j = 0; j < d4; ++j) acc += row[j] * r_phi[j];
        v[i] = acc;
      }
      return v;
    }(), set.c, &warm);
  }
  state.gamma_aug = lift(r_phi);
  state.gamma = extract(state.gamma_aug);
  ++state.t;
  return loss;
}

RunResult run_learner(Algo algo, const QuatVector& series, const HyperParams& params, const DecisionSet& set) {
  if (series.empty()) throw InvalidParameterError("run_learner: series must be non-empty");
  const int k = set.dim;

  RunResult result;
  result.trace.reserve(series.size());

  double cum = 0.0;
  auto record = [&](long t, double loss) {
    cum += loss;
    result.trace.push_back(TraceStep{t, loss, cum / static_cast<double>(t)});
  };

  if (algo == Algo::qogd) {
    QogdState state = QogdState::init(k, params);
    for (std::size_t t = 0; t < series.size(); ++t) {
      const SeriesWindow w{&series, t, k};
      record(static_cast<long>(t) + 1, qogd_step(state, w, series[t], set));
    }
    result.final_gamma = state.gamma;
    return result;
  }

  // Resolve the Newton-step constant chain.
  double B2 = 0.0;
  for (const Quat& x : series) B2 = std::max(B2, norm2(x));
  const double D = params.D ? *params.D : 4.0 * params.c * std::sqrt(static_cast<double>(k));
  // A flat-zero series carries no gradient signal: every step skips, the rate
  // is never consulted, and any positive stand-in keeps the chain resolvable.
  const double G = params.G ? *params.G : (B2 > 0.0 ? 4.0 * (1.0 + params.c * k) * B2 : 1.0);
  const double lambda = params.lambda ? *params.lambda : 1.0 / (8.0 * G * D);
  const double eta = params.eta ? *params.eta : ons_rate(G, D, lambda);

  QonsState state = QonsState::init(k, eta, D);
  result.log_qdet_initial = log_qdet(state.tracker.matrix);
  for (std::size_t t = 0; t < series.size(); ++t) {
    const SeriesWindow w{&series, t, k};
    record(static_cast<long>(t) + 1, qons_step(state, w, series[t], set));
  }
  result.final_gamma = state.gamma;
  result.logdet_lhs = state.logdet_lhs;
  result.log_qdet_final = log_qdet(state.tracker.matrix);
  return result;
}

void export_trace_csv(std::ostream& out, int run, const std::string& algo, const Trace& trace) {
  char buf[96];
  for (const TraceStep& s : trace) {
    std::snprintf(buf, sizeof buf, "%d,%s,%ld,%.17g,%.17g\n", run, algo.c_str(), s.t, s.loss, s.avg_mse);
    out << buf;
  }
}

}  // namespace quarma
