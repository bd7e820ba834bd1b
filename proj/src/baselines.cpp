// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "quarma/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace quarma {

void left_mult_matrix(const Quat& q, double out[16]) {
  // Columns are the coordinates of q * 1, q * i, q * j, q * k.
  out[0] = q.a;  out[1] = -q.b;  out[2] = -q.c;  out[3] = -q.d;
  out[4] = q.b;  out[5] = q.a;   out[6] = -q.d;  out[7] = q.c;
  out[8] = q.c;  out[9] = q.d;   out[10] = q.a;  out[11] = -q.b;
  out[12] = q.d; out[13] = -q.c; out[14] = q.b;  out[15] = q.a;
}

namespace {

struct ResolvedRates {
  double eta_ogd_fixed = 0.0;  // 0 means schedule 1/(H t)
  double H = 0.1;
  double eta_ons = 1.0;
  double a0 = 1.0;  // real-coordinate initial metric scale, 4 eta^2 / D^2
};

ResolvedRates resolve(const HyperParams& params, const QuatVector& series, int k) {
  ResolvedRates r;
  r.H = params.H;
  r.eta_ogd_fixed = params.qogd_eta.value_or(0.0);
  double B2 = 0.0;
  for (const Quat& x : series) B2 = std::max(B2, norm2(x));
  const double D = params.D ? *params.D : 4.0 * params.c * std::sqrt(static_cast<double>(k));
  // A flat-zero series carries no gradient signal; any positive stand-in for
  // G keeps the rate chain resolvable without affecting the run.
  const double G = params.G ? *params.G : (B2 > 0.0 ? 4.0 * (1.0 + params.c * k) * B2 : 1.0);
  const double lambda = params.lambda ? *params.lambda : 1.0 / (8.0 * G * D);
  r.eta_ons = params.eta ? *params.eta : ons_rate(G, D, lambda);
  r.a0 = 4.0 * r.eta_ons * r.eta_ons / (D * D);
  return r;
}

// Plain real Sherman-Morrison pair for the baseline Newton steps.
struct RealTracker {
  std::size_t d = 0;
  std::vector<double> Ainv;

  RealTracker() = default;
  RealTracker(std::size_t dim, double scale) : d(dim), Ainv(dim * dim, 0.0) {
    for (std::size_t i = 0; i < dim; ++i) Ainv[i * dim + i] = 1.0 / scale;
  }

  // Ainv <- Ainv - (Ainv g)(Ainv g)^T / (1 + g^T Ainv g); writes the Newton
  // direction Ainv_new * g into dir.
  void update_and_direction(const std::vector<double>& g, std::vector<double>& dir) {
    std::vector<double> w(d);
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      const double* row = &Ainv[i * d];
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * g[j];
      w[i] = acc;
    }
    double q = 0.0;
    for (std::size_t i = 0; i < d; ++i) q += g[i] * w[i];
    const double inv_s = 1.0 / (1.0 + q);
    for (std::size_t i = 0; i < d; ++i) {
      const double wi = w[i] * inv_s;
      double* row = &Ainv[i * d];
      for (std::size_t j = 0; j < d; ++j) row[j] -= wi * w[j];
    }
    // A_new^{-1} g = w / (1 + q) for a rank-1 update in g itself.
    for (std::size_t i = 0; i < d; ++i) dir[i] = w[i] * inv_s;
  }
};

double component(const Quat& q, int cmp) {
  switch (cmp) {
    case 0: return q.a;
    case 1: return q.b;
    case 2: return q.c;
    default: return q.d;
  }
}

}  // namespace

RunResult run_componentwise(BaselineVariant variant, const QuatVector& series, const HyperParams& params,
                            const DecisionSet& set) {
  if (series.empty()) throw InvalidParameterError("run_componentwise: series must be non-empty");
  const int k = set.dim;
  const ResolvedRates rates = resolve(params, series, k);
  const double c = set.c;

  std::vector<std::vector<double>> w(4, std::vector<double>(k, 0.0));
  std::vector<RealTracker> trackers;
  if (variant == BaselineVariant::ons)
    for (int cmp = 0; cmp < 4; ++cmp) trackers.emplace_back(static_cast<std::size_t>(k), rates.a0);

  RunResult result;
  result.trace.reserve(series.size());
  double cum = 0.0;
  std::vector<double> lags(k), g(k), dir(k);

  for (std::size_t t = 0; t < series.size(); ++t) {
    double loss = 0.0;
    for (int cmp = 0; cmp < 4; ++cmp) {
      for (int i = 1; i <= k; ++i)
        lags[i - 1] = (static_cast<std::size_t>(i) <= t) ? component(series[t - i], cmp) : 0.0;
      double pred = 0.0;
      for (int i = 0; i < k; ++i) pred += w[cmp][i] * lags[i];
      const double e = component(series[t], cmp) - pred;
      loss += e * e;

      if (variant == BaselineVariant::ogd) {
        const double eta =
            rates.eta_ogd_fixed > 0.0 ? rates.eta_ogd_fixed : 1.0 / (rates.H * static_cast<double>(t + 1));
        for (int i = 0; i < k; ++i) w[cmp][i] += 2.0 * eta * e * lags[i];
      } else {
        for (int i = 0; i < k; ++i) g[i] = -2.0 * e * lags[i];
        trackers[cmp].update_and_direction(g, dir);
        for (int i = 0; i < k; ++i) w[cmp][i] -= rates.eta_ons * dir[i];
      }
      for (int i = 0; i < k; ++i) w[cmp][i] = std::clamp(w[cmp][i], -c, c);
    }
    cum += loss;
    result.trace.push_back(TraceStep{static_cast<long>(t) + 1, loss, cum / static_cast<double>(t + 1)});
  }

  result.final_gamma.assign(static_cast<std::size_t>(k), Quat{});
  for (int i = 0; i < k; ++i) result.final_gamma[i] = Quat{w[0][i], w[1][i], w[2][i], w[3][i]};
  return result;
}

RunResult run_multichannel(BaselineVariant variant, const QuatVector& series, const HyperParams& params,
                           const DecisionSet& set) {
  if (series.empty()) throw InvalidParameterError("run_multichannel: series must be non-empty");
  const int k = set.dim;
  const ResolvedRates rates = resolve(params, series, k);
  const double radius = 2.0 * set.c;
  const std::size_t dim = static_cast<std::size_t>(16 * k);

  std::vector<double> theta(dim, 0.0);  // k row-major 4x4 blocks
  RealTracker tracker;
  if (variant == BaselineVariant::ons) tracker = RealTracker(dim, rates.a0);

  RunResult result;
  result.trace.reserve(series.size());
  double cum = 0.0;
  std::vector<double> lags(static_cast<std::size_t>(4 * k)), g(dim), dir(dim);

  auto frobenius_project = [&](std::vector<double>& th) {
    for (int i = 0; i < k; ++i) {
      double* blk = &th[static_cast<std::size_t>(16 * i)];
      double s = 0.0;
      for (int e = 0; e < 16; ++e) s += blk[e] * blk[e];
      if (s > radius * radius) {
        const double f = radius / std::sqrt(s);
        for (int e = 0; e < 16; ++e) blk[e] *= f;
      }
    }
  };

  for (std::size_t t = 0; t < series.size(); ++t) {
    for (int i = 1; i <= k; ++i) {
      const Quat x = (static_cast<std::size_t>(i) <= t) ? series[t - i] : Quat{};
      double* l = &lags[static_cast<std::size_t>(4 * (i - 1))];
      l[0] = x.a;
      l[1] = x.b;
      l[2] = x.c;
      l[3] = x.d;
    }
    double e4[4];
    const Quat xt = series[t];
    const double xc[4] = {xt.a, xt.b, xt.c, xt.d};
    double loss = 0.0;
    for (int r = 0; r < 4; ++r) {
      double pred = 0.0;
      for (int i = 0; i < k; ++i) {
        const double* blk = &theta[static_cast<std::size_t>(16 * i + 4 * r)];
        const double* l = &lags[static_cast<std::size_t>(4 * i)];
        pred += blk[0] * l[0] + blk[1] * l[1] + blk[2] * l[2] + blk[3] * l[3];
      }
      e4[r] = xc[r] - pred;
      loss += e4[r] * e4[r];
    }

    if (variant == BaselineVariant::ogd) {
      const double eta =
          rates.eta_ogd_fixed > 0.0 ? rates.eta_ogd_fixed : 1.0 / (rates.H * static_cast<double>(t + 1));
      for (int i = 0; i < k; ++i)
        for (int r = 0; r < 4; ++r)
          for (int col = 0; col < 4; ++col)
            theta[static_cast<std::size_t>(16 * i + 4 * r + col)] +=
                2.0 * eta * e4[r] * lags[static_cast<std::size_t>(4 * i + col)];
    } else {
      for (int i = 0; i < k; ++i)
        for (int r = 0; r < 4; ++r)
          for (int col = 0; col < 4; ++col)
            g[static_cast<std::size_t>(16 * i + 4 * r + col)] =
                -2.0 * e4[r] * lags[static_cast<std::size_t>(4 * i + col)];
      tracker.update_and_direction(g, dir);
      for (std::size_t idx = 0; idx < dim; ++idx) theta[idx] -= rates.eta_ons * dir[idx];
    }
    frobenius_project(theta);

    cum += loss;
    result.trace.push_back(TraceStep{static_cast<long>(t) + 1, loss, cum / static_cast<double>(t + 1)});
  }
  return result;
}

}  // namespace quarma
