// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quarma/quat_vector.hpp"

namespace quarma {

// Strictly linear qARMA(p, q) model: x_t = sum alpha_i x_{t-i}
//                                        + sum beta_i eps_{t-i} + eps_t,
// all coefficients multiplying from the left (the order is a contract; the
// Hamilton product does not commute).
struct QarmaSpec {
  int p = 1;
  int q = 0;
  QuatVector alpha;
  QuatVector beta;

  void validate() const;
};

enum class NoiseLaw { gaussian, uniform };

// Four independent identically distributed real components per draw.
// gaussian: per-component std-dev sigma, E|eps|^2 = 4 sigma^2.
// uniform: per-component half-width h on [-h, h], E|eps|^2 = 4 h^2 / 3.
struct NoiseSpec {
  NoiseLaw law = NoiseLaw::gaussian;
  double param = 0.3;
  std::uint64_t seed = 0;
};

struct GeneratedSeries {
  QuatVector x;
  QuatVector eps;
};

// Runs the recursion for burn_in + T steps from zero initial conditions and
// returns the last T observations with their aligned noises. Deterministic
// given the seed. Throws DivergenceError if any |x_t| exceeds 1e6.
GeneratedSeries generate_qarma(const QarmaSpec& spec, const NoiseSpec& noise, long T, long burn_in);

// Read-only autoregressive window over a series: lag(1) is the most recent
// observation before index t, and lags reaching before the start of the
// series are zero (warm-up zero padding).
struct SeriesWindow {
  const QuatVector* series = nullptr;
  std::size_t t = 0;  // index being predicted
  int len = 0;

  Quat lag(int i) const {
    return (static_cast<std::size_t>(i) <= t) ? (*series)[t - static_cast<std::size_t>(i)] : Quat{};
  }
};

// sum_{i=1..len} gamma_i * x_{t-i}, coefficients on the left.
Quat qar_predict(const QuatVector& gamma, const SeriesWindow& window);

inline double squared_loss(const Quat& x, const Quat& xhat) { return norm2(x - xhat); }

// Gradient of the squared loss with respect to the conjugate coefficients,
// component i: -(1/2) * e * conj(x_{t-i}) with e the prediction error. The
// closed form is pinned against a finite-difference oracle in the tests.
QuatVector ghr_gradient(const QuatVector& gamma, const SeriesWindow& window, const Quat& x_t);

// Stacks [g; g^i; g^j; g^k]. For real-valued losses this is the augmented
// gradient: the three upper blocks are the involutions of block 0.
AugmentedVector augmented_gradient(const QuatVector& g);

// Truncated qAR recursion:
//   x_t^m = sum alpha_i x_{t-i} + sum beta_i (x_{t-i} - x_{t-i}^{m-i}),
// with x_t^m = x_t for m <= 0 and zero padding before the series start.
// t is a zero-based series index.
Quat truncated_qar_predict(const QarmaSpec& spec, const QuatVector& series, std::size_t t, int m);

// All of x_t^m for t = 0..len-1 in one dynamic-programming pass.
QuatVector truncated_qar_series(const QarmaSpec& spec, const QuatVector& series, int m);

// CSV interchange, columns t, x_a, x_b, x_c, x_d and optionally
// eps_a..eps_d. One row per step, header included.
void export_series_csv(const std::string& path, const QuatVector& x, const QuatVector* eps = nullptr);
GeneratedSeries import_series_csv(const std::string& path);

}  // namespace quarma
