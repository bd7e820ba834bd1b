// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "quarma/signal_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace quarma {

namespace {
constexpr double kDivergenceGuard = 1e6;
}

void QarmaSpec::validate() const {
  if (p < 1) throw InvalidParameterError("QarmaSpec: p must be >= 1");
  if (q < 0) throw InvalidParameterError("QarmaSpec: q must be >= 0");
  if (static_cast<int>(alpha.size()) != p) throw InvalidParameterError("QarmaSpec: alpha length != p");
  if (static_cast<int>(beta.size()) != q) throw InvalidParameterError("QarmaSpec: beta length != q");
}

GeneratedSeries generate_qarma(const QarmaSpec& spec, const NoiseSpec& noise, long T, long burn_in) {
  spec.validate();
  if (T < 1) throw InvalidParameterError("generate_qarma: T must be >= 1");
  if (burn_in < 0) throw InvalidParameterError("generate_qarma: burn_in must be >= 0");
  if (noise.param < 0.0) throw InvalidParameterError("generate_qarma: noise parameter must be >= 0");

  const long total = T + burn_in;
  QuatVector x(static_cast<std::size_t>(total));
  QuatVector eps(static_cast<std::size_t>(total));

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.param);
  std::uniform_real_distribution<double> unif(-noise.param, noise.param);
  auto draw = [&]() -> double { return noise.law == NoiseLaw::gaussian ? gauss(rng) : unif(rng); };

  for (long t = 0; t < total; ++t) {
    // Component draw order (a, b, c, d) is part of the determinism contract.
    const double a = draw();
    const double b = draw();
    const double c = draw();
    const double d = draw();
    eps[t] = Quat{a, b, c, d};

    Quat acc = eps[t];
    for (int i = 1; i <= spec.p; ++i)
      if (t - i >= 0) acc += spec.alpha[i - 1] * x[t - i];
    for (int i = 1; i <= spec.q; ++i)
      if (t - i >= 0) acc += spec.beta[i - 1] * eps[t - i];
    x[t] = acc;
    if (norm2(acc) > kDivergenceGuard * kDivergenceGuard)
      throw DivergenceError("generate_qarma: |x_t| exceeded 1e6; the model is unstable");
  }

  GeneratedSeries out;
  out.x.assign(x.begin() + burn_in, x.end());
  out.eps.assign(eps.begin() + burn_in, eps.end());
  return out;
}

Quat qar_predict(const QuatVector& gamma, const SeriesWindow& window) {
  if (static_cast<int>(gamma.size()) != window.len) throw DimensionError("qar_predict: window length mismatch");
  Quat acc;
  for (int i = 1; i <= window.len; ++i) acc += gamma[i - 1] * window.lag(i);
  return acc;
}

QuatVector ghr_gradient(const QuatVector& gamma, const SeriesWindow& window, const Quat& x_t) {
  const Quat e = x_t - qar_predict(gamma, window);
  QuatVector g(gamma.size());
  for (int i = 1; i <= window.len; ++i) g[i - 1] = -0.5 * (e * conj(window.lag(i)));
  return g;
}

AugmentedVector augmented_gradient(const QuatVector& g) {
  const std::size_t n = g.size();
  QuatVector flat(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    flat[i] = g[i];
    flat[n + i] = involution(g[i], Axis::i);
    flat[2 * n + i] = involution(g[i], Axis::j);
    flat[3 * n + i] = involution(g[i], Axis::k);
  }
  return AugmentedVector{std::move(flat)};
}

namespace {

// DP over (time, truncation depth). Depth mu depends on depths mu - i for the
// q lagged beta terms, so filling mu in ascending order suffices.
QuatVector truncated_dp(const QarmaSpec& spec, const QuatVector& series, std::size_t upto, int m) {
  // table[mu][t] for mu = 0..m; mu = 0 row aliases the series (x_t^0 = x_t).
  std::vector<QuatVector> table(static_cast<std::size_t>(m) + 1);
  table[0].assign(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(upto + 1));
  auto at_depth = [&](int mu, long t) -> Quat {
    if (t < 0) return Quat{};  // zero padding before the series start
    if (mu <= 0) return series[static_cast<std::size_t>(t)];
    return table[static_cast<std::size_t>(mu)][static_cast<std::size_t>(t)];
  };
  for (int mu = 1; mu <= m; ++mu) {
    table[mu].resize(upto + 1);
    for (long t = 0; t <= static_cast<long>(upto); ++t) {
      Quat acc;
      for (int i = 1; i <= spec.p; ++i) acc += spec.alpha[i - 1] * ((t - i >= 0) ? series[t - i] : Quat{});
      for (int i = 1; i <= spec.q; ++i) {
        const Quat xi = (t - i >= 0) ? series[t - i] : Quat{};
        acc += spec.beta[i - 1] * (xi - at_depth(mu - i, t - i));
      }
      table[mu][static_cast<std::size_t>(t)] = acc;
    }
  }
  return table[static_cast<std::size_t>(m)];
}

}  // namespace

Quat truncated_qar_predict(const QarmaSpec& spec, const QuatVector& series, std::size_t t, int m) {
  spec.validate();
  if (t >= series.size()) throw DimensionError("truncated_qar_predict: t out of range");
  if (m <= 0) return series[t];
  return truncated_dp(spec, series, t, m)[t];
}

QuatVector truncated_qar_series(const QarmaSpec& spec, const QuatVector& series, int m) {
  spec.validate();
  if (series.empty()) return {};
  if (m <= 0) return series;
  return truncated_dp(spec, series, series.size() - 1, m);
}

void export_series_csv(const std::string& path, const QuatVector& x, const QuatVector* eps) {
  if (eps && eps->size() != x.size()) throw DimensionError("export_series_csv: eps length mismatch");
  std::ofstream out(path);
  if (!out) throw Error("export_series_csv: cannot open " + path);
  out << (eps ? "t,x_a,x_b,x_c,x_d,eps_a,eps_b,eps_c,eps_d\n" : "t,x_a,x_b,x_c,x_d\n");
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out << buf;
  };
  for (std::size_t t = 0; t < x.size(); ++t) {
    out << t;
    put(x[t].a);
    put(x[t].b);
    put(x[t].c);
    put(x[t].d);
    if (eps) {
      put((*eps)[t].a);
      put((*eps)[t].b);
      put((*eps)[t].c);
      put((*eps)[t].d);
    }
    out << '\n';
  }
}

GeneratedSeries import_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("import_series_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("import_series_csv: empty file");
  const bool has_eps = line.find("eps_a") != std::string::npos;

  GeneratedSeries out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    const std::size_t want = has_eps ? 9 : 5;
    if (vals.size() != want) throw Error("import_series_csv: malformed row: " + line);
    out.x.push_back(Quat{vals[1], vals[2], vals[3], vals[4]});
    if (has_eps) out.eps.push_back(Quat{vals[5], vals[6], vals[7], vals[8]});
  }
  return out;
}

}  // namespace quarma
