// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quarma/baselines.hpp"
#include "quarma/learners.hpp"
#include "quarma/signal_model.hpp"

namespace quarma {

// Registry of runnable algorithms, in canonical report order.
inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {"qarma-qogd", "qarma-qons", "arma-ogd-cw",
                                                 "arma-ons-cw", "arma-mogd", "arma-mons"};
  return names;
}

struct ExperimentConfig {
  QarmaSpec model;
  NoiseLaw noise_law = NoiseLaw::gaussian;
  double noise_param = 0.3;

  bool m_auto = false;
  int m = 0;  // used when m_auto is false

  long T = 10000;
  long runs = 20;
  long burn_in = 500;
  std::uint64_t base_seed = 1;

  std::vector<std::string> algorithms;
  HyperParams hyper;
  std::string out_dir = "out";

  int resolved_m() const;
  void validate() const;
};

// Strict parse: unknown keys are rejected, all invariants checked.
ExperimentConfig parse_config(const std::string& path);

// Irreducible expected squared loss of the noise: gaussian 4 sigma^2,
// uniform 4 h^2 / 3.
double theoretical_floor(const NoiseSpec& noise);

struct AlgoReport {
  std::string name;
  std::vector<double> avg_curve;  // pointwise mean over runs of the running average
  double final_avg_mse = 0.0;
  std::vector<double> per_run_final;
  // Log-determinant regret telemetry, filled for qarma-qons runs.
  std::vector<double> logdet_lhs;
  std::vector<double> logdet_rhs;
};

struct BenchmarkReport {
  int m = 0;
  long T = 0;
  long runs = 0;
  double floor = 0.0;
  std::vector<AlgoReport> algos;
  std::vector<double> run_seconds;
  double total_seconds = 0.0;
};

// Generates one series per run (seed = base_seed + run), feeds the identical
// series to every configured algorithm, and averages the running-MSE curves
// pointwise in run order. workers = 0 picks the hardware concurrency.
BenchmarkReport run_experiment(const ExperimentConfig& cfg, int workers = 0);

// Writes curves.csv, summary.csv and plot.svg into dir (created if needed).
void emit_outputs(const BenchmarkReport& report, const std::string& dir);

}  // namespace quarma
