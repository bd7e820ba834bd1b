// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Generates one synthetic series from an experiment config and dumps it as
// CSV, optionally with the driving noise columns. Handy for eyeballing data
// outside the benchmark loop.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "quarma/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dump a generated quaternion ARMA series as CSV"};
  std::string config_path, out_path = "series.csv";
  std::uint64_t seed = 0;
  bool with_noise = false;
  long T = 0;
  app.add_option("--config", config_path, "experiment config file")->required();
  app.add_option("--out", out_path, "output CSV path");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "seed override");
  app.add_option("--T", T, "length override");
  app.add_flag("--with-noise", with_noise, "include the driving noise columns");
  CLI11_PARSE(app, argc, argv);

  try {
    quarma::ExperimentConfig cfg = quarma::parse_config(config_path);
    const quarma::NoiseSpec noise{cfg.noise_law, cfg.noise_param, seed_opt->count() ? seed : cfg.base_seed};
    const long len = T > 0 ? T : cfg.T;
    const quarma::GeneratedSeries gen = quarma::generate_qarma(cfg.model, noise, len, cfg.burn_in);
    quarma::export_series_csv(out_path, gen.x, with_noise ? &gen.eps : nullptr);
    std::printf("wrote %ld samples to %s\n", len, out_path.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
