// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "quarma/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace quarma {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& ctx) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("config: unknown key \"" + item.key() + "\" in " + ctx);
  }
}

Quat parse_quat(const json& node, const std::string& ctx) {
  if (!node.is_string()) throw ConfigError("config: " + ctx + " must be a \"a,b,c,d\" string");
  const std::string s = node.get<std::string>();
  std::istringstream in(s);
  double v[4];
  char sep = ',';
  for (int i = 0; i < 4; ++i) {
    if (!(in >> v[i])) throw ConfigError("config: cannot parse quaternion \"" + s + "\" in " + ctx);
    if (i < 3 && (!(in >> sep) || sep != ',')) throw ConfigError("config: cannot parse quaternion \"" + s + "\" in " + ctx);
  }
  std::string rest;
  if (in >> rest) throw ConfigError("config: trailing characters in quaternion \"" + s + "\" in " + ctx);
  return Quat{v[0], v[1], v[2], v[3]};
}

double require_positive(const json& node, const char* name) {
  const double v = node.get<double>();
  if (!(v > 0.0)) throw ConfigError(std::string("config: ") + name + " must be positive");
  return v;
}

}  // namespace

int ExperimentConfig::resolved_m() const {
  if (!m_auto) return m;
  return select_m(hyper, model.q);
}

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  try {
    model.validate();
  } catch (const Error& e) {
    bad.emplace_back(e.what());
  }
  if (runs < 1) bad.emplace_back("runs must be >= 1");
  if (T < 1) bad.emplace_back("T must be >= 1");
  if (burn_in < 0) bad.emplace_back("burn_in must be >= 0");
  if (algorithms.empty()) bad.emplace_back("algorithm list must be non-empty");
  for (const std::string& a : algorithms) {
    const auto& known = known_algorithms();
    if (std::find(known.begin(), known.end(), a) == known.end()) bad.emplace_back("unknown algorithm \"" + a + "\"");
  }
  if (noise_param < 0.0) bad.emplace_back("noise parameter must be >= 0");
  if (!m_auto && m < 0) bad.emplace_back("m must be >= 0");
  if (hyper.c <= 0.0) bad.emplace_back("c must be positive");
  for (const Quat& a : model.alpha)
    if (abs(a) > hyper.c) bad.emplace_back("|alpha_i| must not exceed the decision radius c");
  if (!bad.empty()) {
    std::string msg = "config validation failed:";
    for (const std::string& b : bad) msg += "\n  - " + b;
    throw ConfigError(msg);
  }
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover a line number from the byte offset for the diagnostic.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("config: parse error in " + path + " near line " + std::to_string(line) + ": " + e.what());
  }

  try {
    check_keys(root, {"model", "noise", "m", "T", "runs", "burn_in", "base_seed", "algorithms", "hyper", "out_dir"},
               "top level");

    ExperimentConfig cfg;
    const json& model = root.at("model");
    check_keys(model, {"p", "q", "alpha", "beta"}, "model");
    cfg.model.p = model.at("p").get<int>();
    cfg.model.q = model.at("q").get<int>();
    for (const json& a : model.at("alpha")) cfg.model.alpha.push_back(parse_quat(a, "model.alpha"));
    for (const json& b : model.at("beta")) cfg.model.beta.push_back(parse_quat(b, "model.beta"));

    const json& noise = root.at("noise");
    const std::string law = noise.at("law").get<std::string>();
    if (law == "gaussian") {
      check_keys(noise, {"law", "sigma"}, "noise");
      cfg.noise_law = NoiseLaw::gaussian;
      cfg.noise_param = require_positive(noise.at("sigma"), "noise.sigma");
    } else if (law == "uniform") {
      check_keys(noise, {"law", "half_width"}, "noise");
      cfg.noise_law = NoiseLaw::uniform;
      cfg.noise_param = require_positive(noise.at("half_width"), "noise.half_width");
    } else {
      throw ConfigError("config: noise.law must be \"gaussian\" or \"uniform\"");
    }

    const json& m = root.at("m");
    if (m.is_string()) {
      if (m.get<std::string>() != "auto") throw ConfigError("config: m must be an integer or \"auto\"");
      cfg.m_auto = true;
    } else {
      cfg.m = m.get<int>();
    }

    cfg.T = root.at("T").get<long>();
    cfg.runs = root.at("runs").get<long>();
    if (root.contains("burn_in")) cfg.burn_in = root.at("burn_in").get<long>();
    if (root.contains("base_seed")) cfg.base_seed = root.at("base_seed").get<std::uint64_t>();
    for (const json& a : root.at("algorithms")) cfg.algorithms.push_back(a.get<std::string>());
    if (root.contains("out_dir")) cfg.out_dir = root.at("out_dir").get<std::string>();

    if (root.contains("hyper")) {
      const json& h = root.at("hyper");
      check_keys(h, {"c", "H", "G", "D", "lambda", "eta_qogd", "eta_qons", "lambda_max", "L", "M_max"}, "hyper");
      if (h.contains("c")) cfg.hyper.c = require_positive(h.at("c"), "hyper.c");
      if (h.contains("H")) cfg.hyper.H = require_positive(h.at("H"), "hyper.H");
      if (h.contains("G")) cfg.hyper.G = require_positive(h.at("G"), "hyper.G");
      if (h.contains("D")) cfg.hyper.D = require_positive(h.at("D"), "hyper.D");
      if (h.contains("lambda")) cfg.hyper.lambda = require_positive(h.at("lambda"), "hyper.lambda");
      if (h.contains("eta_qogd")) cfg.hyper.qogd_eta = require_positive(h.at("eta_qogd"), "hyper.eta_qogd");
      if (h.contains("eta_qons")) cfg.hyper.eta = require_positive(h.at("eta_qons"), "hyper.eta_qons");
      if (h.contains("lambda_max")) cfg.hyper.lambda_max = h.at("lambda_max").get<double>();
      if (h.contains("L")) cfg.hyper.L = require_positive(h.at("L"), "hyper.L");
      if (h.contains("M_max")) cfg.hyper.M_max = require_positive(h.at("M_max"), "hyper.M_max");
    }
    cfg.hyper.T = cfg.T;

    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

double theoretical_floor(const NoiseSpec& noise) {
  if (noise.law == NoiseLaw::gaussian) return 4.0 * noise.param * noise.param;
  return 4.0 * noise.param * noise.param / 3.0;
}

namespace {

RunResult dispatch(const std::string& algo, const QuatVector& series, const HyperParams& hp, const DecisionSet& set) {
  if (algo == "qarma-qogd") return run_learner(Algo::qogd, series, hp, set);
  if (algo == "qarma-qons") return run_learner(Algo::qons, series, hp, set);
  if (algo == "arma-ogd-cw") return run_componentwise(BaselineVariant::ogd, series, hp, set);
  if (algo == "arma-ons-cw") return run_componentwise(BaselineVariant::ons, series, hp, set);
  if (algo == "arma-mogd") return run_multichannel(BaselineVariant::ogd, series, hp, set);
  if (algo == "arma-mons") return run_multichannel(BaselineVariant::ons, series, hp, set);
  throw ConfigError("unknown algorithm \"" + algo + "\"");
}

}  // namespace

BenchmarkReport run_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();

  const int m = cfg.resolved_m();
  const int dim = cfg.model.p + m;
  const DecisionSet set{cfg.hyper.c, dim};
  const std::size_t n_algos = cfg.algorithms.size();
  const std::size_t n_runs = static_cast<std::size_t>(cfg.runs);

  // Per-run traces, gathered first, reduced afterwards in run order so the
  // report does not depend on worker scheduling.
  std::vector<std::vector<RunResult>> results(n_runs, std::vector<RunResult>(n_algos));
  std::vector<double> run_seconds(n_runs, 0.0);
  std::vector<std::exception_ptr> errors(n_runs);

  int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min<int>(n_workers, static_cast<int>(n_runs)));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= n_runs) return;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        NoiseSpec noise{cfg.noise_law, cfg.noise_param, cfg.base_seed + r};
        const GeneratedSeries gen = generate_qarma(cfg.model, noise, cfg.T, cfg.burn_in);
        for (std::size_t a = 0; a < n_algos; ++a)
          results[r][a] = dispatch(cfg.algorithms[a], gen.x, cfg.hyper, set);
      } catch (...) {
        errors[r] = std::current_exception();
      }
      run_seconds[r] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (std::size_t r = 0; r < n_runs; ++r)
    if (errors[r]) {
      try {
        std::rethrow_exception(errors[r]);
      } catch (const std::exception& e) {
        throw Error("run " + std::to_string(r) + ": " + e.what());
      }
    }

  BenchmarkReport report;
  report.m = m;
  report.T = cfg.T;
  report.runs = cfg.runs;
  report.floor = theoretical_floor(NoiseSpec{cfg.noise_law, cfg.noise_param, 0});
  report.run_seconds = run_seconds;

  for (std::size_t a = 0; a < n_algos; ++a) {
    AlgoReport ar;
    ar.name = cfg.algorithms[a];
    ar.avg_curve.assign(static_cast<std::size_t>(cfg.T), 0.0);
    for (std::size_t r = 0; r < n_runs; ++r) {
      const Trace& tr = results[r][a].trace;
      for (std::size_t t = 0; t < tr.size(); ++t) ar.avg_curve[t] += tr[t].avg_mse;
      ar.per_run_final.push_back(tr.back().avg_mse);
      if (ar.name == "qarma-qons") {
        ar.logdet_lhs.push_back(results[r][a].logdet_lhs);
        ar.logdet_rhs.push_back(0.5 * (results[r][a].log_qdet_final - results[r][a].log_qdet_initial));
      }
    }
    for (double& v : ar.avg_curve) v /= static_cast<double>(n_runs);
    ar.final_avg_mse = ar.avg_curve.back();
    report.algos.push_back(std::move(ar));
  }

  report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

void write_plot_svg(const BenchmarkReport& report, const std::string& path) {
  const double width = 860, height = 520;
  const double ml = 70, mr = 190, mt = 34, mb = 52;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double ymin = report.floor, ymax = report.floor;
  for (const AlgoReport& a : report.algos)
    for (double v : a.avg_curve) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  ymin = std::max(ymin, 1e-12);
  const double lx1 = std::log10(static_cast<double>(report.T));
  const double ly0 = std::floor(std::log10(ymin));
  const double ly1 = std::ceil(std::log10(ymax) + 1e-9);

  auto X = [&](double t) { return ml + pw * std::log10(std::max(1.0, t)) / std::max(lx1, 1e-9); };
  auto Y = [&](double v) {
    const double l = std::log10(std::max(v, 1e-12));
    return mt + ph * (1.0 - (l - ly0) / std::max(ly1 - ly0, 1e-9));
  };

  std::ofstream out(path);
  if (!out) throw Error("emit_outputs: cannot open " + path);
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << ml << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"15\">"
      << "Running average MSE (mean of " << report.runs << " runs)</text>\n";

  // Axes and decade ticks.
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"#444\"/>\n", ml,
                mt, pw, ph);
  out << buf;
  for (int e = 0; e <= static_cast<int>(lx1 + 1e-9); ++e) {
    const double x = X(std::pow(10.0, e));
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">1e%d</text>\n",
                  x, mt, x, mt + ph, x, mt + ph + 18.0, e);
    out << buf;
  }
  for (int e = static_cast<int>(ly0); e <= static_cast<int>(ly1); ++e) {
    const double y = Y(std::pow(10.0, e));
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">1e%d</text>\n",
                  ml, y, ml + pw, y, ml - 6.0, y + 4.0, e);
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">t</text>\n",
                ml + pw / 2, height - 14.0);
  out << buf;

  // Floor line.
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.2f\" x2=\"%.1f\" y2=\"%.2f\" stroke=\"#000\" stroke-dasharray=\"6 4\"/>\n",
                ml, Y(report.floor), ml + pw, Y(report.floor));
  out << buf;

  // Curves, subsampled on a log-spaced grid.
  for (std::size_t a = 0; a < report.algos.size(); ++a) {
    const std::vector<double>& curve = report.algos[a].avg_curve;
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[a % 6] << "\" stroke-width=\"1.6\" points=\"";
    long prev_t = 0;
    const int samples = 600;
    for (int s = 0; s <= samples; ++s) {
      const long t = std::max<long>(1, static_cast<long>(std::llround(std::pow(
                                           10.0, lx1 * static_cast<double>(s) / samples))));
      if (t == prev_t || t > report.T) continue;
      prev_t = t;
      std::snprintf(buf, sizeof buf, "%.1f,%.2f ", X(static_cast<double>(t)), Y(curve[static_cast<std::size_t>(t - 1)]));
      out << buf;
    }
    out << "\"/>\n";
  }

  // Legend.
  double ly = mt + 10.0;
  for (std::size_t a = 0; a < report.algos.size(); ++a) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" stroke-width=\"2\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
                  ml + pw + 12.0, ly, ml + pw + 40.0, ly, kPalette[a % 6], ml + pw + 46.0, ly + 4.0,
                  report.algos[a].name.c_str());
    out << buf;
    ly += 20.0;
  }
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#000\" stroke-dasharray=\"6 4\"/>"
                "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\">floor %.4g</text>\n",
                ml + pw + 12.0, ly, ml + pw + 40.0, ly, ml + pw + 46.0, ly + 4.0, report.floor);
  out << buf;
  out << "</svg>\n";
}

}  // namespace

void emit_outputs(const BenchmarkReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);

  {
    std::ofstream out(dir + "/curves.csv");
    if (!out) throw Error("emit_outputs: cannot open " + dir + "/curves.csv");
    out << "algo,t,avg_mse\n";
    for (const AlgoReport& a : report.algos)
      for (std::size_t t = 0; t < a.avg_curve.size(); ++t)
        out << a.name << ',' << (t + 1) << ',' << fmt(a.avg_curve[t]) << '\n';
  }
  {
    std::ofstream out(dir + "/summary.csv");
    if (!out) throw Error("emit_outputs: cannot open " + dir + "/summary.csv");
    out << "algo,final_avg_mse,floor,ratio\n";
    for (const AlgoReport& a : report.algos)
      out << a.name << ',' << fmt(a.final_avg_mse) << ',' << fmt(report.floor) << ','
          << fmt(a.final_avg_mse / report.floor) << '\n';
  }
  write_plot_svg(report, dir + "/plot.svg");
}

}  // namespace quarma
