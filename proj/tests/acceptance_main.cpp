// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate. Runs the shipped example1/example2 benchmark configs plus
// the cross-cutting numerical checks and prints one verdict line per
// criterion. Exits nonzero if any criterion fails. Usage:
//
//   acceptance <configs-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quarma/bench.hpp"
#include "quarma/quat_linalg.hpp"

#include "test_util.hpp"

using namespace quarma;

namespace {

const AlgoReport* find_algo(const BenchmarkReport& rep, const std::string& name) {
  for (const AlgoReport& a : rep.algos)
    if (a.name == name) return &a;
  return nullptr;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fmte(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

HermitianQuatMatrix random_hermitian(std::mt19937_64& rng, int n, double diag_shift) {
  HermitianQuatMatrix A(n);
  for (int i = 0; i < n; ++i) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    A.at(i, i) = Quat::real(diag_shift + std::abs(u(rng)));
    for (int j = i + 1; j < n; ++j) {
      A.at(i, j) = testutil::random_quat(rng, 0.4);
      A.at(j, i) = conj(A.at(i, j));
    }
  }
  return A;
}

HermitianQuatMatrix random_pd(std::mt19937_64& rng, int n) {
  HermitianQuatMatrix A = HermitianQuatMatrix::scaled_identity(n, 0.3);
  for (int rep = 0; rep < 2 * n; ++rep) {
    QuatVector u(static_cast<std::size_t>(n));
    for (Quat& q : u) q = testutil::random_quat(rng, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A.at(i, j) += u[static_cast<std::size_t>(i)] * conj(u[static_cast<std::size_t>(j)]);
  }
  for (int i = 0; i < n; ++i) A.at(i, i) = Quat::real(A.at(i, i).a);
  return A;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <configs-dir>\n");
    return 2;
  }
  const std::string dir = argv[1];

  int failures = 0;
  const auto gate = [&failures](int idx, const char* name, auto&& fn) {
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
      ok = false;
    }
    std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", idx, name, detail.str().c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  };

  std::optional<ExperimentConfig> cfg1, cfg2;
  try {
    cfg1 = parse_config(dir + "/example1.json");
    cfg2 = parse_config(dir + "/example2.json");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config load failed: %s\n", e.what());
  }
  std::optional<BenchmarkReport> rep1, rep2;

  gate(1, "example1 final averaged MSE in [0.360, 0.414]", [&](std::ostringstream& d) {
    if (!cfg1) {
      d << "example1.json unavailable";
      return false;
    }
    rep1 = run_experiment(*cfg1, 0);
    const AlgoReport* gd = find_algo(*rep1, "qarma-qogd");
    const AlgoReport* ns = find_algo(*rep1, "qarma-qons");
    if (!gd || !ns) {
      d << "quaternion learners missing from the report";
      return false;
    }
    const auto in_band = [](double v) { return v >= 0.36 && v <= 0.414; };
    d << "qarma-qogd " << fmt(gd->final_avg_mse) << ", qarma-qons " << fmt(ns->final_avg_mse) << ", floor "
      << fmt(rep1->floor) << ", " << fmt(rep1->total_seconds) << "s";
    return in_band(gd->final_avg_mse) && in_band(ns->final_avg_mse);
  });

  gate(2, "example2 final averaged MSE in [0.333, 0.383]", [&](std::ostringstream& d) {
    if (!cfg2) {
      d << "example2.json unavailable";
      return false;
    }
    rep2 = run_experiment(*cfg2, 0);
    const AlgoReport* gd = find_algo(*rep2, "qarma-qogd");
    const AlgoReport* ns = find_algo(*rep2, "qarma-qons");
    if (!gd || !ns) {
      d << "quaternion learners missing from the report";
      return false;
    }
    const auto in_band = [](double v) { return v >= 0.333 && v <= 0.383; };
    d << "qarma-qogd " << fmt(gd->final_avg_mse) << ", qarma-qons " << fmt(ns->final_avg_mse) << ", floor "
      << fmt(rep2->floor) << ", " << fmt(rep2->total_seconds) << "s";
    return in_band(gd->final_avg_mse) && in_band(ns->final_avg_mse);
  });

  gate(3, "componentwise baselines trail the quaternion learners on example1", [&](std::ostringstream& d) {
    if (!rep1) {
      d << "example1 benchmark unavailable";
      return false;
    }
    const AlgoReport* gd = find_algo(*rep1, "qarma-qogd");
    const AlgoReport* ns = find_algo(*rep1, "qarma-qons");
    const AlgoReport* cw_gd = find_algo(*rep1, "arma-ogd-cw");
    const AlgoReport* cw_ns = find_algo(*rep1, "arma-ons-cw");
    const AlgoReport* m_gd = find_algo(*rep1, "arma-mogd");
    const AlgoReport* m_ns = find_algo(*rep1, "arma-mons");
    if (!gd || !ns || !cw_gd || !cw_ns) {
      d << "required algorithms missing from the report";
      return false;
    }
    d << "arma-ogd-cw " << fmt(cw_gd->final_avg_mse) << " vs qarma-qogd " << fmt(gd->final_avg_mse)
      << "; arma-ons-cw " << fmt(cw_ns->final_avg_mse) << " vs qarma-qons " << fmt(ns->final_avg_mse);
    if (m_gd && m_ns)
      d << "; multichannel (reported, not gated): arma-mogd " << fmt(m_gd->final_avg_mse) << ", arma-mons "
        << fmt(m_ns->final_avg_mse);
    return cw_gd->final_avg_mse > gd->final_avg_mse && cw_ns->final_avg_mse > ns->final_avg_mse;
  });

  gate(4, "trajectory equivalence against the real-domain references", [&](std::ostringstream& d) {
    if (!cfg1) {
      d << "example1.json unavailable";
      return false;
    }
    if (!cfg1->hyper.eta || !cfg1->hyper.D) {
      d << "example1.json does not pin eta/D";
      return false;
    }
    const int k = cfg1->model.p + cfg1->resolved_m();
    const NoiseSpec noise{cfg1->noise_law, cfg1->noise_param, cfg1->base_seed};
    const QuatVector series = generate_qarma(cfg1->model, noise, 1000, cfg1->burn_in).x;
    const DecisionSet set{cfg1->hyper.c, k};

    QogdState gd = QogdState::init(k, cfg1->hyper);
    testutil::RealOgdRef gd_ref(k, cfg1->hyper.H, cfg1->hyper.qogd_eta, set.c);
    double worst_gd = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
      const SeriesWindow w{&series, t, k};
      qogd_step(gd, w, series[t], set);
      gd_ref.step(series, t, series[t]);
      const std::vector<double> got = testutil::coords_of(gd.gamma);
      for (std::size_t i = 0; i < got.size(); ++i)
        worst_gd = std::max(worst_gd, std::abs(got[i] - gd_ref.r[i]) / std::max(1.0, std::abs(gd_ref.r[i])));
    }

    QonsState ns = QonsState::init(k, *cfg1->hyper.eta, *cfg1->hyper.D);
    testutil::RealOnsRef ns_ref(k, *cfg1->hyper.eta, *cfg1->hyper.D, set.c);
    double worst_ns = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
      const SeriesWindow w{&series, t, k};
      qons_step(ns, w, series[t], set);
      ns_ref.step(series, t, series[t]);
      const std::vector<double> got = testutil::coords_of(ns.gamma);
      for (std::size_t i = 0; i < got.size(); ++i)
        worst_ns = std::max(worst_ns, std::abs(got[i] - ns_ref.r[i]) / std::max(1.0, std::abs(ns_ref.r[i])));
    }

    d << "max relative coefficient deviation over 1000 steps: qogd " << fmte(worst_gd) << " (gate 1e-08), qons "
      << fmte(worst_ns) << " (gate 1e-07)";
    return worst_gd < 1e-8 && worst_ns < 1e-7;
  });

  gate(5, "closed-form gradient vs central finite differences", [&](std::ostringstream& d) {
    std::mt19937_64 rng(271828);
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      const int k = 1 + static_cast<int>(rng() % 10);
      QuatVector series(static_cast<std::size_t>(k + 1));
      for (Quat& q : series) q = testutil::random_quat(rng, 2.0);
      QuatVector gamma(static_cast<std::size_t>(k));
      for (Quat& q : gamma) q = testutil::random_quat(rng, 1.0);
      const SeriesWindow w{&series, static_cast<std::size_t>(k), k};
      const Quat x_t = series.back();

      const std::vector<double> rg = testutil::coords_of(ghr_gradient(gamma, w, x_t));
      const std::vector<double> fd = testutil::fd_loss_gradient(gamma, w, x_t);
      for (std::size_t i = 0; i < fd.size(); ++i)
        worst = std::max(worst, std::abs(fd[i] - 4.0 * rg[i]) / std::max(1.0, std::abs(fd[i])));
    }
    d << "worst relative error " << fmte(worst) << " over 100 instances (gate 1e-06)";
    return worst < 1e-6;
  });

  gate(6, "tracked inverse, log-det inequality, determinant identities", [&](std::ostringstream& d) {
    std::mt19937_64 rng(97);

    InverseTracker tracker(40, 1.0);
    QuatVector u(40);
    for (int step = 0; step < 10000; ++step) {
      for (Quat& q : u) q = testutil::random_quat(rng, 1.0);
      tracker.rank1_update(u);
    }
    const double resid = tracker.residual();
    const bool resid_ok = resid < 1e-8;

    int runs_checked = 0, runs_ok = 0;
    for (const std::optional<BenchmarkReport>* rep : {&rep1, &rep2}) {
      if (!rep->has_value()) continue;
      const AlgoReport* ns = find_algo(**rep, "qarma-qons");
      if (!ns) continue;
      for (std::size_t r = 0; r < ns->logdet_lhs.size(); ++r) {
        ++runs_checked;
        if (ns->logdet_lhs[r] <= ns->logdet_rhs[r] + 1e-8) ++runs_ok;
      }
    }
    const bool logdet_ok = runs_checked > 0 && runs_ok == runs_checked;

    double worst_id = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      const HermitianQuatMatrix A = random_hermitian(rng, 3, 2.0);
      const HermitianQuatMatrix B = random_hermitian(rng, 3, 2.0);

      // Product of squared standard eigenvalue moduli; the complex adjoint of
      // a Hermitian matrix carries each one twice.
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(complex_adjoint(A));
      const Eigen::VectorXd ev = es.eigenvalues();
      const double prod = ev[0] * ev[0] * ev[2] * ev[2] * ev[4] * ev[4];
      const double da = qdet(A);
      worst_id = std::max(worst_id, std::abs(da - prod) / std::max(1.0, std::abs(da)));

      const double ab = qdet(matmul(A, B));
      const double ba = qdet(matmul(B, A));
      worst_id = std::max(worst_id, std::abs(ab - ba) / std::max(1.0, std::abs(ab)));

      const HermitianQuatMatrix P = random_pd(rng, 3);
      const double dp = qdet(P);
      const double dpinv = qdet(inverse_via_adjoint(P));
      worst_id = std::max(worst_id, std::abs(dpinv * dp - 1.0) / std::max(1.0, dp));
    }
    const bool ids_ok = worst_id <= 1e-10;

    d << "residual " << fmte(resid) << " after 1e4 updates at dim 40 (gate 1e-08); log-det inequality "
      << runs_ok << "/" << runs_checked << " runs; identity worst " << fmte(worst_id) << " (gate 1e-10)";
    return resid_ok && logdet_ok && ids_ok;
  });

  gate(7, "average excess loss strictly decreasing at t = 1e2, 1e3, 1e4", [&](std::ostringstream& d) {
    if (!rep1) {
      d << "example1 benchmark unavailable";
      return false;
    }
    bool ok = true;
    for (const char* name : {"qarma-qogd", "qarma-qons"}) {
      const AlgoReport* a = find_algo(*rep1, name);
      if (!a || a->avg_curve.size() < 10000) {
        d << name << " curve unavailable; ";
        ok = false;
        continue;
      }
      // The floor offset cancels in the comparison.
      const double v100 = a->avg_curve[99], v1k = a->avg_curve[999], v10k = a->avg_curve[9999];
      d << name << " " << fmt(v100) << " > " << fmt(v1k) << " > " << fmt(v10k) << "; ";
      ok = ok && v100 > v1k && v1k > v10k;
    }
    return ok;
  });

  gate(8, "quaternion algebra law suite", [&](std::ostringstream& d) {
    std::mt19937_64 rng(8128);
    double worst_norm = 0.0, worst_conj = 0.0, worst_j = 0.0;
    bool inv_ok = true, trip_ok = true;

    for (int cs = 0; cs < 1000; ++cs) {
      const Quat p = testutil::random_quat(rng, 2.0);
      const Quat q = testutil::random_quat(rng, 2.0);
      const double nn = abs(p) * abs(q);
      worst_norm = std::max(worst_norm, std::abs(abs(p * q) - nn) / std::max(1.0, nn));
      worst_conj = std::max(worst_conj, abs(conj(p * q) - conj(q) * conj(p)) / std::max(1.0, nn));
      for (Axis mu : {Axis::i, Axis::j, Axis::k})
        inv_ok = inv_ok && involution(involution(q, mu), mu) == q;
    }

    for (int cs = 0; cs < 1000; ++cs) {
      const std::size_t n = 1 + rng() % 4;
      const std::size_t dim = 4 * n;
      const std::vector<Quat> J = make_J(n);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
          Quat s;
          for (std::size_t l = 0; l < dim; ++l) s += J[i * dim + l] * conj(J[j * dim + l]);
          worst_j = std::max(worst_j, abs(s - ((i == j) ? Quat::real(4.0) : Quat{})));
        }

      RealQuadVector r(dim);
      std::uniform_real_distribution<double> ud(-2.0, 2.0);
      for (double& v : r) v = ud(rng);
      const AugmentedVector au = lift(r);
      trip_ok = trip_ok && consistency_defect(au) == 0.0 && flatten(au) == r;
    }

    d << "1000 cases each; norm-mult " << fmte(worst_norm) << ", conj anti-hom " << fmte(worst_conj)
      << " (gates 1e-12); involution self-inverse " << (inv_ok ? "exact" : "VIOLATED") << "; J J^H defect "
      << fmte(worst_j) << " (gate 1e-14); lift/flatten round trip " << (trip_ok ? "bit-exact" : "VIOLATED");
    return worst_norm <= 1e-12 && worst_conj <= 1e-12 && inv_ok && worst_j <= 1e-14 && trip_ok;
  });

  std::printf("acceptance: %d/8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
