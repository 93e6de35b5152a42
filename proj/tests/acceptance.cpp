// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criteria 6, 7 and 9 share one reference Monte-Carlo run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stap/abfa.hpp"
#include "stap/baselines.hpp"
#include "stap/cli.hpp"
#include "stap/experiment.hpp"
#include "stap/metrics.hpp"
#include "stap/scene.hpp"

using namespace stap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, spec, a);
  return buf;
}

std::string fmt(const char* spec, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, spec, a, b);
  return buf;
}

double rel(const CVector& a, const CVector& b) { return (a - b).norm() / b.norm(); }

// --- 1 -----------------------------------------------------------------------

Outcome complexity_regression() {
  std::ostringstream out, err;
  const int code = cli_main({"complexity", "--M", "64", "--D", "4", "--B", "16"}, out, err);
  const std::string text = out.str();
  auto value_of = [&](const std::string& name) -> long long {
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
      std::istringstream ls(line);
      std::string label;
      long long v = -1;
      if (ls >> label >> v && label == name) return v;
    }
    return -1;
  };
  struct Row {
    const char* name;
    long long expected;
  };
  bool ok = code == 0;
  std::string detail;
  for (const Row& r : {Row{"MSWF-SG", 21380}, Row{"MSWF-RLS", 21456}, Row{"AVF", 66822}, Row{"ABFA-RLS", 4316},
                       Row{"ABFA-SG", 4238}}) {
    const long long got = value_of(r.name);
    ok = ok && got == r.expected;
    detail += std::string(r.name) + "=" + std::to_string(got) + " ";
  }
  const bool noted = text.find("4233") != std::string::npos;
  ok = ok && noted;
  detail += noted ? "(4233 discrepancy noted)" : "(4233 discrepancy NOT noted)";
  return {ok, detail};
}

// --- 2 -----------------------------------------------------------------------

Outcome blocking_and_distortionless() {
  std::mt19937_64 rng(2024);
  const int m = 64;
  const BasisBank bank(m, 4, 16);
  std::uniform_int_distribution<int> pick(0, bank.num_sets() - 1);
  double worst_block = 0.0, worst_dist = 0.0;
  for (int k = 0; k < 1000; ++k) {
    SteeringVector s;
    s.entries = oracle::random_unit_vector(rng, m);
    const SlcFront front(s);
    const CVector r = oracle::random_vector(rng, m, 1.0 + 10.0 * k / 1000.0);
    worst_block = std::max(worst_block, std::abs(s.entries.dot(front.block(r))) / r.norm());
    const CVector w = effective_full_weight(front, bank, oracle::random_vector(rng, 4), pick(rng));
    worst_dist = std::max(worst_dist, std::abs(w.dot(s.entries) - 1.0));
  }
  return {worst_block <= 1e-12 && worst_dist <= 1e-12,
          fmt("max |s^H block(r)|/|r| = %.2e, max |w^H s - 1| = %.2e", worst_block, worst_dist)};
}

// --- 3 -----------------------------------------------------------------------

Outcome rls_batch_oracle() {
  const RadarScenario sc;
  const CovarianceSet cov = assemble_covariance(sc);
  const SlcFront front(space_time_steering(sc, sc.target_azimuth, sc.target_normalized_doppler));
  const BasisBank bank(64, 4, 1);
  AbfaRlsState st = AbfaRlsState::init(4, 1.0, 1e-9);
  const double scale = 1.0 / std::sqrt(cov.total.trace().real() / 64.0);
  Rng rng = trial_rng(3, 0);
  std::vector<CVector> xs;
  std::vector<cdouble> ds;
  CVector r(64), rbar;
  for (int i = 0; i < 200; ++i) {
    draw_interference(cov.coloring, rng, r);
    r *= scale;
    rls_step(st, bank, front, r);
    bank.gather(0, front.block(r), rbar);
    xs.push_back(rbar);
    ds.push_back(front.main_beam(r));
  }
  const CVector batch = oracle::batch_least_squares(xs, ds, 1.0);
  const double err = rel(st.weight, batch);
  return {err <= 1e-6, fmt("relative error after 200 snapshots = %.2e", err)};
}

// --- 4 -----------------------------------------------------------------------

Outcome structural_equivalence() {
  const RadarScenario sc;
  const CovarianceSet cov = assemble_covariance(sc);
  const SteeringVector s = space_time_steering(sc, sc.target_azimuth, sc.target_normalized_doppler);
  const SlcFront front(s);
  const BasisBank bank(64, 64, 1);
  const double scale = 1.0 / std::sqrt(cov.total.trace().real() / 64.0);

  AbfaSgState sg = AbfaSgState::init(64, 0.005);
  AbfaRlsState rls = AbfaRlsState::init(64, 0.9998, 0.01);
  FullRankAdaptiveState fr_sg = FullRankAdaptiveState::sg(64, 0.005);
  FullRankAdaptiveState fr_rls = FullRankAdaptiveState::rls(64, 0.9998, 0.01);
  oracle::DenseLms lms(s.entries, 0.005);
  oracle::DenseRls dense(s.entries, 0.9998, 0.01);

  Rng rng = trial_rng(4, 0);
  CVector r(64);
  double dev_impl = 0.0, dev_lms = 0.0, dev_rls = 0.0;
  for (int i = 0; i < 100; ++i) {
    draw_interference(cov.coloring, rng, r);
    r *= scale;
    sg_step(sg, bank, front, r);
    rls_step(rls, bank, front, r);
    full_rank_adapt_step(fr_sg, front, r);
    full_rank_adapt_step(fr_rls, front, r);
    lms.step(r);
    dense.step(r);
    if (i == 0) continue;  // weights start at zero
    dev_impl = std::max({dev_impl, rel(sg.weight, fr_sg.weight()), rel(rls.weight, fr_rls.weight())});
    dev_lms = std::max(dev_lms, rel(sg.weight, lms.w));
    dev_rls = std::max(dev_rls, rel(rls.weight, dense.w));
  }
  const bool ok = dev_impl <= 1e-12 && dev_lms <= 1e-12 && dev_rls <= 1e-12;
  return {ok, fmt("max relative deviation vs full-rank filters %.2e", dev_impl) +
                  fmt(", vs dense LMS %.2e, vs dense RLS %.2e", dev_lms, dev_rls)};
}

// --- 5 -----------------------------------------------------------------------

Outcome detection_math() {
  double worst_pfa = 0.0;
  for (double pfa : {1e-1, 1e-3, 1e-6, 1e-10, 1e-14})
    worst_pfa = std::max(worst_pfa, std::abs(prob_detection(0.0, pfa_to_beta(pfa)) - pfa));

  std::vector<double> betas;
  for (int j = 0; j < 20; ++j) betas.push_back(0.5 * j);  // 0 .. 9.5
  double worst_grid = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double rho = 0.6 * i;  // 0 .. 11.4
    const auto ref = oracle::pd_trapezoid_many(rho, betas, 1000000);
    for (int j = 0; j < 20; ++j) worst_grid = std::max(worst_grid, std::abs(prob_detection(rho, betas[j]) - ref[j]));
  }

  const double beta = pfa_to_beta(1e-10);
  // sqrt(-2 ln 1e-10) = sqrt(20 ln 10) evaluated independently.
  const double expected = std::sqrt(20.0 * std::log(10.0));
  const bool beta_ok = std::abs(beta - 6.7861404) <= 1e-4 && std::abs(beta - expected) <= 1e-12;
  const bool ok = worst_pfa <= 1e-12 && worst_grid <= 1e-7 && beta_ok;
  return {ok, fmt("max |P_D(0,b) - P_FA| = %.2e", worst_pfa) + fmt(", max grid error vs 1e6-point oracle %.2e", worst_grid) +
                  fmt(", beta(1e-10) = %.7f (quoted 6.78656, off by %.1e)", beta, 6.78656 - beta)};
}

// --- 6, 7, 9 -----------------------------------------------------------------

struct ReferenceRuns {
  RunResult single;
  std::filesystem::path dir_single, dir_multi;
  double seconds_single = 0.0;
};

std::optional<ReferenceRuns> reference_runs;
std::string reference_error;

const ReferenceRuns* reference() {
  if (reference_runs || !reference_error.empty()) return reference_runs ? &*reference_runs : nullptr;
  try {
    ReferenceRuns runs;
    ExperimentConfig cfg = ExperimentConfig::reference();
    const auto base = std::filesystem::temp_directory_path() / "stap_acceptance";
    std::filesystem::remove_all(base);
    runs.dir_single = base / "threads1";
    runs.dir_multi = base / "threads2";
    cfg.threads = 1;
    runs.single = run_experiment(cfg);
    runs.seconds_single = runs.single.wall_seconds;
    emit_csv(runs.single, runs.dir_single);
    cfg.threads = 2;
    emit_csv(run_experiment(cfg), runs.dir_multi);
    reference_runs = std::move(runs);
  } catch (const std::exception& e) {
    reference_error = e.what();
    return nullptr;
  }
  return &*reference_runs;
}

Outcome convergence_ordering() {
  const ReferenceRuns* runs = reference();
  if (!runs) return {false, "reference run failed: " + reference_error};
  const RunResult& res = runs->single;
  const double opt = res.optimum_sinr_db;
  const double rls = res.at("abfa-rls").final_mean_sinr_db;
  const double sg = res.at("abfa-sg").final_mean_sinr_db;
  const double fr = res.at("full-rank-sg").final_mean_sinr_db;

  const bool a = rls >= opt - 3.0;
  const bool b = rls > sg && sg > fr;
  int reach = -1;
  const auto& sg_curve = res.at("abfa-sg").mean_sinr_db;
  for (std::size_t i = 0; i < sg_curve.size(); ++i) {
    if (sg_curve[i] >= fr) {
      reach = static_cast<int>(i) + 1;
      break;
    }
  }
  const bool c = reach > 0 && reach <= 300;

  std::string detail = fmt("optimum %.2f dB; L=1000 means: abfa-rls %.2f", opt, rls) +
                       fmt(", abfa-sg %.2f, full-rank-sg %.2f dB", sg, fr);
  detail += std::string("; (a) within 3 dB: ") + (a ? "yes" : "no") + fmt(" (gap %.2f dB)", opt - rls);
  detail += std::string("; (b) ordering: ") + (b ? "yes" : "no");
  detail += std::string("; (c) abfa-sg reaches full-rank-sg: ") +
            (reach > 0 ? "at snapshot " + std::to_string(reach) : std::string("never"));
  detail += fmt("; run time %.1f s", runs->seconds_single);
  return {a && b && c, detail};
}

Outcome detection_ordering() {
  const ReferenceRuns* runs = reference();
  if (!runs) return {false, "reference run failed: " + reference_error};
  const RunResult& res = runs->single;

  bool monotone = true;
  for (const auto& alg : res.algorithms)
    for (std::size_t k = 1; k < alg.pd.size(); ++k) monotone = monotone && alg.pd[k] >= alg.pd[k - 1] - 1e-12;

  int violations = 0, compared = 0;
  std::string first;
  for (const char* abfa : {"abfa-rls", "abfa-sg"}) {
    for (const char* other : {"mswf", "full-rank-sg", "full-rank-rls"}) {
      const auto& x = res.at(abfa);
      const auto& y = res.at(other);
      for (std::size_t k = 0; k < x.pd.size(); ++k) {
        ++compared;
        // Floor for points where both curves sit at 0 or 1 with zero spread.
        const double noise = std::max(2.0 * std::hypot(x.pd_stderr[k], y.pd_stderr[k]), 1e-9);
        if (y.pd[k] - x.pd[k] > noise) {
          if (violations == 0)
            first = std::string(abfa) + " < " + other + fmt(" at %.1f dB (%.3g", res.pd_grid_db[k], x.pd[k]) +
                    fmt(" vs %.3g)", y.pd[k]);
          ++violations;
        }
      }
    }
  }
  std::string detail = std::string("monotone: ") + (monotone ? "yes" : "no") + "; significant ordering violations " +
                       std::to_string(violations) + "/" + std::to_string(compared);
  if (violations) detail += ", first: " + first;
  return {monotone && violations == 0, detail};
}

Outcome scene_statistics() {
  const RadarScenario sc;
  const CovarianceSet cov = assemble_covariance(sc);
  Rng rng = trial_rng(8, 0);
  CMatrix acc = CMatrix::Zero(64, 64);
  CVector r(64);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    draw_interference(cov.coloring, rng, r);
    acc.selfadjointView<Eigen::Lower>().rankUpdate(r, 1.0);
  }
  const CMatrix sample = CMatrix(acc.selfadjointView<Eigen::Lower>()) / static_cast<double>(draws);
  const double err = (sample - cov.total).norm() / cov.total.norm();

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov.clutter, Eigen::EigenvaluesOnly);
  const auto count = (eig.eigenvalues().array() > sc.noise_power).count();
  // Brennan: N + (J - 1) * beta with beta = 2 v T / d = 1 for this geometry.
  const double brennan = sc.num_elements + (sc.num_pulses - 1) * sc.clutter_ridge_slope();
  const bool ok = err <= 0.05 && std::abs(count - std::round(brennan)) <= 3;
  return {ok, fmt("relative Frobenius error %.4f", err) + fmt(", clutter eigenvalues above noise %.0f (rule %.2f)",
                                                                static_cast<double>(count), brennan)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const ReferenceRuns* runs = reference();
  if (!runs) return {false, "reference run failed: " + reference_error};
  bool same = true;
  std::string detail = "threads 1 vs 2:";
  for (const char* f : {"sinr.csv", "sinr_normalized.csv", "pd.csv"}) {
    const std::string a = slurp(runs->dir_single / f);
    const bool eq = !a.empty() && a == slurp(runs->dir_multi / f);
    same = same && eq;
    detail += std::string(" ") + f + (eq ? " identical" : " DIFFERS");
  }
  return {same, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "complexity regression", complexity_regression},
      {2, "blocking and distortionless invariants", blocking_and_distortionless},
      {3, "RLS vs batch least squares", rls_batch_oracle},
      {4, "structural equivalence with full-rank filters", structural_equivalence},
      {5, "detection math", detection_math},
      {6, "convergence: accuracy, ordering, speed", convergence_ordering},
      {7, "detection curves: monotone and ordered", detection_ordering},
      {8, "scene statistics", scene_statistics},
      {9, "determinism across thread counts", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
