#include <benchmark/benchmark.h>

#include "stap/abfa.hpp"
#include "stap/baselines.hpp"
#include "stap/metrics.hpp"
#include "stap/scene.hpp"

using namespace stap;

namespace {

struct Fixture {
  RadarScenario scenario;
  CovarianceSet cov = assemble_covariance(scenario);
  SlcFront front{space_time_steering(scenario, scenario.target_azimuth, scenario.target_normalized_doppler)};
  std::vector<CVector> data;

  Fixture() {
    Rng rng = trial_rng(1, 0);
    const double scale = 1.0 / std::sqrt(cov.total.trace().real() / cov.dimension());
    data.resize(1024);
    for (auto& r : data) {
      draw_interference(cov.coloring, rng, r);
      r *= scale;
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_AbfaSgStep(benchmark::State& state) {
  const Fixture& f = fixture();
  const BasisBank bank(64, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  AbfaSgState st = AbfaSgState::init(bank.rank(), 0.005);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sg_step(st, bank, f.front, f.data[i++ & 1023]));
  }
}
BENCHMARK(BM_AbfaSgStep)->Args({4, 16})->Args({4, 4})->Args({8, 8});

void BM_AbfaRlsStep(benchmark::State& state) {
  const Fixture& f = fixture();
  const BasisBank bank(64, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  AbfaRlsState st = AbfaRlsState::init(bank.rank(), 0.9998);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rls_step(st, bank, f.front, f.data[i++ & 1023]));
  }
}
BENCHMARK(BM_AbfaRlsStep)->Args({4, 16})->Args({4, 4})->Args({8, 8});

void BM_FullRankSgStep(benchmark::State& state) {
  const Fixture& f = fixture();
  FullRankAdaptiveState st = FullRankAdaptiveState::sg(64, 0.005);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(full_rank_adapt_step(st, f.front, f.data[i++ & 1023]));
}
BENCHMARK(BM_FullRankSgStep);

void BM_FullRankRlsStep(benchmark::State& state) {
  const Fixture& f = fixture();
  FullRankAdaptiveState st = FullRankAdaptiveState::rls(64, 0.9998);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(full_rank_adapt_step(st, f.front, f.data[i++ & 1023]));
}
BENCHMARK(BM_FullRankRlsStep);

void BM_MswfTrain(benchmark::State& state) {
  const Fixture& f = fixture();
  SampleStatistics stats(64);
  for (const auto& r : f.data) stats.accumulate(r);
  const CMatrix cov = stats.covariance();
  for (auto _ : state) benchmark::DoNotOptimize(mswf_weight(mswf_train(cov, f.front.steering(), 4)));
}
BENCHMARK(BM_MswfTrain);

void BM_DrawInterference(benchmark::State& state) {
  const Fixture& f = fixture();
  Rng rng = trial_rng(2, 0);
  CVector r(64);
  for (auto _ : state) {
    draw_interference(f.cov.coloring, rng, r);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_DrawInterference);

void BM_OutputSinr(benchmark::State& state) {
  const Fixture& f = fixture();
  const CVector w = f.front.steering().entries;
  for (auto _ : state) benchmark::DoNotOptimize(output_sinr(w, f.cov.total, f.front.steering(), 64.0));
}
BENCHMARK(BM_OutputSinr);

void BM_ProbDetection(benchmark::State& state) {
  const double beta = pfa_to_beta(1e-10);
  const double rho = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(prob_detection(rho, beta));
}
BENCHMARK(BM_ProbDetection)->Arg(0)->Arg(68)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
