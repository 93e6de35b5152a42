#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "stap/abfa.hpp"
#include "stap/baselines.hpp"
#include "stap/config.hpp"
#include "stap/metrics.hpp"
#include "stap/scene.hpp"

namespace stap {

/// One configured filter driven snapshot by snapshot. Implementations own
/// all mutable state, so one runner per trial.
class FilterRunner {
 public:
  virtual ~FilterRunner() = default;
  virtual void step(const CVector& r) = 0;
  /// Full-dimension weight whose output SINR is recorded after each step.
  virtual CVector weight() const = 0;
};

std::unique_ptr<FilterRunner> make_runner(const AlgorithmSpec& spec, const SlcFront& front, double guard);

struct AlgorithmResult {
  std::string label;
  std::vector<double> mean_sinr_db;   // length L, averaged over trials in dB
  std::vector<double> final_sinr_db;  // per trial, after the last snapshot
  std::vector<double> pd;             // on RunResult::pd_grid_db
  std::vector<double> pd_stderr;
  double final_mean_sinr_db = 0.0;
};

struct RunResult {
  int snapshot_count = 0;
  int num_trials = 0;
  double pfa = 0.0;
  double optimum_sinr_db = 0.0;
  double matched_filter_sinr_db = 0.0;
  // Normalized SINR axis: what the clairvoyant optimum filter would reach as
  // the target power is swept. Each algorithm's curve shifts by its own loss.
  std::vector<double> pd_grid_db;
  std::vector<AlgorithmResult> algorithms;
  std::vector<ComplexityReport> complexity;
  double wall_seconds = 0.0;

  const AlgorithmResult& at(const std::string& label) const;
};

/// Seeded Monte-Carlo run: per trial an independent generator from
/// (base_seed, trial), L target-free snapshots streamed through every
/// configured filter, output SINR of the effective weight recorded after each
/// snapshot against the true covariance. Results do not depend on the thread
/// count. Filter divergence is rethrown with trial and algorithm context.
RunResult run_experiment(const ExperimentConfig& config);

/// Writes sinr.csv, sinr_normalized.csv (relative to the optimum) and pd.csv
/// into `dir`, creating it if needed.
void emit_csv(const RunResult& result, const std::filesystem::path& dir);

/// summary.json: optimum, per-algorithm final SINR, complexity table.
void write_summary(const RunResult& result, const std::filesystem::path& path);

}  // namespace stap
