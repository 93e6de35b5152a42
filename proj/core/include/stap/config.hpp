#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stap/scene.hpp"

namespace stap {

/// Flat `key = value` file. Lines starting with '#' or ';' are comments.
/// A `[name]` header opens a section; sections may repeat and keep their
/// order. Keys before the first header are global.
struct KeyValueFile {
  struct Section {
    std::string name;
    std::map<std::string, std::string> values;
    int line = 0;
  };
  std::map<std::string, std::string> globals;
  std::vector<Section> sections;
};

KeyValueFile parse_key_value(std::string_view text);
KeyValueFile read_key_value_file(const std::filesystem::path& path);

enum class AlgorithmKind { kAbfaSg, kAbfaRls, kFullRankSg, kFullRankRls, kSmi, kMswf, kAvf };

std::string_view algorithm_kind_name(AlgorithmKind kind);
AlgorithmKind parse_algorithm_kind(std::string_view name);

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::kAbfaRls;
  std::string label;  // CSV column name; defaults to the kind name
  double step_size = 0.005;
  double forgetting = 0.9998;
  double delta = 0.01;
  double loading = 0.0;
  int rank = 4;  // D
  int sets = 16;  // B
  // Batch baselines (SMI, MSWF, AVF) retrain every this many snapshots and
  // hold their weight in between.
  int retrain_interval = 10;

  void validate(int full_dimension) const;
};

struct ExperimentConfig {
  RadarScenario scenario;
  std::vector<AlgorithmSpec> algorithms;
  int num_trials = 100;
  std::uint64_t base_seed = 1;
  int snapshot_count = 1000;
  double pfa = 1e-10;
  std::filesystem::path output_dir = "out";
  int threads = 0;  // 0 = hardware concurrency
  // Scale snapshots to unit mean per-element power before they reach the
  // adaptive filters. SINR is always evaluated against the true covariance.
  bool normalize_power = true;
  double divergence_guard = 1e6;
  double pd_min_db = 0.0;
  double pd_max_db = 40.0;
  double pd_step_db = 0.5;

  void validate() const;

  /// Airborne scenario with M = 64, SNR 0 dB, lambda = 0.9998, mu = 0.005,
  /// L = 1000, 100 trials, D = 4, B = 16 for ABFA and rank 4 for MSWF/AVF.
  static ExperimentConfig reference();
};

/// Scenario keys are the RadarScenario field names; jammer_azimuths is a
/// comma-separated list (may be empty); cnr_db accepts -inf.
RadarScenario parse_scenario(const KeyValueFile& kv, bool allow_other_keys = false);
RadarScenario load_scenario(const std::filesystem::path& path);

ExperimentConfig parse_experiment(const KeyValueFile& kv);
ExperimentConfig load_experiment(const std::filesystem::path& path);

}  // namespace stap
