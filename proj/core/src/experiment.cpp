#include "stap/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace stap {

namespace {

class AbfaSgRunner final : public FilterRunner {
 public:
  AbfaSgRunner(const AlgorithmSpec& spec, const SlcFront& front, double guard)
      : front_(front), bank_(front.dimension(), spec.rank, spec.sets), state_(AbfaSgState::init(spec.rank, spec.step_size)), guard_(guard) {}

  void step(const CVector& r) override { sg_step(state_, bank_, front_, r, guard_); }
  CVector weight() const override { return effective_full_weight(front_, bank_, state_.weight, state_.last_branch); }

 private:
  const SlcFront& front_;
  BasisBank bank_;
  AbfaSgState state_;
  double guard_;
};

class AbfaRlsRunner final : public FilterRunner {
 public:
  AbfaRlsRunner(const AlgorithmSpec& spec, const SlcFront& front, double guard)
      : front_(front),
        bank_(front.dimension(), spec.rank, spec.sets),
        state_(AbfaRlsState::init(spec.rank, spec.forgetting, spec.delta)),
        guard_(guard) {}

  void step(const CVector& r) override { rls_step(state_, bank_, front_, r, guard_); }
  CVector weight() const override { return effective_full_weight(front_, bank_, state_.weight, state_.last_branch); }

 private:
  const SlcFront& front_;
  BasisBank bank_;
  AbfaRlsState state_;
  double guard_;
};

class FullRankRunner final : public FilterRunner {
 public:
  FullRankRunner(FullRankAdaptiveState state, const SlcFront& front, double guard)
      : front_(front), state_(std::move(state)), guard_(guard) {}

  void step(const CVector& r) override { full_rank_adapt_step(state_, front_, r, guard_); }
  CVector weight() const override { return full_rank_effective_weight(state_, front_); }

 private:
  const SlcFront& front_;
  FullRankAdaptiveState state_;
  double guard_;
};

// SMI, MSWF and AVF: accumulate the sample covariance and retrain every
// `retrain_interval` snapshots once enough samples exist. Until then the
// weight is the matched filter.
class BatchRunner final : public FilterRunner {
 public:
  BatchRunner(const AlgorithmSpec& spec, const SlcFront& front)
      : spec_(spec), front_(front), stats_(static_cast<int>(front.dimension())), weight_(front.steering().entries) {}

  void step(const CVector& r) override {
    stats_.accumulate(r);
    if (stats_.count() % spec_.retrain_interval == 0 && ready()) retrain();
  }
  CVector weight() const override { return weight_; }

 private:
  bool ready() const {
    switch (spec_.kind) {
      case AlgorithmKind::kSmi: return spec_.loading > 0.0 || stats_.count() >= stats_.dimension();
      default: return stats_.count() >= std::max(spec_.rank, 1);
    }
  }

  void retrain() {
    const CMatrix cov = stats_.covariance();
    const SteeringVector& s = front_.steering();
    switch (spec_.kind) {
      case AlgorithmKind::kSmi: weight_ = smi_weight(cov, spec_.loading, s); break;
      case AlgorithmKind::kMswf: weight_ = mswf_weight(mswf_train(cov, s, spec_.rank)); break;
      case AlgorithmKind::kAvf: weight_ = avf_weight(avf_train(cov, s, spec_.rank)); break;
      default: break;
    }
  }

  AlgorithmSpec spec_;
  const SlcFront& front_;
  SampleStatistics stats_;
  CVector weight_;
};

std::vector<double> pd_grid(const ExperimentConfig& cfg) {
  std::vector<double> grid;
  const int n = static_cast<int>(std::floor((cfg.pd_max_db - cfg.pd_min_db) / cfg.pd_step_db + 1e-9)) + 1;
  for (int k = 0; k < n; ++k) grid.push_back(cfg.pd_min_db + k * cfg.pd_step_db);
  return grid;
}

struct TrialOutput {
  std::vector<std::vector<double>> sinr_db;  // [algorithm][snapshot]
  std::exception_ptr error;
};

TrialOutput run_trial(const ExperimentConfig& cfg, const CovarianceSet& cov, const SlcFront& front,
                      double target_power, double input_scale, int trial) {
  TrialOutput out;
  const std::size_t n_alg = cfg.algorithms.size();
  std::vector<std::unique_ptr<FilterRunner>> runners;
  for (const auto& spec : cfg.algorithms) runners.push_back(make_runner(spec, front, cfg.divergence_guard));
  out.sinr_db.assign(n_alg, std::vector<double>(cfg.snapshot_count));

  Rng rng = trial_rng(cfg.base_seed, static_cast<std::uint64_t>(trial));
  CVector r(cov.dimension());
  for (int i = 0; i < cfg.snapshot_count; ++i) {
    draw_interference(cov.coloring, rng, r);
    r *= input_scale;
    for (std::size_t a = 0; a < n_alg; ++a) {
      try {
        runners[a]->step(r);
      } catch (const DivergenceError& e) {
        throw DivergenceError("trial " + std::to_string(trial) + ", algorithm '" + cfg.algorithms[a].label +
                              "', snapshot " + std::to_string(i + 1) + ": " + e.what());
      }
      out.sinr_db[a][i] = output_sinr(runners[a]->weight(), cov.total, front.steering(), target_power);
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_table(const std::filesystem::path& path, const std::string& first_column,
                 const std::vector<std::string>& labels, const std::vector<std::string>& keys,
                 const std::vector<std::vector<double>>& columns) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << first_column;
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  for (std::size_t row = 0; row < keys.size(); ++row) {
    os << keys[row];
    for (const auto& col : columns) os << ',' << format_double(col[row]);
    os << '\n';
  }
  if (!os) throw Error("failed writing " + path.string());
}

}  // namespace

std::unique_ptr<FilterRunner> make_runner(const AlgorithmSpec& spec, const SlcFront& front, double guard) {
  const int m = static_cast<int>(front.dimension());
  switch (spec.kind) {
    case AlgorithmKind::kAbfaSg: return std::make_unique<AbfaSgRunner>(spec, front, guard);
    case AlgorithmKind::kAbfaRls: return std::make_unique<AbfaRlsRunner>(spec, front, guard);
    case AlgorithmKind::kFullRankSg:
      return std::make_unique<FullRankRunner>(FullRankAdaptiveState::sg(m, spec.step_size), front, guard);
    case AlgorithmKind::kFullRankRls:
      return std::make_unique<FullRankRunner>(FullRankAdaptiveState::rls(m, spec.forgetting, spec.delta), front,
                                              guard);
    case AlgorithmKind::kSmi:
    case AlgorithmKind::kMswf:
    case AlgorithmKind::kAvf: return std::make_unique<BatchRunner>(spec, front);
  }
  throw std::invalid_argument("unhandled algorithm kind");
}

const AlgorithmResult& RunResult::at(const std::string& label) const {
  for (const auto& a : algorithms)
    if (a.label == label) return a;
  throw std::out_of_range("no algorithm labelled '" + label + "'");
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  const CovarianceSet cov = assemble_covariance(config.scenario);
  const SlcFront front(space_time_steering(config.scenario, config.scenario.target_azimuth,
                                           config.scenario.target_normalized_doppler));
  const double target_power = config.scenario.target_power();
  const double m = static_cast<double>(cov.dimension());
  const double input_scale = config.normalize_power ? 1.0 / std::sqrt(cov.total.trace().real() / m) : 1.0;

  RunResult result;
  result.snapshot_count = config.snapshot_count;
  result.num_trials = config.num_trials;
  result.pfa = config.pfa;
  result.optimum_sinr_db = optimum_sinr(cov.total, front.steering(), target_power);
  result.matched_filter_sinr_db = output_sinr(front.steering().entries, cov.total, front.steering(), target_power);
  result.pd_grid_db = pd_grid(config);

  std::vector<TrialOutput> trials(config.num_trials);
  int workers = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, config.num_trials);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int t = next++; t < config.num_trials; t = next++) {
      try {
        trials[t] = run_trial(config, cov, front, target_power, input_scale, t);
      } catch (...) {
        trials[t].error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  for (const auto& t : trials)
    if (t.error) std::rethrow_exception(t.error);

  const double beta = pfa_to_beta(config.pfa);
  const auto n_trials = static_cast<double>(config.num_trials);
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    AlgorithmResult ar;
    ar.label = config.algorithms[a].label;
    ar.mean_sinr_db.assign(config.snapshot_count, 0.0);
    for (const auto& t : trials) {
      for (int i = 0; i < config.snapshot_count; ++i) ar.mean_sinr_db[i] += t.sinr_db[a][i];
      ar.final_sinr_db.push_back(t.sinr_db[a].back());
    }
    for (double& v : ar.mean_sinr_db) v /= n_trials;
    ar.final_mean_sinr_db = ar.mean_sinr_db.back();

    for (double x : result.pd_grid_db) {
      double sum = 0.0, sum_sq = 0.0;
      for (double final_db : ar.final_sinr_db) {
        const double loss_db = final_db - result.optimum_sinr_db;
        const double pd = prob_detection(std::sqrt(db_to_linear(x + loss_db)), beta);
        sum += pd;
        sum_sq += pd * pd;
      }
      const double mean = sum / n_trials;
      const double var = config.num_trials > 1 ? std::max(0.0, (sum_sq - n_trials * mean * mean) / (n_trials - 1.0)) : 0.0;
      ar.pd.push_back(mean);
      ar.pd_stderr.push_back(std::sqrt(var / n_trials));
    }
    result.algorithms.push_back(std::move(ar));
  }

  int rank = 4, sets = 16;
  for (const auto& spec : config.algorithms) {
    if (spec.kind == AlgorithmKind::kAbfaSg || spec.kind == AlgorithmKind::kAbfaRls) {
      rank = spec.rank;
      sets = spec.sets;
      break;
    }
  }
  result.complexity = complexity_table(config.scenario.full_dimension(), rank, sets);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

void emit_csv(const RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<std::string> labels;
  std::vector<std::vector<double>> sinr, sinr_norm, pd;
  for (const auto& a : result.algorithms) {
    labels.push_back(a.label);
    sinr.push_back(a.mean_sinr_db);
    std::vector<double> norm(a.mean_sinr_db);
    for (double& v : norm) v -= result.optimum_sinr_db;
    sinr_norm.push_back(std::move(norm));
    pd.push_back(a.pd);
  }
  std::vector<std::string> snapshot_keys;
  if (!result.algorithms.empty())
    for (int i = 1; i <= result.snapshot_count; ++i) snapshot_keys.push_back(std::to_string(i));
  std::vector<std::string> grid_keys;
  if (!result.algorithms.empty())
    for (double x : result.pd_grid_db) grid_keys.push_back(format_double(x));

  write_table(dir / "sinr.csv", "snapshot_index", labels, snapshot_keys, sinr);
  write_table(dir / "sinr_normalized.csv", "snapshot_index", labels, snapshot_keys, sinr_norm);
  write_table(dir / "pd.csv", "normalized_sinr_db", labels, grid_keys, pd);
}

void write_summary(const RunResult& result, const std::filesystem::path& path) {
  nlohmann::json j;
  j["snapshot_count"] = result.snapshot_count;
  j["num_trials"] = result.num_trials;
  j["pfa"] = result.pfa;
  j["optimum_sinr_db"] = result.optimum_sinr_db;
  j["matched_filter_sinr_db"] = result.matched_filter_sinr_db;
  j["wall_seconds"] = result.wall_seconds;
  for (const auto& a : result.algorithms) {
    j["algorithms"].push_back({{"label", a.label},
                               {"final_mean_sinr_db", a.final_mean_sinr_db},
                               {"final_mean_loss_db", a.final_mean_sinr_db - result.optimum_sinr_db}});
  }
  for (const auto& c : result.complexity) {
    nlohmann::json row{{"algorithm", c.algorithm}, {"M", c.M}, {"D", c.D}, {"B", c.B},
                       {"multiplications", c.multiplications}};
    if (c.quoted_value != 0) row["quoted_value"] = c.quoted_value;
    j["complexity"].push_back(row);
  }
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

}  // namespace stap
