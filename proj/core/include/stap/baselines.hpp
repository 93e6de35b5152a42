#pragma once

#include <span>
#include <variant>
#include <vector>

#include "stap/abfa.hpp"
#include "stap/scene.hpp"
#include "stap/types.hpp"

namespace stap {

/// Running sample covariance (1/L) sum r r^H of target-free snapshots.
class SampleStatistics {
 public:
  explicit SampleStatistics(int dimension);

  void accumulate(const CVector& r);
  int count() const { return count_; }
  Eigen::Index dimension() const { return sum_.rows(); }
  /// Throws NumericalError when no samples have been accumulated.
  CMatrix covariance() const;

 private:
  CMatrix sum_;  // lower triangle kept current
  int count_ = 0;
};

struct SmiState {
  SampleStatistics stats;
  double diagonal_loading = 0.0;

  explicit SmiState(int dimension, double loading = 0.0) : stats(dimension), diagonal_loading(loading) {}
};

/// (R_hat + loading I)^-1 s. Throws NumericalError when the loaded sample
/// covariance is singular (too few samples and no loading).
CVector smi_weight(const SmiState& state, const SteeringVector& steering);
CVector smi_weight(const CMatrix& sample_covariance, double loading, const SteeringVector& steering);

enum class AdaptMode { kSg, kRls };

/// Full-rank SLC filters: the ABFA recursions run with the identity bank
/// (D = M, B = 1), so both share one code path.
struct FullRankAdaptiveState {
  AdaptMode mode = AdaptMode::kSg;
  BasisBank bank;
  std::variant<AbfaSgState, AbfaRlsState> filter;

  static FullRankAdaptiveState sg(int dimension, double step_size);
  static FullRankAdaptiveState rls(int dimension, double forgetting, double delta = 0.01);

  const CVector& weight() const;
};

StepResult full_rank_adapt_step(FullRankAdaptiveState& state, const SlcFront& front, const CVector& r,
                                double guard = kDefaultDivergenceGuard);

/// Full-dimension weight of the full-rank SLC, s - B w.
CVector full_rank_effective_weight(const FullRankAdaptiveState& state, const SlcFront& front);

// ---------------------------------------------------------------------------
// Multistage Wiener filter, batch-trained on sample statistics of the SLC
// auxiliary channel. Forward stages build unit-norm match filters h_k from the
// cross-correlation of the current residual channel with the previous stage
// output and block them out; the backward pass synthesizes the scalar stage
// weights.

struct MswfState {
  SteeringVector steering;
  std::vector<CVector> match_filters;  // h_1..h_D, unit norm
  std::vector<double> cross_correlations;  // delta_k = |E[x_{k-1} d_{k-1}^*]|
  std::vector<double> stage_variances;     // E|d_k|^2, k = 0..D
  std::vector<cdouble> stage_weights;      // w_1..w_D from the backward pass

  int stages() const { return static_cast<int>(match_filters.size()); }
};

/// Requires 1 <= D <= M and at least D snapshots. Throws NumericalError if the
/// first-stage cross-correlation vanishes. A later stage whose residual
/// cross-correlation vanishes means the Krylov space is exhausted; the
/// recursion stops there with an already exact solution.
MswfState mswf_train(std::span<const CVector> snapshots, const SteeringVector& steering, int stages);
MswfState mswf_train(const CMatrix& sample_covariance, const SteeringVector& steering, int stages);
/// Full-dimension weight s - w_aux; d0 - w_aux^H B r is the filter output.
CVector mswf_weight(const MswfState& state);

// ---------------------------------------------------------------------------
// Auxiliary-vector filter. Starting from the matched filter s/|s|^2, each
// iteration takes the component of R w orthogonal to s as the (unit-norm)
// auxiliary vector g_k and subtracts it with the MSE-optimal scalar
// mu_k = g_k^H R w / g_k^H R g_k. Auxiliary vectors are not orthogonal to
// each other.

struct AvfState {
  SteeringVector steering;
  std::vector<CVector> auxiliary_vectors;
  std::vector<cdouble> leakage_weights;
  CVector weight;

  int iterations() const { return static_cast<int>(auxiliary_vectors.size()); }
};

AvfState avf_train(std::span<const CVector> snapshots, const SteeringVector& steering, int iterations);
AvfState avf_train(const CMatrix& sample_covariance, const SteeringVector& steering, int iterations);
CVector avf_weight(const AvfState& state);

}  // namespace stap
