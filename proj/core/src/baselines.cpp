#include "stap/baselines.hpp"

#include <string>

namespace stap {

SampleStatistics::SampleStatistics(int dimension) : sum_(CMatrix::Zero(dimension, dimension)) {
  if (dimension < 1) throw std::invalid_argument("sample statistics dimension must be >= 1");
}

void SampleStatistics::accumulate(const CVector& r) {
  if (r.size() != sum_.rows()) throw std::invalid_argument("snapshot dimension mismatch");
  sum_.selfadjointView<Eigen::Lower>().rankUpdate(r, 1.0);
  ++count_;
}

CMatrix SampleStatistics::covariance() const {
  if (count_ == 0) throw NumericalError("no samples accumulated");
  CMatrix full = sum_.selfadjointView<Eigen::Lower>();
  return full / static_cast<double>(count_);
}

CVector smi_weight(const CMatrix& sample_covariance, double loading, const SteeringVector& steering) {
  if (sample_covariance.rows() != steering.size())
    throw std::invalid_argument("covariance and steering dimensions differ");
  if (loading < 0.0) throw std::invalid_argument("diagonal loading must be non-negative");
  const auto m = sample_covariance.rows();
  const CMatrix loaded = sample_covariance + loading * CMatrix::Identity(m, m);
  Eigen::LLT<CMatrix> llt(loaded);
  if (llt.info() != Eigen::Success)
    throw NumericalError("sample covariance is singular: too few samples and no diagonal loading");
  return llt.solve(steering.entries);
}

CVector smi_weight(const SmiState& state, const SteeringVector& steering) {
  if (state.stats.count() < 1) throw NumericalError("SMI needs at least one sample");
  if (state.diagonal_loading == 0.0 && state.stats.count() < state.stats.dimension())
    throw NumericalError("sample covariance is singular: " + std::to_string(state.stats.count()) +
                         " samples for dimension " + std::to_string(state.stats.dimension()) +
                         " and no diagonal loading");
  return smi_weight(state.stats.covariance(), state.diagonal_loading, steering);
}

FullRankAdaptiveState FullRankAdaptiveState::sg(int dimension, double step_size) {
  return {AdaptMode::kSg, BasisBank::identity(dimension), AbfaSgState::init(dimension, step_size)};
}

FullRankAdaptiveState FullRankAdaptiveState::rls(int dimension, double forgetting, double delta) {
  return {AdaptMode::kRls, BasisBank::identity(dimension), AbfaRlsState::init(dimension, forgetting, delta)};
}

const CVector& FullRankAdaptiveState::weight() const {
  return std::visit([](const auto& f) -> const CVector& { return f.weight; }, filter);
}

StepResult full_rank_adapt_step(FullRankAdaptiveState& state, const SlcFront& front, const CVector& r,
                                double guard) {
  if (state.mode == AdaptMode::kSg) return sg_step(std::get<AbfaSgState>(state.filter), state.bank, front, r, guard);
  return rls_step(std::get<AbfaRlsState>(state.filter), state.bank, front, r, guard);
}

CVector full_rank_effective_weight(const FullRankAdaptiveState& state, const SlcFront& front) {
  return effective_full_weight(front, state.bank, state.weight(), 0);
}

namespace {

CMatrix covariance_from(std::span<const CVector> snapshots, Eigen::Index dimension) {
  SampleStatistics stats(static_cast<int>(dimension));
  for (const auto& r : snapshots) stats.accumulate(r);
  return stats.covariance();
}

void check_training(const CMatrix& cov, const SteeringVector& steering, int rank, int min_rank) {
  if (cov.rows() != steering.size() || cov.cols() != steering.size())
    throw std::invalid_argument("covariance and steering dimensions differ");
  if (rank < min_rank || rank > steering.size())
    throw std::invalid_argument("rank " + std::to_string(rank) + " outside [" + std::to_string(min_rank) +
                                ", M]");
}

}  // namespace

MswfState mswf_train(std::span<const CVector> snapshots, const SteeringVector& steering, int stages) {
  if (static_cast<int>(snapshots.size()) < stages)
    throw std::invalid_argument("MSWF needs at least D training snapshots");
  if (snapshots.empty()) throw std::invalid_argument("MSWF needs training snapshots");
  return mswf_train(covariance_from(snapshots, steering.size()), steering, stages);
}

MswfState mswf_train(const CMatrix& sample_covariance, const SteeringVector& steering, int stages) {
  check_training(sample_covariance, steering, stages, 1);
  const CVector& s = steering.entries;
  const double s_norm_sq = s.squaredNorm();
  const Eigen::Index m = s.size();

  MswfState st;
  st.steering = steering;

  // Stage-0 statistics: auxiliary channel x0 = B r, desired d0 = s^H r.
  const CMatrix blocker = CMatrix::Identity(m, m) - s * s.adjoint() / s_norm_sq;
  const CVector rs = sample_covariance * s;
  CMatrix r_k = blocker * sample_covariance * blocker;
  CVector p_k = blocker * rs;
  st.stage_variances.push_back(s.dot(rs).real());

  const double tol = 1e-12 * std::max(r_k.trace().real(), 1e-300);
  for (int k = 0; k < stages; ++k) {
    const double delta = p_k.norm();
    if (!(delta > tol)) {
      if (k == 0) throw NumericalError("MSWF: zero cross-correlation at the first stage (degenerate training data)");
      break;
    }
    const CVector h = p_k / delta;
    const CVector u = r_k * h;
    const double var = h.dot(u).real();
    st.match_filters.push_back(h);
    st.cross_correlations.push_back(delta);
    st.stage_variances.push_back(var);

    // x_k = (I - h h^H) x_{k-1}
    p_k = u - h * h.dot(u);
    r_k -= h * u.adjoint() + u * h.adjoint();
    r_k += var * h * h.adjoint();
  }

  // Backward synthesis: eps_D = d_D, eps_{k-1} = d_{k-1} - w_k eps_k.
  const int n = st.stages();
  st.stage_weights.assign(n, cdouble(0.0, 0.0));
  double xi = st.stage_variances[n];
  for (int k = n; k >= 1; --k) {
    if (!(xi > 0.0)) throw NumericalError("MSWF: non-positive stage error variance");
    const double delta = st.cross_correlations[k - 1];
    st.stage_weights[k - 1] = delta / xi;
    xi = st.stage_variances[k - 1] - delta * delta / xi;
  }
  return st;
}

CVector mswf_weight(const MswfState& state) {
  const CVector& s = state.steering.entries;
  const int n = state.stages();
  // d_k = t_k^H x0 with t_k = B_1 ... B_{k-1} h_k; eps_k = g_k^H x0.
  auto stage_vector = [&](int k) {
    CVector t = state.match_filters[k - 1];
    for (int j = k - 1; j >= 1; --j) {
      const CVector& h = state.match_filters[j - 1];
      t -= h * h.dot(t);
    }
    return t;
  };
  CVector g = stage_vector(n);
  for (int k = n - 1; k >= 1; --k) g = stage_vector(k) - std::conj(state.stage_weights[k]) * g;
  CVector aux = std::conj(state.stage_weights[0]) * g;
  aux -= s * (s.dot(aux) / s.squaredNorm());
  return s - aux;
}

AvfState avf_train(std::span<const CVector> snapshots, const SteeringVector& steering, int iterations) {
  if (snapshots.empty()) throw std::invalid_argument("AVF needs training snapshots");
  if (static_cast<int>(snapshots.size()) < iterations)
    throw std::invalid_argument("AVF needs at least D training snapshots");
  return avf_train(covariance_from(snapshots, steering.size()), steering, iterations);
}

AvfState avf_train(const CMatrix& sample_covariance, const SteeringVector& steering, int iterations) {
  check_training(sample_covariance, steering, iterations, 0);
  const CVector& s = steering.entries;
  const double s_norm_sq = s.squaredNorm();

  AvfState st;
  st.steering = steering;
  st.weight = s / s_norm_sq;
  const double tol = 1e-12 * std::max(sample_covariance.trace().real(), 1e-300);
  for (int k = 0; k < iterations; ++k) {
    const CVector rw = sample_covariance * st.weight;
    CVector g = rw - s * (s.dot(rw) / s_norm_sq);
    const double g_norm = g.norm();
    if (!(g_norm > tol)) {
      if (k == 0) throw NumericalError("AVF: zero cross-correlation at the first iteration (degenerate training data)");
      break;
    }
    g /= g_norm;
    const cdouble num = g.dot(rw);
    const double den = g.dot(sample_covariance * g).real();
    if (!(den > 0.0)) throw NumericalError("AVF: auxiliary vector has zero output power");
    const cdouble mu = num / den;
    st.weight -= mu * g;
    st.auxiliary_vectors.push_back(std::move(g));
    st.leakage_weights.push_back(mu);
  }
  return st;
}

CVector avf_weight(const AvfState& state) { return state.weight; }

}  // namespace stap
