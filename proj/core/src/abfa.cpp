#include "stap/abfa.hpp"

#include <string>

#include "stap/matrix_io.hpp"

namespace stap {

BasisBank::BasisBank(int full_dimension, int rank, int num_sets)
    : full_dimension_(full_dimension), rank_(rank), num_sets_(num_sets) {
  if (full_dimension < 1 || rank < 1 || full_dimension % rank != 0)
    throw std::invalid_argument("invalid reduced-rank configuration: D=" + std::to_string(rank) +
                                " must divide M=" + std::to_string(full_dimension));
  const int stride = full_dimension / rank;
  if (num_sets < 1 || num_sets > stride)
    throw std::invalid_argument("invalid reduced-rank configuration: B=" + std::to_string(num_sets) +
                                " must lie in [1, M/D=" + std::to_string(stride) + "]");
  index_table_.resize(static_cast<std::size_t>(num_sets) * rank);
  for (int b = 0; b < num_sets; ++b)
    for (int d = 0; d < rank; ++d) index_table_[static_cast<std::size_t>(b) * rank + d] = stride * d + b;
}

void BasisBank::gather(int set, const CVector& x, CVector& out) const {
  out.resize(rank_);
  const int* idx = index_table_.data() + static_cast<std::size_t>(set) * rank_;
  for (int d = 0; d < rank_; ++d) out[d] = x[idx[d]];
}

CMatrix BasisBank::selection_matrix(int set) const {
  CMatrix t = CMatrix::Zero(full_dimension_, rank_);
  for (int d = 0; d < rank_; ++d) t(index(set, d), d) = 1.0;
  return t;
}

SlcFront::SlcFront(SteeringVector steering)
    : steering_(std::move(steering)), norm_sq_(steering_.entries.squaredNorm()) {
  if (!(norm_sq_ > 0.0)) throw std::invalid_argument("steering vector must be nonzero");
}

void SlcFront::check_dimension(const CVector& r) const {
  if (r.size() != steering_.size())
    throw std::invalid_argument("snapshot has dimension " + std::to_string(r.size()) + ", expected " +
                                std::to_string(steering_.size()));
}

cdouble SlcFront::main_beam(const CVector& r) const {
  check_dimension(r);
  return steering_.entries.dot(r);  // dot() conjugates the left operand
}

CVector SlcFront::block(const CVector& r) const {
  CVector out;
  block_into(r, out);
  return out;
}

void SlcFront::block_into(const CVector& r, CVector& out) const {
  check_dimension(r);
  const cdouble coeff = steering_.entries.dot(r) / norm_sq_;
  out = r - coeff * steering_.entries;
}

CMatrix SlcFront::blocking_matrix() const {
  const auto m = steering_.size();
  return CMatrix::Identity(m, m) - steering_.entries * steering_.entries.adjoint() / norm_sq_;
}

void branch_outputs_into(const BasisBank& bank, const CVector& weight, const CVector& blocked,
                         CVector& out) {
  const int rank = bank.rank();
  out.resize(bank.num_sets());
  for (int b = 0; b < bank.num_sets(); ++b) {
    const auto idx = bank.indices(b);
    cdouble acc{0.0, 0.0};
    for (int d = 0; d < rank; ++d) acc += std::conj(weight[d]) * blocked[idx[d]];
    out[b] = acc;
  }
}

CVector branch_outputs(const BasisBank& bank, const CVector& weight, const CVector& blocked) {
  if (weight.size() != bank.rank() || blocked.size() != bank.full_dimension())
    throw std::invalid_argument("branch_outputs: dimension mismatch");
  CVector out;
  branch_outputs_into(bank, weight, blocked, out);
  return out;
}

BranchChoice select_branch(cdouble main_beam, const CVector& outputs) {
  if (outputs.size() < 1) throw std::invalid_argument("select_branch needs at least one branch");
  BranchChoice best{0, main_beam - outputs[0]};
  double best_cost = std::norm(best.error);
  for (Eigen::Index b = 1; b < outputs.size(); ++b) {
    const cdouble e = main_beam - outputs[b];
    const double cost = std::norm(e);
    if (cost < best_cost) {
      best = {static_cast<int>(b), e};
      best_cost = cost;
    }
  }
  return best;
}

namespace {

void check_step_inputs(const CVector& weight, const BasisBank& bank, const SlcFront& front) {
  if (weight.size() != bank.rank()) throw std::invalid_argument("weight length differs from bank rank");
  if (front.dimension() != bank.full_dimension())
    throw std::invalid_argument("bank and steering vector dimensions differ");
}

// Blocking, branch outputs, selection and the reduced vector shared by the
// SG and RLS steps. Leaves r_bar in scratch.reduced.
StepResult select_and_reduce(const CVector& weight, AdaptScratch& scratch, const BasisBank& bank,
                             const SlcFront& front, const CVector& r) {
  StepResult res;
  res.main_beam = front.main_beam(r);
  front.block_into(r, scratch.blocked);
  branch_outputs_into(bank, weight, scratch.blocked, scratch.outputs);
  const BranchChoice choice = select_branch(res.main_beam, scratch.outputs);
  res.branch = choice.branch;
  bank.gather(choice.branch, scratch.blocked, scratch.reduced);
  res.error = res.main_beam - weight.dot(scratch.reduced);
  return res;
}

void guard_weight(const CVector& weight, double guard) {
  const double norm = weight.norm();
  if (!std::isfinite(norm) || norm > guard)
    throw DivergenceError("adaptive weight diverged: |w| = " + std::to_string(norm) +
                          " exceeds guard " + std::to_string(guard));
}

}  // namespace

AbfaSgState AbfaSgState::init(int rank, double step_size) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (!(step_size >= 0.0) || !std::isfinite(step_size))
    throw std::invalid_argument("step size must be finite and non-negative");
  AbfaSgState s;
  s.weight = CVector::Zero(rank);
  s.step_size = step_size;
  return s;
}

AbfaRlsState AbfaRlsState::init(int rank, double forgetting, double delta) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (!(forgetting > 0.0 && forgetting <= 1.0))
    throw std::invalid_argument("forgetting factor must lie in (0, 1]");
  if (!(delta > 0.0)) throw std::invalid_argument("RLS delta must be positive");
  AbfaRlsState s;
  s.weight = CVector::Zero(rank);
  s.inverse_correlation = CMatrix::Identity(rank, rank) / delta;
  s.forgetting = forgetting;
  s.delta = delta;
  return s;
}

StepResult sg_step(AbfaSgState& state, const BasisBank& bank, const SlcFront& front, const CVector& r,
                   double guard) {
  check_step_inputs(state.weight, bank, front);
  const StepResult res = select_and_reduce(state.weight, state.scratch, bank, front, r);
  state.weight += (state.step_size * std::conj(res.error)) * state.scratch.reduced;
  state.last_branch = res.branch;
  guard_weight(state.weight, guard);
  return res;
}

StepResult rls_step(AbfaRlsState& state, const BasisBank& bank, const SlcFront& front, const CVector& r,
                    double guard) {
  check_step_inputs(state.weight, bank, front);
  const StepResult res = select_and_reduce(state.weight, state.scratch, bank, front, r);
  state.last_branch = res.branch;
  const CVector& rbar = state.scratch.reduced;
  if (rbar.isZero(0.0)) return res;

  CMatrix& p = state.inverse_correlation;
  CVector& pr = state.scratch.gain;
  pr.noalias() = p * rbar;
  const double denom = state.forgetting + rbar.dot(pr).real();
  // P is Hermitian, so r_bar^H P = (P r_bar)^H.
  p.noalias() -= (pr / denom) * pr.adjoint();
  p /= state.forgetting;
  p = (0.5 * (p + p.adjoint())).eval();
  state.weight += (std::conj(res.error) / denom) * pr;
  guard_weight(state.weight, guard);
  return res;
}

CVector effective_full_weight(const SlcFront& front, const BasisBank& bank, const CVector& weight,
                              int branch) {
  check_step_inputs(weight, bank, front);
  if (branch < 0 || branch >= bank.num_sets()) throw std::out_of_range("branch index out of range");
  CVector aux = CVector::Zero(bank.full_dimension());
  const auto idx = bank.indices(branch);
  for (int d = 0; d < bank.rank(); ++d) aux[idx[d]] = weight[d];
  // The blocking projector is Hermitian.
  const CVector blocked = front.block(aux);
  return front.steering().entries - blocked;
}

void save_checkpoint(std::ostream& os, const AbfaSgState& state) { write_matrix(os, state.weight); }

void save_checkpoint(std::ostream& os, const AbfaRlsState& state) {
  write_matrix(os, state.weight);
  write_matrix(os, state.inverse_correlation);
}

AbfaSgState load_sg_checkpoint(std::istream& is, double step_size) {
  const CMatrix w = read_matrix(is);
  if (w.cols() != 1) throw Error("checkpoint weight must be a column vector");
  AbfaSgState s = AbfaSgState::init(static_cast<int>(w.rows()), step_size);
  s.weight = w.col(0);
  return s;
}

AbfaRlsState load_rls_checkpoint(std::istream& is, double forgetting, double delta) {
  const CMatrix w = read_matrix(is);
  const CMatrix p = read_matrix(is);
  if (w.cols() != 1 || p.rows() != w.rows() || p.cols() != w.rows())
    throw Error("checkpoint shapes inconsistent: weight must be D x 1 and P D x D");
  AbfaRlsState s = AbfaRlsState::init(static_cast<int>(w.rows()), forgetting, delta);
  s.weight = w.col(0);
  s.inverse_correlation = p;
  return s;
}

}  // namespace stap
