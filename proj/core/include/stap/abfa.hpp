#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "stap/scene.hpp"
#include "stap/types.hpp"

namespace stap {

/// B pre-stored selection sets, each picking D entries out of an M-vector.
/// Set b (0-based) selects positions (M/D)*d + b for d = 0..D-1, i.e. a
/// stride-M/D comb shifted by b. Stored as an index table; the dense M x D
/// matrices are never formed on the hot path.
class BasisBank {
 public:
  /// Throws std::invalid_argument unless D divides M and 1 <= B <= M/D.
  BasisBank(int full_dimension, int rank, int num_sets);

  /// D = M, B = 1: the single set selects every entry in order.
  static BasisBank identity(int full_dimension) { return BasisBank(full_dimension, full_dimension, 1); }

  int full_dimension() const { return full_dimension_; }
  int rank() const { return rank_; }
  int num_sets() const { return num_sets_; }

  std::span<const int> indices(int set) const {
    return {index_table_.data() + static_cast<std::size_t>(set) * rank_, static_cast<std::size_t>(rank_)};
  }
  int index(int set, int column) const { return index_table_[static_cast<std::size_t>(set) * rank_ + column]; }

  /// out = T_b^H x.
  void gather(int set, const CVector& x, CVector& out) const;
  /// Dense T_b, for verification only.
  CMatrix selection_matrix(int set) const;

 private:
  int full_dimension_;
  int rank_;
  int num_sets_;
  std::vector<int> index_table_;  // row-major num_sets x rank
};

/// Side-lobe canceller front end: main beam d0 = s^H r and the blocking
/// projector I - s s^H / |s|^2 that feeds the auxiliary branch.
class SlcFront {
 public:
  explicit SlcFront(SteeringVector steering);

  const SteeringVector& steering() const { return steering_; }
  Eigen::Index dimension() const { return steering_.size(); }

  cdouble main_beam(const CVector& r) const;
  CVector block(const CVector& r) const;
  void block_into(const CVector& r, CVector& out) const;
  /// Dense projector, for verification only.
  CMatrix blocking_matrix() const;

 private:
  void check_dimension(const CVector& r) const;

  SteeringVector steering_;
  double norm_sq_;
};

/// y_b = weight^H T_b^H blocked for every set b, via index gathers (B*D
/// multiplies).
CVector branch_outputs(const BasisBank& bank, const CVector& weight, const CVector& blocked);
void branch_outputs_into(const BasisBank& bank, const CVector& weight, const CVector& blocked,
                         CVector& out);

struct BranchChoice {
  int branch = 0;  // 0-based
  cdouble error;   // d0 - y_branch
};

/// Minimizes |d0 - y_b|^2; ties go to the lowest index.
BranchChoice select_branch(cdouble main_beam, const CVector& outputs);

struct StepResult {
  cdouble error;  // a-priori output e_o = d0 - weight^H r_bar
  int branch = 0;
  cdouble main_beam;
};

inline constexpr double kDefaultDivergenceGuard = 1e6;

struct AdaptScratch {
  CVector blocked;
  CVector outputs;
  CVector reduced;
  CVector gain;
};

struct AbfaSgState {
  CVector weight;
  double step_size = 0.0;
  int last_branch = 0;
  AdaptScratch scratch;

  static AbfaSgState init(int rank, double step_size);
};

struct AbfaRlsState {
  CVector weight;
  CMatrix inverse_correlation;  // P
  double forgetting = 1.0;      // lambda
  double delta = 0.01;          // P(0) = I / delta
  int last_branch = 0;
  AdaptScratch scratch;

  static AbfaRlsState init(int rank, double forgetting, double delta = 0.01);
};

/// One ABFA-SG iteration on snapshot r: branch outputs, selection, reduced
/// vector r_bar = T_b^H r', a-priori error, then w += mu r_bar e_o^*.
/// Throws DivergenceError if |w| leaves [0, guard] or turns non-finite.
StepResult sg_step(AbfaSgState& state, const BasisBank& bank, const SlcFront& front,
                   const CVector& r, double guard = kDefaultDivergenceGuard);

/// One ABFA-RLS iteration: selection with the current weight, then
///   K = P r_bar / (lambda + r_bar^H P r_bar)
///   P = (P - K r_bar^H P) / lambda        (re-symmetrized)
///   w += K e_o^*,  e_o = d0 - w^H r_bar  (a-priori)
/// An all-zero r_bar carries no information and leaves the state untouched.
StepResult rls_step(AbfaRlsState& state, const BasisBank& bank, const SlcFront& front,
                    const CVector& r, double guard = kDefaultDivergenceGuard);

/// Full-dimension weight w = s - B^H T_b weight, so that w^H r = d0 - y_b.
CVector effective_full_weight(const SlcFront& front, const BasisBank& bank, const CVector& weight,
                              int branch);

// Checkpoints use the binary matrix format: weight as D x 1, then for RLS
// P as D x D. Hyperparameters are supplied again on restore.
void save_checkpoint(std::ostream& os, const AbfaSgState& state);
void save_checkpoint(std::ostream& os, const AbfaRlsState& state);
AbfaSgState load_sg_checkpoint(std::istream& is, double step_size);
AbfaRlsState load_rls_checkpoint(std::istream& is, double forgetting, double delta = 0.01);

}  // namespace stap
