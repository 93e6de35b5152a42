#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stap/scene.hpp"
#include "stap/types.hpp"

namespace stap {

/// sigma_s^2 |w^H s|^2 / (w^H R w), in dB. Throws std::invalid_argument for a
/// zero weight.
double output_sinr(const CVector& weight, const CMatrix& covariance, const SteeringVector& steering,
                   double target_power);

/// sigma_s^2 s^H R^-1 s in dB: the clairvoyant upper bound on output SINR.
double optimum_sinr(const CMatrix& covariance, const SteeringVector& steering, double target_power);

/// Normalized detection threshold for a false-alarm probability,
/// beta = sqrt(-2 ln pfa). Requires 0 < pfa < 1.
double pfa_to_beta(double pfa);

/// Probability of detection of the envelope detector for a nonfluctuating
/// target,
///   P_D = int_beta^inf u exp(-(u^2 + rho^2)/2) I0(rho u) du,
/// i.e. the Marcum Q-function Q1(rho, beta). rho = sqrt(peak output SINR).
/// Absolute error below 1e-9.
double prob_detection(double rho, double beta);

/// exp(-x) I0(x) for x >= 0, without overflow for large x.
double bessel_i0_scaled(double x);

struct DetectionPoint {
  double rho = 0.0;
  double pd = 0.0;
  double pfa = 0.0;
  double beta = 0.0;
};

DetectionPoint detection_point(double sinr_db, double pfa);

struct ComplexityReport {
  std::string algorithm;
  int M = 0;
  int D = 0;
  int B = 0;
  long long multiplications = 0;
  // Commonly quoted figure for M=64, D=4, B=16 where it disagrees with the
  // closed form (ABFA-SG: 4233 vs 4238); 0 otherwise.
  long long quoted_value = 0;
};

/// Names accepted by complexity_count, in table order.
const std::vector<std::string>& complexity_algorithms();

/// Per-snapshot multiplication count. Throws std::invalid_argument for an
/// unknown algorithm name or non-positive dimensions.
ComplexityReport complexity_count(std::string_view algorithm, int M, int D, int B);

std::vector<ComplexityReport> complexity_table(int M, int D, int B);

}  // namespace stap
