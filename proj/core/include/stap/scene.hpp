#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stap/types.hpp"

namespace stap {

using Rng = std::mt19937_64;

/// Physical and system parameters of the airborne radar plus the placement of
/// the target and the barrage jammers. Angles are degrees, ratios are dB
/// relative to the per-element noise floor.
struct RadarScenario {
  double carrier_frequency = 450e6;  // Hz
  double prf = 300.0;                // Hz
  double platform_velocity = 50.0;   // m/s
  double platform_height = 9000.0;   // m
  int num_elements = 8;              // N
  int num_pulses = 8;                // J
  double cnr_db = 40.0;              // -inf disables clutter
  double jnr_db = 30.0;              // per jammer
  std::vector<double> jammer_azimuths{-45.0, 60.0};
  double noise_power = 1.0;
  double target_azimuth = 0.0;
  double target_normalized_doppler = 0.25;
  double snr_db = 0.0;  // per-element target-to-noise ratio
  // Zero means half a carrier wavelength.
  double element_spacing = 0.0;

  double wavelength() const { return kSpeedOfLight / carrier_frequency; }
  double spacing() const { return element_spacing > 0.0 ? element_spacing : 0.5 * wavelength(); }
  int full_dimension() const { return num_elements * num_pulses; }
  /// Slope of the clutter ridge in normalized angle-Doppler space, 2v/(d*prf).
  double clutter_ridge_slope() const { return 2.0 * platform_velocity / (spacing() * prf); }
  /// Target power |alpha|^2 for a unit-norm steering vector: M times the
  /// per-element SNR.
  double target_power() const;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Normalized space-time steering vector and the look direction it was built for.
struct SteeringVector {
  CVector entries;
  double look_azimuth = 0.0;
  double look_doppler = 0.0;

  Eigen::Index size() const { return entries.size(); }
};

/// Uniform linear array response, entry n = exp(j 2 pi (d/lambda) n sin(az)).
/// Rejects azimuths outside the open interval (-90, 90) degrees.
CVector spatial_steering(const RadarScenario& scenario, double azimuth_deg);

/// Pulse-to-pulse Doppler progression, entry j = exp(j 2 pi f j).
CVector temporal_steering(const RadarScenario& scenario, double normalized_doppler);

/// temporal (x) spatial, scaled to unit Euclidean norm. Entry j*N + n holds
/// pulse j, element n.
SteeringVector space_time_steering(const RadarScenario& scenario, double azimuth_deg,
                                   double normalized_doppler);

/// Unnormalized temporal (x) spatial product; building block for the clutter
/// patches.
CVector space_time_response(const RadarScenario& scenario, double azimuth_deg,
                            double normalized_doppler);

inline constexpr int kDefaultClutterPatches = 181;

/// Ring of uncorrelated, equal-power clutter patches spread uniformly over
/// (-90, 90) degrees of azimuth. Each patch sits on the clutter ridge,
/// f = slope * (d/lambda) * sin(az). Total power meets the configured CNR:
/// trace(Rc) / trace(Rn) = 10^(cnr/10).
CMatrix clutter_covariance(const RadarScenario& scenario, int num_patches = kDefaultClutterPatches);

/// Broadband barrage jammers: sum_q sigma_j^2 (I_J (x) a(theta_q) a(theta_q)^H).
CMatrix jammer_covariance(const RadarScenario& scenario);

struct CovarianceSet {
  CMatrix clutter;
  CMatrix jammer;
  CMatrix noise;
  CMatrix total;
  // Lower-triangular Cholesky factor, coloring * coloring^H = total.
  CMatrix coloring;

  Eigen::Index dimension() const { return total.rows(); }
};

/// R = Rc + Rj + Rn with Rn = noise_power * I, plus its Cholesky factor.
/// Throws NumericalError if R is not positive definite.
CovarianceSet assemble_covariance(const RadarScenario& scenario);

enum class Hypothesis { kH0, kH1 };

struct Snapshot {
  CVector data;
  Hypothesis hypothesis = Hypothesis::kH0;
  cdouble target_gain{0.0, 0.0};
};

/// Fills `out` with coloring * u, u standard circular complex Gaussian
/// (variance 1/2 per real component). Allocation-free when `out` is sized.
void draw_interference(const CMatrix& coloring, Rng& rng, CVector& out);

/// r = alpha s + nu under H1, r = nu under H0 (alpha is forced to zero).
Snapshot draw_snapshot(const CovarianceSet& cov, Hypothesis hypothesis, cdouble alpha,
                       const SteeringVector& steering, Rng& rng);

/// Independent per-trial generator derived from a base seed by a splitmix64
/// counter scheme, so no two trials share a stream.
Rng trial_rng(std::uint64_t base_seed, std::uint64_t trial);

}  // namespace stap
