#include "stap/scene.hpp"

#include <limits>
#include <string>

namespace stap {

namespace {

double deg2rad(double deg) { return deg * kPi / 180.0; }

bool azimuth_in_range(double az) { return az > -90.0 && az < 90.0; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double RadarScenario::target_power() const {
  return static_cast<double>(full_dimension()) * noise_power * db_to_linear(snr_db);
}

void RadarScenario::validate() const {
  if (num_elements < 1) throw ConfigError("num_elements must be >= 1");
  if (num_pulses < 1) throw ConfigError("num_pulses must be >= 1");
  if (!(prf > 0.0)) throw ConfigError("prf must be positive");
  if (!(carrier_frequency > 0.0)) throw ConfigError("carrier_frequency must be positive");
  if (element_spacing < 0.0) throw ConfigError("element_spacing must be positive (0 selects lambda/2)");
  if (!(noise_power > 0.0)) throw ConfigError("noise_power must be positive");
  if (std::isnan(cnr_db) || cnr_db == std::numeric_limits<double>::infinity())
    throw ConfigError("cnr_db must be finite or -inf");
  if (!std::isfinite(jnr_db) && !jammer_azimuths.empty()) throw ConfigError("jnr_db must be finite");
  for (double az : jammer_azimuths) {
    if (!azimuth_in_range(az))
      throw ConfigError("jammer azimuth " + std::to_string(az) + " outside (-90, 90) degrees");
  }
  if (!azimuth_in_range(target_azimuth)) throw ConfigError("target_azimuth outside (-90, 90) degrees");
}

CVector spatial_steering(const RadarScenario& scenario, double azimuth_deg) {
  if (!azimuth_in_range(azimuth_deg))
    throw std::invalid_argument("azimuth " + std::to_string(azimuth_deg) +
                                " outside the open interval (-90, 90) degrees");
  const double phase_step =
      2.0 * kPi * (scenario.spacing() / scenario.wavelength()) * std::sin(deg2rad(azimuth_deg));
  CVector a(scenario.num_elements);
  for (int n = 0; n < scenario.num_elements; ++n) a[n] = std::polar(1.0, phase_step * n);
  return a;
}

CVector temporal_steering(const RadarScenario& scenario, double normalized_doppler) {
  CVector b(scenario.num_pulses);
  for (int j = 0; j < scenario.num_pulses; ++j)
    b[j] = std::polar(1.0, 2.0 * kPi * normalized_doppler * j);
  return b;
}

CVector space_time_response(const RadarScenario& scenario, double azimuth_deg,
                            double normalized_doppler) {
  const CVector a = spatial_steering(scenario, azimuth_deg);
  const CVector b = temporal_steering(scenario, normalized_doppler);
  const int n_el = scenario.num_elements;
  CVector v(scenario.full_dimension());
  for (int j = 0; j < scenario.num_pulses; ++j) v.segment(j * n_el, n_el) = b[j] * a;
  return v;
}

SteeringVector space_time_steering(const RadarScenario& scenario, double azimuth_deg,
                                   double normalized_doppler) {
  SteeringVector s;
  s.entries = space_time_response(scenario, azimuth_deg, normalized_doppler);
  s.entries /= s.entries.norm();
  s.look_azimuth = azimuth_deg;
  s.look_doppler = normalized_doppler;
  return s;
}

CMatrix clutter_covariance(const RadarScenario& scenario, int num_patches) {
  const int m = scenario.full_dimension();
  CMatrix rc = CMatrix::Zero(m, m);
  if (scenario.cnr_db == -std::numeric_limits<double>::infinity() || num_patches < 1) return rc;

  const double slope = scenario.clutter_ridge_slope();
  const double spatial_scale = scenario.spacing() / scenario.wavelength();
  const double width = 180.0 / num_patches;
  for (int p = 0; p < num_patches; ++p) {
    const double az = -90.0 + (p + 0.5) * width;
    const double doppler = slope * spatial_scale * std::sin(deg2rad(az));
    const CVector v = space_time_response(scenario, az, doppler);
    rc.selfadjointView<Eigen::Lower>().rankUpdate(v, 1.0);
  }
  rc = rc.selfadjointView<Eigen::Lower>();
  // Every patch contributes trace M, so equal patch power sigma_c^2 =
  // cnr * noise / num_patches.
  const double patch_power = db_to_linear(scenario.cnr_db) * scenario.noise_power / num_patches;
  rc *= patch_power;
  return rc;
}

CMatrix jammer_covariance(const RadarScenario& scenario) {
  const int m = scenario.full_dimension();
  const int n_el = scenario.num_elements;
  CMatrix rj = CMatrix::Zero(m, m);
  if (scenario.jammer_azimuths.empty()) return rj;

  const double jammer_power = db_to_linear(scenario.jnr_db) * scenario.noise_power;
  CMatrix spatial = CMatrix::Zero(n_el, n_el);
  for (double az : scenario.jammer_azimuths) {
    const CVector a = spatial_steering(scenario, az);
    spatial.noalias() += jammer_power * a * a.adjoint();
  }
  // Temporally white: block-diagonal over pulses.
  for (int j = 0; j < scenario.num_pulses; ++j) rj.block(j * n_el, j * n_el, n_el, n_el) = spatial;
  return rj;
}

CovarianceSet assemble_covariance(const RadarScenario& scenario) {
  scenario.validate();
  const int m = scenario.full_dimension();
  CovarianceSet cov;
  cov.clutter = clutter_covariance(scenario);
  cov.jammer = jammer_covariance(scenario);
  cov.noise = scenario.noise_power * CMatrix::Identity(m, m);
  cov.total = cov.clutter + cov.jammer + cov.noise;

  Eigen::LLT<CMatrix> llt(cov.total);
  if (llt.info() != Eigen::Success)
    throw NumericalError("interference covariance is not positive definite");
  cov.coloring = llt.matrixL();
  return cov;
}

void draw_interference(const CMatrix& coloring, Rng& rng, CVector& out) {
  const Eigen::Index m = coloring.rows();
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CVector u(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    u[k] = cdouble(re, im);
  }
  out.resize(m);
  out.noalias() = coloring.triangularView<Eigen::Lower>() * u;
}

Snapshot draw_snapshot(const CovarianceSet& cov, Hypothesis hypothesis, cdouble alpha,
                       const SteeringVector& steering, Rng& rng) {
  if (steering.size() != cov.dimension())
    throw std::invalid_argument("steering vector and covariance dimensions differ");
  Snapshot snap;
  snap.hypothesis = hypothesis;
  snap.target_gain = hypothesis == Hypothesis::kH1 ? alpha : cdouble(0.0, 0.0);
  draw_interference(cov.coloring, rng, snap.data);
  if (hypothesis == Hypothesis::kH1) snap.data += snap.target_gain * steering.entries;
  return snap;
}

Rng trial_rng(std::uint64_t base_seed, std::uint64_t trial) {
  const std::uint64_t a = splitmix64(base_seed ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
  const std::uint64_t b = splitmix64(a + trial);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

}  // namespace stap
