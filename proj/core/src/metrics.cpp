#include "stap/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace stap {

double output_sinr(const CVector& weight, const CMatrix& covariance, const SteeringVector& steering,
                   double target_power) {
  if (weight.size() != covariance.rows() || weight.size() != steering.size())
    throw std::invalid_argument("output_sinr: dimension mismatch");
  if (weight.isZero(0.0)) throw std::invalid_argument("output_sinr: zero weight");
  const double gain = std::norm(weight.dot(steering.entries));
  const double interference = weight.dot(covariance * weight).real();
  return linear_to_db(target_power * gain / interference);
}

double optimum_sinr(const CMatrix& covariance, const SteeringVector& steering, double target_power) {
  Eigen::LLT<CMatrix> llt(covariance);
  if (llt.info() != Eigen::Success) throw NumericalError("covariance is not positive definite");
  const CVector x = llt.solve(steering.entries);
  return linear_to_db(target_power * steering.entries.dot(x).real());
}

double pfa_to_beta(double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw std::invalid_argument("pfa must lie in (0, 1)");
  return std::sqrt(-2.0 * std::log(pfa));
}

double bessel_i0_scaled(double x) {
  if (x < 0.0) x = -x;
  if (x < 500.0) return std::cyl_bessel_i(0.0, x) * std::exp(-x);
  // Hankel asymptotic series; terms shrink by (2k+1)^2 / (8x (k+1)).
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 30; ++k) {
    term *= (2.0 * k + 1.0) * (2.0 * k + 1.0) / (8.0 * x * (k + 1.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double prob_detection(double rho, double beta) {
  if (!(rho >= 0.0) || !(beta >= 0.0)) throw std::invalid_argument("rho and beta must be non-negative");
  // exp(-(u^2+rho^2)/2) I0(rho u) = exp(-(u-rho)^2/2) * [exp(-rho u) I0(rho u)].
  auto integrand = [rho](double u) {
    const double z = u - rho;
    return u * std::exp(-0.5 * z * z) * bessel_i0_scaled(rho * u);
  };
  // The integrand is a unit-width bump around max(rho, 1); outside
  // [rho - 12, max(beta, rho) + 12] it is below exp(-70) of its peak.
  const double lower = std::max(beta, rho - 12.0);
  const double upper = std::max(beta, rho) + 12.0;
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr unsigned kDepth = 15;
  constexpr double kTol = 1e-12;
  double pd = 0.0;
  if (rho - lower > 1.0) {
    pd += Quad::integrate(integrand, lower, rho, kDepth, kTol);
    pd += Quad::integrate(integrand, rho, upper, kDepth, kTol);
  } else {
    pd = Quad::integrate(integrand, lower, upper, kDepth, kTol);
  }
  return std::clamp(pd, 0.0, 1.0);
}

DetectionPoint detection_point(double sinr_db, double pfa) {
  DetectionPoint p;
  p.pfa = pfa;
  p.beta = pfa_to_beta(pfa);
  p.rho = std::sqrt(db_to_linear(sinr_db));
  p.pd = prob_detection(p.rho, p.beta);
  return p;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

const std::vector<std::string>& complexity_algorithms() {
  static const std::vector<std::string> names{"Full-Rank-SG", "Full-Rank-RLS", "MSWF-SG", "MSWF-RLS",
                                              "AVF",          "ABFA-SG",       "ABFA-RLS"};
  return names;
}

ComplexityReport complexity_count(std::string_view algorithm, int M, int D, int B) {
  if (M < 1 || D < 1 || B < 1) throw std::invalid_argument("complexity dimensions must be positive");
  const long long m = M, d = D, b = B;
  const std::string key = lower(algorithm);

  ComplexityReport rep{std::string(algorithm), M, D, B, 0, 0};
  if (key == "full-rank-sg") {
    rep.multiplications = 2 * m + 1;
  } else if (key == "full-rank-rls") {
    rep.multiplications = 4 * m * m + 4 * m;
  } else if (key == "mswf-sg") {
    rep.multiplications = (d + 1) * m * m + d + (3 * d + 2) * m;
  } else if (key == "mswf-rls") {
    rep.multiplications = (d + 1) * m * m + 3 * d * m + 2 * m + 4 * (d * d + d);
  } else if (key == "avf") {
    rep.multiplications = d * (4 * m * m + 4 * m + 1) + 4 * m + 2;
  } else if (key == "abfa-sg") {
    rep.multiplications = (b + 3) * d + 2 + m * m + m;
    if (M == 64 && D == 4 && B == 16) rep.quoted_value = 4233;
  } else if (key == "abfa-rls") {
    rep.multiplications = 4 * d * d + (b + 3) * d + b + m * m + m;
  } else {
    throw std::invalid_argument("unknown algorithm '" + std::string(algorithm) + "'");
  }
  for (const auto& name : complexity_algorithms())
    if (lower(name) == key) rep.algorithm = name;
  return rep;
}

std::vector<ComplexityReport> complexity_table(int M, int D, int B) {
  std::vector<ComplexityReport> out;
  for (const auto& name : complexity_algorithms()) out.push_back(complexity_count(name, M, D, B));
  return out;
}

}  // namespace stap
