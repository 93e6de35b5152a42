#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace stap {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Base for all library errors that are not plain precondition violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain configuration (scenario, experiment, CLI flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An adaptive filter's weight norm exceeded its divergence guard.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: non-PD matrix handed to a factorization, singular solve,
// degenerate training statistics.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace stap
