#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinpair {

using cdouble = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

inline constexpr double pi = std::numbers::pi;

// Physical constants. Energies are expressed in angular-frequency units
// (hbar = 1), so Boltzmann's constant carries units of rad s^-1 K^-1.
inline constexpr double gamma_proton = 2.6752218744e8;    // rad s^-1 T^-1
inline constexpr double gamma_carbon13 = 6.728284e7;      // rad s^-1 T^-1
inline constexpr double boltzmann_over_hbar = 1.380649e-23 / 1.054571817e-34;

// Bad physical parameters, out-of-range arguments, rejected input data.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Pulse-program / config text that does not parse. Carries the source
// position so callers can point at the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Numerical failure (divergence, degenerate normalization, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form (std::to_chars); every serialized
// number reparses to the identical double, which keeps pretty-printed
// programs and exported files bit-stable.
std::string format_double(double v);

inline double max_abs(const Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

inline double hermiticity_error(const Matrix4c& m) {
  return max_abs(m - m.adjoint());
}

}  // namespace spinpair
