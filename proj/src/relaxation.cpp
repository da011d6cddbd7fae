#include "spinpair/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spinpair/common.hpp"
#include "spinpair/operators.hpp"

namespace spinpair {

Eigen::Matrix3d RateMatrix::matrix() const {
  Eigen::Matrix3d r;
  r << mu1, sigma12, delta1,  //
      sigma12, mu2, delta2,   //
      delta1, delta2, mu12;
  return r;
}

void RateMatrix::validate() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(matrix());
  if (solver.eigenvalues().minCoeff() <= 0.0) {
    throw ValidationError(
        "rate matrix must be positive definite; smallest eigenvalue is " +
        format_double(solver.eigenvalues().minCoeff()));
  }
}

RateMatrix RateMatrix::calibrated(const SpinSystem& sys) {
  const double tau_fast = 2.4;  // s, singlet/central-triplet family
  const double tau_slow = 3.0;  // s, psi+- family
  const double eps1 = sys.polarization1();
  const double eps2 = sys.polarization2();
  RateMatrix rates;
  rates.mu12 = 0.5 * (1.0 / tau_fast + 1.0 / tau_slow);
  const double weighted_delta =
      (1.0 / tau_fast - 1.0 / tau_slow) / 16.0;  // (d1 e1 + d2 e2)/(e1+e2)
  rates.delta1 = weighted_delta * (eps1 + eps2) / eps1;
  rates.delta2 = 0.0;
  rates.mu1 = 0.3;
  rates.mu2 = 0.3;
  rates.sigma12 = 0.0;
  rates.validate();
  return rates;
}

DiagObservables bell_initial_conditions(BellKind kind, const SpinSystem& sys) {
  const double scale = sys.pseudo_pure_scale();
  const bool flip_flop =
      kind == BellKind::singlet || kind == BellKind::triplet0;
  DiagObservables obs;
  obs.s1z = 0.0;
  obs.s2z = 0.0;
  obs.s1zs2z = (flip_flop ? -1.0 : 1.0) * scale / 4.0;
  return obs;
}

DensityMatrix diag_state(const DiagObservables& obs) {
  const Matrix4c s1z = spin_operator(1, Axis3::z);
  const Matrix4c s2z = spin_operator(2, Axis3::z);
  DensityMatrix rho;
  rho.mat = 0.25 * Matrix4c::Identity() + obs.s1z * s1z + obs.s2z * s2z +
            4.0 * obs.s1zs2z * (s1z * s2z);
  return rho;
}

namespace {

Eigen::Vector3d as_vector(const DiagObservables& obs) {
  return Eigen::Vector3d(obs.s1z, obs.s2z, obs.s1zs2z);
}

Eigen::Vector3d equilibrium_vector(const SpinSystem& sys) {
  return Eigen::Vector3d(sys.polarization1(), sys.polarization2(), 0.0);
}

}  // namespace

DiagObservables relax_evolve(const DiagObservables& obs0,
                             const RateMatrix& rates, const SpinSystem& sys,
                             double tau) {
  if (tau < 0.0) {
    throw ValidationError("relaxation delay must be nonnegative, got " +
                          format_double(tau));
  }
  const Eigen::Matrix3d r = rates.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(r);
  const Eigen::Vector3d veq = equilibrium_vector(sys);
  const Eigen::Vector3d c =
      solver.eigenvectors().transpose() * (as_vector(obs0) - veq);
  Eigen::Vector3d decayed;
  for (int k = 0; k < 3; ++k) {
    decayed[k] = c[k] * std::exp(-solver.eigenvalues()[k] * tau);
  }
  const Eigen::Vector3d v = veq + solver.eigenvectors() * decayed;
  return DiagObservables{v[0], v[1], v[2]};
}

Eigenmodes eigenmodes(const RateMatrix& rates) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(rates.matrix());
  return Eigenmodes{solver.eigenvalues(), solver.eigenvectors()};
}

double initial_rate(const RateMatrix& rates, const DiagObservables& obs0,
                    const SpinSystem& sys) {
  if (obs0.s1zs2z == 0.0) {
    throw ValidationError(
        "initial rate of <S1zS2z> is undefined when the initial two-spin "
        "order vanishes");
  }
  const double coupling =
      rates.delta1 * (obs0.s1z - sys.polarization1()) +
      rates.delta2 * (obs0.s2z - sys.polarization2());
  return rates.mu12 + coupling / obs0.s1zs2z;
}

DecayCurve simulate_decay(BellKind kind, const RateMatrix& rates,
                          const SpinSystem& sys,
                          const std::vector<double>& taus,
                          const Acquisition& acq) {
  if (taus.empty()) {
    throw ValidationError("decay simulation needs at least one delay");
  }
  const DiagObservables obs0 = bell_initial_conditions(kind, sys);
  const double reference = antisymmetric_component(fft_spectrum(
      synthesize_fid(diag_state(obs0), sys, 1, acq.points, acq.dwell_s)));
  if (reference <= 0.0) {
    throw NumericalError("reference asymmetry at zero delay vanished");
  }
  DecayCurve curve;
  curve.times_s = taus;
  curve.values.reserve(taus.size());
  for (double tau : taus) {
    const DiagObservables obs = relax_evolve(obs0, rates, sys, tau);
    const double ga = antisymmetric_component(fft_spectrum(
        synthesize_fid(diag_state(obs), sys, 1, acq.points, acq.dwell_s)));
    curve.values.push_back(ga / reference);
  }
  return curve;
}

std::vector<double> default_tau_grid(double tau_max_s, double step_s) {
  if (step_s <= 0.0 || tau_max_s < 0.0) {
    throw ValidationError("delay grid needs step > 0 and max >= 0");
  }
  std::vector<double> taus;
  const int n = static_cast<int>(std::floor(tau_max_s / step_s + 0.5));
  taus.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    taus.push_back(k * step_s);
  }
  return taus;
}

ExpFit fit_initial_exponential(const DecayCurve& curve, double window_s) {
  if (curve.times_s.size() != curve.values.size()) {
    throw ValidationError("decay curve has mismatched time/value lengths");
  }
  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t i = 0; i < curve.times_s.size(); ++i) {
    if (curve.times_s[i] <= window_s) {
      t.push_back(curve.times_s[i]);
      y.push_back(curve.values[i]);
    }
  }
  if (t.size() < 3) {
    throw ValidationError("exponential fit needs at least 3 points within " +
                          format_double(window_s) + " s, found " +
                          std::to_string(t.size()));
  }
  for (double v : y) {
    if (v <= 0.0) {
      throw ValidationError(
          "exponential fit needs strictly positive values within the window");
    }
  }

  // weighted linear fit of log y = log A - t/tau, weights y^2 so that the
  // linearized problem matches least squares on the original values
  double sw = 0, swt = 0, swtt = 0, swl = 0, swtl = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double w = y[i] * y[i];
    const double l = std::log(y[i]);
    sw += w;
    swt += w * t[i];
    swtt += w * t[i] * t[i];
    swl += w * l;
    swtl += w * t[i] * l;
  }
  const double det = sw * swtt - swt * swt;
  if (std::abs(det) < 1e-300) {
    throw NumericalError("exponential fit is degenerate (all times equal?)");
  }
  double log_a = (swtt * swl - swt * swtl) / det;
  double slope = (sw * swtl - swt * swl) / det;  // -1/tau
  if (slope >= 0.0) {
    throw NumericalError("fit window shows no decay; cannot extract a time");
  }
  double a = std::exp(log_a);
  double rate = -slope;

  // one Gauss-Newton step on r_i = y_i - a exp(-rate t_i) over (a, rate)
  double j11 = 0, j12 = 0, j22 = 0, g1 = 0, g2 = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double m = std::exp(-rate * t[i]);
    const double r = y[i] - a * m;
    const double da = m;            // d model / d a
    const double dr = -a * t[i] * m;  // d model / d rate
    j11 += da * da;
    j12 += da * dr;
    j22 += dr * dr;
    g1 += da * r;
    g2 += dr * r;
  }
  const double jdet = j11 * j22 - j12 * j12;
  if (std::abs(jdet) > 1e-300) {
    a += (j22 * g1 - j12 * g2) / jdet;
    rate += (j11 * g2 - j12 * g1) / jdet;
  }
  if (rate <= 0.0 || a <= 0.0) {
    throw NumericalError("exponential refinement left the decaying branch");
  }

  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - a * std::exp(-rate * t[i]);
    ss += r * r;
  }
  ExpFit fit;
  fit.tau = 1.0 / rate;
  fit.amplitude = a;
  fit.rms_residual = std::sqrt(ss / static_cast<double>(t.size()));
  return fit;
}

void write_decay_csv(std::ostream& os, const DecayCurve& curve) {
  os << "tau_s,ga\n";
  for (std::size_t i = 0; i < curve.times_s.size(); ++i) {
    os << format_double(curve.times_s[i]) << ','
       << format_double(curve.values[i]) << '\n';
  }
}

DecayCurve read_decay_csv(std::istream& is) {
  DecayCurve curve;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("tau_s,", 0) == 0) continue;
    std::istringstream row(line);
    std::string t_text, v_text;
    if (!std::getline(row, t_text, ',') || !std::getline(row, v_text)) {
      throw ParseError("expected 'tau_s,ga' row", lineno, 1);
    }
    try {
      curve.times_s.push_back(std::stod(t_text));
      curve.values.push_back(std::stod(v_text));
    } catch (const std::exception&) {
      throw ParseError("malformed number in decay row", lineno, 1);
    }
  }
  return curve;
}

}  // namespace spinpair
