#pragma once

#include <iosfwd>
#include <vector>

#include "spinpair/spectra.hpp"

namespace spinpair {

// Coupled longitudinal relaxation of the diagonal observables
// v = (<S1z>, <S2z>, <S1zS2z>):
//
//   dv/dt = -R (v - v_eq),   v_eq = (eps1, eps2, 0)
//
// with the symmetric generator
//
//        | mu1     sigma12  delta1 |
//   R =  | sigma12 mu2      delta2 |
//        | delta1  delta2   mu12   |
//
// mu: auto-relaxation rates, sigma12: cross-relaxation, delta1/2:
// cross-correlation terms coupling the two-spin order to the single-spin
// polarizations. The deltas are what split the decay times of the two
// Bell families, since their initial conditions differ only in the sign
// of <S1zS2z>.
struct RateMatrix {
  double mu1 = 0.0;      // s^-1
  double mu2 = 0.0;
  double mu12 = 0.0;
  double sigma12 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;

  Eigen::Matrix3d matrix() const;

  // physically valid generators are positive definite
  void validate() const;

  // Default set for the proton-carbon pair: mu12 and the weighted
  // combination (delta1 eps1 + delta2 eps2)/(eps1+eps2) are pinned by the
  // reference initial decay times 2.4 s (S0/T0) and 3.0 s (psi+-); the
  // split between delta1 and delta2 (all on delta1 here) and mu1 = mu2 =
  // 0.3 s^-1, sigma12 = 0 are free choices, NOT unique.
  static RateMatrix calibrated(const SpinSystem& sys);
};

struct DiagObservables {
  double s1z = 0.0;
  double s2z = 0.0;
  double s1zs2z = 0.0;
};

// Pseudo-pure Bell states of amplitude (eps1+eps2)/2 carry no single-spin
// polarization and <S1zS2z> = -(eps1+eps2)/8 for S0/T0, + for psi+-.
DiagObservables bell_initial_conditions(BellKind kind, const SpinSystem& sys);

// Diagonal-deviation state I/4 + s1z S1z + s2z S2z + 4 s1zs2z S1zS2z
// (the factor 4 makes Tr(rho S1zS2z) = s1zs2z).
DensityMatrix diag_state(const DiagObservables& obs);

DiagObservables relax_evolve(const DiagObservables& obs0,
                             const RateMatrix& rates, const SpinSystem& sys,
                             double tau);

struct Eigenmodes {
  Eigen::Vector3d rates;    // ascending
  Eigen::Matrix3d vectors;  // columns, orthonormal
};

Eigenmodes eigenmodes(const RateMatrix& rates);

// Instantaneous decay rate -q'(0)/q(0) of q = <S1zS2z> starting from obs0:
// mu12 + sum_i delta_i (s_iz(0) - eps_i) / q(0). Undefined when the initial
// two-spin order vanishes.
double initial_rate(const RateMatrix& rates, const DiagObservables& obs0,
                    const SpinSystem& sys);

struct DecayCurve {
  std::vector<double> times_s;
  std::vector<double> values;  // normalized so the tau = 0 value is 1
};

struct Acquisition {
  int points = 4096;
  double dwell_s = 1e-3;
};

// For each delay: evolve the Bell initial conditions, rebuild the diagonal
// state, synthesize the spin-1 spectrum and integrate the antisymmetric
// component. Normalized to the tau = 0 value.
DecayCurve simulate_decay(BellKind kind, const RateMatrix& rates,
                          const SpinSystem& sys,
                          const std::vector<double>& taus,
                          const Acquisition& acq = {});

std::vector<double> default_tau_grid(double tau_max_s = 16.0,
                                     double step_s = 0.5);

struct ExpFit {
  double tau = 0.0;        // s
  double amplitude = 0.0;
  double rms_residual = 0.0;
};

// A exp(-t/tau) fit over points with t <= window: variance-weighted
// (w = y^2) linear fit of log y, then one Gauss-Newton refinement pass in
// the linear domain. Needs >= 3 points and strictly positive values.
ExpFit fit_initial_exponential(const DecayCurve& curve, double window_s);

void write_decay_csv(std::ostream& os, const DecayCurve& curve);  // tau_s,ga
DecayCurve read_decay_csv(std::istream& is);

}  // namespace spinpair
