#pragma once

#include "spinpair/common.hpp"

namespace spinpair {

// Heteronuclear two-spin-1/2 system. Spin 1 is the high-gamma nucleus
// (proton in the default pair), spin 2 the low-gamma one (carbon-13).
// All internal frequencies are rad/s; user-facing output is Hz.
struct SpinSystem {
  double gamma1 = gamma_proton;    // rad s^-1 T^-1
  double gamma2 = gamma_carbon13;  // rad s^-1 T^-1
  double field = 11.7;             // T
  double temperature = 298.0;      // K
  double j_coupling = 2.0 * pi * 138.0;  // scalar coupling, rad/s
  double linewidth1 = 3.0;         // Lorentzian FWHM of spin-1 lines, Hz
  double linewidth2 = 3.0;         // Hz

  double larmor1() const { return gamma1 * field; }
  double larmor2() const { return gamma2 * field; }
  double j_hz() const { return j_coupling / (2.0 * pi); }

  // Equilibrium z polarizations in the high-temperature limit,
  // epsilon_i = Omega_i / (4 k_B T); their ratio is gamma1/gamma2.
  double polarization1() const {
    return larmor1() / (4.0 * boltzmann_over_hbar * temperature);
  }
  double polarization2() const {
    return larmor2() / (4.0 * boltzmann_over_hbar * temperature);
  }

  // Amplitude of the pseudo-pure deviation the standard preparation
  // pipeline reaches after polarization equalization, (eps1+eps2)/2.
  double pseudo_pure_scale() const {
    return 0.5 * (polarization1() + polarization2());
  }

  void validate() const;

  static SpinSystem proton_carbon(double j_hz = 138.0, double field = 11.7,
                                  double temperature = 298.0);
};

}  // namespace spinpair
