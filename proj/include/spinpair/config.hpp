#pragma once

#include <iosfwd>
#include <string>

#include "spinpair/relaxation.hpp"
#include "spinpair/tomography.hpp"

namespace spinpair {

// Flat run configuration, readable from "key = value" text (one pair per
// line, '#' comments). Unknown keys are rejected.
struct RunConfig {
  // spin system
  double j_hz = 138.0;
  double b_tesla = 11.7;
  double temperature_k = 298.0;
  double linewidth1_hz = 3.0;
  double linewidth2_hz = 3.0;

  // acquisition
  int points = 4096;
  double dwell_s = 1e-3;

  // relaxation generator; negative mu12 means "use the calibrated set"
  double mu1 = -1.0;
  double mu2 = -1.0;
  double mu12 = -1.0;
  double sigma12 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;

  // rf imperfection ensemble
  double rf_spread = 0.0;
  int ensemble = 1;
  double amplitude_step = 0.0;  // rad/s quantization of rf amplitudes
  unsigned long long seed = 0;

  // decay sampling and fit window
  double tau_max_s = 16.0;
  double tau_step_s = 0.5;
  double fit_window_s = 6.0;

  void validate() const;

  SpinSystem make_spin_system() const;
  RateMatrix make_rates() const;
  RfErrorModel make_error_model() const;
  Acquisition make_acquisition() const;
};

// Parses "key = value" text. Throws ParseError with line/column context on
// malformed lines or unknown keys, ValidationError on out-of-range values.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

}  // namespace spinpair
