#pragma once

#include <iosfwd>
#include <vector>

#include "spinpair/dynamics.hpp"

namespace spinpair {

// Complex single-channel FID, quadrature detected as <Sx> - i <Sy>.
struct Fid {
  std::vector<cdouble> samples;
  double dwell_s = 0.0;
  int spin = 1;
};

// Frequency-domain amplitudes on an fftshifted offset axis (Hz), scaled by
// the dwell time so Parseval holds: sum |s|^2 dwell = sum |g|^2 df.
struct Spectrum {
  std::vector<double> offsets_hz;
  std::vector<cdouble> amplitudes;
};

// Readout of one spin: applies an ideal (pi/2)_y pulse to a copy of rho,
// evolves under the surviving J coupling, samples <Sx> - i <Sy> at k*dwell
// and applies Lorentzian apodization exp(-pi * linewidth * t). With this
// detection phase and the e^{-i w t} transform below, diagonal-deviation
// states give purely absorptive real spectra with zero-order phase 0, and
// the S1zS2z part of the deviation shows up antisymmetrically: negative
// lobe at -J/(4 pi) Hz when <S1zS2z> < 0.
// Rejects dwell times above 1/(2 J_Hz) (undersampled doublet).
Fid synthesize_fid(const DensityMatrix& rho, const SpinSystem& sys, int spin,
                   int points, double dwell_s);

Spectrum fft_spectrum(const Fid& fid);

// Integration windows for the antisymmetric observable, Hz.
inline constexpr double asym_window_lo_hz = 20.0;
inline constexpr double asym_window_hi_hz = 100.0;

// Trapezoidal window integrals of the real (absorptive) part over
// [20,100] Hz minus [-100,-20] Hz. The grid is symmetric under negation,
// so symmetric spectra cancel exactly. Requires range covering +-100 Hz.
double spectrum_asymmetry(const Spectrum& spec);

// G_a = |spectrum_asymmetry|, the Bell-population observable.
double antisymmetric_component(const Spectrum& spec);

// CSV writers, shortest round-trip number formatting.
void write_fid_csv(std::ostream& os, const Fid& fid);            // t_s,re,im
void write_spectrum_csv(std::ostream& os, const Spectrum& spec); // offset_hz,re,im

}  // namespace spinpair
