#include "spinpair/spectra.hpp"

#include <cmath>
#include <ostream>

#include <unsupported/Eigen/FFT>

namespace spinpair {

Fid synthesize_fid(const DensityMatrix& rho, const SpinSystem& sys, int spin,
                   int points, double dwell_s) {
  sys.validate();
  if (spin != 1 && spin != 2) throw ValidationError("spin index must be 1 or 2");
  if (points < 2) throw ValidationError("FID needs at least 2 points");
  if (dwell_s <= 0.0) throw ValidationError("dwell must be positive");
  if (dwell_s > 1.0 / (2.0 * sys.j_hz()))
    throw ValidationError(
        "dwell undersamples the J doublet (need dwell <= 1/(2 J_Hz))");

  const double linewidth = spin == 1 ? sys.linewidth1 : sys.linewidth2;
  const Matrix4c sx = spin_operator(spin, Axis3::x);
  const Matrix4c sy = spin_operator(spin, Axis3::y);

  DensityMatrix state = hard_pulse(rho, spin, 0.5 * pi, RotationAxis::y);
  const Propagator step =
      matrix_exponential(coupling_hamiltonian(sys).mat, dwell_s);

  Fid fid;
  fid.dwell_s = dwell_s;
  fid.spin = spin;
  fid.samples.reserve(points);
  for (int k = 0; k < points; ++k) {
    const double t = k * dwell_s;
    const cdouble s(expectation(state, sx), -expectation(state, sy));
    fid.samples.push_back(s * std::exp(-pi * linewidth * t));
    state = apply(step, state);
  }
  return fid;
}

Spectrum fft_spectrum(const Fid& fid) {
  const int n = static_cast<int>(fid.samples.size());
  if (n < 2) throw ValidationError("FID too short for a spectrum");
  if (fid.dwell_s <= 0.0) throw ValidationError("dwell must be positive");

  Eigen::FFT<double> fft;
  std::vector<cdouble> raw;
  fft.fwd(raw, fid.samples);

  const double df = 1.0 / (n * fid.dwell_s);
  const int half = n / 2;
  Spectrum spec;
  spec.offsets_hz.resize(n);
  spec.amplitudes.resize(n);
  for (int j = 0; j < n; ++j) {
    const int m = (j + n - half) % n;  // fftshift
    spec.offsets_hz[j] = (j - half) * df;
    spec.amplitudes[j] = fid.dwell_s * raw[m];
  }
  return spec;
}

namespace {

// trapezoid over the grid points falling inside [lo, hi]
double window_integral(const Spectrum& spec, double lo, double hi) {
  double acc = 0.0;
  bool have_prev = false;
  double prev_f = 0.0, prev_y = 0.0;
  for (size_t k = 0; k < spec.offsets_hz.size(); ++k) {
    const double f = spec.offsets_hz[k];
    if (f < lo || f > hi) continue;
    const double y = spec.amplitudes[k].real();
    if (have_prev) acc += 0.5 * (f - prev_f) * (y + prev_y);
    prev_f = f;
    prev_y = y;
    have_prev = true;
  }
  return acc;
}

}  // namespace

double spectrum_asymmetry(const Spectrum& spec) {
  if (spec.offsets_hz.size() < 2 || spec.offsets_hz.size() != spec.amplitudes.size())
    throw ValidationError("malformed spectrum");
  if (spec.offsets_hz.front() > -asym_window_hi_hz ||
      spec.offsets_hz.back() < asym_window_hi_hz)
    throw ValidationError("insufficient spectral range (need +-100 Hz)");
  return window_integral(spec, asym_window_lo_hz, asym_window_hi_hz) -
         window_integral(spec, -asym_window_hi_hz, -asym_window_lo_hz);
}

double antisymmetric_component(const Spectrum& spec) {
  return std::abs(spectrum_asymmetry(spec));
}

void write_fid_csv(std::ostream& os, const Fid& fid) {
  os << "t_s,re,im\n";
  for (size_t k = 0; k < fid.samples.size(); ++k)
    os << format_double(k * fid.dwell_s) << ','
       << format_double(fid.samples[k].real()) << ','
       << format_double(fid.samples[k].imag()) << '\n';
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spec) {
  os << "offset_hz,re,im\n";
  for (size_t k = 0; k < spec.offsets_hz.size(); ++k)
    os << format_double(spec.offsets_hz[k]) << ','
       << format_double(spec.amplitudes[k].real()) << ','
       << format_double(spec.amplitudes[k].imag()) << '\n';
}

}  // namespace spinpair
