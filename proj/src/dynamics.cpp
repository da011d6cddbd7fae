#include "spinpair/dynamics.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace spinpair {

Hamiltonian lab_hamiltonian(const SpinSystem& sys) {
  sys.validate();
  Hamiltonian h;
  h.frame = Frame::lab;
  h.mat = -sys.larmor1() * spin_operator(1, Axis3::z) -
          sys.larmor2() * spin_operator(2, Axis3::z) +
          sys.j_coupling * spin_operator(1, Axis3::z) *
              spin_operator(2, Axis3::z);
  return h;
}

Hamiltonian coupling_hamiltonian(const SpinSystem& sys) {
  sys.validate();
  Hamiltonian h;
  h.mat = sys.j_coupling * spin_operator(1, Axis3::z) *
          spin_operator(2, Axis3::z);
  return h;
}

Hamiltonian h_rf(const SpinSystem& sys, double w1, double w2) {
  sys.validate();
  Hamiltonian h;
  h.mat = -w1 * spin_operator(1, Axis3::x) - w2 * spin_operator(2, Axis3::x) +
          sys.j_coupling * spin_operator(1, Axis3::z) *
              spin_operator(2, Axis3::z);
  return h;
}

Propagator matrix_exponential(const Matrix4c& hamiltonian, double t) {
  const double scale = std::max(1.0, max_abs(hamiltonian));
  if (hermiticity_error(hamiltonian) > 1e-9 * scale)
    throw ValidationError("matrix_exponential: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(hamiltonian);
  if (es.info() != Eigen::Success)
    throw NumericalError("matrix_exponential: eigendecomposition failed");
  const cdouble i(0.0, 1.0);
  Vector4c phases;
  for (int k = 0; k < 4; ++k)
    phases(k) = std::exp(-i * es.eigenvalues()(k) * t);
  Propagator u;
  u.mat = es.eigenvectors() * phases.asDiagonal() *
          es.eigenvectors().adjoint();
  return u;
}

DensityMatrix apply(const Propagator& u, const DensityMatrix& rho) {
  DensityMatrix out;
  out.mat = u.mat * rho.mat * u.mat.adjoint();
  return out;
}

DensityMatrix propagate(const DensityMatrix& rho, const Hamiltonian& h,
                        double t) {
  return apply(matrix_exponential(h.mat, t), rho);
}

namespace {

Matrix4c rotation_generator(int spin, RotationAxis axis) {
  switch (axis) {
    case RotationAxis::x: return spin_operator(spin, Axis3::x);
    case RotationAxis::y: return spin_operator(spin, Axis3::y);
    case RotationAxis::minus_x: return -spin_operator(spin, Axis3::x);
    case RotationAxis::minus_y: return -spin_operator(spin, Axis3::y);
  }
  throw ValidationError("unknown rotation axis");
}

double discretize(double w, double step) {
  if (step <= 0.0) return w;
  return std::round(w / step) * step;
}

}  // namespace

DensityMatrix hard_pulse(const DensityMatrix& rho, int spin, double angle_rad,
                         RotationAxis axis) {
  return apply(matrix_exponential(rotation_generator(spin, axis), angle_rad),
               rho);
}

std::pair<double, double> dhh_amplitudes(DhhMode mode, const SpinSystem& sys,
                                         double free_param) {
  sys.validate();
  const double j = sys.j_coupling;
  double delta = 0.0, sigma = 0.0;
  if (mode == DhhMode::delta) {
    delta = 0.5 * j;
    sigma = free_param;
  } else {
    sigma = 0.5 * j;
    delta = free_param;
  }
  const double w1 = 0.5 * (sigma + delta);
  const double w2 = 0.5 * (sigma - delta);
  if (w1 < 0.0 || w2 < 0.0)
    throw ValidationError(
        "detuned Hartmann-Hahn condition needs nonnegative rf amplitudes");
  return {w1, w2};
}

double dhh_default_free_param(DhhMode mode, const SpinSystem& sys) {
  return mode == DhhMode::delta ? 5.0 * sys.j_coupling : 0.0;
}

double dhh_duration(const SpinSystem& sys) {
  return pi * std::sqrt(2.0) / sys.j_coupling;
}

Hamiltonian dhh_hamiltonian(DhhMode mode, const SpinSystem& sys,
                            double free_param, double rf_scale,
                            double amplitude_step) {
  auto [w1, w2] = dhh_amplitudes(mode, sys, free_param);
  w1 = discretize(w1 * rf_scale, amplitude_step);
  w2 = discretize(w2 * rf_scale, amplitude_step);
  // -x carrier phase; see header.
  return h_rf(sys, -w1, -w2);
}

DensityMatrix dhh_block(const DensityMatrix& rho, DhhMode mode,
                        const SpinSystem& sys, double free_param) {
  return propagate(rho, dhh_hamiltonian(mode, sys, free_param),
                   dhh_duration(sys));
}

DensityMatrix dhh_block(const DensityMatrix& rho, DhhMode mode,
                        const SpinSystem& sys) {
  return dhh_block(rho, mode, sys, dhh_default_free_param(mode, sys));
}

double cp_amplitude(const SpinSystem& sys) {
  return std::sqrt(15.0) / 4.0 * sys.j_coupling;
}

double cp_duration(const SpinSystem& sys) { return pi / sys.j_coupling; }

Hamiltonian cp_hamiltonian(const SpinSystem& sys, double rf_scale,
                           double amplitude_step) {
  const double w = discretize(cp_amplitude(sys) * rf_scale, amplitude_step);
  return h_rf(sys, w, w);
}

DensityMatrix cp_block(const DensityMatrix& rho, const SpinSystem& sys) {
  return propagate(rho, cp_hamiltonian(sys), cp_duration(sys));
}

Matrix4c x_basis_transform() {
  Matrix2c h;
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;  // columns |ux>, |dx>
  return Eigen::kroneckerProduct(h, h);
}

DensityMatrix quantum_order_projector(const DensityMatrix& rho,
                                      QuantAxis axis, QuantumSector sector) {
  // indices of the sector's product kets in (uu, ud, du, dd) order
  const int a = sector == QuantumSector::zero_quantum ? 1 : 0;
  const int b = sector == QuantumSector::zero_quantum ? 2 : 3;
  Matrix4c p = Matrix4c::Zero();
  p(a, a) = 1.0;
  p(b, b) = 1.0;
  if (axis == QuantAxis::x) {
    const Matrix4c v = x_basis_transform();
    p = v * p * v.adjoint();
  }
  DensityMatrix out;
  out.mat = p * rho.mat * p;
  return out;
}

}  // namespace spinpair
