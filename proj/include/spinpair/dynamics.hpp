#pragma once

#include <utility>

#include "spinpair/operators.hpp"

namespace spinpair {

enum class Frame { lab, double_rotating };

struct Hamiltonian {
  Matrix4c mat = Matrix4c::Zero();  // rad/s
  Frame frame = Frame::double_rotating;
};

// Full lab-frame Hamiltonian -Omega1 S1z - Omega2 S2z + J S1z S2z.
Hamiltonian lab_hamiltonian(const SpinSystem& sys);

// What survives in the double-rotating frame: H0 = J S1z S2z.
Hamiltonian coupling_hamiltonian(const SpinSystem& sys);

// Spin-locked rotating-frame Hamiltonian with x-phase rf fields,
// H = -w1 S1x - w2 S2x + J S1z S2z. Amplitudes may carry either sign;
// a negative value is the same field with the carrier phase shifted by pi.
Hamiltonian h_rf(const SpinSystem& sys, double w1, double w2);

struct Propagator {
  Matrix4c mat = Matrix4c::Identity();

  double unitarity_error() const {
    return max_abs(mat * mat.adjoint() - Matrix4c::Identity());
  }
};

// exp(-i H t) by Hermitian eigendecomposition. Rejects inputs whose
// asymmetry exceeds 1e-9 relative to the matrix scale.
Propagator matrix_exponential(const Matrix4c& hamiltonian, double t);

DensityMatrix apply(const Propagator& u, const DensityMatrix& rho);

DensityMatrix propagate(const DensityMatrix& rho, const Hamiltonian& h,
                        double t);

// Ideal delta pulse exp(-i angle S_{spin,axis}). With this sign a
// (+pi/2)_y pulse takes z polarization to +x: <S1x> after = <S1z> before.
enum class RotationAxis { x, y, minus_x, minus_y };

DensityMatrix hard_pulse(const DensityMatrix& rho, int spin, double angle_rad,
                         RotationAxis axis);

// ---- Hartmann-Hahn building blocks -------------------------------------
//
// In the x product basis the rf-dressed Hamiltonian is block diagonal:
// the zero-quantum pair {|ux dx>, |dx ux>} sees detuning Delta = w1 - w2,
// the double-quantum pair {|ux ux>, |dx dx>} sees Sigma = w1 + w2, and the
// J coupling provides the J/4 off-diagonal inside each block.

enum class DhhMode { delta, sigma };
enum class QuantumSector { zero_quantum, double_quantum };

// Resolve the two rf amplitudes (>= 0, rad/s) from the mode constraint:
//   delta: w1 - w2 = J/2 with Sigma = free_param (default 5J)
//   sigma: w1 + w2 = J/2 with Delta = free_param (default 0)
std::pair<double, double> dhh_amplitudes(DhhMode mode, const SpinSystem& sys,
                                         double free_param);

double dhh_default_free_param(DhhMode mode, const SpinSystem& sys);

// Matched pulse length pi*sqrt(2)/J: a pi rotation of the resonant sector.
double dhh_duration(const SpinSystem& sys);

// Detuned Hartmann-Hahn Hamiltonian. The rf carrier phase of these blocks
// is -x (the amplitudes enter h_rf negated): with J > 0 that phase is the
// one that sends the anti-aligned x states to {S0, T0,x} and the aligned
// ones to {psi+,x, psi-,x} as labeled; a +x carrier would swap the two
// outputs within each sector. rf_scale models rf inhomogeneity and
// amplitude_step (> 0, rad/s) optional transmitter discretization.
Hamiltonian dhh_hamiltonian(DhhMode mode, const SpinSystem& sys,
                            double free_param, double rf_scale = 1.0,
                            double amplitude_step = 0.0);

// One matched DHH pulse, duration pi*sqrt(2)/J.
DensityMatrix dhh_block(const DensityMatrix& rho, DhhMode mode,
                        const SpinSystem& sys, double free_param);
DensityMatrix dhh_block(const DensityMatrix& rho, DhhMode mode,
                        const SpinSystem& sys);

// Resonant Hartmann-Hahn (equalization) block: w1 = w2 = sqrt(15)/4 J for
// t = pi/J, a 2pi rotation of the double-quantum sector and a pi/2
// rotation of the zero-quantum one.
double cp_amplitude(const SpinSystem& sys);
double cp_duration(const SpinSystem& sys);
Hamiltonian cp_hamiltonian(const SpinSystem& sys, double rf_scale = 1.0,
                           double amplitude_step = 0.0);
DensityMatrix cp_block(const DensityMatrix& rho, const SpinSystem& sys);

// P rho P with P the projector onto the zero- or double-quantum pair of
// product states along the chosen quantization axis.
DensityMatrix quantum_order_projector(const DensityMatrix& rho,
                                      QuantAxis axis, QuantumSector sector);

// Basis change from the z product basis to the x product basis
// (columns = x product kets); used to inspect sector blocks.
Matrix4c x_basis_transform();

}  // namespace spinpair
