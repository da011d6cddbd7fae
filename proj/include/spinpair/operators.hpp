#pragma once

#include "spinpair/common.hpp"
#include "spinpair/spin_system.hpp"

namespace spinpair {

// Product basis is ordered |uu>, |ud>, |du>, |dd> with spin 1 as the left
// Kronecker factor; u/d are the +/- z eigenstates. Spin operators are the
// usual sigma/2 embedded in the 4-dim space, so Tr(S_ia^2) = 1 and
// <A> = Tr(rho A) needs no extra normalization (<S1z>_eq = eps1 directly).

enum class Axis3 { x, y, z };
enum class QuantAxis { x, z };

// The four maximally entangled states the preparation pipeline targets.
enum class BellKind { singlet, triplet0, psi_plus, psi_minus };

const char* to_string(BellKind kind);

Matrix4c spin_operator(int spin, Axis3 axis);

// 2x2 Pauli/2 for one spin, used to build product operators.
Matrix2c half_pauli(Axis3 axis);

// Single-spin eigenkets of S_a, a in {x,z}, expressed in the z basis.
Eigen::Vector2cd spin_ket(QuantAxis axis, bool up);

// Bell states quantized along x or z:
//   singlet  (|u_a d_a> - |d_a u_a>)/sqrt(2)
//   triplet0 (|u_a d_a> + |d_a u_a>)/sqrt(2)
//   psi_\pm  (|u_a u_a> \pm |d_a d_a>)/sqrt(2)
Vector4c bell_state(BellKind kind, QuantAxis axis);

// Same projectors written as sums of product operators
// (e.g. |S0><S0| = I/4 - S1z S2z - (S1+S2- + S1-S2+)/2, with the standard
// ladder operators S± = Sx ± i Sy). z quantization.
Matrix4c bell_operator_form(BellKind kind);

// Density matrix of the pair. Thin value type; physicality is checked by
// the diagnostics below rather than enforced on every arithmetic step,
// because tomographic reconstructions may legitimately carry small
// negative eigenvalues that must be reported, not clipped.
struct DensityMatrix {
  Matrix4c mat = Matrix4c::Zero();

  double trace_error() const { return std::abs(mat.trace() - cdouble(1.0)); }
  double hermiticity_error() const { return spinpair::hermiticity_error(mat); }
  double min_eigenvalue() const;
  // deviation from the maximally mixed state
  Matrix4c deviation() const { return mat - 0.25 * Matrix4c::Identity(); }
};

// Thermal state I/4 + eps1 S1z + eps2 S2z (high-temperature expansion).
DensityMatrix equilibrium_state(const SpinSystem& sys);

// (1-c) I/4 + c |psi><psi|; positivity bounds c to [-1/3, 1].
DensityMatrix pseudo_pure(const Vector4c& psi, double c);

double expectation(const DensityMatrix& rho, const Matrix4c& op);

// <psi| rho |psi>
double fidelity(const DensityMatrix& rho, const Vector4c& psi);

// Fidelity of the deviation part rescaled by the nominal pseudo-pure
// amplitude: <psi| (I/4 + (rho - I/4)/scale) |psi>. Equals |<psi|phi>|^2
// when rho = pseudo_pure(phi, scale).
double deviation_fidelity(const DensityMatrix& rho, const Vector4c& psi,
                          double scale);

// Reduced 2x2 state of one spin (the other is traced out).
Matrix2c reduced_state(const DensityMatrix& rho, int spin);

}  // namespace spinpair
