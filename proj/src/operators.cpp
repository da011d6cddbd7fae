#include "spinpair/operators.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace spinpair {

const char* to_string(BellKind kind) {
  switch (kind) {
    case BellKind::singlet: return "S0";
    case BellKind::triplet0: return "T0";
    case BellKind::psi_plus: return "psi_plus";
    case BellKind::psi_minus: return "psi_minus";
  }
  throw ValidationError("unknown Bell kind");
}

Matrix2c half_pauli(Axis3 axis) {
  Matrix2c m;
  const cdouble i(0.0, 1.0);
  switch (axis) {
    case Axis3::x: m << 0.0, 0.5, 0.5, 0.0; break;
    case Axis3::y: m << 0.0, -0.5 * i, 0.5 * i, 0.0; break;
    case Axis3::z: m << 0.5, 0.0, 0.0, -0.5; break;
  }
  return m;
}

Matrix4c spin_operator(int spin, Axis3 axis) {
  if (spin != 1 && spin != 2) throw ValidationError("spin index must be 1 or 2");
  const Matrix2c id = Matrix2c::Identity();
  const Matrix2c s = half_pauli(axis);
  if (spin == 1) return Eigen::kroneckerProduct(s, id);
  return Eigen::kroneckerProduct(id, s);
}

Eigen::Vector2cd spin_ket(QuantAxis axis, bool up) {
  Eigen::Vector2cd v;
  const double r = 1.0 / std::sqrt(2.0);
  if (axis == QuantAxis::z)
    v << (up ? 1.0 : 0.0), (up ? 0.0 : 1.0);
  else
    v << r, (up ? r : -r);
  return v;
}

namespace {

Vector4c product_ket(QuantAxis axis, bool up1, bool up2) {
  return Eigen::kroneckerProduct(spin_ket(axis, up1), spin_ket(axis, up2));
}

}  // namespace

Vector4c bell_state(BellKind kind, QuantAxis axis) {
  const double r = 1.0 / std::sqrt(2.0);
  const Vector4c uu = product_ket(axis, true, true);
  const Vector4c ud = product_ket(axis, true, false);
  const Vector4c du = product_ket(axis, false, true);
  const Vector4c dd = product_ket(axis, false, false);
  switch (kind) {
    case BellKind::singlet: return r * (ud - du);
    case BellKind::triplet0: return r * (ud + du);
    case BellKind::psi_plus: return r * (uu + dd);
    case BellKind::psi_minus: return r * (uu - dd);
  }
  throw ValidationError("unknown Bell kind");
}

Matrix4c bell_operator_form(BellKind kind) {
  const cdouble i(0.0, 1.0);
  const Matrix4c s1z = spin_operator(1, Axis3::z);
  const Matrix4c s2z = spin_operator(2, Axis3::z);
  const Matrix4c s1p = spin_operator(1, Axis3::x) + i * spin_operator(1, Axis3::y);
  const Matrix4c s1m = spin_operator(1, Axis3::x) - i * spin_operator(1, Axis3::y);
  const Matrix4c s2p = spin_operator(2, Axis3::x) + i * spin_operator(2, Axis3::y);
  const Matrix4c s2m = spin_operator(2, Axis3::x) - i * spin_operator(2, Axis3::y);
  const Matrix4c quarter = 0.25 * Matrix4c::Identity();
  const Matrix4c zz = s1z * s2z;
  const Matrix4c flip_flop = 0.5 * (s1p * s2m + s1m * s2p);
  const Matrix4c flip_flip = 0.5 * (s1p * s2p + s1m * s2m);
  switch (kind) {
    case BellKind::singlet: return quarter - zz - flip_flop;
    case BellKind::triplet0: return quarter - zz + flip_flop;
    case BellKind::psi_plus: return quarter + zz + flip_flip;
    case BellKind::psi_minus: return quarter + zz - flip_flip;
  }
  throw ValidationError("unknown Bell kind");
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (mat + mat.adjoint()));
  return es.eigenvalues().minCoeff();
}

DensityMatrix equilibrium_state(const SpinSystem& sys) {
  sys.validate();
  DensityMatrix rho;
  rho.mat = 0.25 * Matrix4c::Identity() +
            sys.polarization1() * spin_operator(1, Axis3::z) +
            sys.polarization2() * spin_operator(2, Axis3::z);
  return rho;
}

DensityMatrix pseudo_pure(const Vector4c& psi, double c) {
  if (c < -1.0 / 3.0 || c > 1.0)
    throw ValidationError("pseudo-pure amplitude outside [-1/3, 1]");
  const double n2 = psi.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-9)
    throw ValidationError("pseudo-pure target ket is not normalized");
  DensityMatrix rho;
  rho.mat = (1.0 - c) * 0.25 * Matrix4c::Identity() + c * psi * psi.adjoint();
  return rho;
}

double expectation(const DensityMatrix& rho, const Matrix4c& op) {
  return (rho.mat * op).trace().real();
}

double fidelity(const DensityMatrix& rho, const Vector4c& psi) {
  return (psi.adjoint() * rho.mat * psi).value().real();
}

double deviation_fidelity(const DensityMatrix& rho, const Vector4c& psi,
                          double scale) {
  if (scale == 0.0) throw ValidationError("deviation scale must be nonzero");
  const Matrix4c dev = rho.deviation();
  return 0.25 + (psi.adjoint() * dev * psi).value().real() / scale;
}

Matrix2c reduced_state(const DensityMatrix& rho, int spin) {
  if (spin != 1 && spin != 2) throw ValidationError("spin index must be 1 or 2");
  Matrix2c out = Matrix2c::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k) {
        // trace out the other spin
        const int row = (spin == 1) ? 2 * a + k : 2 * k + a;
        const int col = (spin == 1) ? 2 * b + k : 2 * k + b;
        out(a, b) += rho.mat(row, col);
      }
  return out;
}

}  // namespace spinpair
