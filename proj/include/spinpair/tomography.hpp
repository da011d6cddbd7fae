#pragma once

#include <array>
#include <cstdint>

#include <nlohmann/json_fwd.hpp>

#include "spinpair/execute.hpp"

namespace spinpair {

// The 15 traceless product operators {S1a, S2a, 2 S1a S2b}, orthonormal
// under the Hilbert-Schmidt inner product (Tr(P_i P_j) = delta_ij);
// together with I/2 they form a complete operator basis, so ideal linear
// inversion is exact: rho = I/4 + sum_k <P_k> P_k.
inline constexpr int n_product_operators = 15;

const std::array<Matrix4c, n_product_operators>& product_operator_basis();

// "S1x", ..., "2S1zS2z" in basis order (three spin-1 singles, three
// spin-2 singles, then 2 S1a S2b row-major over a,b in {x,y,z}).
const std::array<const char*, n_product_operators>& product_operator_labels();

std::array<double, n_product_operators> measure_expectations(
    const DensityMatrix& rho);

struct TomographyResult {
  DensityMatrix rho;
  double residual = 0.0;  // max |remeasured - input| over the 15 values
};

// Inverse of measure_expectations. The result is Hermitian with unit trace
// by construction; eigenvalues are reported as-is (never clipped), since
// noisy expectation sets legitimately reconstruct slightly unphysical
// states.
TomographyResult reconstruct(
    const std::array<double, n_product_operators>& expectations);

// Rf-amplitude error model for Monte-Carlo preparation ensembles: each
// member scales all rf amplitudes by a normal(1, amplitude_spread) draw;
// amplitude_step forwards to the executor's transmitter discretization.
struct RfErrorModel {
  double amplitude_spread = 0.0;
  int ensemble_size = 1;
  double amplitude_step = 0.0;

  void validate() const;
};

struct TomographySimulation {
  TomographyResult result;
  DensityMatrix mean_state;  // ensemble average fed into the inversion
  double fidelity = 0.0;     // deviation fidelity vs the ideal Bell target
};

// Prepares the kind's Bell state once per ensemble member (seeded
// mt19937_64, draws consumed in member order; identical seeds give
// identical ensembles), averages, measures, reconstructs.
TomographySimulation simulate_tomography(BellKind kind, const SpinSystem& sys,
                                         const RfErrorModel& error,
                                         std::uint64_t seed);

// Tomogram export: real/imag 4x4 arrays of the normalized deviation state
// I/4 + (rho - I/4)/scale with basis labels "00","01","10","11" (0 = up).
nlohmann::json tomogram_to_json(const DensityMatrix& rho, double scale);

}  // namespace spinpair
