#include "spinpair/tomography.hpp"

#include <random>

#include <nlohmann/json.hpp>

namespace spinpair {

namespace {

std::array<Matrix4c, n_product_operators> build_basis() {
  std::array<Matrix4c, n_product_operators> basis;
  const Axis3 axes[3] = {Axis3::x, Axis3::y, Axis3::z};
  int k = 0;
  for (Axis3 a : axes) basis[k++] = spin_operator(1, a);
  for (Axis3 a : axes) basis[k++] = spin_operator(2, a);
  for (Axis3 a : axes)
    for (Axis3 b : axes)
      basis[k++] = 2.0 * spin_operator(1, a) * spin_operator(2, b);
  return basis;
}

}  // namespace

const std::array<Matrix4c, n_product_operators>& product_operator_basis() {
  static const auto basis = build_basis();
  return basis;
}

const std::array<const char*, n_product_operators>& product_operator_labels() {
  static const std::array<const char*, n_product_operators> labels = {
      "S1x",    "S1y",    "S1z",    "S2x",    "S2y",    "S2z",
      "2S1xS2x", "2S1xS2y", "2S1xS2z", "2S1yS2x", "2S1yS2y", "2S1yS2z",
      "2S1zS2x", "2S1zS2y", "2S1zS2z"};
  return labels;
}

std::array<double, n_product_operators> measure_expectations(
    const DensityMatrix& rho) {
  std::array<double, n_product_operators> out;
  const auto& basis = product_operator_basis();
  for (int k = 0; k < n_product_operators; ++k)
    out[k] = expectation(rho, basis[k]);
  return out;
}

TomographyResult reconstruct(
    const std::array<double, n_product_operators>& expectations) {
  const auto& basis = product_operator_basis();
  Matrix4c m = 0.25 * Matrix4c::Identity();
  for (int k = 0; k < n_product_operators; ++k)
    m += expectations[k] * basis[k];
  TomographyResult result;
  result.rho.mat = 0.5 * (m + m.adjoint());
  const auto remeasured = measure_expectations(result.rho);
  for (int k = 0; k < n_product_operators; ++k)
    result.residual =
        std::max(result.residual, std::abs(remeasured[k] - expectations[k]));
  return result;
}

void RfErrorModel::validate() const {
  if (amplitude_spread < 0.0)
    throw ValidationError("rf amplitude spread must be nonnegative");
  if (ensemble_size < 1)
    throw ValidationError("ensemble size must be at least 1");
  if (amplitude_step < 0.0)
    throw ValidationError("amplitude step must be nonnegative");
}

TomographySimulation simulate_tomography(BellKind kind, const SpinSystem& sys,
                                         const RfErrorModel& error,
                                         std::uint64_t seed) {
  error.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> scale_dist(1.0, error.amplitude_spread);

  Matrix4c sum = Matrix4c::Zero();
  for (int member = 0; member < error.ensemble_size; ++member) {
    ExecutionOptions opts;
    opts.rf_scale = error.amplitude_spread > 0.0 ? scale_dist(rng) : 1.0;
    opts.amplitude_step = error.amplitude_step;
    sum += prepare_bell(kind, sys, opts).final_state().mat;
  }

  TomographySimulation sim;
  sim.mean_state.mat = sum / static_cast<double>(error.ensemble_size);
  sim.result = reconstruct(measure_expectations(sim.mean_state));
  sim.fidelity = deviation_fidelity(sim.result.rho,
                                    bell_state(kind, QuantAxis::z),
                                    sys.pseudo_pure_scale());
  return sim;
}

nlohmann::json tomogram_to_json(const DensityMatrix& rho, double scale) {
  if (scale == 0.0) throw ValidationError("tomogram scale must be nonzero");
  const Matrix4c norm =
      0.25 * Matrix4c::Identity() + rho.deviation() / scale;
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      re_row.push_back(norm(r, c).real());
      im_row.push_back(norm(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return nlohmann::json{{"labels", {"00", "01", "10", "11"}},
                        {"real", re},
                        {"imag", im},
                        {"deviation_scale", scale}};
}

}  // namespace spinpair
