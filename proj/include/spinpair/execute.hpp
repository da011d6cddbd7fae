#pragma once

#include <nlohmann/json_fwd.hpp>

#include "spinpair/pulse_program.hpp"
#include "spinpair/spectra.hpp"

namespace spinpair {

struct Snapshot {
  std::string label;  // "initial" or the instruction's canonical text
  DensityMatrix state;
};

struct ExecutionTrace {
  std::string program;
  std::vector<Snapshot> snapshots;  // initial state + one per instruction
  std::vector<Fid> acquisitions;
  std::vector<std::string> warnings;

  const DensityMatrix& final_state() const { return snapshots.back().state; }
};

// Rf imperfections applied uniformly to a run: every pulse angle scales
// with rf_scale, the Hartmann-Hahn block amplitudes scale with rf_scale
// and are optionally rounded to amplitude_step (rad/s, 0 = off).
struct ExecutionOptions {
  double rf_scale = 1.0;
  double amplitude_step = 0.0;
};

// Idealized pulsed-field-gradient crusher.
//   coherence_order: zeroes every element whose z coherence order p != 0
//   diagonal:        keeps only the z-basis diagonal (also kills the
//                    zero-quantum residual the equalization block leaves)
DensityMatrix gradient_crush(const DensityMatrix& rho, GradientModel model);

// Idealized pseudo-pure preparation: infers c = (<S1z>+<S2z>)/2 and
// returns pseudo_pure(|uu>, c). Inputs that already are a pseudo-pure
// state on |uu> pass through unchanged (projection fixed point). Appends
// a warning when the input deviation is not c(S1z+S2z) within 1e-6.
DensityMatrix pps_prepare(const DensityMatrix& rho,
                          std::vector<std::string>* warnings = nullptr);

// Runs a program. Delays evolve under the surviving J coupling; acquire
// synthesizes an FID from a copy of the state (readout pulse included)
// without disturbing the running state. Instruction errors propagate.
ExecutionTrace execute(const PulseProgram& prog, const SpinSystem& sys,
                       const DensityMatrix& rho0,
                       const ExecutionOptions& opts = {});

// builtin_program(kind) run from thermal equilibrium.
ExecutionTrace prepare_bell(BellKind kind, const SpinSystem& sys,
                            const ExecutionOptions& opts = {});

// Snapshot states as flattened row-major re/im arrays in the z product
// basis, plus acquisitions and warnings.
nlohmann::json trace_to_json(const ExecutionTrace& trace);

}  // namespace spinpair
