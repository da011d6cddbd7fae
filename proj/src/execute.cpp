#include "spinpair/execute.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace spinpair {

DensityMatrix gradient_crush(const DensityMatrix& rho, GradientModel model) {
  // total z angular momentum of each product ket, in units of 1/2
  static constexpr int m2[4] = {2, 0, 0, -2};
  DensityMatrix out = rho;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const bool keep = model == GradientModel::diagonal
                            ? r == c
                            : m2[r] == m2[c];
      if (!keep) out.mat(r, c) = 0.0;
    }
  return out;
}

DensityMatrix pps_prepare(const DensityMatrix& rho,
                          std::vector<std::string>* warnings) {
  const Matrix4c s1z = spin_operator(1, Axis3::z);
  const Matrix4c s2z = spin_operator(2, Axis3::z);
  const Matrix4c dev = rho.deviation();

  Vector4c uu = Vector4c::Zero();
  uu(0) = 1.0;

  // already pseudo-pure on |uu>? then this is a fixed point
  const double c_pps = ((uu.adjoint() * dev * uu).value().real()) / 0.75;
  if (c_pps >= -1.0 / 3.0 && c_pps <= 1.0) {
    const Matrix4c resid =
        dev - c_pps * (uu * uu.adjoint() - 0.25 * Matrix4c::Identity());
    if (max_abs(resid) <= 1e-9) return rho;
  }

  const double c = 0.5 * (expectation(rho, s1z) + expectation(rho, s2z));
  const Matrix4c resid = dev - c * (s1z + s2z);
  if (max_abs(resid) > 1e-6 && warnings)
    warnings->push_back(
        "pps input deviation is not of the form c(S1z+S2z); residual " +
        format_double(max_abs(resid)));
  return pseudo_pure(uu, c);
}

namespace {

struct Executor {
  const SpinSystem& sys;
  const ExecutionOptions& opts;
  ExecutionTrace& trace;
  DensityMatrix state;

  void operator()(const PulseInstr& p) {
    const double angle =
        p.angle_deg * pi / 180.0 * opts.rf_scale;
    state = hard_pulse(state, static_cast<int>(p.channel), angle, p.axis);
  }
  void operator()(const DelayInstr& d) {
    state = propagate(state, coupling_hamiltonian(sys), d.t.seconds(sys));
  }
  void operator()(const CpInstr& c) {
    state = propagate(
        state, cp_hamiltonian(sys, opts.rf_scale, opts.amplitude_step),
        c.t.seconds(sys));
  }
  void operator()(const DhhInstr& d) {
    const double free_param = d.free_param
                                  ? d.free_param->rad_per_s(sys)
                                  : dhh_default_free_param(d.mode, sys);
    state = propagate(state,
                      dhh_hamiltonian(d.mode, sys, free_param, opts.rf_scale,
                                      opts.amplitude_step),
                      d.t.seconds(sys));
  }
  void operator()(const GradientInstr& g) {
    state = gradient_crush(state, g.model);
  }
  void operator()(const PpsInstr&) {
    state = pps_prepare(state, &trace.warnings);
  }
  void operator()(const AcquireInstr& a) {
    trace.acquisitions.push_back(synthesize_fid(
        state, sys, static_cast<int>(a.channel), a.points, a.dwell_s));
  }
};

}  // namespace

ExecutionTrace execute(const PulseProgram& prog, const SpinSystem& sys,
                       const DensityMatrix& rho0,
                       const ExecutionOptions& opts) {
  sys.validate();
  ExecutionTrace trace;
  trace.program = prog.name;
  trace.snapshots.push_back({"initial", rho0});
  Executor exec{sys, opts, trace, rho0};
  for (const auto& instr : prog.instructions) {
    std::visit(exec, instr);
    trace.snapshots.push_back({pretty_print_instruction(instr), exec.state});
  }
  return trace;
}

ExecutionTrace prepare_bell(BellKind kind, const SpinSystem& sys,
                            const ExecutionOptions& opts) {
  return execute(builtin_program(kind), sys, equilibrium_state(sys), opts);
}

namespace {

nlohmann::json matrix_arrays(const Matrix4c& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  return nlohmann::json{{"re", re}, {"im", im}};
}

}  // namespace

nlohmann::json trace_to_json(const ExecutionTrace& trace) {
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& snap : trace.snapshots) {
    nlohmann::json j = matrix_arrays(snap.state.mat);
    j["label"] = snap.label;
    snaps.push_back(std::move(j));
  }
  nlohmann::json acqs = nlohmann::json::array();
  for (const auto& fid : trace.acquisitions) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (const auto& s : fid.samples) {
      re.push_back(s.real());
      im.push_back(s.imag());
    }
    acqs.push_back({{"spin", fid.spin},
                    {"dwell_s", fid.dwell_s},
                    {"points", fid.samples.size()},
                    {"re", re},
                    {"im", im}});
  }
  return nlohmann::json{{"program", trace.program},
                        {"warnings", trace.warnings},
                        {"snapshots", snaps},
                        {"acquisitions", acqs}};
}

}  // namespace spinpair
