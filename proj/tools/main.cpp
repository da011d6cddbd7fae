#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinpair/config.hpp"
#include "spinpair/execute.hpp"
#include "spinpair/relaxation.hpp"
#include "spinpair/spectra.hpp"
#include "spinpair/tomography.hpp"

namespace {

using namespace spinpair;
using nlohmann::json;

BellKind kind_from_name(const std::string& name) {
  if (name == "S0") return BellKind::singlet;
  if (name == "T0") return BellKind::triplet0;
  if (name == "psi_plus") return BellKind::psi_plus;
  if (name == "psi_minus") return BellKind::psi_minus;
  throw ValidationError("unknown state '" + name +
                        "' (expected S0, T0, psi_plus or psi_minus)");
}

// Writes via a temporary file plus rename so readers never observe a
// partially written output.
void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) {
      throw ValidationError("cannot open '" + tmp.string() + "' for writing");
    }
    os << content;
    if (!os) {
      throw ValidationError("failed while writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

std::string state_json(const DensityMatrix& rho) {
  json j;
  j["labels"] = {"00", "01", "10", "11"};
  json re = json::array();
  json im = json::array();
  for (int r = 0; r < 4; ++r) {
    json re_row = json::array();
    json im_row = json::array();
    for (int c = 0; c < 4; ++c) {
      re_row.push_back(rho.mat(r, c).real());
      im_row.push_back(rho.mat(r, c).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  j["real"] = re;
  j["imag"] = im;
  return j.dump(2) + "\n";
}

RunConfig config_from_flag(const std::string& path) {
  if (path.empty()) {
    RunConfig config;
    config.validate();
    return config;
  }
  return load_config(path);
}

std::string report_text(const ExecutionTrace& trace, BellKind kind,
                        const SpinSystem& sys) {
  const DensityMatrix rho = trace.final_state();
  std::ostringstream os;
  os << "program: " << trace.program << "\n";
  os << "instructions: " << trace.snapshots.size() - 1 << "\n";
  os << "target: " << to_string(kind) << "\n";
  os << "deviation_fidelity: "
     << format_double(deviation_fidelity(rho, bell_state(kind, QuantAxis::z),
                                         sys.pseudo_pure_scale()))
     << "\n";
  os << "trace_error: " << format_double(rho.trace_error()) << "\n";
  os << "hermiticity_error: " << format_double(rho.hermiticity_error()) << "\n";
  os << "min_eigenvalue: " << format_double(rho.min_eigenvalue()) << "\n";
  for (const auto& warning : trace.warnings) {
    os << "warning: " << warning << "\n";
  }
  return os.str();
}

int run_prepare(const std::string& state_name, const RunConfig& config,
                const std::string& out_prefix) {
  const BellKind kind = kind_from_name(state_name);
  const SpinSystem sys = config.make_spin_system();
  ExecutionOptions opts;
  opts.amplitude_step = config.amplitude_step;
  const PulseProgram program = builtin_program(kind);
  const ExecutionTrace trace =
      execute(program, sys, equilibrium_state(sys), opts);
  write_atomic(out_prefix + "_trace.json", trace_to_json(trace).dump(2) + "\n");
  write_atomic(out_prefix + "_state.json", state_json(trace.final_state()));
  write_atomic(out_prefix + "_report.txt", report_text(trace, kind, sys));
  std::cout << report_text(trace, kind, sys);
  return 0;
}

int run_tomo(const std::string& state_name, const RunConfig& config,
             const std::string& out_path) {
  const BellKind kind = kind_from_name(state_name);
  const SpinSystem sys = config.make_spin_system();
  const RfErrorModel model = config.make_error_model();
  const TomographySimulation sim =
      simulate_tomography(kind, sys, model, config.seed);
  json j = tomogram_to_json(sim.result.rho, sys.pseudo_pure_scale());
  j["state"] = to_string(kind);
  j["fidelity"] = sim.fidelity;
  j["residual"] = sim.result.residual;
  j["min_eigenvalue"] = sim.result.rho.min_eigenvalue();
  j["ensemble"] = model.ensemble_size;
  j["rf_spread"] = model.amplitude_spread;
  j["seed"] = config.seed;
  write_atomic(out_path, j.dump(2) + "\n");
  std::cout << "state: " << to_string(kind) << "\n"
            << "fidelity: " << format_double(sim.fidelity) << "\n"
            << "residual: " << format_double(sim.result.residual) << "\n";
  return 0;
}

int run_spectrum(const std::string& state_name, const RunConfig& config,
                 const std::string& out_path) {
  const SpinSystem sys = config.make_spin_system();
  DensityMatrix rho;
  std::string label = state_name;
  if (state_name == "eq") {
    rho = equilibrium_state(sys);
  } else {
    const BellKind kind = kind_from_name(state_name);
    ExecutionOptions opts;
    opts.amplitude_step = config.amplitude_step;
    rho = prepare_bell(kind, sys, opts).final_state();
    label = to_string(kind);
  }
  const Fid fid = synthesize_fid(rho, sys, 1, config.points, config.dwell_s);
  const Spectrum spectrum = fft_spectrum(fid);
  std::ostringstream csv;
  write_spectrum_csv(csv, spectrum);
  write_atomic(out_path, csv.str());
  std::cout << "state: " << label << "\n"
            << "points: " << config.points << "\n"
            << "antisymmetric_component: "
            << format_double(antisymmetric_component(spectrum)) << "\n";
  return 0;
}

int run_relax(const std::string& state_name, const RunConfig& config,
              const std::string& out_path) {
  const BellKind kind = kind_from_name(state_name);
  const SpinSystem sys = config.make_spin_system();
  const RateMatrix rates = config.make_rates();
  const std::vector<double> taus =
      default_tau_grid(config.tau_max_s, config.tau_step_s);
  const DecayCurve curve =
      simulate_decay(kind, rates, sys, taus, config.make_acquisition());
  std::ostringstream csv;
  write_decay_csv(csv, curve);
  write_atomic(out_path, csv.str());
  const double rate =
      initial_rate(rates, bell_initial_conditions(kind, sys), sys);
  std::cout << "state: " << to_string(kind) << "\n"
            << "points: " << curve.times_s.size() << "\n"
            << "initial_rate: " << format_double(rate) << "\n"
            << "initial_time: " << format_double(1.0 / rate) << "\n";
  return 0;
}

int run_fit(const std::string& in_path, double window_s) {
  std::ifstream is(in_path);
  if (!is) {
    throw ValidationError("cannot open decay file '" + in_path + "'");
  }
  const DecayCurve curve = read_decay_csv(is);
  const ExpFit fit = fit_initial_exponential(curve, window_s);
  std::cout << "tau_init: " << format_double(fit.tau) << "\n"
            << "amplitude: " << format_double(fit.amplitude) << "\n"
            << "rms_residual: " << format_double(fit.rms_residual) << "\n";
  return 0;
}

int run_program_file(const std::string& seq_path, const RunConfig& config,
                     const std::string& out_prefix) {
  std::ifstream is(seq_path);
  if (!is) {
    throw ValidationError("cannot open program file '" + seq_path + "'");
  }
  std::ostringstream buffer;
  buffer << is.rdbuf();
  const std::string name = std::filesystem::path(seq_path).stem().string();
  const PulseProgram program = parse(buffer.str(), name);
  const SpinSystem sys = config.make_spin_system();
  ExecutionOptions opts;
  opts.amplitude_step = config.amplitude_step;
  const ExecutionTrace trace =
      execute(program, sys, equilibrium_state(sys), opts);
  write_atomic(out_prefix + "_trace.json", trace_to_json(trace).dump(2) + "\n");
  write_atomic(out_prefix + "_state.json", state_json(trace.final_state()));
  const DensityMatrix rho = trace.final_state();
  std::cout << "program: " << program.name << "\n"
            << "instructions: " << program.instructions.size() << "\n"
            << "trace_error: " << format_double(rho.trace_error()) << "\n"
            << "min_eigenvalue: " << format_double(rho.min_eigenvalue())
            << "\n";
  for (const auto& warning : trace.warnings) {
    std::cout << "warning: " << warning << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulator for a scalar-coupled heteronuclear spin-1/2 pair: "
      "Bell-state preparation, tomography, spectra and relaxation"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "key = value configuration file (defaults apply when "
                 "omitted)");

  std::string state_name = "S0";
  std::string out_prefix = "out";
  std::string out_path;
  std::string in_path;
  std::optional<unsigned long long> seed_flag;
  std::optional<double> rf_spread_flag;
  std::optional<int> ensemble_flag;
  double window_s = 6.0;
  bool window_given = false;

  CLI::App* prepare = app.add_subcommand(
      "prepare", "Run a built-in Bell preparation program on equilibrium");
  prepare->add_option("state", state_name,
                      "S0, T0, psi_plus or psi_minus");
  prepare->add_option("--out", out_prefix,
                      "output prefix (_trace.json, _state.json, _report.txt)");

  CLI::App* tomo = app.add_subcommand(
      "tomo", "Prepare a Bell state and reconstruct it by product-operator "
              "tomography");
  tomo->add_option("state", state_name, "S0, T0, psi_plus or psi_minus");
  tomo->add_option("--out", out_path, "tomogram JSON path")->required();
  tomo->add_option("--seed", seed_flag, "ensemble random seed");
  tomo->add_option("--rf-spread", rf_spread_flag,
                   "relative rf amplitude spread");
  tomo->add_option("--ensemble", ensemble_flag, "ensemble size");

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Synthesize the spin-1 spectrum of a prepared state");
  spectrum->add_option("state", state_name,
                       "S0, T0, psi_plus, psi_minus or eq");
  spectrum->add_option("--out", out_path, "spectrum CSV path")->required();

  CLI::App* relax = app.add_subcommand(
      "relax", "Simulate the decay of the antisymmetric spectral component");
  relax->add_option("state", state_name, "S0, T0, psi_plus or psi_minus");
  relax->add_option("--out", out_path, "decay CSV path")->required();

  CLI::App* fit = app.add_subcommand(
      "fit", "Fit an initial exponential to a decay CSV");
  fit->add_option("input", in_path, "decay CSV path")->required();
  fit->add_option("--window", window_s, "fit window in seconds")
      ->each([&](const std::string&) { window_given = true; });

  CLI::App* run = app.add_subcommand(
      "run", "Execute a pulse-program file on equilibrium");
  run->add_option("input", in_path, "program (.seq) file")->required();
  run->add_option("--out", out_prefix,
                  "output prefix (_trace.json, _state.json)");

  // let the global --config appear after the subcommand name as well
  for (CLI::App* sub : {prepare, tomo, spectrum, relax, fit, run}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config = config_from_flag(config_path);
    if (seed_flag) config.seed = *seed_flag;
    if (rf_spread_flag) config.rf_spread = *rf_spread_flag;
    if (ensemble_flag) config.ensemble = *ensemble_flag;
    if (window_given) config.fit_window_s = window_s;
    config.validate();

    if (prepare->parsed()) return run_prepare(state_name, config, out_prefix);
    if (tomo->parsed()) return run_tomo(state_name, config, out_path);
    if (spectrum->parsed()) return run_spectrum(state_name, config, out_path);
    if (relax->parsed()) return run_relax(state_name, config, out_path);
    if (fit->parsed()) return run_fit(in_path, config.fit_window_s);
    if (run->parsed()) return run_program_file(in_path, config, out_prefix);
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return 2;
  } catch (const NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return 3;
  } catch (const ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
