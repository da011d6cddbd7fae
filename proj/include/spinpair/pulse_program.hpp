#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spinpair/dynamics.hpp"

namespace spinpair {

// ---- pulse-program AST ---------------------------------------------------
//
// Line-oriented little language, one instruction per line, '#' comments:
//
//   pulse H 90 y
//   pulse C -90 y
//   cp 0.5/J
//   dhh delta t=sqrt(2)/2/J sigma=5J
//   grad diagonal
//   pps
//   acquire H 4096 dwell=0.0001
//
// Durations are literal seconds or multiples of 1/J with J in Hz
// ("0.5/J", "sqrt(2)/2/J"). Rf values are rad/s, or multiples of the
// system J (rad/s) with a trailing J ("5J"). Values are kept in their
// written unit so that printing and reparsing is exact.

struct Duration {
  double value = 0.0;
  bool per_j = false;  // value/J seconds (J in Hz) instead of seconds

  double seconds(const SpinSystem& sys) const {
    return per_j ? value / sys.j_hz() : value;
  }
  bool operator==(const Duration&) const = default;
};

struct RfValue {
  double value = 0.0;
  bool in_j = false;  // multiple of the system J coupling (rad/s)

  double rad_per_s(const SpinSystem& sys) const {
    return in_j ? value * sys.j_coupling : value;
  }
  bool operator==(const RfValue&) const = default;
};

enum class Channel { proton = 1, carbon = 2 };  // DSL labels H and C

enum class GradientModel { coherence_order, diagonal };

struct PulseInstr {
  Channel channel = Channel::proton;
  double angle_deg = 0.0;
  RotationAxis axis = RotationAxis::y;
  bool operator==(const PulseInstr&) const = default;
};

struct DelayInstr {
  Duration t;
  bool operator==(const DelayInstr&) const = default;
};

struct CpInstr {
  Duration t;
  bool operator==(const CpInstr&) const = default;
};

struct DhhInstr {
  DhhMode mode = DhhMode::delta;
  Duration t;
  // sigma for delta mode, delta for sigma mode; module default when absent
  std::optional<RfValue> free_param;
  bool operator==(const DhhInstr&) const = default;
};

struct GradientInstr {
  GradientModel model = GradientModel::diagonal;
  bool operator==(const GradientInstr&) const = default;
};

struct PpsInstr {
  bool operator==(const PpsInstr&) const = default;
};

struct AcquireInstr {
  Channel channel = Channel::proton;
  int points = 0;
  double dwell_s = 0.0;
  bool operator==(const AcquireInstr&) const = default;
};

using Instruction = std::variant<PulseInstr, DelayInstr, CpInstr, DhhInstr,
                                 GradientInstr, PpsInstr, AcquireInstr>;

struct PulseProgram {
  std::string name;
  std::vector<Instruction> instructions;

  bool operator==(const PulseProgram&) const = default;
};

// Throws ParseError with 1-based line/column on syntax errors (bad tokens,
// wrong arity) and semantic ones (unknown channel, negative duration,
// points < 2, ...).
PulseProgram parse(std::string_view text, std::string name = "");

std::string pretty_print_instruction(const Instruction& instr);

// Canonical text form; parse(pretty_print(p)) reproduces p exactly.
std::string pretty_print(const PulseProgram& prog);

// The four preparation programs: polarization equalization (y pulses +
// resonant Hartmann-Hahn + gradient), idealized pseudo-pure step, the
// kind's +-90y pulse pair, the matched DHH pulse, and for every kind but
// the singlet a trailing (-90)y pair rotating the x-quantized target to z.
PulseProgram builtin_program(BellKind kind);

}  // namespace spinpair
