#pragma once

// Random-but-valid pulse programs for property tests.

#include <random>

#include "spinpair/pulse_program.hpp"

namespace generators {

inline spinpair::Instruction random_instruction(std::mt19937_64& rng) {
  using namespace spinpair;
  std::uniform_int_distribution<int> pick(0, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto channel = [&] {
    return unit(rng) < 0.5 ? Channel::proton : Channel::carbon;
  };
  auto duration = [&] {
    if (unit(rng) < 0.5) return Duration{0.002 * unit(rng), false};
    return Duration{3.0 * unit(rng), true};
  };
  switch (pick(rng)) {
    case 0: {
      static constexpr RotationAxis axes[] = {
          RotationAxis::x, RotationAxis::y, RotationAxis::minus_x,
          RotationAxis::minus_y};
      std::uniform_int_distribution<int> axis_pick(0, 3);
      std::uniform_real_distribution<double> angle(-180.0, 180.0);
      return PulseInstr{channel(), angle(rng), axes[axis_pick(rng)]};
    }
    case 1:
      return DelayInstr{duration()};
    case 2:
      return CpInstr{duration()};
    case 3: {
      DhhInstr d;
      d.mode = unit(rng) < 0.5 ? DhhMode::delta : DhhMode::sigma;
      d.t = duration();
      if (unit(rng) < 0.7) {
        // keep the resolved rf amplitudes nonnegative for either mode
        if (d.mode == DhhMode::delta)
          d.free_param = RfValue{0.5 + 7.5 * unit(rng), true};
        else
          d.free_param = RfValue{0.49 * unit(rng), true};
      }
      return d;
    }
    case 4:
      return GradientInstr{unit(rng) < 0.5 ? GradientModel::diagonal
                                           : GradientModel::coherence_order};
    case 5:
      return PpsInstr{};
    default: {
      std::uniform_int_distribution<int> points(2, 64);
      std::uniform_real_distribution<double> dwell(1e-4, 3e-3);
      return AcquireInstr{channel(), points(rng), dwell(rng)};
    }
  }
}

inline spinpair::PulseProgram random_program(std::mt19937_64& rng,
                                             int max_instructions) {
  spinpair::PulseProgram prog;
  prog.name = "random";
  std::uniform_int_distribution<int> len(0, max_instructions);
  const int n = len(rng);
  prog.instructions.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    prog.instructions.push_back(random_instruction(rng));
  }
  return prog;
}

}  // namespace generators
