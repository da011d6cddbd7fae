#include "spinpair/spin_system.hpp"

namespace spinpair {

void SpinSystem::validate() const {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    throw ValidationError("gyromagnetic ratios must be positive");
  if (!(field > 0.0)) throw ValidationError("static field must be positive");
  if (!(temperature > 0.0))
    throw ValidationError("temperature must be positive");
  if (!(j_coupling > 0.0))
    throw ValidationError("J coupling must be positive");
  if (linewidth1 < 0.0 || linewidth2 < 0.0)
    throw ValidationError("linewidths must be nonnegative");
}

SpinSystem SpinSystem::proton_carbon(double j_hz, double field,
                                     double temperature) {
  SpinSystem sys;
  sys.j_coupling = 2.0 * pi * j_hz;
  sys.field = field;
  sys.temperature = temperature;
  sys.validate();
  return sys;
}

}  // namespace spinpair
