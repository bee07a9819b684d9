#include "nslab/normality.hpp"

#include <cmath>
#include <numbers>

namespace nslab::normality {

namespace {

struct Rates {
  double theta, z, v;
};

Rates rates(double z, double v) { return {1.0, 1.0, -v * std::tan(z)}; }

}  // namespace

CharacteristicFlow characteristic_flow(const CharacteristicState& state0, double t_end, double step) {
  constexpr double limit = std::numbers::pi / 2 - kCharacteristicHalt;
  if (!(step > 0.0)) throw DomainError("characteristic step must be positive");
  if (!(state0.v > 0.0)) throw DomainError("characteristic start needs v > 0");
  if (!(std::abs(state0.z) < std::numbers::pi / 2)) throw DomainError("characteristic start needs |z| < pi/2");

  CharacteristicFlow flow;
  flow.states.push_back(state0);
  const auto steps = static_cast<long>(std::ceil((t_end - state0.t) / step - 1e-9));
  CharacteristicState s = state0;
  for (long k = 0; k < steps; ++k) {
    if (std::abs(s.z) >= limit) {
      flow.halted = true;
      break;
    }
    const double h = std::min(step, t_end - s.t);
    const Rates k1 = rates(s.z, s.v);
    const Rates k2 = rates(s.z + 0.5 * h * k1.z, s.v + 0.5 * h * k1.v);
    const Rates k3 = rates(s.z + 0.5 * h * k2.z, s.v + 0.5 * h * k2.v);
    const Rates k4 = rates(s.z + h * k3.z, s.v + h * k3.v);
    s.theta += h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
    s.z += h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    // t advances by index to avoid accumulated drift
    s.t = state0.t + (k + 1 == steps ? t_end - state0.t : static_cast<double>(k + 1) * step);
    flow.states.push_back(s);
  }
  if (!flow.halted && std::abs(s.z) >= limit) flow.halted = true;
  return flow;
}

FirstIntegrals first_integrals(const CharacteristicState& s) {
  if (!(s.v > 0.0)) throw DomainError("first integrals need v > 0");
  return {s.theta - s.z, std::cos(s.z) / s.v};
}

}  // namespace nslab::normality
