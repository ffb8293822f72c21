#include "bugamp/sim/noise.hpp"

#include <cmath>
#include <numbers>

namespace bugamp {

double NoiseSource::gaussian() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double distortion(NoiseSource& noise, double amplitude) {
  const double u = noise.uniform();
  return amplitude > 0.0 ? amplitude * u : 0.0;
}

}  // namespace bugamp
