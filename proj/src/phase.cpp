#include <cmath>
#include <numbers>

#include "error.hpp"
#include "smatrix.hpp"

namespace respole {
namespace {

constexpr double pi = std::numbers::pi;

// Maps a phase difference into (-pi, pi].
double wrap_step(double step) {
  step = std::remainder(step, 2.0 * pi);
  if (step <= -pi) step += 2.0 * pi;
  return step;
}

}  // namespace

PhaseProfile phase_profile(const CouplingProfile& coupling) {
  const auto& samples = coupling.samples;
  const std::size_t count = samples.size();
  if (count < 2) {
    throw Error(ErrorKind::EmptyProfile, "phase profile needs at least 2 samples");
  }

  PhaseProfile out;
  out.state_index = coupling.state_index;
  out.unwrapped_phase.resize(count);

  std::vector<double> magnitude(count);
  double previous = std::arg(samples[0].value);
  out.unwrapped_phase[0] = previous;
  magnitude[0] = std::abs(samples[0].value);
  for (std::size_t i = 1; i < count; ++i) {
    const double raw = std::arg(samples[i].value);
    out.unwrapped_phase[i] = out.unwrapped_phase[i - 1] + wrap_step(raw - previous);
    previous = raw;
    magnitude[i] = std::abs(samples[i].value);
  }

  const double floor = jump_floor_ratio * coupling.width;
  std::size_t i = 0;
  while (i < count) {
    if (magnitude[i] < floor) {
      const std::size_t first = i;
      while (i < count && magnitude[i] < floor) ++i;
      const std::size_t last = i - 1;
      // A dip touching either end of the grid has no flanking pair.
      if (first > 0 && i < count) {
        out.jumps.push_back({0.5 * (samples[first].energy + samples[last].energy),
                             out.unwrapped_phase[i] - out.unwrapped_phase[first - 1]});
      }
      continue;
    }
    if (i + 1 < count && magnitude[i + 1] >= floor) {
      const double step = out.unwrapped_phase[i + 1] - out.unwrapped_phase[i];
      const bool left_min = i > 0 && magnitude[i] <= magnitude[i - 1] && magnitude[i] <= magnitude[i + 1];
      const bool right_min = i + 2 < count && magnitude[i + 1] <= magnitude[i] &&
                             magnitude[i + 1] <= magnitude[i + 2];
      if (std::abs(step) > 0.5 * pi && (left_min || right_min)) {
        out.jumps.push_back({0.5 * (samples[i].energy + samples[i + 1].energy), step});
      }
    }
    ++i;
  }
  return out;
}

}  // namespace respole
