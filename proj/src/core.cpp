#include "core.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace respole {

Resonance::Resonance(double position, double width)
    : position_(position), width_(width) {
  if (!std::isfinite(position) || !std::isfinite(width)) {
    throw Error(ErrorKind::InvalidArgument, "resonance position and width must be finite");
  }
  if (!(width > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "resonance width must be positive, got " + std::to_string(width));
  }
}

PoleSet::PoleSet(std::vector<Resonance> resonances) : resonances_(std::move(resonances)) {
  if (resonances_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "pole set needs at least one resonance");
  }
}

const Resonance& PoleSet::at(std::size_t i) const {
  if (i >= resonances_.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "pole index " + std::to_string(i) + " out of range for " +
                    std::to_string(resonances_.size()) + " poles");
  }
  return resonances_[i];
}

EnergyGrid::EnergyGrid(double min, double max, std::size_t points)
    : min_(min), max_(max), points_(points) {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max) || points < 2) {
    throw Error(ErrorKind::InvalidRange,
                "energy grid needs finite min < max and at least 2 points");
  }
}

double EnergyGrid::operator[](std::size_t i) const noexcept {
  if (i + 1 >= points_) return max_;
  // span * i / (n - 1) keeps commensurate samples (e.g. the midpoint) exact.
  return min_ + ((max_ - min_) * double(i)) / double(points_ - 1);
}

std::vector<double> EnergyGrid::samples() const {
  std::vector<double> out(points_);
  for (std::size_t i = 0; i < points_; ++i) out[i] = (*this)[i];
  return out;
}

EnergyGrid make_grid(double min, double max, std::size_t points) {
  return EnergyGrid(min, max, points);
}

}  // namespace respole
