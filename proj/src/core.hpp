#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace respole {

using Complex = std::complex<double>;

/// Value type for S(E), coupling coefficients and partial amplitudes.
using ComplexAmplitude = Complex;

/// One pole of the one-channel S matrix at position - (i/2) width.
/// The width is the full width; half-widths are never stored.
class Resonance {
 public:
  Resonance(double position, double width);

  double position() const noexcept { return position_; }
  double width() const noexcept { return width_; }

  /// X(E) = E - position + (i/2) width, the denominator of the pole term.
  Complex pole_offset(double energy) const noexcept {
    return {energy - position_, 0.5 * width_};
  }

  friend bool operator==(const Resonance&, const Resonance&) = default;

 private:
  double position_;
  double width_;
};

/// Ordered, non-empty collection of resonances. Repeated entries are legal
/// and stand for double/triple poles.
class PoleSet {
 public:
  explicit PoleSet(std::vector<Resonance> resonances);

  std::size_t size() const noexcept { return resonances_.size(); }
  const Resonance& operator[](std::size_t i) const { return resonances_[i]; }
  const Resonance& at(std::size_t i) const;
  std::span<const Resonance> resonances() const noexcept { return resonances_; }

  auto begin() const noexcept { return resonances_.begin(); }
  auto end() const noexcept { return resonances_.end(); }

 private:
  std::vector<Resonance> resonances_;
};

/// Uniform energy grid with exact endpoints.
class EnergyGrid {
 public:
  EnergyGrid(double min, double max, std::size_t points);

  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }
  std::size_t size() const noexcept { return points_; }
  double spacing() const noexcept { return (max_ - min_) / double(points_ - 1); }

  double operator[](std::size_t i) const noexcept;
  std::vector<double> samples() const;

 private:
  double min_;
  double max_;
  std::size_t points_;
};

EnergyGrid make_grid(double min, double max, std::size_t points);

}  // namespace respole
