#include "smatrix.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "error.hpp"

namespace respole {
namespace {

// (-i)^j without accumulating rounding.
Complex minus_i_power(std::size_t j) {
  static constexpr std::array<Complex, 4> cycle{Complex(1.0, 0.0), Complex(0.0, -1.0),
                                                Complex(-1.0, 0.0), Complex(0.0, 1.0)};
  return cycle[j % 4];
}

constexpr double degenerate_denominator_floor = 1e-30;

}  // namespace

ComplexAmplitude s_product(const PoleSet& poles, double energy) {
  Complex s(1.0, 0.0);
  for (const auto& pole : poles) {
    const Complex x = pole.pole_offset(energy);
    s *= std::conj(x) / x;
  }
  return s;
}

ComplexAmplitude coupling_w_two(const Resonance& k, const Resonance& l, double energy) {
  // Same operation sequence as coupling_w_n for N = 2, so the two agree bit for bit.
  const Complex sum = k.pole_offset(energy) + l.pole_offset(energy);
  const Complex term = l.width() / sum;
  Complex total(1.0, 0.0);
  total += minus_i_power(1) * term;
  return k.width() * total;
}

ComplexAmplitude coupling_w_n(const PoleSet& poles, std::size_t n, double energy) {
  const std::size_t count = poles.size();
  if (n >= count) {
    throw Error(ErrorKind::InvalidArgument, "state index " + std::to_string(n) +
                                                " out of range for " + std::to_string(count) +
                                                " poles");
  }
  if (count > max_pole_form_size) {
    throw Error(ErrorKind::InvalidArgument,
                "pole representation limited to " + std::to_string(max_pole_form_size) + " poles");
  }
  if (!std::isfinite(energy)) {
    throw Error(ErrorKind::InvalidArgument, "energy must be finite");
  }

  std::vector<std::size_t> others;
  others.reserve(count - 1);
  for (std::size_t m = 0; m < count; ++m) {
    if (m != n) others.push_back(m);
  }
  std::vector<Complex> offsets(count);
  for (std::size_t m = 0; m < count; ++m) offsets[m] = poles[m].pole_offset(energy);

  std::vector<Complex> by_degree(count, Complex(0.0, 0.0));
  std::vector<Complex> elem(count + 1);
  const std::size_t subsets = std::size_t{1} << others.size();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    const auto degree = static_cast<std::size_t>(std::popcount(mask));

    // e_0..e_degree over {X_n} plus the chosen X_m, by the usual recurrence.
    std::fill(elem.begin(), elem.begin() + degree + 1, Complex(0.0, 0.0));
    elem[0] = Complex(1.0, 0.0);
    std::size_t used = 0;
    auto push = [&](const Complex& x) {
      ++used;
      for (std::size_t j = std::min(used, degree); j >= 1; --j) elem[j] += elem[j - 1] * x;
    };
    push(offsets[n]);
    double widths = 1.0;
    for (std::size_t b = 0; b < others.size(); ++b) {
      if (mask & (std::size_t{1} << b)) {
        push(offsets[others[b]]);
        widths *= poles[others[b]].width();
      }
    }

    const Complex denominator = elem[degree];
    if (std::abs(denominator) < degenerate_denominator_floor) {
      throw Error(ErrorKind::DegenerateDenominator,
                  "elementary symmetric denominator vanished for state " + std::to_string(n));
    }
    by_degree[degree] += widths / denominator;
  }

  Complex total(1.0, 0.0);
  for (std::size_t j = 1; j < count; ++j) total += minus_i_power(j) * by_degree[j];
  return poles[n].width() * total;
}

ComplexAmplitude s_pole_form(const PoleSet& poles, double energy) {
  Complex sum(0.0, 0.0);
  for (std::size_t n = 0; n < poles.size(); ++n) {
    sum += coupling_w_n(poles, n, energy) / poles[n].pole_offset(energy);
  }
  return Complex(1.0, 0.0) - Complex(0.0, 1.0) * sum;
}

ComplexAmplitude s_double_pole(const Resonance& pole, double energy) {
  const Complex x = pole.pole_offset(energy);
  const double width = pole.width();
  return Complex(1.0, 0.0) - Complex(0.0, 2.0 * width) / x - (width * width) / (x * x);
}

ComplexAmplitude coupling_w_fano(const Resonance& k, const Resonance& l) {
  const Complex denominator(k.position() - l.position(), -0.5 * (k.width() - l.width()));
  if (denominator == Complex(0.0, 0.0)) {
    throw Error(ErrorKind::DoublePoleSingularity,
                "energy-independent coupling is singular at a double pole");
  }
  return k.width() * (Complex(1.0, 0.0) - Complex(0.0, l.width()) / denominator);
}

std::vector<CrossSectionSample> cross_section(const PoleSet& poles, const EnergyGrid& grid,
                                              double background_phase) {
  if (!std::isfinite(background_phase)) {
    throw Error(ErrorKind::InvalidArgument, "background phase must be finite");
  }
  const Complex rotation = std::polar(1.0, background_phase);
  std::vector<CrossSectionSample> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double energy = grid[i];
    const Complex s = rotation * s_product(poles, energy);
    out.push_back({energy, std::norm(Complex(1.0, 0.0) - s)});
  }
  return out;
}

CouplingProfile coupling_profile(const PoleSet& poles, std::size_t n, const EnergyGrid& grid) {
  CouplingProfile profile;
  profile.state_index = n;
  profile.width = poles.at(n).width();
  profile.samples.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double energy = grid[i];
    profile.samples.push_back({energy, coupling_w_n(poles, n, energy)});
  }
  return profile;
}

CouplingProfile fano_profile(const Resonance& k, const Resonance& l, const EnergyGrid& grid) {
  const Complex value = coupling_w_fano(k, l);
  CouplingProfile profile;
  profile.width = k.width();
  profile.samples.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) profile.samples.push_back({grid[i], value});
  return profile;
}

}  // namespace respole
