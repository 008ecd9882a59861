#pragma once

#include <cstddef>
#include <vector>

#include "core.hpp"

namespace respole {

// One-channel unitary S matrix built from a PoleSet, and the energy-dependent
// coupling coefficients W_n(E) of its pole representation
//
//   S(E) = prod_n (X_n - i G_n) / X_n = 1 - i sum_n W_n(E) / X_n,
//   X_n  = E - E_n + (i/2) G_n.

/// Product form. |S| = 1 for every real energy.
ComplexAmplitude s_product(const PoleSet& poles, double energy);

/// W_k of the two-resonance case, G_k (1 - i G_l / (X_k + X_l)).
ComplexAmplitude coupling_w_two(const Resonance& k, const Resonance& l, double energy);

/// W_n for an arbitrary pole set:
///
///   W_n = G_n sum_{j=0}^{N-1} (-i)^j sum_{|M|=j, n not in M} prod_{m in M} G_m / e_j(X_{M+n})
///
/// with e_j the elementary symmetric polynomial of degree j in the j+1
/// values X_n, X_m (m in M). For N = 2 this is coupling_w_two term by term.
/// Cost grows as 2^(N-1); pole sets are limited to max_pole_form_size.
ComplexAmplitude coupling_w_n(const PoleSet& poles, std::size_t n, double energy);

inline constexpr std::size_t max_pole_form_size = 20;

/// Pole representation 1 - i sum_n W_n / X_n. Agrees with s_product.
ComplexAmplitude s_pole_form(const PoleSet& poles, double energy);

/// Explicit double-pole form 1 - 2i G/X - G^2/X^2.
ComplexAmplitude s_double_pole(const Resonance& pole, double energy);

/// Energy-independent (Fano-type) numerator W'_k. Singular when the two
/// poles coincide, which is reported as DoublePoleSingularity.
ComplexAmplitude coupling_w_fano(const Resonance& k, const Resonance& l);

struct CrossSectionSample {
  double energy;
  double sigma;
};

/// sigma(E) = |1 - e^{i phase} S(E)|^2, bounded by [0, 4].
std::vector<CrossSectionSample> cross_section(const PoleSet& poles, const EnergyGrid& grid,
                                              double background_phase = 0.0);

struct CouplingSample {
  double energy;
  ComplexAmplitude value;
};

/// W_k(E) sampled on a grid. `width` is G_k of the state, used to scale the
/// phase-jump floor.
struct CouplingProfile {
  std::size_t state_index = 0;
  double width = 0.0;
  std::vector<CouplingSample> samples;
};

CouplingProfile coupling_profile(const PoleSet& poles, std::size_t n, const EnergyGrid& grid);

/// W'_k on a grid (constant samples), for side-by-side comparison with W_k.
CouplingProfile fano_profile(const Resonance& k, const Resonance& l, const EnergyGrid& grid);

struct PhaseJump {
  double energy;
  double magnitude;  // unwrapped phase after the dip minus before it, radians
};

struct PhaseProfile {
  std::size_t state_index = 0;
  std::vector<double> unwrapped_phase;
  std::vector<PhaseJump> jumps;
};

/// |W| below jump_floor_ratio * G_k counts as a zero of the coupling.
inline constexpr double jump_floor_ratio = 1e-6;

/// Cumulative phase of a coupling profile plus the jumps across its zeros.
///
/// Adjacent-sample phase differences are mapped into (-pi, pi] and summed.
/// A jump is recorded for every run of samples with |W| below the floor, and
/// for an adjacent pair straddling a local minimum of |W| whose phase step
/// exceeds pi/2 (a zero that falls between two samples). The magnitude is
/// the unwrapped difference between the samples flanking the dip.
PhaseProfile phase_profile(const CouplingProfile& coupling);

}  // namespace respole
