#include <algorithm>
#include <functional>

#include "crossing.hpp"
#include "error.hpp"

namespace respole {

TrappingScan trapping_scan(const RealMatrix& h0, const std::vector<RealVector>& couplings,
                           const std::vector<double>& alpha_grid) {
  for (double a : alpha_grid) {
    if (!(a >= 0.0)) throw Error(ErrorKind::InvalidRange, "alpha samples must be non-negative");
  }
  // Validates h0 and the couplings once up front.
  const EffectiveHamiltonian probe(h0, couplings, 0.0);
  HamiltonianFamily family = [&](double alpha) { return EffectiveHamiltonian(h0, couplings, alpha); };

  TrappingScan out;
  out.trajectory = sweep(family, alpha_grid);
  out.channels = probe.channels();
  const std::size_t n = out.trajectory.states();
  std::vector<double> widths(n);
  for (std::size_t i = 0; i < out.trajectory.samples(); ++i) {
    for (std::size_t k = 0; k < n; ++k) widths[k] = out.trajectory.paths[k].width(i);
    std::sort(widths.begin(), widths.end(), std::greater<>());
    double total = 0.0, trapped = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      total += widths[k];
      if (k >= out.channels) trapped += widths[k];
    }
    out.total_width.push_back(total);
    out.trapped_fraction.push_back(total > 0.0 ? trapped / total : 0.0);
  }
  return out;
}

}  // namespace respole
