#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"

namespace respole {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// sum_i a_i b_i, the bilinear (unconjugated) product of complex vectors.
inline Complex bilinear(const ComplexVector& a, const ComplexVector& b) {
  return a.cwiseProduct(b).sum();
}

/// Finite toy effective Hamiltonian
///
///   H = h0 - (i/2) alpha sum_c v_c v_c^T
///
/// with h0 real symmetric (closed system plus the real continuum shift) and
/// one real coupling vector per open channel.
class EffectiveHamiltonian {
 public:
  EffectiveHamiltonian(RealMatrix h0, std::vector<RealVector> couplings, double alpha);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(h0_.rows()); }
  std::size_t channels() const noexcept { return couplings_.size(); }
  const RealMatrix& h0() const noexcept { return h0_; }
  const std::vector<RealVector>& couplings() const noexcept { return couplings_; }
  double alpha() const noexcept { return alpha_; }

  /// Complex symmetric matrix h0 - (i/2) alpha sum_c v_c v_c^T.
  ComplexMatrix assemble() const;

  /// alpha * sum_c |v_c|^2, which equals the summed widths of all states.
  double total_width() const;

 private:
  RealMatrix h0_;
  std::vector<RealVector> couplings_;
  double alpha_;
};

ComplexMatrix assemble(const EffectiveHamiltonian& h);

/// Below this, |sum_i x_i^2| of a unit eigenvector means the spectrum sits on
/// (or numerically at) a double pole and cannot be bi-normalized.
inline constexpr double defect_floor = 1e-10;

/// Eigenvalues sorted by (real, imag) with unit-2-norm eigenvectors and their
/// bilinear self-overlap |x^T x|. Never throws on defective input.
struct EigenDecomposition {
  std::vector<Complex> values;
  std::vector<ComplexVector> vectors;
  std::vector<double> self_overlaps;
};

EigenDecomposition decompose(const ComplexMatrix& matrix);

/// Eigenvalues only, sorted by (real, imag).
std::vector<Complex> eigenvalues(const ComplexMatrix& matrix);

/// x / sqrt(x^T x), sign fixed so the largest component has positive real part.
ComplexVector bi_normalize(const ComplexVector& vector);

struct BiorthogonalSpectrum {
  std::vector<Complex> eigenvalues;         // E_k - (i/2) G_k
  std::vector<ComplexVector> eigenvectors;  // sum_i Phi_k,i Phi_l,i = delta_kl
  std::vector<double> a_norms;              // A_k = <Phi_k|Phi_k>
  ComplexMatrix hermitian_overlaps;         // <Phi_k|Phi_l>, conjugated
  RealMatrix b_overlaps;                    // |<Phi_k|Phi_l>| off the diagonal, 0 on it
  ComplexMatrix gammas;                     // N x C, sqrt(alpha) v_c^T Phi_k
  double alpha = 0.0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  double energy(std::size_t k) const { return eigenvalues[k].real(); }
  double width(std::size_t k) const { return -2.0 * eigenvalues[k].imag(); }
};

/// Full bi-orthogonal spectroscopy of H. Throws NearDefective when any
/// eigenvector's bilinear self-overlap drops below defect_floor.
BiorthogonalSpectrum eigensolve_biorthogonal(const EffectiveHamiltonian& h);

/// |G_k - sum_c |gamma_k^c|^2 / A_k| per state.
std::vector<double> width_sum_rule_check(const BiorthogonalSpectrum& spectrum);

/// Expansion Phi_k = sum_l b_kl phi_l in the real orthonormal eigenbasis of h0.
struct MixingTable {
  ComplexMatrix coefficients;  // b(k, l)
  RealMatrix basis;            // column l is phi_l

  ComplexVector reconstruct(std::size_t k) const;
};

MixingTable expand_in_basis(const BiorthogonalSpectrum& spectrum, const RealMatrix& h0);

/// Energy-dependent family H(E), for the fixed-point solve.
using HamiltonianFamily = std::function<EffectiveHamiltonian(double)>;

struct FixedPointOptions {
  double damping = 0.5;
  double tolerance = 1e-10;
  std::size_t max_iterations = 10000;
};

struct FixedPointResult {
  double energy;  // E_k = Re eigenvalue_k(E_k)
  double width;   // G_k(E_k)
  std::size_t iterations;
};

/// Solves E = E_k(E) by damped iteration E <- E + damping (E_k(E) - E),
/// following state k (ascending real part at E_start) by nearest eigenvalue.
FixedPointResult fixed_point_solve(const HamiltonianFamily& family, std::size_t k, double e_start,
                                   const FixedPointOptions& options = {});

}  // namespace respole
