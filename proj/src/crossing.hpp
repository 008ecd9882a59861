#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "effham.hpp"

namespace respole {

enum class CriticalKind { Repulsion, Attraction, Coalescence };

const char* to_string(CriticalKind kind) noexcept;

struct CriticalPoint {
  double parameter;
  CriticalKind kind;
  std::size_t k;  // the two tracked paths involved
  std::size_t l;
  double distance;  // |lambda_k - lambda_l| at the refined parameter
};

/// One continuity-tracked eigenstate across the sweep.
struct StatePath {
  std::vector<Complex> eigenvalues;
  std::vector<ComplexVector> eigenvectors;  // bi-normalized; unit 2-norm where defective
  std::vector<double> self_overlaps;        // |x^T x| of the unit 2-norm vector
  std::vector<double> a_norms;              // 1 / self_overlap, infinite at a defect

  double energy(std::size_t i) const { return eigenvalues[i].real(); }
  double width(std::size_t i) const { return -2.0 * eigenvalues[i].imag(); }
};

struct SweepTrajectory {
  std::vector<double> parameters;
  std::vector<StatePath> paths;
  std::vector<CriticalPoint> critical_points;
  double spectral_diameter = 0.0;
  double coalescence_tolerance = 0.0;

  std::size_t samples() const noexcept { return parameters.size(); }
  std::size_t states() const noexcept { return paths.size(); }
};

/// Coalescence is declared below this fraction of the spectral diameter.
inline constexpr double coalescence_ratio = 1e-6;

/// Solves H(a) on every grid sample and links eigenvalues between
/// consecutive samples by the cheapest assignment in the complex plane.
/// Equal-cost assignments are only accepted when the competing eigenvalues
/// coincide; eigenvector overlap then picks the branch. Interior minima of
/// the smallest pairwise distance are refined and classified.
SweepTrajectory sweep(const HamiltonianFamily& family, const std::vector<double>& grid);

/// min over pairs |lambda_k(a) - lambda_l(a)|.
double min_pair_distance(const HamiltonianFamily& family, double a);

struct CriticalSearch {
  double parameter;
  double distance;
};

/// Golden-section minimization of min_pair_distance on [lo, hi] down to a
/// bracket below `bracket_tol`. A 65-point prescan rejects brackets on which
/// the distance is not unimodal.
CriticalSearch find_critical(const HamiltonianFamily& family, double lo, double hi,
                             double bracket_tol = 1e-10);

struct MixingOptions {
  double edge_tol = 1e-2;
  double span_tol = 1e-6;
};

/// Tracked state k written in the start-sample pair (R_k, R_l) as
///   x = N (beta_k R_k + s i beta_l R_l),  |beta_k|^2 + |beta_l|^2 = 1.
struct MixingDiagnostics {
  std::size_t k = 0;
  std::size_t l = 0;
  std::vector<double> parameters;
  std::vector<Complex> beta_k;
  std::vector<Complex> beta_l;
  std::vector<int> signs;           // s per sample
  std::vector<Complex> projection;  // c_k + c_l, carries the phase theta
  std::vector<double> residuals;    // relative span residual per sample
  bool window_found = false;
  double a_min = 0.0;
  double a_max = 0.0;
};

MixingDiagnostics mixing_coefficients(const SweepTrajectory& trajectory, std::size_t k,
                                      std::size_t l, const MixingOptions& options = {});

/// theta_k(a), unwrapped along the sweep and zero at the start sample.
std::vector<double> phase_theta(const MixingDiagnostics& diagnostics);

/// Sign of the +-i in the two-state combination at the last sample before
/// a_cr. Throws Indeterminate when the admixture carries no imaginary part.
int chirality_indicator(const SweepTrajectory& trajectory, std::size_t k, std::size_t l,
                        double a_cr);

struct TrappingScan {
  SweepTrajectory trajectory;
  std::size_t channels = 0;
  std::vector<double> total_width;       // sum_k G_k per alpha
  std::vector<double> trapped_fraction;  // width outside the C broadest states / total
};

/// Sweep over the coupling strength alpha with fixed h0 and channel vectors.
TrappingScan trapping_scan(const RealMatrix& h0, const std::vector<RealVector>& couplings,
                           const std::vector<double>& alpha_grid);

}  // namespace respole
