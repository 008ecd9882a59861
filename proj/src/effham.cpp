#include "effham.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "error.hpp"

namespace respole {

namespace {

constexpr double symmetry_tolerance = 1e-12;
constexpr double sign_tie_ratio = 1e-9;

bool all_finite(const RealMatrix& m) { return m.allFinite(); }

// Index of the largest-magnitude component; earlier indices win ties.
Eigen::Index dominant_component(const ComplexVector& x) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) best = std::max(best, std::abs(x[i]));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) >= best * (1.0 - sign_tie_ratio)) return i;
  }
  return 0;
}

void fix_sign(ComplexVector& x) {
  if (x.size() == 0) return;
  const Complex c = x[dominant_component(x)];
  const bool real_zero = std::abs(c.real()) <= 1e-12 * std::abs(c);
  const double key = real_zero ? c.imag() : c.real();
  if (key < 0.0) x = -x;
}

// Replace a cluster of eigenvectors sharing one eigenvalue by a basis of the
// same span that is orthonormal under the bilinear product x^T y.
void biorthogonalize_cluster(std::vector<ComplexVector>& vectors, std::size_t first,
                             std::size_t last) {
  const std::size_t m = last - first;
  if (m < 2) return;
  const Eigen::Index n = vectors[first].size();
  ComplexMatrix block(n, static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) block.col(static_cast<Eigen::Index>(j)) = vectors[first + j];

  // A span closed under conjugation has a real orthonormal basis, which is
  // bi-orthonormal as well. Try that first.
  RealMatrix parts(n, 2 * static_cast<Eigen::Index>(m));
  parts << block.real(), block.imag();
  Eigen::ColPivHouseholderQR<RealMatrix> real_qr(parts);
  real_qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(real_qr.rank()) == m) {
    const RealMatrix q = RealMatrix(real_qr.householderQ()).leftCols(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      vectors[first + j] = q.col(static_cast<Eigen::Index>(j)).cast<Complex>();
    }
    return;
  }

  Eigen::HouseholderQR<ComplexMatrix> qr(block);
  const ComplexMatrix q = ComplexMatrix(qr.householderQ()).leftCols(static_cast<Eigen::Index>(m));
  std::vector<ComplexVector> pool;
  for (Eigen::Index j = 0; j < q.cols(); ++j) pool.push_back(q.col(j));
  std::vector<ComplexVector> done;
  while (!pool.empty()) {
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const double self = std::abs(bilinear(pool[j], pool[j]));
      if (self > best) {
        best = self;
        pivot = j;
      }
    }
    ComplexVector u = pool[pivot];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pivot));
    u /= u.norm();
    for (auto& other : pool) {
      const Complex uu = bilinear(u, u);
      if (std::abs(uu) == 0.0) break;
      const Complex proj = bilinear(u, other) / uu;
      other -= proj * u;
      const double norm = other.norm();
      if (norm > 0.0) other /= norm;
    }
    done.push_back(u);
  }
  for (std::size_t j = 0; j < m; ++j) vectors[first + j] = done[j];
}

}  // namespace

EffectiveHamiltonian::EffectiveHamiltonian(RealMatrix h0, std::vector<RealVector> couplings,
                                           double alpha)
    : h0_(std::move(h0)), couplings_(std::move(couplings)), alpha_(alpha) {
  if (h0_.rows() != h0_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "h0 must be square");
  }
  if (h0_.rows() < 2) {
    throw Error(ErrorKind::InvalidArgument, "effective Hamiltonian needs dimension >= 2");
  }
  if (!all_finite(h0_)) throw Error(ErrorKind::InvalidArgument, "h0 has non-finite entries");
  const double scale = std::max(1.0, h0_.cwiseAbs().maxCoeff());
  if ((h0_ - h0_.transpose()).cwiseAbs().maxCoeff() > symmetry_tolerance * scale) {
    throw Error(ErrorKind::InvalidArgument, "h0 is not symmetric");
  }
  if (couplings_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "at least one channel coupling vector is required");
  }
  for (std::size_t c = 0; c < couplings_.size(); ++c) {
    if (couplings_[c].size() != h0_.rows()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "coupling vector " + std::to_string(c) + " has length " +
                      std::to_string(couplings_[c].size()) + ", expected " +
                      std::to_string(h0_.rows()));
    }
    if (!couplings_[c].allFinite()) {
      throw Error(ErrorKind::InvalidArgument, "coupling vector has non-finite entries");
    }
  }
  if (!std::isfinite(alpha_) || alpha_ < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "alpha must be finite and non-negative");
  }
}

ComplexMatrix EffectiveHamiltonian::assemble() const {
  RealMatrix loss = RealMatrix::Zero(h0_.rows(), h0_.cols());
  for (const auto& v : couplings_) loss.noalias() += v * v.transpose();
  ComplexMatrix h(h0_.rows(), h0_.cols());
  h.real() = h0_;
  h.imag() = -0.5 * alpha_ * loss;
  return h;
}

double EffectiveHamiltonian::total_width() const {
  double sum = 0.0;
  for (const auto& v : couplings_) sum += v.squaredNorm();
  return alpha_ * sum;
}

ComplexMatrix assemble(const EffectiveHamiltonian& h) { return h.assemble(); }

EigenDecomposition decompose(const ComplexMatrix& matrix) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(matrix, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergence, "complex eigensolver did not converge");
  }
  const auto n = static_cast<std::size_t>(matrix.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Complex va = values[static_cast<Eigen::Index>(a)];
    const Complex vb = values[static_cast<Eigen::Index>(b)];
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  });

  EigenDecomposition out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t idx : order) {
    const auto j = static_cast<Eigen::Index>(idx);
    out.values.push_back(values[j]);
    ComplexVector x = solver.eigenvectors().col(j);
    x /= x.norm();
    out.vectors.push_back(std::move(x));
  }

  // Exactly degenerate eigenvalues (within rounding) get a bi-orthonormal
  // basis of their eigenspace; the solver's own choice need not be one.
  const double norm = std::max(matrix.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double cluster_tol = 64.0 * std::numeric_limits<double>::epsilon() * norm;
  std::vector<bool> used(n, false);
  std::vector<std::size_t> regroup;
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members{i};
    used[i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!used[j] && std::abs(out.values[j] - out.values[i]) <= cluster_tol) {
        members.push_back(j);
        used[j] = true;
      }
    }
    if (members.size() < 2) continue;
    std::vector<ComplexVector> block;
    for (auto m : members) block.push_back(out.vectors[m]);
    biorthogonalize_cluster(block, 0, block.size());
    // A defective cluster has no full eigenspace; keep the solver's vectors
    // so the vanishing self-overlap stays visible.
    bool eigen = true;
    for (std::size_t t = 0; t < members.size(); ++t) {
      const Complex lambda = out.values[members[t]];
      if ((matrix * block[t] - lambda * block[t]).norm() > 1e-10 * norm) eigen = false;
    }
    if (!eigen) continue;
    for (std::size_t t = 0; t < members.size(); ++t) out.vectors[members[t]] = block[t];
  }

  out.self_overlaps.reserve(n);
  for (const auto& x : out.vectors) out.self_overlaps.push_back(std::abs(bilinear(x, x)));
  return out;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& matrix) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(matrix, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergence, "complex eigensolver did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return values;
}

ComplexVector bi_normalize(const ComplexVector& vector) {
  const Complex self = bilinear(vector, vector);
  ComplexVector x = vector / std::sqrt(self);
  fix_sign(x);
  return x;
}

BiorthogonalSpectrum eigensolve_biorthogonal(const EffectiveHamiltonian& h) {
  const EigenDecomposition dec = decompose(h.assemble());
  const std::size_t n = dec.values.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (dec.self_overlaps[k] < defect_floor) {
      throw Error(ErrorKind::NearDefective,
                  "eigenvector " + std::to_string(k) +
                      " has bilinear self-overlap below the defect floor (double pole nearby)");
    }
  }

  BiorthogonalSpectrum out;
  out.alpha = h.alpha();
  out.eigenvalues = dec.values;
  out.eigenvectors.reserve(n);
  for (const auto& x : dec.vectors) out.eigenvectors.push_back(bi_normalize(x));

  const auto dim = static_cast<Eigen::Index>(n);
  ComplexMatrix phi(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) phi.col(k) = out.eigenvectors[static_cast<std::size_t>(k)];
  out.hermitian_overlaps = phi.adjoint() * phi;
  out.a_norms.resize(n);
  out.b_overlaps = out.hermitian_overlaps.cwiseAbs();
  for (Eigen::Index k = 0; k < dim; ++k) {
    out.a_norms[static_cast<std::size_t>(k)] = out.hermitian_overlaps(k, k).real();
    out.b_overlaps(k, k) = 0.0;
  }

  const auto channels = static_cast<Eigen::Index>(h.channels());
  out.gammas.resize(dim, channels);
  const double root_alpha = std::sqrt(h.alpha());
  for (Eigen::Index c = 0; c < channels; ++c) {
    const ComplexVector v = h.couplings()[static_cast<std::size_t>(c)].cast<Complex>();
    for (Eigen::Index k = 0; k < dim; ++k) {
      out.gammas(k, c) = root_alpha * bilinear(v, phi.col(k));
    }
  }
  return out;
}

std::vector<double> width_sum_rule_check(const BiorthogonalSpectrum& spectrum) {
  std::vector<double> residuals(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double partial = spectrum.gammas.row(static_cast<Eigen::Index>(k)).squaredNorm();
    residuals[k] = std::abs(spectrum.width(k) - partial / spectrum.a_norms[k]);
  }
  return residuals;
}

ComplexVector MixingTable::reconstruct(std::size_t k) const {
  return basis.cast<Complex>() * coefficients.row(static_cast<Eigen::Index>(k)).transpose();
}

MixingTable expand_in_basis(const BiorthogonalSpectrum& spectrum, const RealMatrix& h0) {
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  if (h0.rows() != n || h0.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "h0 does not match the spectrum dimension");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h0);
  MixingTable out;
  out.basis = solver.eigenvectors();
  for (Eigen::Index l = 0; l < n; ++l) {
    Eigen::Index top = 0;
    out.basis.col(l).cwiseAbs().maxCoeff(&top);
    if (out.basis(top, l) < 0.0) out.basis.col(l) *= -1.0;
  }
  out.coefficients.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const ComplexVector& phi = spectrum.eigenvectors[static_cast<std::size_t>(k)];
    for (Eigen::Index l = 0; l < n; ++l) {
      out.coefficients(k, l) = bilinear(out.basis.col(l).cast<Complex>(), phi);
    }
  }
  return out;
}

FixedPointResult fixed_point_solve(const HamiltonianFamily& family, std::size_t k, double e_start,
                                   const FixedPointOptions& options) {
  if (!std::isfinite(e_start)) throw Error(ErrorKind::InvalidArgument, "start energy not finite");
  if (!(options.damping > 0.0) || options.damping > 1.0) {
    throw Error(ErrorKind::InvalidArgument, "damping must lie in (0, 1]");
  }

  std::vector<Complex> values = eigenvalues(family(e_start).assemble());
  if (k >= values.size()) throw Error(ErrorKind::InvalidArgument, "state index out of range");
  Complex tracked = values[k];

  double energy = e_start;
  double first_residual = -1.0;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > 0) {
      values = eigenvalues(family(energy).assemble());
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      double second_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < values.size(); ++j) {
        const double d = std::abs(values[j] - tracked);
        if (d < best_d) {
          second_d = best_d;
          best_d = d;
          best = j;
        } else if (d < second_d) {
          second_d = d;
        }
      }
      const double scale = std::max(1.0, std::abs(tracked));
      if (second_d - best_d <= 1e-9 * scale && second_d > 1e-12 * scale) {
        throw Error(ErrorKind::StateTracking,
                    "state " + std::to_string(k) + " cannot be followed at E = " +
                        std::to_string(energy));
      }
      tracked = values[best];
    }
    const double residual = tracked.real() - energy;
    if (std::abs(residual) < options.tolerance) {
      return {energy, -2.0 * tracked.imag(), iter};
    }
    if (first_residual < 0.0) first_residual = std::abs(residual);
    if (!(std::abs(residual) <= 1e8 * (first_residual + 1.0))) {
      throw Error(ErrorKind::NonConvergence, "fixed-point iteration diverges");
    }
    if (iter >= options.max_iterations) {
      throw Error(ErrorKind::NonConvergence,
                  "fixed-point iteration hit the cap of " + std::to_string(options.max_iterations));
    }
    energy += options.damping * residual;
    if (!std::isfinite(energy)) {
      throw Error(ErrorKind::NonConvergence, "fixed-point iteration diverged");
    }
  }
}

}  // namespace respole
