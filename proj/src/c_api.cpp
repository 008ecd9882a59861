#include "respole/respole.h"

#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "crossing.hpp"
#include "effham.hpp"
#include "error.hpp"
#include "smatrix.hpp"

struct rp_poleset {
  respole::PoleSet poles;
};

struct rp_hamiltonian {
  respole::EffectiveHamiltonian h;
};

struct rp_spectrum {
  respole::BiorthogonalSpectrum spectrum;
};

struct rp_trajectory {
  respole::SweepTrajectory trajectory;
  std::optional<std::vector<double>> trapped_fraction;
};

struct rp_mixing {
  respole::MixingDiagnostics diagnostics;
  std::vector<double> theta;
};

namespace {

using respole::Complex;
using respole::ErrorKind;

thread_local std::string last_error;

rp_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return RP_ERR_INVALID_ARGUMENT;
    case ErrorKind::InvalidRange: return RP_ERR_INVALID_RANGE;
    case ErrorKind::DimensionMismatch: return RP_ERR_DIMENSION_MISMATCH;
    case ErrorKind::DegenerateDenominator: return RP_ERR_DEGENERATE_DENOMINATOR;
    case ErrorKind::DoublePoleSingularity: return RP_ERR_DOUBLE_POLE_SINGULARITY;
    case ErrorKind::EmptyProfile: return RP_ERR_EMPTY_PROFILE;
    case ErrorKind::NearDefective: return RP_ERR_NEAR_DEFECTIVE;
    case ErrorKind::TrackingAmbiguity: return RP_ERR_TRACKING_AMBIGUITY;
    case ErrorKind::NonConvergence: return RP_ERR_NON_CONVERGENCE;
    case ErrorKind::StateTracking: return RP_ERR_STATE_TRACKING;
    case ErrorKind::NonUnimodal: return RP_ERR_NON_UNIMODAL;
    case ErrorKind::SpanLeak: return RP_ERR_SPAN_LEAK;
    case ErrorKind::Indeterminate: return RP_ERR_INDETERMINATE;
  }
  return RP_ERR_INTERNAL;
}

template <class F>
rp_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return RP_OK;
  } catch (const respole::Error& e) {
    last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RP_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return RP_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw respole::Error(ErrorKind::InvalidArgument, what);
}

rp_complex wrap(Complex c) { return {c.real(), c.imag()}; }

respole::EnergyGrid grid_of(rp_grid g) { return respole::make_grid(g.min, g.max, g.points); }

respole::EffectiveHamiltonian build(size_t n, const double* h0, size_t channels,
                                    const double* couplings, double alpha) {
  require(h0 != nullptr && couplings != nullptr, "null matrix pointer");
  const auto dim = static_cast<Eigen::Index>(n);
  respole::RealMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = h0[r * dim + c];
  }
  std::vector<respole::RealVector> vs;
  for (size_t c = 0; c < channels; ++c) {
    respole::RealVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = couplings[c * n + static_cast<size_t>(i)];
    vs.push_back(std::move(v));
  }
  return respole::EffectiveHamiltonian(std::move(m), std::move(vs), alpha);
}

respole::HamiltonianFamily adapt(size_t n, size_t channels, rp_family_fn fn, void* user) {
  require(fn != nullptr, "null family callback");
  return [=](double a) {
    std::vector<double> h0(n * n, 0.0), couplings(channels * n, 0.0);
    double alpha = 0.0;
    const int rc = fn(a, user, h0.data(), couplings.data(), &alpha);
    if (rc != 0) {
      throw respole::Error(ErrorKind::InvalidArgument,
                           "family callback returned " + std::to_string(rc) + " at a = " +
                               std::to_string(a));
    }
    return build(n, h0.data(), channels, couplings.data(), alpha);
  };
}

const respole::StatePath& path_at(const rp_trajectory* t, size_t k, size_t i) {
  require(t != nullptr, "null trajectory");
  if (k >= t->trajectory.states() || i >= t->trajectory.samples()) {
    throw respole::Error(ErrorKind::InvalidArgument, "trajectory index out of range");
  }
  return t->trajectory.paths[k];
}

}  // namespace

extern "C" {

RP_API const char* rp_status_name(rp_status status) {
  switch (status) {
    case RP_OK: return "ok";
    case RP_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case RP_ERR_INVALID_RANGE: return "invalid-range";
    case RP_ERR_DIMENSION_MISMATCH: return "dimension-mismatch";
    case RP_ERR_DEGENERATE_DENOMINATOR: return "degenerate-denominator";
    case RP_ERR_DOUBLE_POLE_SINGULARITY: return "double-pole-singularity";
    case RP_ERR_EMPTY_PROFILE: return "empty-profile";
    case RP_ERR_NEAR_DEFECTIVE: return "near-defective";
    case RP_ERR_TRACKING_AMBIGUITY: return "tracking-ambiguity";
    case RP_ERR_NON_CONVERGENCE: return "non-convergence";
    case RP_ERR_STATE_TRACKING: return "state-tracking";
    case RP_ERR_NON_UNIMODAL: return "non-unimodal";
    case RP_ERR_SPAN_LEAK: return "span-leak";
    case RP_ERR_INDETERMINATE: return "indeterminate";
    case RP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

RP_API const char* rp_last_error(void) { return last_error.c_str(); }

RP_API const char* rp_version(void) { return "0.1.0"; }

RP_API rp_status rp_grid_samples(rp_grid grid, double* out) {
  return guard([&] {
    require(out != nullptr, "null output buffer");
    const auto g = grid_of(grid);
    for (size_t i = 0; i < g.size(); ++i) out[i] = g[i];
  });
}

RP_API rp_status rp_poleset_create(const double* positions, const double* widths, size_t n,
                                   rp_poleset** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    require(n == 0 || (positions != nullptr && widths != nullptr), "null pole arrays");
    std::vector<respole::Resonance> rs;
    for (size_t i = 0; i < n; ++i) rs.emplace_back(positions[i], widths[i]);
    *out = new rp_poleset{respole::PoleSet(std::move(rs))};
  });
}

RP_API void rp_poleset_destroy(rp_poleset* poles) { delete poles; }

RP_API size_t rp_poleset_size(const rp_poleset* poles) { return poles ? poles->poles.size() : 0; }

RP_API rp_status rp_s_product(const rp_poleset* poles, double energy, rp_complex* out) {
  return guard([&] {
    require(poles && out, "null argument");
    *out = wrap(respole::s_product(poles->poles, energy));
  });
}

RP_API rp_status rp_s_pole_form(const rp_poleset* poles, double energy, rp_complex* out) {
  return guard([&] {
    require(poles && out, "null argument");
    *out = wrap(respole::s_pole_form(poles->poles, energy));
  });
}

RP_API rp_status rp_coupling_w(const rp_poleset* poles, size_t n, double energy, rp_complex* out) {
  return guard([&] {
    require(poles && out, "null argument");
    *out = wrap(respole::coupling_w_n(poles->poles, n, energy));
  });
}

RP_API rp_status rp_coupling_w_two(double position_k, double width_k, double position_l,
                                   double width_l, double energy, rp_complex* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = wrap(respole::coupling_w_two({position_k, width_k}, {position_l, width_l}, energy));
  });
}

RP_API rp_status rp_coupling_w_fano(double position_k, double width_k, double position_l,
                                    double width_l, rp_complex* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = wrap(respole::coupling_w_fano({position_k, width_k}, {position_l, width_l}));
  });
}

RP_API rp_status rp_s_double_pole(double position, double width, double energy, rp_complex* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = wrap(respole::s_double_pole({position, width}, energy));
  });
}

RP_API rp_status rp_cross_section(const rp_poleset* poles, rp_grid grid, double background_phase,
                                  double* sigma) {
  return guard([&] {
    require(poles && sigma, "null argument");
    const auto samples = respole::cross_section(poles->poles, grid_of(grid), background_phase);
    for (size_t i = 0; i < samples.size(); ++i) sigma[i] = samples[i].sigma;
  });
}

RP_API rp_status rp_coupling_profile(const rp_poleset* poles, size_t n, rp_grid grid,
                                     rp_complex* w) {
  return guard([&] {
    require(poles && w, "null argument");
    const auto profile = respole::coupling_profile(poles->poles, n, grid_of(grid));
    for (size_t i = 0; i < profile.samples.size(); ++i) w[i] = wrap(profile.samples[i].value);
  });
}

RP_API rp_status rp_phase_profile(const rp_poleset* poles, size_t n, rp_grid grid,
                                  double* unwrapped, rp_phase_jump* jumps, size_t jump_capacity,
                                  size_t* jump_count) {
  return guard([&] {
    require(poles && unwrapped && jump_count, "null argument");
    require(jump_capacity == 0 || jumps != nullptr, "null jump buffer");
    const auto profile =
        respole::phase_profile(respole::coupling_profile(poles->poles, n, grid_of(grid)));
    for (size_t i = 0; i < profile.unwrapped_phase.size(); ++i) {
      unwrapped[i] = profile.unwrapped_phase[i];
    }
    for (size_t j = 0; j < profile.jumps.size() && j < jump_capacity; ++j) {
      jumps[j] = {profile.jumps[j].energy, profile.jumps[j].magnitude};
    }
    *jump_count = profile.jumps.size();
  });
}

RP_API rp_status rp_hamiltonian_create(size_t n, const double* h0, size_t channels,
                                       const double* couplings, double alpha,
                                       rp_hamiltonian** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    *out = new rp_hamiltonian{build(n, h0, channels, couplings, alpha)};
  });
}

RP_API void rp_hamiltonian_destroy(rp_hamiltonian* h) { delete h; }

RP_API size_t rp_hamiltonian_dimension(const rp_hamiltonian* h) {
  return h ? h->h.dimension() : 0;
}

RP_API size_t rp_hamiltonian_channels(const rp_hamiltonian* h) { return h ? h->h.channels() : 0; }

RP_API rp_status rp_hamiltonian_assemble(const rp_hamiltonian* h, rp_complex* out) {
  return guard([&] {
    require(h && out, "null argument");
    const auto m = h->h.assemble();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = wrap(m(r, c));
    }
  });
}

RP_API rp_status rp_spectrum_solve(const rp_hamiltonian* h, rp_spectrum** out) {
  return guard([&] {
    require(h && out, "null argument");
    *out = nullptr;
    *out = new rp_spectrum{respole::eigensolve_biorthogonal(h->h)};
  });
}

RP_API void rp_spectrum_destroy(rp_spectrum* s) { delete s; }

RP_API size_t rp_spectrum_size(const rp_spectrum* s) { return s ? s->spectrum.size() : 0; }

RP_API rp_status rp_spectrum_eigenvalue(const rp_spectrum* s, size_t k, rp_complex* out) {
  return guard([&] {
    require(s && out && k < s->spectrum.size(), "invalid argument");
    *out = wrap(s->spectrum.eigenvalues[k]);
  });
}

RP_API rp_status rp_spectrum_eigenvector(const rp_spectrum* s, size_t k, rp_complex* out) {
  return guard([&] {
    require(s && out && k < s->spectrum.size(), "invalid argument");
    const auto& v = s->spectrum.eigenvectors[k];
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = wrap(v[i]);
  });
}

RP_API rp_status rp_spectrum_a_norm(const rp_spectrum* s, size_t k, double* out) {
  return guard([&] {
    require(s && out && k < s->spectrum.size(), "invalid argument");
    *out = s->spectrum.a_norms[k];
  });
}

RP_API rp_status rp_spectrum_b_overlap(const rp_spectrum* s, size_t k, size_t l, double* out) {
  return guard([&] {
    require(s && out && k < s->spectrum.size() && l < s->spectrum.size(), "invalid argument");
    *out = s->spectrum.b_overlaps(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
  });
}

RP_API rp_status rp_spectrum_hermitian_overlap(const rp_spectrum* s, size_t k, size_t l,
                                               rp_complex* out) {
  return guard([&] {
    require(s && out && k < s->spectrum.size() && l < s->spectrum.size(), "invalid argument");
    *out = wrap(s->spectrum.hermitian_overlaps(static_cast<Eigen::Index>(k),
                                               static_cast<Eigen::Index>(l)));
  });
}

RP_API rp_status rp_spectrum_gamma(const rp_spectrum* s, size_t k, size_t c, rp_complex* out) {
  return guard([&] {
    require(s && out && k < s->spectrum.size() &&
                static_cast<Eigen::Index>(c) < s->spectrum.gammas.cols(),
            "invalid argument");
    *out = wrap(s->spectrum.gammas(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)));
  });
}

RP_API rp_status rp_spectrum_sum_rule(const rp_spectrum* s, double* residuals) {
  return guard([&] {
    require(s && residuals, "null argument");
    const auto r = respole::width_sum_rule_check(s->spectrum);
    for (size_t k = 0; k < r.size(); ++k) residuals[k] = r[k];
  });
}

RP_API rp_status rp_spectrum_mixing(const rp_spectrum* s, const rp_hamiltonian* h, rp_complex* b,
                                    double* residual) {
  return guard([&] {
    require(s && h && b, "null argument");
    const auto table = respole::expand_in_basis(s->spectrum, h->h.h0());
    const auto n = table.coefficients.rows();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index l = 0; l < n; ++l) b[k * n + l] = wrap(table.coefficients(k, l));
      const auto uk = static_cast<size_t>(k);
      worst = std::max(worst, (table.reconstruct(uk) - s->spectrum.eigenvectors[uk]).norm());
    }
    if (residual) *residual = worst;
  });
}

RP_API rp_status rp_fixed_point_solve(size_t n, size_t channels, rp_family_fn family, void* user,
                                      size_t k, double e_start, double damping, double tolerance,
                                      size_t max_iterations, double* energy, double* width,
                                      size_t* iterations) {
  return guard([&] {
    require(energy && width, "null output");
    const auto result = respole::fixed_point_solve(adapt(n, channels, family, user), k, e_start,
                                                   {damping, tolerance, max_iterations});
    *energy = result.energy;
    *width = result.width;
    if (iterations) *iterations = result.iterations;
  });
}

RP_API rp_status rp_sweep(size_t n, size_t channels, rp_family_fn family, void* user,
                          const double* grid, size_t points, rp_trajectory** out) {
  return guard([&] {
    require(grid && out, "null argument");
    *out = nullptr;
    std::vector<double> g(grid, grid + points);
    *out = new rp_trajectory{respole::sweep(adapt(n, channels, family, user), g), std::nullopt};
  });
}

RP_API rp_status rp_trapping_scan(size_t n, const double* h0, size_t channels,
                                  const double* couplings, const double* alphas, size_t points,
                                  rp_trajectory** out) {
  return guard([&] {
    require(alphas && out, "null argument");
    *out = nullptr;
    const auto probe = build(n, h0, channels, couplings, 0.0);
    std::vector<double> g(alphas, alphas + points);
    auto scan = respole::trapping_scan(probe.h0(), probe.couplings(), g);
    *out = new rp_trajectory{std::move(scan.trajectory), std::move(scan.trapped_fraction)};
  });
}

RP_API void rp_trajectory_destroy(rp_trajectory* t) { delete t; }

RP_API size_t rp_trajectory_samples(const rp_trajectory* t) {
  return t ? t->trajectory.samples() : 0;
}

RP_API size_t rp_trajectory_states(const rp_trajectory* t) {
  return t ? t->trajectory.states() : 0;
}

RP_API rp_status rp_trajectory_parameter(const rp_trajectory* t, size_t i, double* out) {
  return guard([&] {
    require(t && out && i < t->trajectory.samples(), "invalid argument");
    *out = t->trajectory.parameters[i];
  });
}

RP_API rp_status rp_trajectory_eigenvalue(const rp_trajectory* t, size_t k, size_t i,
                                          rp_complex* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = wrap(path_at(t, k, i).eigenvalues[i]);
  });
}

RP_API rp_status rp_trajectory_eigenvector(const rp_trajectory* t, size_t k, size_t i,
                                           rp_complex* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    const auto& v = path_at(t, k, i).eigenvectors[i];
    for (Eigen::Index j = 0; j < v.size(); ++j) out[j] = wrap(v[j]);
  });
}

RP_API rp_status rp_trajectory_a_norm(const rp_trajectory* t, size_t k, size_t i, double* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = path_at(t, k, i).a_norms[i];
  });
}

RP_API size_t rp_trajectory_critical_count(const rp_trajectory* t) {
  return t ? t->trajectory.critical_points.size() : 0;
}

RP_API rp_status rp_trajectory_critical_point(const rp_trajectory* t, size_t index,
                                              rp_critical_point* out) {
  return guard([&] {
    require(t && out && index < t->trajectory.critical_points.size(), "invalid argument");
    const auto& cp = t->trajectory.critical_points[index];
    rp_critical_kind kind = RP_CRITICAL_REPULSION;
    if (cp.kind == respole::CriticalKind::Attraction) kind = RP_CRITICAL_ATTRACTION;
    if (cp.kind == respole::CriticalKind::Coalescence) kind = RP_CRITICAL_COALESCENCE;
    *out = {cp.parameter, kind, cp.k, cp.l, cp.distance};
  });
}

RP_API rp_status rp_trajectory_trapped_fraction(const rp_trajectory* t, size_t i, double* out) {
  return guard([&] {
    require(t && out && i < t->trajectory.samples(), "invalid argument");
    require(t->trapped_fraction.has_value(), "trajectory does not come from a trapping scan");
    *out = (*t->trapped_fraction)[i];
  });
}

RP_API rp_status rp_find_critical(size_t n, size_t channels, rp_family_fn family, void* user,
                                  double lo, double hi, double* a_cr, double* distance) {
  return guard([&] {
    require(a_cr != nullptr, "null output");
    const auto found = respole::find_critical(adapt(n, channels, family, user), lo, hi);
    *a_cr = found.parameter;
    if (distance) *distance = found.distance;
  });
}

RP_API rp_status rp_mixing_create(const rp_trajectory* t, size_t k, size_t l, double edge_tol,
                                  double span_tol, rp_mixing** out) {
  return guard([&] {
    require(t && out, "null argument");
    *out = nullptr;
    auto diag = respole::mixing_coefficients(t->trajectory, k, l, {edge_tol, span_tol});
    auto theta = respole::phase_theta(diag);
    *out = new rp_mixing{std::move(diag), std::move(theta)};
  });
}

RP_API void rp_mixing_destroy(rp_mixing* m) { delete m; }

RP_API size_t rp_mixing_samples(const rp_mixing* m) { return m ? m->theta.size() : 0; }

RP_API rp_status rp_mixing_beta(const rp_mixing* m, size_t i, rp_complex* beta_k,
                                rp_complex* beta_l) {
  return guard([&] {
    require(m && i < m->diagnostics.beta_k.size(), "invalid argument");
    if (beta_k) *beta_k = wrap(m->diagnostics.beta_k[i]);
    if (beta_l) *beta_l = wrap(m->diagnostics.beta_l[i]);
  });
}

RP_API rp_status rp_mixing_theta(const rp_mixing* m, double* theta) {
  return guard([&] {
    require(m && theta, "null argument");
    for (size_t i = 0; i < m->theta.size(); ++i) theta[i] = m->theta[i];
  });
}

RP_API rp_status rp_mixing_window(const rp_mixing* m, int* found, double* a_min, double* a_max) {
  return guard([&] {
    require(m && found && a_min && a_max, "null argument");
    *found = m->diagnostics.window_found ? 1 : 0;
    *a_min = m->diagnostics.a_min;
    *a_max = m->diagnostics.a_max;
  });
}

RP_API rp_status rp_chirality(const rp_trajectory* t, size_t k, size_t l, double a_cr, int* sign) {
  return guard([&] {
    require(t && sign, "null argument");
    *sign = respole::chirality_indicator(t->trajectory, k, l, a_cr);
  });
}

}  // extern "C"
