/* C interface to the respole resonance library.
 *
 * Every fallible call returns an rp_status; on failure a human-readable
 * message is available from rp_last_error() on the calling thread. Objects
 * are opaque handles released with the matching *_destroy function.
 * Matrices are row-major. Complex numbers are passed as rp_complex. */
#ifndef RESPOLE_RESPOLE_H
#define RESPOLE_RESPOLE_H

#include <stddef.h>

#if defined(RESPOLE_BUILDING)
#define RP_API __attribute__((visibility("default")))
#else
#define RP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rp_status {
  RP_OK = 0,
  RP_ERR_INVALID_ARGUMENT,
  RP_ERR_INVALID_RANGE,
  RP_ERR_DIMENSION_MISMATCH,
  RP_ERR_DEGENERATE_DENOMINATOR,
  RP_ERR_DOUBLE_POLE_SINGULARITY,
  RP_ERR_EMPTY_PROFILE,
  RP_ERR_NEAR_DEFECTIVE,
  RP_ERR_TRACKING_AMBIGUITY,
  RP_ERR_NON_CONVERGENCE,
  RP_ERR_STATE_TRACKING,
  RP_ERR_NON_UNIMODAL,
  RP_ERR_SPAN_LEAK,
  RP_ERR_INDETERMINATE,
  RP_ERR_INTERNAL
} rp_status;

typedef enum rp_critical_kind {
  RP_CRITICAL_REPULSION = 0,
  RP_CRITICAL_ATTRACTION,
  RP_CRITICAL_COALESCENCE
} rp_critical_kind;

typedef struct rp_complex {
  double re;
  double im;
} rp_complex;

typedef struct rp_grid {
  double min;
  double max;
  size_t points;
} rp_grid;

typedef struct rp_phase_jump {
  double energy;
  double magnitude;
} rp_phase_jump;

typedef struct rp_critical_point {
  double parameter;
  rp_critical_kind kind;
  size_t k;
  size_t l;
  double distance;
} rp_critical_point;

typedef struct rp_poleset rp_poleset;
typedef struct rp_hamiltonian rp_hamiltonian;
typedef struct rp_spectrum rp_spectrum;
typedef struct rp_trajectory rp_trajectory;
typedef struct rp_mixing rp_mixing;

/* Fills h0 (n*n, row-major), couplings (channels*n, one vector per row) and
 * alpha for parameter a. Returns 0 on success. */
typedef int (*rp_family_fn)(double a, void* user, double* h0, double* couplings, double* alpha);

RP_API const char* rp_status_name(rp_status status);
RP_API const char* rp_last_error(void);
RP_API const char* rp_version(void);

/* Grid samples, out has `points` entries; first = min, last = max exactly. */
RP_API rp_status rp_grid_samples(rp_grid grid, double* out);

/* ---- S matrix -------------------------------------------------------- */

RP_API rp_status rp_poleset_create(const double* positions, const double* widths, size_t n,
                                   rp_poleset** out);
RP_API void rp_poleset_destroy(rp_poleset* poles);
RP_API size_t rp_poleset_size(const rp_poleset* poles);

RP_API rp_status rp_s_product(const rp_poleset* poles, double energy, rp_complex* out);
RP_API rp_status rp_s_pole_form(const rp_poleset* poles, double energy, rp_complex* out);
RP_API rp_status rp_coupling_w(const rp_poleset* poles, size_t n, double energy, rp_complex* out);
RP_API rp_status rp_coupling_w_two(double position_k, double width_k, double position_l,
                                   double width_l, double energy, rp_complex* out);
RP_API rp_status rp_coupling_w_fano(double position_k, double width_k, double position_l,
                                    double width_l, rp_complex* out);
RP_API rp_status rp_s_double_pole(double position, double width, double energy, rp_complex* out);

/* sigma has grid.points entries. */
RP_API rp_status rp_cross_section(const rp_poleset* poles, rp_grid grid, double background_phase,
                                  double* sigma);
/* w has grid.points entries. */
RP_API rp_status rp_coupling_profile(const rp_poleset* poles, size_t n, rp_grid grid,
                                     rp_complex* w);
/* unwrapped has grid.points entries. At most jump_capacity jumps are
 * written; *jump_count receives the total number found. */
RP_API rp_status rp_phase_profile(const rp_poleset* poles, size_t n, rp_grid grid,
                                  double* unwrapped, rp_phase_jump* jumps, size_t jump_capacity,
                                  size_t* jump_count);

/* ---- effective Hamiltonian ------------------------------------------- */

RP_API rp_status rp_hamiltonian_create(size_t n, const double* h0, size_t channels,
                                       const double* couplings, double alpha,
                                       rp_hamiltonian** out);
RP_API void rp_hamiltonian_destroy(rp_hamiltonian* h);
RP_API size_t rp_hamiltonian_dimension(const rp_hamiltonian* h);
RP_API size_t rp_hamiltonian_channels(const rp_hamiltonian* h);
/* out has n*n entries, row-major. */
RP_API rp_status rp_hamiltonian_assemble(const rp_hamiltonian* h, rp_complex* out);

RP_API rp_status rp_spectrum_solve(const rp_hamiltonian* h, rp_spectrum** out);
RP_API void rp_spectrum_destroy(rp_spectrum* s);
RP_API size_t rp_spectrum_size(const rp_spectrum* s);
RP_API rp_status rp_spectrum_eigenvalue(const rp_spectrum* s, size_t k, rp_complex* out);
RP_API rp_status rp_spectrum_eigenvector(const rp_spectrum* s, size_t k, rp_complex* out);
RP_API rp_status rp_spectrum_a_norm(const rp_spectrum* s, size_t k, double* out);
RP_API rp_status rp_spectrum_b_overlap(const rp_spectrum* s, size_t k, size_t l, double* out);
RP_API rp_status rp_spectrum_hermitian_overlap(const rp_spectrum* s, size_t k, size_t l,
                                               rp_complex* out);
RP_API rp_status rp_spectrum_gamma(const rp_spectrum* s, size_t k, size_t c, rp_complex* out);
/* residuals has n entries. */
RP_API rp_status rp_spectrum_sum_rule(const rp_spectrum* s, double* residuals);
/* b has n*n entries (b[k*n + l]); *residual receives the largest
 * reconstruction error over all states. */
RP_API rp_status rp_spectrum_mixing(const rp_spectrum* s, const rp_hamiltonian* h, rp_complex* b,
                                    double* residual);

RP_API rp_status rp_fixed_point_solve(size_t n, size_t channels, rp_family_fn family, void* user,
                                      size_t k, double e_start, double damping, double tolerance,
                                      size_t max_iterations, double* energy, double* width,
                                      size_t* iterations);

/* ---- sweeps and crossings -------------------------------------------- */

RP_API rp_status rp_sweep(size_t n, size_t channels, rp_family_fn family, void* user,
                          const double* grid, size_t points, rp_trajectory** out);
RP_API rp_status rp_trapping_scan(size_t n, const double* h0, size_t channels,
                                  const double* couplings, const double* alphas, size_t points,
                                  rp_trajectory** out);
RP_API void rp_trajectory_destroy(rp_trajectory* t);
RP_API size_t rp_trajectory_samples(const rp_trajectory* t);
RP_API size_t rp_trajectory_states(const rp_trajectory* t);
RP_API rp_status rp_trajectory_parameter(const rp_trajectory* t, size_t i, double* out);
RP_API rp_status rp_trajectory_eigenvalue(const rp_trajectory* t, size_t k, size_t i,
                                          rp_complex* out);
RP_API rp_status rp_trajectory_eigenvector(const rp_trajectory* t, size_t k, size_t i,
                                           rp_complex* out);
/* Infinite at an exact double pole. */
RP_API rp_status rp_trajectory_a_norm(const rp_trajectory* t, size_t k, size_t i, double* out);
RP_API size_t rp_trajectory_critical_count(const rp_trajectory* t);
RP_API rp_status rp_trajectory_critical_point(const rp_trajectory* t, size_t index,
                                              rp_critical_point* out);
/* Only for trajectories from rp_trapping_scan. */
RP_API rp_status rp_trajectory_trapped_fraction(const rp_trajectory* t, size_t i, double* out);

RP_API rp_status rp_find_critical(size_t n, size_t channels, rp_family_fn family, void* user,
                                  double lo, double hi, double* a_cr, double* distance);

RP_API rp_status rp_mixing_create(const rp_trajectory* t, size_t k, size_t l, double edge_tol,
                                  double span_tol, rp_mixing** out);
RP_API void rp_mixing_destroy(rp_mixing* m);
RP_API size_t rp_mixing_samples(const rp_mixing* m);
RP_API rp_status rp_mixing_beta(const rp_mixing* m, size_t i, rp_complex* beta_k,
                                rp_complex* beta_l);
/* theta has rp_mixing_samples(m) entries. */
RP_API rp_status rp_mixing_theta(const rp_mixing* m, double* theta);
RP_API rp_status rp_mixing_window(const rp_mixing* m, int* found, double* a_min, double* a_max);

RP_API rp_status rp_chirality(const rp_trajectory* t, size_t k, size_t l, double a_cr, int* sign);

#ifdef __cplusplus
}
#endif

#endif
