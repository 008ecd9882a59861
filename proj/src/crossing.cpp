#include "crossing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "error.hpp"

namespace respole {

namespace {

constexpr std::size_t brute_force_limit = 6;
constexpr double tie_ratio = 1e-9;
constexpr double fidelity_margin = 1e-8;
constexpr double golden = 0.6180339887498949;

using Permutation = std::vector<std::size_t>;

double pair_distance(const std::vector<Complex>& values, std::size_t* k = nullptr,
                     std::size_t* l = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double d = std::abs(values[i] - values[j]);
      if (d < best) {
        best = d;
        if (k) *k = i;
        if (l) *l = j;
      }
    }
  }
  return best;
}

double diameter(const std::vector<Complex>& values) {
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      d = std::max(d, std::abs(values[i] - values[j]));
    }
  }
  return d;
}

double assignment_cost(const std::vector<Complex>& from, const std::vector<Complex>& to,
                       const Permutation& p) {
  double cost = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) cost += std::norm(from[j] - to[p[j]]);
  return cost;
}

double fidelity(const std::vector<ComplexVector>& from, const std::vector<ComplexVector>& to,
                const Permutation& p) {
  double f = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    f += std::abs(from[j].dot(to[p[j]])) / (from[j].norm() * to[p[j]].norm());
  }
  return f;
}

bool cluster_within(const std::vector<Complex>& values, const std::vector<std::size_t>& idx,
                    double tol) {
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (std::abs(values[idx[a]] - values[idx[b]]) > tol) return false;
    }
  }
  return true;
}

// p[j] = index in `to` that continues path j.
Permutation match(const std::vector<Complex>& from, const std::vector<ComplexVector>& from_vec,
                  const std::vector<Complex>& to, const std::vector<ComplexVector>& to_vec,
                  double tol, double parameter) {
  const std::size_t n = from.size();
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});

  if (n > brute_force_limit) {
    std::vector<bool> from_used(n, false), to_used(n, false);
    for (std::size_t step = 0; step < n; ++step) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bj = 0, bm = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (from_used[j]) continue;
        for (std::size_t m = 0; m < n; ++m) {
          if (to_used[m]) continue;
          const double c = std::norm(from[j] - to[m]);
          if (c < best) {
            best = c;
            bj = j;
            bm = m;
          }
        }
      }
      from_used[bj] = to_used[bm] = true;
      p[bj] = bm;
    }
    return p;
  }

  std::vector<std::pair<double, Permutation>> all;
  do {
    all.emplace_back(assignment_cost(from, to, p), p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (all.size() == 1) return all.front().second;

  const double best = all[0].first;
  const double threshold = best + tie_ratio * std::max(best, all[1].first);
  std::vector<const Permutation*> tied;
  for (const auto& [cost, perm] : all) {
    if (cost <= threshold) tied.push_back(&perm);
  }
  if (tied.size() == 1) return all.front().second;

  // Equal costs: eigenvector overlap decides. That is only trusted when the
  // competing eigenvalues coincide or the overlaps differ clearly.
  const Permutation* chosen = tied.front();
  double best_f = fidelity(from_vec, to_vec, *chosen);
  for (const Permutation* perm : tied) {
    const double f = fidelity(from_vec, to_vec, *perm);
    if (f > best_f + 1e-12) {
      best_f = f;
      chosen = perm;
    }
  }
  for (const Permutation* perm : tied) {
    if (perm == chosen) continue;
    std::vector<std::size_t> sources, targets;
    for (std::size_t j = 0; j < n; ++j) {
      if ((*chosen)[j] != (*perm)[j]) {
        sources.push_back(j);
        targets.push_back((*chosen)[j]);
      }
    }
    const bool coincide = cluster_within(from, sources, tol) || cluster_within(to, targets, tol);
    const bool distinct = best_f - fidelity(from_vec, to_vec, *perm) > fidelity_margin * double(n);
    if (!coincide && !distinct) {
      throw Error(ErrorKind::TrackingAmbiguity,
                  "eigenvalue assignment is not unique at a = " + std::to_string(parameter) +
                      "; refine the parameter grid");
    }
  }
  return *chosen;
}

// Continue the eigenvector of a path: bi-normalized with the sign closest to
// the previous sample, or phase-aligned unit vector at a defect.
ComplexVector continue_vector(const ComplexVector& raw, double self_overlap,
                              const ComplexVector* previous) {
  if (self_overlap >= defect_floor) {
    ComplexVector x = bi_normalize(raw);
    if (previous && previous->dot(x).real() < 0.0) x = -x;
    return x;
  }
  ComplexVector x = raw / raw.norm();
  if (previous) {
    const Complex overlap = previous->dot(x);
    if (std::abs(overlap) > 0.0) x *= std::conj(overlap) / std::abs(overlap);
  }
  return x;
}

template <class F>
double golden_section(F&& f, double lo, double hi, double tol, double* value,
                      double noise = -1.0) {
  double c = hi - golden * (hi - lo);
  double d = lo + golden * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  const double f_ends = noise >= 0.0 ? std::max(f(lo), f(hi)) : 0.0;
  for (int iter = 0; iter < 400 && (hi - lo) > tol; ++iter) {
    if (noise >= 0.0 && std::min(fc, fd) > f_ends + noise) {
      throw Error(ErrorKind::NonUnimodal, "interior evaluation exceeds both bracket ends");
    }
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - golden * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + golden * (hi - lo);
      fd = f(d);
    }
    const double spacing = std::numeric_limits<double>::epsilon() *
                           std::max({1.0, std::abs(lo), std::abs(hi)});
    if (hi - lo <= 4.0 * spacing) break;
  }
  const double x = fc <= fd ? c : d;
  if (value) *value = std::min(fc, fd);
  return x;
}

CriticalKind classify(const SweepTrajectory& t, std::size_t k, std::size_t l, std::size_t before,
                      std::size_t after, double distance) {
  if (distance < t.coalescence_tolerance) return CriticalKind::Coalescence;
  const auto& pk = t.paths[k];
  const auto& pl = t.paths[l];
  const double de0 = pk.energy(before) - pl.energy(before);
  const double de1 = pk.energy(after) - pl.energy(after);
  const double dg0 = pk.width(before) - pl.width(before);
  const double dg1 = pk.width(after) - pl.width(after);
  const bool energies_cross = de0 * de1 < 0.0;
  const bool widths_cross = dg0 * dg1 < 0.0;
  if (widths_cross && !energies_cross) return CriticalKind::Repulsion;
  if (energies_cross && !widths_cross) return CriticalKind::Attraction;
  const std::size_t mid = (before + after) / 2;
  const double de = std::abs(pk.energy(mid) - pl.energy(mid));
  const double dg = std::abs(pk.width(mid) - pl.width(mid)) / 2.0;
  return de >= dg ? CriticalKind::Repulsion : CriticalKind::Attraction;
}

struct PairProjection {
  Complex ck;
  Complex cl;
  double residual;
};

PairProjection project_pair(const ComplexVector& rk, const ComplexVector& rl,
                            const ComplexVector& x) {
  const Complex ck = bilinear(rk, x);
  const Complex cl = bilinear(rl, x);
  const double residual = (x - ck * rk - cl * rl).norm() / x.norm();
  return {ck, cl, residual};
}

void check_pair(const SweepTrajectory& t, std::size_t k, std::size_t l) {
  if (t.samples() == 0) throw Error(ErrorKind::InvalidArgument, "empty trajectory");
  if (k >= t.states() || l >= t.states() || k == l) {
    throw Error(ErrorKind::InvalidArgument, "state pair must be two distinct valid indices");
  }
  if (t.paths[k].self_overlaps[0] < defect_floor || t.paths[l].self_overlaps[0] < defect_floor) {
    throw Error(ErrorKind::NearDefective, "reference sample sits on a double pole");
  }
}

}  // namespace

const char* to_string(CriticalKind kind) noexcept {
  switch (kind) {
    case CriticalKind::Repulsion: return "repulsion";
    case CriticalKind::Attraction: return "attraction";
    case CriticalKind::Coalescence: return "coalescence";
  }
  return "unknown";
}

double min_pair_distance(const HamiltonianFamily& family, double a) {
  return pair_distance(eigenvalues(family(a).assemble()));
}

SweepTrajectory sweep(const HamiltonianFamily& family, const std::vector<double>& grid) {
  if (grid.size() < 2) throw Error(ErrorKind::InvalidRange, "sweep needs at least 2 samples");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw Error(ErrorKind::InvalidRange, "non-finite sweep sample");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::InvalidRange, "sweep grid must be strictly increasing");
    }
  }

  std::vector<EigenDecomposition> solved;
  solved.reserve(grid.size());
  for (double a : grid) solved.push_back(decompose(family(a).assemble()));
  const std::size_t n = solved.front().values.size();
  for (const auto& s : solved) {
    if (s.values.size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "family changes dimension along the sweep");
    }
  }

  SweepTrajectory t;
  t.parameters = grid;
  for (const auto& s : solved) t.spectral_diameter = std::max(t.spectral_diameter, diameter(s.values));
  const double scale = t.spectral_diameter > 0.0 ? t.spectral_diameter : 1.0;
  t.coalescence_tolerance = coalescence_ratio * scale;

  t.paths.resize(n);
  auto push = [&](std::size_t path, const EigenDecomposition& s, std::size_t idx) {
    StatePath& p = t.paths[path];
    const ComplexVector* prev = p.eigenvectors.empty() ? nullptr : &p.eigenvectors.back();
    p.eigenvalues.push_back(s.values[idx]);
    p.eigenvectors.push_back(continue_vector(s.vectors[idx], s.self_overlaps[idx], prev));
    p.self_overlaps.push_back(s.self_overlaps[idx]);
    p.a_norms.push_back(s.self_overlaps[idx] > 0.0 ? 1.0 / s.self_overlaps[idx]
                                                   : std::numeric_limits<double>::infinity());
  };
  for (std::size_t j = 0; j < n; ++j) push(j, solved[0], j);

  for (std::size_t i = 1; i < grid.size(); ++i) {
    std::vector<Complex> from(n);
    std::vector<ComplexVector> from_vec(n);
    for (std::size_t j = 0; j < n; ++j) {
      from[j] = t.paths[j].eigenvalues.back();
      from_vec[j] = t.paths[j].eigenvectors.back();
    }
    const Permutation p =
        match(from, from_vec, solved[i].values, solved[i].vectors, t.coalescence_tolerance, grid[i]);
    for (std::size_t j = 0; j < n; ++j) push(j, solved[i], p[j]);
  }

  // Interior minima (plateaus included) of the smallest pairwise distance.
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) d[i] = pair_distance(solved[i].values);
  const double noise = 1e-12 * scale;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (!(d[i] + noise < d[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < grid.size() && std::abs(d[j + 1] - d[i]) <= noise) ++j;
    if (j + 1 >= grid.size() || !(d[j + 1] > d[i] + noise)) {
      i = j;
      continue;
    }
    const double lo = grid[i - 1];
    const double hi = grid[j + 1];
    double dist = 0.0;
    auto f = [&](double a) { return min_pair_distance(family, a); };
    double a_cr = golden_section(f, lo, hi, 0.0, &dist);
    if (d[i] < dist) {
      a_cr = grid[i];
      dist = d[i];
    }

    std::size_t k = 0, l = 1;
    std::vector<Complex> at_i(n);
    for (std::size_t s = 0; s < n; ++s) at_i[s] = t.paths[s].eigenvalues[i];
    pair_distance(at_i, &k, &l);
    t.critical_points.push_back({a_cr, classify(t, k, l, i - 1, j + 1, dist), k, l, dist});
    i = j;
  }
  return t;
}

CriticalSearch find_critical(const HamiltonianFamily& family, double lo, double hi,
                             double bracket_tol) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorKind::InvalidRange, "critical-point bracket must satisfy lo < hi");
  }
  constexpr std::size_t prescan = 65;
  std::vector<double> a(prescan), f(prescan);
  for (std::size_t i = 0; i < prescan; ++i) {
    a[i] = i + 1 == prescan ? hi : lo + (hi - lo) * double(i) / double(prescan - 1);
    f[i] = min_pair_distance(family, a[i]);
  }
  const double f_scale = *std::max_element(f.begin(), f.end());
  const double noise = 1e-7 * std::max(f_scale, std::numeric_limits<double>::min());
  const std::size_t m =
      static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  for (std::size_t i = 1; i <= m; ++i) {
    if (f[i] > f[i - 1] + noise) {
      throw Error(ErrorKind::NonUnimodal,
                  "pair distance rises then falls near a = " + std::to_string(a[i]));
    }
  }
  for (std::size_t i = m + 1; i < prescan; ++i) {
    if (f[i] + noise < f[i - 1]) {
      throw Error(ErrorKind::NonUnimodal,
                  "pair distance falls again near a = " + std::to_string(a[i]));
    }
  }

  const double left = a[m == 0 ? 0 : m - 1];
  const double right = a[m + 1 == prescan ? m : m + 1];
  double value = 0.0;
  auto fn = [&](double x) { return min_pair_distance(family, x); };
  const double x = golden_section(fn, left, right, bracket_tol, &value, noise);
  return {x, value};
}

MixingDiagnostics mixing_coefficients(const SweepTrajectory& trajectory, std::size_t k,
                                      std::size_t l, const MixingOptions& options) {
  check_pair(trajectory, k, l);
  const ComplexVector& rk = trajectory.paths[k].eigenvectors.front();
  const ComplexVector& rl = trajectory.paths[l].eigenvectors.front();

  MixingDiagnostics out;
  out.k = k;
  out.l = l;
  out.parameters = trajectory.parameters;
  bool have_window = false;
  for (std::size_t i = 0; i < trajectory.samples(); ++i) {
    const PairProjection pr = project_pair(rk, rl, trajectory.paths[k].eigenvectors[i]);
    if (pr.residual > options.span_tol) {
      throw Error(ErrorKind::SpanLeak,
                  "state " + std::to_string(k) + " leaves the reference pair span at a = " +
                      std::to_string(trajectory.parameters[i]) + " (residual " +
                      std::to_string(pr.residual) + ")");
    }
    const double norm = std::sqrt(std::norm(pr.ck) + std::norm(pr.cl));
    int s = 1;
    if (std::abs(pr.ck) > 0.0 && (pr.cl / pr.ck).imag() < 0.0) s = -1;
    const Complex bk = pr.ck / norm;
    const Complex bl = pr.cl / (double(s) * Complex(0.0, 1.0) * norm);
    out.beta_k.push_back(bk);
    out.beta_l.push_back(bl);
    out.signs.push_back(s);
    out.projection.push_back(pr.ck + pr.cl);
    out.residuals.push_back(pr.residual);
    if (std::min(std::abs(bk), std::abs(bl)) > options.edge_tol) {
      if (!have_window) out.a_min = trajectory.parameters[i];
      out.a_max = trajectory.parameters[i];
      have_window = true;
    }
  }
  out.window_found = have_window;
  return out;
}

std::vector<double> phase_theta(const MixingDiagnostics& diagnostics) {
  std::vector<double> theta;
  theta.reserve(diagnostics.projection.size());
  if (diagnostics.projection.empty()) return theta;
  const double start = std::arg(diagnostics.projection.front());
  double previous_raw = start;
  double accumulated = 0.0;
  for (const Complex& c : diagnostics.projection) {
    const double raw = std::arg(c);
    accumulated += std::remainder(raw - previous_raw, 2.0 * std::numbers::pi);
    previous_raw = raw;
    theta.push_back(accumulated);
  }
  return theta;
}

int chirality_indicator(const SweepTrajectory& trajectory, std::size_t k, std::size_t l,
                        double a_cr) {
  check_pair(trajectory, k, l);
  const auto& params = trajectory.parameters;
  const auto above = std::upper_bound(params.begin(), params.end(), a_cr);
  if (above == params.begin() || above == params.end() ||
      (std::prev(above) == params.begin() && *params.begin() == a_cr)) {
    throw Error(ErrorKind::InvalidArgument, "chirality needs sweep samples on both sides of a_cr");
  }
  auto below = std::prev(above);
  if (*below == a_cr) --below;
  const auto i = static_cast<std::size_t>(below - params.begin());

  const PairProjection pr =
      project_pair(trajectory.paths[k].eigenvectors.front(),
                   trajectory.paths[l].eigenvectors.front(), trajectory.paths[k].eigenvectors[i]);
  const double magnitude = std::sqrt(std::norm(pr.ck) + std::norm(pr.cl));
  if (std::abs(pr.ck) <= 1e-12 * magnitude || std::abs(pr.cl) <= 1e-12 * magnitude) {
    throw Error(ErrorKind::Indeterminate, "no two-state admixture before a_cr");
  }
  const Complex ratio = pr.cl / pr.ck;
  if (std::abs(ratio.imag()) <= 1e-6 * std::abs(ratio)) {
    throw Error(ErrorKind::Indeterminate,
                "admixture is real; both signs of i fit the combination equally");
  }
  return ratio.imag() > 0.0 ? 1 : -1;
}

}  // namespace respole
