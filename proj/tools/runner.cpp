#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <string>

#include <respole/respole.h>

#include "output.hpp"

namespace respole::cli {

namespace {

void check(rp_status status, const std::string& context) {
  if (status != RP_OK) {
    throw PhysicsError(context + ": " + rp_status_name(status) + ": " + rp_last_error());
  }
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using PoleHandle = std::unique_ptr<rp_poleset, Deleter<rp_poleset, rp_poleset_destroy>>;
using TrajectoryHandle = std::unique_ptr<rp_trajectory, Deleter<rp_trajectory, rp_trajectory_destroy>>;
using MixingHandle = std::unique_ptr<rp_mixing, Deleter<rp_mixing, rp_mixing_destroy>>;

class Writer {
 public:
  Writer(const RunOptions& options, std::vector<std::filesystem::path>& written)
      : options_(options), written_(written) {}

  void csv(const std::string& stem, const CsvTable& table) {
    emit(stem + ".csv", table.str());
  }

  void svg(const std::string& stem, const std::string& content) {
    if (options_.svg) emit(stem + ".svg", content);
  }

 private:
  void emit(const std::string& file, const std::string& content) {
    const auto path = options_.out_dir / file;
    write_atomic(path, content);
    written_.push_back(path);
  }

  const RunOptions& options_;
  std::vector<std::filesystem::path>& written_;
};

std::string case_stem(const Scenario& s, const CaseSpec& c) {
  return c.label.empty() ? s.name : s.name + "_" + c.label;
}

rp_grid to_grid(const GridSpec& g) { return {g.min, g.max, g.points}; }

std::vector<double> grid_samples(rp_grid grid, const std::string& context) {
  if (grid.points < 2) {
    throw PhysicsError(context + ": grid needs at least 2 points");
  }
  std::vector<double> out(grid.points);
  check(rp_grid_samples(grid, out.data()), context);
  return out;
}

std::vector<double> sweep_samples(const SweepSpec& sweep) {
  if (!sweep.log_spacing) return grid_samples({sweep.min, sweep.max, sweep.points}, "sweep");
  auto logs = grid_samples({std::log(sweep.min), std::log(sweep.max), sweep.points}, "sweep");
  for (double& v : logs) v = std::exp(v);
  logs.front() = sweep.min;
  logs.back() = sweep.max;
  return logs;
}

PoleHandle make_poles(const CaseSpec& c, const std::string& context) {
  std::vector<double> positions;
  std::vector<double> widths;
  for (const auto& p : c.poles) {
    positions.push_back(p.position);
    widths.push_back(p.width);
  }
  rp_poleset* raw = nullptr;
  check(rp_poleset_create(positions.data(), widths.data(), positions.size(), &raw), context);
  return PoleHandle(raw);
}

void run_case(const Scenario& s, const CaseSpec& c, Writer& out) {
  const std::string stem = case_stem(s, c);
  const rp_grid grid = to_grid(*s.grid);
  const auto energies = grid_samples(grid, stem);
  const auto poles = make_poles(c, stem);

  if (s.wants(Product::CrossSection)) {
    std::vector<double> sigma(grid.points);
    check(rp_cross_section(poles.get(), grid, s.background_phase, sigma.data()), stem);
    CsvTable table({"E", "sigma"});
    for (std::size_t i = 0; i < energies.size(); ++i) table.add_row({energies[i], sigma[i]});
    out.csv(stem + "_sigma", table);
    out.svg(stem + "_sigma", svg_plot(stem + " cross section", "E", energies, {{"sigma", sigma}}, false));
  }

  if (!s.wants(Product::Coupling) && !s.wants(Product::Phase)) return;
  for (std::size_t state : c.coupling_states) {
    const std::string wstem = stem + "_W" + std::to_string(state);
    const std::size_t n = state - 1;
    std::vector<rp_complex> w(grid.points);
    check(rp_coupling_profile(poles.get(), n, grid, w.data()), wstem);
    std::vector<double> phase(grid.points);
    std::size_t jump_count = 0;
    std::vector<rp_phase_jump> jumps(16);
    check(rp_phase_profile(poles.get(), n, grid, phase.data(), jumps.data(), jumps.size(), &jump_count),
          wstem);
    if (jump_count > jumps.size()) {
      jumps.resize(jump_count);
      check(rp_phase_profile(poles.get(), n, grid, phase.data(), jumps.data(), jumps.size(),
                             &jump_count),
            wstem);
    }
    jumps.resize(jump_count);

    if (s.wants(Product::Coupling)) {
      CsvTable table({"E", "re_W", "im_W", "abs_W", "phase_W"});
      std::vector<double> magnitude(grid.points);
      for (std::size_t i = 0; i < energies.size(); ++i) {
        magnitude[i] = std::hypot(w[i].re, w[i].im);
        table.add_row({energies[i], w[i].re, w[i].im, magnitude[i], phase[i]});
      }
      out.csv(wstem, table);
      out.svg(wstem + "_abs", svg_plot(wstem + " |W|", "E", energies, {{"abs_W", magnitude}}, true));
      out.svg(wstem + "_phase", svg_plot(wstem + " phase", "E", energies, {{"phase_W", phase}}, false));
    }
    if (s.wants(Product::Phase)) {
      CsvTable table({"E", "magnitude"});
      for (const auto& j : jumps) table.add_row({j.energy, j.magnitude});
      out.csv(wstem + "_jumps", table);
    }
  }
}

struct FamilyData {
  const HamiltonianSpec* spec;
  std::size_t n;
};

int family_callback(double a, void* user, double* h0, double* couplings, double* alpha) {
  const auto* data = static_cast<const FamilyData*>(user);
  const HamiltonianSpec& h = *data->spec;
  for (std::size_t r = 0; r < data->n; ++r) {
    for (std::size_t c = 0; c < data->n; ++c) {
      double v = h.h0[r][c];
      if (!h.h0_slope.empty()) v += a * h.h0_slope[r][c];
      h0[r * data->n + c] = v;
    }
  }
  for (std::size_t c = 0; c < h.couplings.size(); ++c) {
    std::copy(h.couplings[c].begin(), h.couplings[c].end(), couplings + c * data->n);
  }
  *alpha = h.alpha + a * h.alpha_slope;
  return 0;
}

const char* kind_name(rp_critical_kind kind) {
  switch (kind) {
    case RP_CRITICAL_REPULSION: return "repulsion";
    case RP_CRITICAL_ATTRACTION: return "attraction";
    case RP_CRITICAL_COALESCENCE: return "coalescence";
  }
  return "unknown";
}

rp_complex eigenvalue(const rp_trajectory* t, std::size_t k, std::size_t i) {
  rp_complex e{};
  check(rp_trajectory_eigenvalue(t, k, i, &e), "trajectory");
  return e;
}

void write_spectrum_svg(const std::string& stem, const std::string& x_label, const rp_trajectory* t,
                        const std::vector<double>& x, const std::vector<std::size_t>& states,
                        Writer& out) {
  std::vector<Series> energy;
  std::vector<Series> width;
  for (std::size_t k : states) {
    Series e{"E" + std::to_string(k + 1), {}};
    Series g{"G" + std::to_string(k + 1), {}};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const rp_complex z = eigenvalue(t, k, i);
      e.y.push_back(z.re);
      g.y.push_back(-2.0 * z.im);
    }
    energy.push_back(std::move(e));
    width.push_back(std::move(g));
  }
  out.svg(stem + "_energy", svg_plot(stem + " Re E", x_label, x, energy, false));
  out.svg(stem + "_width", svg_plot(stem + " width", x_label, x, width, false));
}

void run_crossing(const Scenario& s, Writer& out) {
  const HamiltonianSpec& h = *s.hamiltonian;
  const std::size_t n = h.h0.size();
  const auto params = sweep_samples(h.sweep);
  FamilyData data{&h, n};
  rp_trajectory* raw = nullptr;
  check(rp_sweep(n, h.couplings.size(), family_callback, &data, params.data(), params.size(), &raw),
        "crossing sweep");
  const TrajectoryHandle t(raw);

  const std::size_t k = h.states[0] - 1;
  const std::size_t l = h.states[1] - 1;
  struct Row {
    std::vector<double> theta;
    MixingHandle mixing;
  };
  Row rows[2];
  const std::size_t pair[2] = {k, l};
  for (int r = 0; r < 2; ++r) {
    rp_mixing* m = nullptr;
    check(rp_mixing_create(t.get(), pair[r], pair[1 - r], 1e-2, 1e-6, &m), "mixing");
    rows[r].mixing.reset(m);
    rows[r].theta.resize(rp_mixing_samples(m));
    check(rp_mixing_theta(m, rows[r].theta.data()), "mixing");
  }

  CsvTable table({"a", "k", "re_E", "gamma", "beta_abs", "theta"});
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (int r = 0; r < 2; ++r) {
      const rp_complex e = eigenvalue(t.get(), pair[r], i);
      rp_complex beta{};
      check(rp_mixing_beta(rows[r].mixing.get(), i, &beta, nullptr), "mixing");
      table.add_row_text({format_number(params[i]), std::to_string(pair[r] + 1), format_number(e.re),
                          format_number(-2.0 * e.im), format_number(std::hypot(beta.re, beta.im)),
                          format_number(rows[r].theta[i])});
    }
  }
  out.csv(s.name + "_crossing", table);

  CsvTable critical({"a", "kind", "distance"});
  for (std::size_t c = 0; c < rp_trajectory_critical_count(t.get()); ++c) {
    rp_critical_point p{};
    check(rp_trajectory_critical_point(t.get(), c, &p), "critical point");
    critical.add_row_text({format_number(p.parameter), kind_name(p.kind), format_number(p.distance)});
  }
  out.csv(s.name + "_critical", critical);
  write_spectrum_svg(s.name + "_crossing", "a", t.get(), params, {k, l}, out);
}

void run_trapping(const Scenario& s, Writer& out) {
  const HamiltonianSpec& h = *s.hamiltonian;
  const std::size_t n = h.h0.size();
  const auto alphas = sweep_samples(h.sweep);
  std::vector<double> h0;
  for (const auto& row : h.h0) h0.insert(h0.end(), row.begin(), row.end());
  std::vector<double> couplings;
  for (const auto& v : h.couplings) couplings.insert(couplings.end(), v.begin(), v.end());

  rp_trajectory* raw = nullptr;
  check(rp_trapping_scan(n, h0.data(), h.couplings.size(), couplings.data(), alphas.data(),
                         alphas.size(), &raw),
        "trapping scan");
  const TrajectoryHandle t(raw);

  CsvTable states({"alpha", "k", "re_E", "gamma", "A"});
  CsvTable trapped({"alpha", "trapped_fraction"});
  std::vector<double> fraction(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const rp_complex e = eigenvalue(t.get(), k, i);
      double a = 0.0;
      check(rp_trajectory_a_norm(t.get(), k, i, &a), "trapping scan");
      states.add_row_text({format_number(alphas[i]), std::to_string(k + 1), format_number(e.re),
                           format_number(-2.0 * e.im), format_number(a)});
    }
    check(rp_trajectory_trapped_fraction(t.get(), i, &fraction[i]), "trapping scan");
    trapped.add_row({alphas[i], fraction[i]});
  }
  out.csv(s.name + "_trapping", states);
  out.csv(s.name + "_trapped", trapped);

  std::vector<std::size_t> all(n);
  for (std::size_t k = 0; k < n; ++k) all[k] = k;
  write_spectrum_svg(s.name + "_trapping", "alpha", t.get(), alphas, all, out);
  out.svg(s.name + "_trapped",
          svg_plot(s.name + " trapped fraction", "alpha", alphas, {{"trapped", fraction}}, true));
}

}  // namespace

std::vector<std::filesystem::path> run_scenario(const Scenario& scenario, const RunOptions& options,
                                                const std::vector<Product>& only) {
  auto selected = [&](Product p) {
    return scenario.wants(p) &&
           (only.empty() || std::find(only.begin(), only.end(), p) != only.end());
  };
  std::vector<std::filesystem::path> written;
  Writer out(options, written);

  if (selected(Product::CrossSection) || selected(Product::Coupling) || selected(Product::Phase)) {
    Scenario view = scenario;
    view.outputs.clear();
    for (Product p : {Product::CrossSection, Product::Coupling, Product::Phase}) {
      if (selected(p)) view.outputs.push_back(p);
    }
    for (const auto& c : view.cases) run_case(view, c, out);
  }
  if (selected(Product::Crossing)) run_crossing(scenario, out);
  if (selected(Product::Trapping)) run_trapping(scenario, out);
  return written;
}

}  // namespace respole::cli
