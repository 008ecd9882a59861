#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace respole::cli {

// Exit status 2: unreadable, unparsable or schema-violating configuration,
// and any file-system failure.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exit status 1: the library rejected the physics (bad widths, defective
// spectrum, ambiguous tracking, ...).
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Product { CrossSection, Coupling, Phase, Trapping, Crossing };

const char* product_name(Product p);

struct PoleSpec {
  double position;
  double width;
};

struct GridSpec {
  double min;
  double max;
  std::size_t points;
};

struct CaseSpec {
  std::string label;  // empty for a single top-level pole list
  std::vector<PoleSpec> poles;
  std::vector<std::size_t> coupling_states;  // 1-based
};

struct SweepSpec {
  double min;
  double max;
  std::size_t points;
  bool log_spacing = false;
};

// H(a) = (h0 + a h0_slope) - (i/2)(alpha + a alpha_slope) sum_c v_c v_c^T
// for crossing sweeps; for trapping scans the sweep variable is alpha itself.
struct HamiltonianSpec {
  std::vector<std::vector<double>> h0;
  std::vector<std::vector<double>> h0_slope;  // empty when absent
  std::vector<std::vector<double>> couplings;
  double alpha = 0.0;
  double alpha_slope = 0.0;
  SweepSpec sweep{};
  std::vector<std::size_t> states{1, 2};  // 1-based pair for mixing
};

struct Scenario {
  std::string name;
  std::optional<GridSpec> grid;
  double background_phase = 0.0;
  std::vector<Product> outputs;
  std::vector<CaseSpec> cases;
  std::optional<HamiltonianSpec> hamiltonian;

  bool wants(Product p) const;
};

/// Parses and validates a scenario. `source` names the text in diagnostics.
Scenario parse_scenario(const std::string& text, const std::string& source);
Scenario load_scenario(const std::string& path);

}  // namespace respole::cli
