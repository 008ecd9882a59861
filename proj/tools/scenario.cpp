#include "scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace respole::cli {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& what) const {
    std::ostringstream os;
    os << source_;
    if (mark.line >= 0) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    os << ": " << what;
    throw ConfigError(os.str());
  }

  void expect_map(const YAML::Node& node, const std::string& where) const {
    if (!node.IsMap()) fail(node.Mark(), where + " must be a mapping");
  }

  // Rejects keys outside `allowed`, naming the offending key.
  void check_keys(const YAML::Node& node, const std::string& where,
                  std::initializer_list<const char*> allowed) const {
    expect_map(node, where);
    for (auto it = node.begin(); it != node.end(); ++it) {
      const std::string key = it->first.as<std::string>();
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* a) { return key == a; });
      if (!known) fail(it->first.Mark(), "unknown key '" + key + "' in " + where);
    }
  }

  const YAML::Node require(const YAML::Node& node, const char* key, const std::string& where) const {
    const YAML::Node child = node[key];
    if (!child) fail(node.Mark(), "missing key '" + std::string(key) + "' in " + where);
    return child;
  }

  double number(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node.Mark(), what + " must be a number");
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node.Mark(), what + " must be a number, got '" + node.Scalar() + "'");
    }
  }

  std::size_t count(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node.Mark(), what + " must be a non-negative integer");
    try {
      const long long v = node.as<long long>();
      if (v < 0) fail(node.Mark(), what + " must be a non-negative integer");
      return static_cast<std::size_t>(v);
    } catch (const YAML::Exception&) {
      fail(node.Mark(), what + " must be a non-negative integer, got '" + node.Scalar() + "'");
    }
  }

  std::string identifier(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node.Mark(), what + " must be a string");
    const std::string s = node.Scalar();
    const bool ok = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
    if (!ok) fail(node.Mark(), what + " may only use letters, digits, '_', '-' and '.'");
    return s;
  }

  std::vector<double> vector(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node.Mark(), what + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(number(item, what + " entry"));
    return out;
  }

  std::vector<std::vector<double>> matrix(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node.Mark(), what + " must be a list of rows");
    std::vector<std::vector<double>> out;
    for (const auto& row : node) out.push_back(vector(row, what + " row"));
    return out;
  }

  std::vector<std::size_t> states(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node.Mark(), what + " must be a list of 1-based state numbers");
    std::vector<std::size_t> out;
    for (const auto& item : node) {
      const std::size_t s = count(item, what + " entry");
      if (s == 0) fail(item.Mark(), what + " entries are 1-based");
      out.push_back(s);
    }
    return out;
  }

  std::vector<PoleSpec> poles(const YAML::Node& node) const {
    if (!node.IsSequence() || node.size() == 0) {
      fail(node.Mark(), "poles must be a non-empty list");
    }
    std::vector<PoleSpec> out;
    for (const auto& p : node) {
      check_keys(p, "pole", {"position", "width"});
      out.push_back({number(require(p, "position", "pole"), "position"),
                     number(require(p, "width", "pole"), "width")});
    }
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

Product parse_product(const Reader& r, const YAML::Node& node) {
  const std::string s = node.IsScalar() ? node.Scalar() : std::string();
  if (s == "cross_section") return Product::CrossSection;
  if (s == "coupling") return Product::Coupling;
  if (s == "phase") return Product::Phase;
  if (s == "trapping") return Product::Trapping;
  if (s == "crossing") return Product::Crossing;
  r.fail(node.Mark(), "unknown output '" + s +
                          "' (expected cross_section, coupling, phase, trapping or crossing)");
}

void check_states(const Reader& r, const YAML::Node& where, const CaseSpec& c) {
  for (std::size_t s : c.coupling_states) {
    if (s > c.poles.size()) {
      r.fail(where.Mark(), "coupling state " + std::to_string(s) + " exceeds the " +
                               std::to_string(c.poles.size()) + " poles of case '" + c.label + "'");
    }
  }
}

HamiltonianSpec parse_hamiltonian(const Reader& r, const YAML::Node& node) {
  r.check_keys(node, "hamiltonian",
               {"h0", "h0_slope", "couplings", "alpha", "alpha_slope", "sweep", "states"});
  HamiltonianSpec h;
  h.h0 = r.matrix(r.require(node, "h0", "hamiltonian"), "h0");
  const std::size_t n = h.h0.size();
  if (n < 2) r.fail(node["h0"].Mark(), "h0 needs at least 2 rows");
  for (const auto& row : h.h0) {
    if (row.size() != n) r.fail(node["h0"].Mark(), "h0 must be square");
  }
  if (node["h0_slope"]) {
    h.h0_slope = r.matrix(node["h0_slope"], "h0_slope");
    bool square = h.h0_slope.size() == n;
    for (const auto& row : h.h0_slope) square = square && row.size() == n;
    if (!square) r.fail(node["h0_slope"].Mark(), "h0_slope must match the shape of h0");
  }
  h.couplings = r.matrix(r.require(node, "couplings", "hamiltonian"), "couplings");
  if (h.couplings.empty()) r.fail(node["couplings"].Mark(), "couplings needs at least one vector");
  for (const auto& v : h.couplings) {
    if (v.size() != n) r.fail(node["couplings"].Mark(), "each coupling vector needs length " + std::to_string(n));
  }
  if (node["alpha"]) h.alpha = r.number(node["alpha"], "alpha");
  if (node["alpha_slope"]) h.alpha_slope = r.number(node["alpha_slope"], "alpha_slope");

  const YAML::Node sweep = r.require(node, "sweep", "hamiltonian");
  r.check_keys(sweep, "sweep", {"min", "max", "points", "spacing"});
  h.sweep.min = r.number(r.require(sweep, "min", "sweep"), "sweep min");
  h.sweep.max = r.number(r.require(sweep, "max", "sweep"), "sweep max");
  h.sweep.points = r.count(r.require(sweep, "points", "sweep"), "sweep points");
  if (sweep["spacing"]) {
    const std::string s = sweep["spacing"].IsScalar() ? sweep["spacing"].Scalar() : "";
    if (s == "log") {
      h.sweep.log_spacing = true;
    } else if (s != "linear") {
      r.fail(sweep["spacing"].Mark(), "spacing must be 'linear' or 'log'");
    }
  }
  if (h.sweep.log_spacing && !(h.sweep.min > 0.0)) {
    r.fail(sweep.Mark(), "log spacing needs sweep min > 0");
  }
  if (node["states"]) {
    h.states = r.states(node["states"], "states");
    if (h.states.size() != 2 || h.states[0] == h.states[1]) {
      r.fail(node["states"].Mark(), "states must name two different states");
    }
  }
  for (std::size_t s : h.states) {
    if (s > n) r.fail(node.Mark(), "state " + std::to_string(s) + " exceeds dimension " + std::to_string(n));
  }
  return h;
}

}  // namespace

const char* product_name(Product p) {
  switch (p) {
    case Product::CrossSection: return "cross_section";
    case Product::Coupling: return "coupling";
    case Product::Phase: return "phase";
    case Product::Trapping: return "trapping";
    case Product::Crossing: return "crossing";
  }
  return "?";
}

bool Scenario::wants(Product p) const {
  return std::find(outputs.begin(), outputs.end(), p) != outputs.end();
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    r.fail(e.mark, e.msg);
  }
  r.check_keys(root, "scenario",
               {"name", "grid", "background_phase", "outputs", "coupling_states", "poles", "cases",
                "hamiltonian"});

  Scenario s;
  s.name = r.identifier(r.require(root, "name", "scenario"), "name");

  const YAML::Node outputs = r.require(root, "outputs", "scenario");
  if (!outputs.IsSequence() || outputs.size() == 0) {
    r.fail(outputs.Mark(), "outputs must be a non-empty list");
  }
  for (const auto& o : outputs) {
    const Product p = parse_product(r, o);
    if (s.wants(p)) r.fail(o.Mark(), "output '" + std::string(product_name(p)) + "' listed twice");
    s.outputs.push_back(p);
  }

  if (root["background_phase"]) s.background_phase = r.number(root["background_phase"], "background_phase");
  if (root["grid"]) {
    const YAML::Node g = root["grid"];
    r.check_keys(g, "grid", {"min", "max", "points"});
    s.grid = GridSpec{r.number(r.require(g, "min", "grid"), "grid min"),
                      r.number(r.require(g, "max", "grid"), "grid max"),
                      r.count(r.require(g, "points", "grid"), "grid points")};
  }

  std::vector<std::size_t> default_states;
  if (root["coupling_states"]) default_states = r.states(root["coupling_states"], "coupling_states");

  if (root["poles"] && root["cases"]) {
    r.fail(root["cases"].Mark(), "give either 'poles' or 'cases', not both");
  }
  if (root["poles"]) {
    CaseSpec c;
    c.poles = r.poles(root["poles"]);
    c.coupling_states = default_states;
    check_states(r, root["poles"], c);
    s.cases.push_back(std::move(c));
  }
  if (root["cases"]) {
    const YAML::Node cases = root["cases"];
    if (!cases.IsSequence() || cases.size() == 0) r.fail(cases.Mark(), "cases must be a non-empty list");
    std::set<std::string> labels;
    for (const auto& node : cases) {
      r.check_keys(node, "case", {"label", "poles", "coupling_states"});
      CaseSpec c;
      c.label = r.identifier(r.require(node, "label", "case"), "label");
      if (!labels.insert(c.label).second) r.fail(node["label"].Mark(), "duplicate case label '" + c.label + "'");
      c.poles = r.poles(r.require(node, "poles", "case"));
      c.coupling_states = node["coupling_states"] ? r.states(node["coupling_states"], "coupling_states")
                                                  : default_states;
      check_states(r, node, c);
      s.cases.push_back(std::move(c));
    }
  }
  if (root["hamiltonian"]) s.hamiltonian = parse_hamiltonian(r, root["hamiltonian"]);

  const bool smatrix = s.wants(Product::CrossSection) || s.wants(Product::Coupling) ||
                       s.wants(Product::Phase);
  if (smatrix) {
    if (!s.grid) r.fail(root.Mark(), "outputs " + std::string("cross_section/coupling/phase need 'grid'"));
    if (s.cases.empty()) r.fail(root.Mark(), "cross_section/coupling/phase need 'poles' or 'cases'");
  } else if (!s.cases.empty()) {
    r.fail(root.Mark(), "poles are given but no cross_section, coupling or phase output is requested");
  }
  if (s.wants(Product::Coupling) || s.wants(Product::Phase)) {
    const bool any = std::any_of(s.cases.begin(), s.cases.end(),
                                 [](const CaseSpec& c) { return !c.coupling_states.empty(); });
    if (!any) r.fail(root.Mark(), "coupling/phase outputs need 'coupling_states'");
  }
  if (s.wants(Product::Crossing) && s.wants(Product::Trapping)) {
    r.fail(outputs.Mark(), "crossing and trapping use different sweep variables; split the scenario");
  }
  if (s.wants(Product::Crossing) || s.wants(Product::Trapping)) {
    if (!s.hamiltonian) r.fail(root.Mark(), "crossing/trapping outputs need 'hamiltonian'");
  } else if (s.hamiltonian) {
    r.fail(root["hamiltonian"].Mark(), "hamiltonian is given but no crossing or trapping output is requested");
  }
  if (s.wants(Product::Trapping)) {
    const YAML::Node h = root["hamiltonian"];
    for (const char* key : {"h0_slope", "alpha", "alpha_slope", "states"}) {
      if (h[key]) r.fail(h[key].Mark(), std::string("'") + key + "' is not used by trapping (the sweep runs over alpha)");
    }
    if (s.hamiltonian->sweep.min < 0.0) r.fail(h["sweep"].Mark(), "trapping sweeps alpha, which must be >= 0");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

}  // namespace respole::cli
