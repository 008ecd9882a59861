#include "figures.hpp"

#include <string>

#include "output.hpp"

namespace respole::cli {

namespace {

constexpr GridSpec kNarrowGrid{6.0, 10.0, 4001};
constexpr GridSpec kWideGrid{2.0, 12.0, 8001};

// Two states at 7.99 / 8.01 with the narrow one held at 0.05.
std::vector<CaseSpec> two_state_cases(std::vector<std::size_t> states) {
  std::vector<CaseSpec> cases;
  for (double g2 : {5.0, 1.0, 0.5, 0.1, 0.05, 0.025, 0.01}) {
    cases.push_back({"g2_" + format_number(g2), {{7.99, 0.05}, {8.01, g2}}, states});
  }
  return cases;
}

std::vector<CaseSpec> broad_background_cases(double g3) {
  return {{"single", {{8.0, g3}}, {}},
          {"full", {{4.0, 0.05}, {10.0, 0.05}, {8.0, g3}}, {1, 2, 3}}};
}

}  // namespace

Scenario figure_scenario(int id) {
  Scenario s;
  s.name = "fig" + std::to_string(id);
  switch (id) {
    case 1:
      s.grid = kNarrowGrid;
      s.outputs = {Product::CrossSection};
      s.cases = two_state_cases({});
      break;
    case 2:
    case 3:
      s.grid = kNarrowGrid;
      s.outputs = {Product::Coupling, Product::Phase};
      s.cases = two_state_cases({static_cast<std::size_t>(id - 1)});
      break;
    case 4:
      s.grid = kNarrowGrid;
      s.outputs = {Product::CrossSection, Product::Coupling, Product::Phase};
      for (double g3 : {0.05, 1.0, 5.0}) {
        s.cases.push_back({"g3_" + format_number(g3), {{7.99, 0.05}, {8.01, 0.05}, {8.0, g3}}, {3}});
      }
      break;
    case 5:
      s.grid = kNarrowGrid;
      s.outputs = {Product::CrossSection, Product::Coupling, Product::Phase};
      for (double d : {0.01, 0.1, 0.25}) {
        s.cases.push_back(
            {"d" + format_number(d), {{8.0 - d, 0.05}, {8.0 + d, 0.05}, {8.0, 0.05}}, {3}});
      }
      break;
    case 6:
    case 7:
      s.grid = kWideGrid;
      s.outputs = {Product::CrossSection, Product::Coupling, Product::Phase};
      s.cases = broad_background_cases(id == 6 ? 3.0 : 3e-5);
      break;
    default:
      throw PhysicsError("invalid figure id " + std::to_string(id) + " (expected " +
                         std::to_string(first_figure) + ".." + std::to_string(last_figure) + ")");
  }
  return s;
}

}  // namespace respole::cli
