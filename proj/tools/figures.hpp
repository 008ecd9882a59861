#pragma once

#include "scenario.hpp"

namespace respole::cli {

constexpr int first_figure = 1;
constexpr int last_figure = 7;

/// Built-in scenario reproducing figure `id`. Throws PhysicsError for ids
/// outside [first_figure, last_figure].
Scenario figure_scenario(int id);

}  // namespace respole::cli
