#pragma once

#include <filesystem>
#include <vector>

#include "scenario.hpp"

namespace respole::cli {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool svg = false;
};

/// Runs the requested products of `scenario` (all of them when `only` is
/// empty) and returns the files written, in order.
std::vector<std::filesystem::path> run_scenario(const Scenario& scenario, const RunOptions& options,
                                                const std::vector<Product>& only = {});

}  // namespace respole::cli
