#include "cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "figures.hpp"
#include "runner.hpp"
#include "scenario.hpp"

namespace respole::cli {

namespace {

constexpr const char* kOutEnv = "RESPOLE_OUT_DIR";

std::string default_out_dir() {
  const char* env = std::getenv(kOutEnv);
  return env && *env ? env : ".";
}

void report(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << f.string() << '\n';
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Resonance pole and effective Hamiltonian calculations.\n"
               "Exit codes: 0 success, 1 physics/validation error, 2 I/O or config error."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "respole 0.1.0");

  std::string out_dir = default_out_dir();
  const std::string out_help = std::string("Output directory (default: $") + kOutEnv +
                               ", else the current directory)";
  bool svg = false;
  int figure_id = 0;
  std::string config;

  auto* figure = app.add_subcommand("figure", "Write the CSV curves of a built-in figure (1-7)");
  figure->add_option("id", figure_id, "Figure number")->required();
  figure->add_option("--out", out_dir, out_help);
  figure->add_flag("--svg", svg, "Also write SVG line plots next to the CSVs");

  auto* scan = app.add_subcommand("scan", "Run every output requested by a YAML scenario");
  scan->add_option("--config", config, "Scenario file (schema: docs/scenario.md)")->required();
  scan->add_option("--out", out_dir, out_help);
  scan->add_flag("--svg", svg, "Also write SVG line plots next to the CSVs");

  auto* crossing = app.add_subcommand("crossing", "Sweep a Hamiltonian family through a level crossing");
  crossing->add_option("--config", config, "Scenario file with a 'crossing' output")->required();
  crossing->add_option("--out", out_dir, out_help);
  crossing->add_flag("--svg", svg, "Also write SVG line plots next to the CSVs");

  auto* trapping = app.add_subcommand("trapping", "Scan the continuum coupling strength alpha");
  trapping->add_option("--config", config, "Scenario file with a 'trapping' output")->required();
  trapping->add_option("--out", out_dir, out_help);
  trapping->add_flag("--svg", svg, "Also write SVG line plots next to the CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const RunOptions options{out_dir, svg};
    if (figure->parsed()) {
      report(run_scenario(figure_scenario(figure_id), options));
    } else if (scan->parsed()) {
      report(run_scenario(load_scenario(config), options));
    } else {
      const Product product = crossing->parsed() ? Product::Crossing : Product::Trapping;
      const Scenario s = load_scenario(config);
      if (!s.wants(product)) {
        throw ConfigError(config + ": scenario does not request the '" +
                          std::string(product_name(product)) + "' output");
      }
      report(run_scenario(s, options, {product}));
    }
  } catch (const PhysicsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace respole::cli
