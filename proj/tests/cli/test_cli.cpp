#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "figures.hpp"
#include "output.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace respole::cli;

namespace {

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "respole");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("respole_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "scenario.yaml";
  std::ofstream(p) << text;
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string config_error(const std::string& text) {
  try {
    parse_scenario(text, "test.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected a ConfigError");
  return {};
}

const char* kMinimal = R"(name: one
grid: {min: 7.0, max: 9.0, points: 201}
outputs: [cross_section]
poles: [{position: 8.0, width: 0.5}]
)";

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 7.99, 1e-300, 6.02214076e23, -2.5}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(8.0) == "8");
  CHECK(format_number(-0.0) == "0");
}

TEST_CASE("figure 1 writes seven E,sigma curves over [6, 10]") {
  const auto dir = fresh_dir("fig1");
  REQUIRE(cli({"figure", "1", "--out", dir.string()}) == 0);
  const auto names = listing(dir);
  REQUIRE(names.size() == 7);
  for (const auto& n : names) {
    const auto path = dir / n;
    CHECK(first_line(path) == "E,sigma");
    const std::string text = slurp(path);
    CHECK(text.find("\n6,") != std::string::npos);
    CHECK(text.find("\n10,") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4002);
  }
}

TEST_CASE("figure 1 is deterministic") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  REQUIRE(cli({"figure", "1", "--out", a.string()}) == 0);
  REQUIRE(cli({"figure", "1", "--out", b.string()}) == 0);
  REQUIRE(listing(a) == listing(b));
  for (const auto& n : listing(a)) CHECK(slurp(a / n) == slurp(b / n));
}

TEST_CASE("figure 3 couplings carry the documented header per case") {
  const auto dir = fresh_dir("fig3");
  REQUIRE(cli({"figure", "3", "--out", dir.string()}) == 0);
  int couplings = 0;
  for (const auto& n : listing(dir)) {
    if (n.size() > 7 && n.substr(n.size() - 7) == "_W2.csv") {
      ++couplings;
      CHECK(first_line(dir / n) == "E,re_W,im_W,abs_W,phase_W");
    }
  }
  CHECK(couplings == 7);
}

TEST_CASE("every figure runs and svg is optional") {
  for (int id = first_figure; id <= last_figure; ++id) {
    const auto dir = fresh_dir("fig_all");
    CHECK(cli({"figure", std::to_string(id), "--out", dir.string(), "--svg"}) == 0);
    bool has_svg = false;
    for (const auto& n : listing(dir)) has_svg = has_svg || n.ends_with(".svg");
    CHECK(has_svg);
  }
}

TEST_CASE("invalid figure id exits 1") {
  const auto dir = fresh_dir("fig8");
  CHECK(cli({"figure", "8", "--out", dir.string()}) == 1);
  CHECK(cli({"figure", "0", "--out", dir.string()}) == 1);
  CHECK(listing(dir).empty());
}

TEST_CASE("minimal config gives a sigma peak of 4 at the pole") {
  const auto dir = fresh_dir("minimal");
  const auto cfg = write_config(dir, kMinimal);
  const auto out = dir / "out";
  REQUIRE(cli({"scan", "--config", cfg.string(), "--out", out.string()}) == 0);
  REQUIRE(listing(out) == std::vector<std::string>{"one_sigma.csv"});
  std::ifstream in(out / "one_sigma.csv");
  std::string line;
  std::getline(in, line);
  double best_e = 0.0, best = -1.0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double e = std::stod(line.substr(0, comma));
    const double s = std::stod(line.substr(comma + 1));
    if (s > best) {
      best = s;
      best_e = e;
    }
  }
  CHECK(best_e == 8.0);
  CHECK(best == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("shipped fig1 config matches the built-in figure byte for byte") {
  const auto a = fresh_dir("cfg_fig1");
  const auto b = fresh_dir("builtin_fig1");
  REQUIRE(cli({"scan", "--config", RESPOLE_SOURCE_DIR "/configs/fig1.yaml", "--out", a.string()}) == 0);
  REQUIRE(cli({"figure", "1", "--out", b.string()}) == 0);
  REQUIRE(listing(a) == listing(b));
  for (const auto& n : listing(a)) CHECK(slurp(a / n) == slurp(b / n));
}

TEST_CASE("unknown key is rejected by name with exit code 2") {
  const std::string text = R"(name: typo
grid: {min: 7.0, max: 9.0, points: 11}
outputs: [cross_section]
poles:
  - {position: 8.0, widht: 0.5}
)";
  const std::string message = config_error(text);
  CHECK(message.find("widht") != std::string::npos);
  CHECK(message.find("test.yaml:5:") != std::string::npos);

  const auto dir = fresh_dir("typo");
  const auto cfg = write_config(dir, text);
  CHECK(cli({"scan", "--config", cfg.string(), "--out", (dir / "out").string()}) == 2);
  CHECK(!fs::exists(dir / "out"));
}

TEST_CASE("schema violations") {
  CHECK(config_error("name: x\noutputs: [cross_section]\npoles: [{position: 1, width: 1}]\n")
            .find("grid") != std::string::npos);
  CHECK(config_error("name: x\noutputs: [spectrum]\n").find("spectrum") != std::string::npos);
  CHECK(config_error("name: x\ngrid: {min: 0, max: 1, points: 3}\noutputs: [coupling]\n"
                     "poles: [{position: 1, width: 1}]\n")
            .find("coupling_states") != std::string::npos);
  CHECK(config_error("name: x\ngrid: {min: 0, max: 1, points: 3}\noutputs: [coupling]\n"
                     "coupling_states: [2]\npoles: [{position: 1, width: 1}]\n")
            .find("exceeds") != std::string::npos);
  CHECK(config_error("name: x\noutputs: [crossing]\n").find("hamiltonian") != std::string::npos);
  CHECK(config_error("name: x\ngrid: {min: 0, max: 1, points: abc}\noutputs: [cross_section]\n"
                     "poles: [{position: 1, width: 1}]\n")
            .find("abc") != std::string::npos);
  CHECK(config_error("name: x\noutputs: [trapping]\nhamiltonian:\n  h0: [[0, 1], [1, 0]]\n"
                     "  couplings: [[1, 0]]\n  alpha: 1\n  sweep: {min: 0, max: 1, points: 3}\n")
            .find("alpha") != std::string::npos);
  CHECK(config_error("name: [unclosed\n").find("test.yaml:") == 0);
  CHECK(config_error("name: a/b\noutputs: [cross_section]\n").find("name") != std::string::npos);
}

TEST_CASE("physics errors exit 1") {
  const auto dir = fresh_dir("physics");
  const auto cfg = write_config(dir, R"(name: bad
grid: {min: 7.0, max: 9.0, points: 11}
outputs: [cross_section]
poles: [{position: 8.0, width: -0.5}]
)");
  CHECK(cli({"scan", "--config", cfg.string(), "--out", (dir / "out").string()}) == 1);
}

TEST_CASE("missing config and bad usage exit 2") {
  CHECK(cli({"scan", "--config", "/nonexistent/scenario.yaml"}) == 2);
  CHECK(cli({}) == 2);
  CHECK(cli({"figure"}) == 2);
}

TEST_CASE("crossing command writes the pair table and the coalescence") {
  const auto dir = fresh_dir("crossing");
  REQUIRE(cli({"crossing", "--config", RESPOLE_SOURCE_DIR "/configs/ep_crossing.yaml", "--out",
               dir.string()}) == 0);
  CHECK(first_line(dir / "ep_crossing.csv") == "a,k,re_E,gamma,beta_abs,theta");
  CHECK(first_line(dir / "ep_critical.csv") == "a,kind,distance");
  const std::string critical = slurp(dir / "ep_critical.csv");
  CHECK(critical.find(",coalescence,") != std::string::npos);
  const std::string table = slurp(dir / "ep_crossing.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 2 * 2001);

  CHECK(cli({"trapping", "--config", RESPOLE_SOURCE_DIR "/configs/ep_crossing.yaml", "--out",
             dir.string()}) == 2);
}

TEST_CASE("trapping command writes states and trapped fraction") {
  const auto dir = fresh_dir("trapping");
  REQUIRE(cli({"trapping", "--config", RESPOLE_SOURCE_DIR "/configs/trapping.yaml", "--out",
               dir.string()}) == 0);
  CHECK(first_line(dir / "trap4_trapping.csv") == "alpha,k,re_E,gamma,A");
  CHECK(first_line(dir / "trap4_trapped.csv") == "alpha,trapped_fraction");
  std::ifstream in(dir / "trap4_trapped.csv");
  std::string line, last;
  while (std::getline(in, line)) last = line;
  CHECK(std::stod(last.substr(last.find(',') + 1)) < 1e-2);
}

TEST_CASE("output directory falls back to the environment variable") {
  const auto dir = fresh_dir("env");
  ::setenv("RESPOLE_OUT_DIR", dir.string().c_str(), 1);
  const int code = cli({"figure", "1"});
  ::unsetenv("RESPOLE_OUT_DIR");
  CHECK(code == 0);
  CHECK(listing(dir).size() == 7);
}

TEST_CASE("unwritable output path exits 2") {
  const auto dir = fresh_dir("unwritable");
  std::ofstream(dir / "file") << "x";
  CHECK(cli({"figure", "1", "--out", (dir / "file" / "sub").string()}) == 2);
}
