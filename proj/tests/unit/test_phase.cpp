#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "smatrix.hpp"

using namespace respole;
using testing::kind_of;

TEST_CASE("constant coupling has flat phase") {
  const PoleSet one({{8.0, 0.05}});
  const auto p = phase_profile(coupling_profile(one, 0, make_grid(6, 10, 401)));
  CHECK(p.unwrapped_phase.size() == 401);
  for (double v : p.unwrapped_phase) CHECK(v == 0.0);
  CHECK(p.jumps.empty());
}

TEST_CASE("too few samples") {
  CouplingProfile c;
  c.width = 1.0;
  c.samples.push_back({1.0, {1.0, 0.0}});
  CHECK(kind_of([&] { phase_profile(c); }) == ErrorKind::EmptyProfile);
}

TEST_CASE("equal widths: a pi jump across the midpoint") {
  const PoleSet pair({{7.99, 0.05}, {8.01, 0.05}});
  SUBCASE("zero on a grid sample") {
    const auto p = phase_profile(coupling_profile(pair, 0, make_grid(6, 10, 400001)));
    REQUIRE(p.jumps.size() == 1);
    CHECK(p.jumps[0].energy == 8.0);
    CHECK(std::abs(std::abs(p.jumps[0].magnitude) - std::numbers::pi) < 1e-3);
  }
  SUBCASE("figure grid still sees the jump") {
    const auto p = phase_profile(coupling_profile(pair, 1, make_grid(6, 10, 4001)));
    REQUIRE(p.jumps.size() == 1);
    CHECK(std::abs(p.jumps[0].energy - 8.0) < 1e-3);
    CHECK(std::abs(std::abs(p.jumps[0].magnitude) - std::numbers::pi) < 0.1);
  }
  SUBCASE("zero between two samples") {
    const auto p = phase_profile(coupling_profile(pair, 0, make_grid(6, 10, 4000)));
    REQUIRE(p.jumps.size() == 1);
    CHECK(std::abs(p.jumps[0].energy - 8.0) < 1e-3);
  }
}

TEST_CASE("narrow state winds by 2 pi") {
  const PoleSet pair({{7.99, 0.05}, {8.01, 0.01}});
  const auto p = phase_profile(coupling_profile(pair, 1, make_grid(8.0 - 100, 8.0 + 100, 200001)));
  const double winding = p.unwrapped_phase.back() - p.unwrapped_phase.front();
  CHECK(std::abs(std::abs(winding) - 2.0 * std::numbers::pi) < 1e-3);
  // The broad partner does not wind.
  const auto q = phase_profile(coupling_profile(pair, 0, make_grid(8.0 - 100, 8.0 + 100, 200001)));
  CHECK(std::abs(q.unwrapped_phase.back() - q.unwrapped_phase.front()) < 1e-2);
}

TEST_CASE("unwrapped steps stay below pi outside jumps") {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto poles = testing::to_poleset(gen.poles(gen.index(2, 4), 7.5, 8.5, 1e-2, 1));
    const auto grid = make_grid(6, 10, 4001);
    for (std::size_t n = 0; n < poles.size(); ++n) {
      const auto p = phase_profile(coupling_profile(poles, n, grid));
      for (std::size_t i = 1; i < grid.size(); ++i) {
        const double step = std::abs(p.unwrapped_phase[i] - p.unwrapped_phase[i - 1]);
        REQUIRE(step <= std::numbers::pi + 1e-12);
      }
    }
  }
}

TEST_CASE("Fano profile is constant") {
  const Resonance k(7.99, 0.05), l(8.01, 0.05);
  const auto f = fano_profile(k, l, make_grid(6, 10, 11));
  for (const auto& s : f.samples) CHECK(s.value == coupling_w_fano(k, l));
}
