#include <doctest.h>

#include <cmath>
#include <limits>

#include "core.hpp"
#include "helpers.hpp"

using namespace respole;
using testing::kind_of;

TEST_CASE("grid endpoints only") {
  const auto g = make_grid(0.0, 1.0, 2);
  CHECK(g.samples() == std::vector<double>{0.0, 1.0});
}

TEST_CASE("grid uniform spacing") {
  CHECK(make_grid(6.0, 10.0, 5).samples() == std::vector<double>{6, 7, 8, 9, 10});
}

TEST_CASE("grid midpoint is exact") {
  const auto g = make_grid(7.5, 8.5, 2001);
  CHECK(g.size() == 2001);
  CHECK(g.spacing() == doctest::Approx(0.0005).epsilon(1e-14));
  CHECK(g[1000] == 8.0);
  CHECK(g[0] == 7.5);
  CHECK(g[2000] == 8.5);
}

TEST_CASE("grid rejects bad ranges") {
  CHECK(kind_of([] { make_grid(1.0, 1.0, 5); }) == ErrorKind::InvalidRange);
  CHECK(kind_of([] { make_grid(2.0, 1.0, 5); }) == ErrorKind::InvalidRange);
  CHECK(kind_of([] { make_grid(0.0, 1.0, 1); }) == ErrorKind::InvalidRange);
  CHECK(kind_of([] { make_grid(0.0, std::numeric_limits<double>::infinity(), 3); }) ==
        ErrorKind::InvalidRange);
}

TEST_CASE("grid samples strictly increase, last equals max") {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    const double lo = gen.uniform(-100, 100);
    const double hi = lo + gen.log_uniform(1e-6, 1e3);
    const std::size_t n = gen.index(2, 5000);
    const auto s = make_grid(lo, hi, n).samples();
    REQUIRE(s.size() == n);
    CHECK(s.front() == lo);
    CHECK(s.back() == hi);
    for (std::size_t i = 1; i < n; ++i) REQUIRE(s[i] > s[i - 1]);
  }
}

TEST_CASE("resonance validation") {
  CHECK(kind_of([] { Resonance(8.0, 0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { Resonance(8.0, -1e-300); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { Resonance(std::nan(""), 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { Resonance(1.0, std::numeric_limits<double>::infinity()); }) ==
        ErrorKind::InvalidArgument);
  const Resonance r(7.99, 0.05);
  CHECK(r.pole_offset(8.0).imag() == 0.025);
}

TEST_CASE("pole set") {
  CHECK(kind_of([] { PoleSet({}); }) == ErrorKind::InvalidArgument);
  const PoleSet twice({{8.0, 0.05}, {8.0, 0.05}});
  CHECK(twice.size() == 2);
  CHECK(twice[0] == twice[1]);
  CHECK(kind_of([&] { twice.at(2); }) == ErrorKind::InvalidArgument);
}
