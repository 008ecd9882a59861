#pragma once

#include <vector>

#include <doctest.h>

#include "core.hpp"
#include "error.hpp"
#include "oracles.hpp"

namespace testing {

inline respole::PoleSet to_poleset(const std::vector<oracle::Pole>& poles) {
  std::vector<respole::Resonance> rs;
  for (const auto& p : poles) rs.emplace_back(p.e, p.g);
  return respole::PoleSet(rs);
}

template <class F>
respole::ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const respole::Error& e) {
    return e.kind();
  }
  FAIL("expected a respole::Error");
  return respole::ErrorKind::InvalidArgument;
}

}  // namespace testing
