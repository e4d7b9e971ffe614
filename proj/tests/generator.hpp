#pragma once

// Random mini-domains: at most 4 operators, 3 methods and 8 objects.

#include <cstdint>

#include "htn/model.hpp"

namespace gen {

struct MiniCase {
  htn::Domain domain;
  htn::Problem problem;
};

MiniCase mini_case(std::uint64_t seed);

}  // namespace gen
