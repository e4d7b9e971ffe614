#pragma once

// Exhaustive decomposition enumerator used as a reference in tests. Shares
// only the data types with the planner; matching, state update and frontier
// handling are written from scratch here.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "htn/model.hpp"

namespace oracle {

struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Result {
  std::vector<htn::Plan> plans;  // one per successful decomposition path
  std::size_t nodes = 0;
};

// Every plan reachable through decompositions whose expansions all happen
// at depth < max_depth. Tasks must stay ground throughout.
Result enumerate(const htn::Domain& domain, const htn::Problem& problem,
                 std::size_t max_depth);

// Steps that repeat an earlier identical step whose add effects already hold
// and that leave the state as it was.
std::vector<std::size_t> redundant_steps(const htn::Domain& domain,
                                         const htn::Problem& problem,
                                         const htn::Plan& plan);

htn::Plan without_steps(const htn::Plan& plan,
                        const std::vector<std::size_t>& drop);

}  // namespace oracle
