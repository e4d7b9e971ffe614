#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "htn/model.hpp"

namespace htn {

struct ValidationReport {
  bool valid = true;
  /// Set whenever `valid` is false.
  std::optional<std::size_t> failing_step;
  std::string reason;
  /// Sorted atoms of the state reached; only filled in for a valid plan.
  std::vector<Atom> final_state;
};

/// Executes the plan from the problem's initial state and checks every
/// step's operator precondition where it runs. Shares no code with the
/// planner's state transition: operator parameters are bound positionally
/// from the step's arguments.
ValidationReport validate_plan(const Domain& domain, const Problem& problem,
                               const Plan& plan);

}  // namespace htn
