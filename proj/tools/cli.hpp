#pragma once

#include <iosfwd>

namespace htn {

/// Entry point of the `htn` command line tool.
///
/// Exit codes: 0 when a plan was found, the plan is valid or the suite
/// completed; 1 when no plan was found or the plan is invalid; 2 on usage,
/// parse or domain errors (with a diagnostic on `err`).
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace htn
