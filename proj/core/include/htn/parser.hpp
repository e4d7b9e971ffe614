#pragma once

// Reader and printer for the s-expression domain/problem language:
//
//   (defdomain <name> (<item>*))
//     item := (:operator (!op ?p*) <precondition> <delete-list> <add-list>)
//           | (:method (task <term>*) (<precondition> <tasklist>)+)
//   (defproblem <name> <domain-name> (<ground-atom>*) <tasklist>)
//
// '?' prefixes variables, '!' prefixes primitive task symbols, ';' starts a
// comment. A precondition is a conjunction of atoms and (not <atom>); a
// tasklist is a task, a list of tasklists, or (:unordered <tasklist>+).

#include <string>
#include <string_view>

#include "htn/model.hpp"
#include "htn/sexpr.hpp"

namespace htn {

/// Throws ParseError.
Domain parse_domain(std::string_view source);
/// Throws ParseError.
Problem parse_problem(std::string_view source);
/// One ground step per expression; the '!' marker is optional. Throws
/// ParseError.
Plan parse_plan(std::string_view source);

std::string print_term(const Term& term);
std::string print_atom(const Atom& atom);
std::string print_task(const Task& task);
std::string print_network(const TaskNetwork& network);
std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);
/// One step per line.
std::string print_plan(const Plan& plan);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace htn
