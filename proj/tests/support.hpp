#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "htn/parser.hpp"
#include "htn/planner.hpp"

namespace support {

inline std::string fixture(const std::string& relative) {
  return std::string(HTN_FIXTURE_DIR) + "/" + relative;
}

inline htn::Domain domain(const std::string& relative) {
  return htn::parse_domain(htn::read_file(fixture(relative)));
}

inline htn::Problem problem(const std::string& relative) {
  return htn::parse_problem(htn::read_file(fixture(relative)));
}

inline htn::Task task(const std::string& text) {
  htn::Plan p = htn::parse_plan(text);
  return p.steps.at(0);
}

inline htn::Atom atom(std::string predicate, std::vector<std::string> args) {
  htn::Atom a{std::move(predicate), {}};
  for (std::string& s : args) a.args.push_back(htn::Term::from_symbol(std::move(s)));
  return a;
}

inline std::vector<htn::Plan> sorted(std::vector<htn::Plan> plans) {
  std::sort(plans.begin(), plans.end());
  return plans;
}

inline std::vector<htn::Plan> distinct(std::vector<htn::Plan> plans) {
  plans = sorted(std::move(plans));
  plans.erase(std::unique(plans.begin(), plans.end()), plans.end());
  return plans;
}

inline std::vector<htn::Plan> all_plans(const htn::Domain& d,
                                        const htn::Problem& p,
                                        htn::PlannerOptions options,
                                        htn::SearchStats* stats = nullptr) {
  options.max_plans.reset();
  return htn::find_plans(d, p, options, stats);
}

}  // namespace support
