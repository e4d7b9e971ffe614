#include "htn/validate.hpp"

#include <map>
#include <set>

#include "htn/parser.hpp"

namespace htn {

namespace {

ValidationReport failure(std::size_t step, std::string reason) {
  ValidationReport r;
  r.valid = false;
  r.failing_step = step;
  r.reason = std::move(reason);
  return r;
}

}  // namespace

ValidationReport validate_plan(const Domain& domain, const Problem& problem,
                               const Plan& plan) {
  std::set<Atom> state(problem.initial_state.begin(),
                       problem.initial_state.end());

  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const Task& step = plan.steps[i];
    auto op_it = domain.operators.find(step.symbol);
    if (op_it == domain.operators.end()) {
      return failure(i, "unknown operator: " + step.symbol);
    }
    const Operator& op = op_it->second;
    if (op.params.size() != step.args.size()) {
      return failure(i, "wrong number of arguments for !" + op.name);
    }

    std::map<std::string, std::string> value;
    for (std::size_t k = 0; k < op.params.size(); ++k) {
      if (step.args[k].is_variable()) {
        return failure(i, "step is not ground: " + print_task(step));
      }
      auto [it, fresh] =
          value.emplace(op.params[k].name(), step.args[k].name());
      if (!fresh && it->second != step.args[k].name()) {
        return failure(i, "inconsistent parameter " + op.params[k].name());
      }
    }
    auto instantiate = [&](const Atom& a) -> std::optional<Atom> {
      Atom out{a.predicate, {}};
      for (const Term& t : a.args) {
        if (!t.is_variable()) {
          out.args.push_back(t);
          continue;
        }
        auto it = value.find(t.name());
        if (it == value.end()) return std::nullopt;
        out.args.push_back(Term::constant(it->second));
      }
      return out;
    };

    for (const Literal& l : op.preconditions) {
      std::optional<Atom> a = instantiate(l.atom);
      if (!a) return failure(i, "precondition of !" + op.name + " is not ground");
      bool present = state.contains(*a);
      if (present == l.negated) {
        return failure(i, std::string("precondition ") +
                              (l.negated ? "(not " : "") + print_atom(*a) +
                              (l.negated ? ")" : "") + " fails for " +
                              print_task(step));
      }
    }
    std::vector<Atom> dels;
    std::vector<Atom> adds;
    for (const Atom& a : op.delete_effects) {
      std::optional<Atom> g = instantiate(a);
      if (!g) return failure(i, "effect of !" + op.name + " is not ground");
      dels.push_back(std::move(*g));
    }
    for (const Atom& a : op.add_effects) {
      std::optional<Atom> g = instantiate(a);
      if (!g) return failure(i, "effect of !" + op.name + " is not ground");
      adds.push_back(std::move(*g));
    }
    for (const Atom& a : dels) state.erase(a);
    for (const Atom& a : adds) state.insert(a);
  }

  ValidationReport ok;
  ok.final_state.assign(state.begin(), state.end());
  return ok;
}

}  // namespace htn
