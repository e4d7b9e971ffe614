#include "oracle.hpp"

#include <map>
#include <set>
#include <string>

namespace oracle {

namespace {

using Fact = std::vector<std::string>;  // predicate, then arguments
using Facts = std::set<Fact>;
using Env = std::map<std::string, std::string>;

struct Ground {
  std::string symbol;
  std::vector<std::string> args;
  bool primitive = false;
};

struct Net;

struct Item {
  bool group = false;
  Ground task;
  std::vector<Net> members;
};

struct Net {
  std::vector<Item> items;
};

bool is_var(const std::string& s) { return !s.empty() && s[0] == '?'; }

std::string value(const htn::Term& t, const Env& env) {
  if (!t.is_variable()) return t.name();
  auto it = env.find(t.name());
  return it == env.end() ? t.name() : it->second;
}

Fact fact(const htn::Atom& a, const Env& env) {
  Fact f{a.predicate};
  for (const htn::Term& t : a.args) f.push_back(value(t, env));
  return f;
}

bool ground(const Fact& f) {
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (is_var(f[i])) return false;
  }
  return true;
}

// Binds pattern arguments against concrete ones.
bool bind(const std::vector<htn::Term>& pattern,
          const std::vector<std::string>& concrete, Env& env) {
  if (pattern.size() != concrete.size()) return false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const htn::Term& p = pattern[i];
    if (!p.is_variable()) {
      if (p.name() != concrete[i]) return false;
      continue;
    }
    auto [it, fresh] = env.emplace(p.name(), concrete[i]);
    if (!fresh && it->second != concrete[i]) return false;
  }
  return true;
}

void solve(const std::vector<htn::Literal>& pos, std::size_t i,
           const std::vector<htn::Literal>& neg, const Facts& facts, Env env,
           std::set<Env>& out) {
  if (i == pos.size()) {
    for (const htn::Literal& l : neg) {
      Fact f = fact(l.atom, env);
      if (!ground(f)) throw Unsupported("negation left unbound");
      if (facts.contains(f)) return;
    }
    out.insert(std::move(env));
    return;
  }
  const htn::Atom& a = pos[i].atom;
  for (auto it = facts.lower_bound(Fact{a.predicate});
       it != facts.end() && (*it)[0] == a.predicate; ++it) {
    Env e = env;
    if (bind(a.args, std::vector<std::string>(it->begin() + 1, it->end()), e)) {
      solve(pos, i + 1, neg, facts, std::move(e), out);
    }
  }
}

std::set<Env> solutions(const std::vector<htn::Literal>& pre,
                        const Facts& facts, const Env& env) {
  std::vector<htn::Literal> pos;
  std::vector<htn::Literal> neg;
  for (const htn::Literal& l : pre) (l.negated ? neg : pos).push_back(l);
  std::set<Env> out;
  solve(pos, 0, neg, facts, env, out);
  return out;
}

Ground ground_task(const htn::Task& t, const Env& env) {
  Ground g{t.symbol, {}, t.primitive};
  for (const htn::Term& a : t.args) {
    g.args.push_back(value(a, env));
    if (is_var(g.args.back())) throw Unsupported("subtask left unbound");
  }
  return g;
}

Net convert(const htn::TaskNetwork& n, const Env& env) {
  Net out;
  for (const htn::TaskNode& node : n.nodes) {
    Item item;
    if (node.is_task()) {
      item.task = ground_task(node.task(), env);
    } else {
      item.group = true;
      for (const htn::TaskNetwork& m : node.group().members) {
        item.members.push_back(convert(m, env));
      }
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

void clean(Net& n) {
  std::vector<Item> kept;
  for (Item& item : n.items) {
    if (item.group) {
      std::vector<Net> members;
      for (Net& m : item.members) {
        clean(m);
        if (!m.items.empty()) members.push_back(std::move(m));
      }
      if (members.empty()) continue;
      item.members = std::move(members);
    }
    kept.push_back(std::move(item));
  }
  n.items = std::move(kept);
}

void heads(const Net& n, std::vector<std::size_t>& path,
           std::vector<std::pair<std::vector<std::size_t>, Ground>>& out) {
  if (n.items.empty()) return;
  const Item& first = n.items.front();
  if (!first.group) {
    out.emplace_back(path, first.task);
    return;
  }
  for (std::size_t i = 0; i < first.members.size(); ++i) {
    path.push_back(i);
    heads(first.members[i], path, out);
    path.pop_back();
  }
}

Net replace(const Net& n, const std::vector<std::size_t>& path,
            std::size_t at, const Net& with) {
  Net out;
  if (at == path.size()) {
    out.items = with.items;
  } else {
    Item group = n.items.front();
    group.members[path[at]] = replace(group.members[path[at]], path, at + 1, with);
    out.items.push_back(std::move(group));
  }
  out.items.insert(out.items.end(), n.items.begin() + 1, n.items.end());
  return out;
}

struct Search {
  const htn::Domain& domain;
  std::size_t max_depth;
  Result result;

  void run(const Facts& facts, const Net& frontier,
           std::vector<Ground>& plan, std::size_t depth) {
    ++result.nodes;
    if (frontier.items.empty()) {
      htn::Plan p;
      for (const Ground& g : plan) {
        htn::Task t{g.symbol, {}, true};
        for (const std::string& a : g.args) t.args.push_back(htn::Term::constant(a));
        p.steps.push_back(std::move(t));
      }
      result.plans.push_back(std::move(p));
      return;
    }
    if (depth >= max_depth) return;
    std::vector<std::size_t> path;
    std::vector<std::pair<std::vector<std::size_t>, Ground>> choices;
    heads(frontier, path, choices);
    for (const auto& [where, task] : choices) {
      if (task.primitive) {
        primitive(facts, frontier, where, task, plan, depth);
      } else {
        compound(facts, frontier, where, task, plan, depth);
      }
    }
  }

  void primitive(const Facts& facts, const Net& frontier,
                 const std::vector<std::size_t>& where, const Ground& task,
                 std::vector<Ground>& plan, std::size_t depth) {
    auto it = domain.operators.find(task.symbol);
    if (it == domain.operators.end()) throw Unsupported("unknown operator");
    const htn::Operator& op = it->second;
    Env env;
    if (!bind(op.params, task.args, env)) return;
    for (const Env& e : solutions(op.preconditions, facts, env)) {
      Facts next = facts;
      bool ok = true;
      for (const htn::Atom& a : op.delete_effects) {
        Fact f = fact(a, e);
        ok = ok && ground(f);
        next.erase(f);
      }
      for (const htn::Atom& a : op.add_effects) {
        Fact f = fact(a, e);
        ok = ok && ground(f);
        next.insert(f);
      }
      if (!ok) continue;
      Net rest = replace(frontier, where, 0, Net{});
      clean(rest);
      plan.push_back(task);
      run(next, rest, plan, depth + 1);
      plan.pop_back();
    }
  }

  void compound(const Facts& facts, const Net& frontier,
                const std::vector<std::size_t>& where, const Ground& task,
                std::vector<Ground>& plan, std::size_t depth) {
    auto it = domain.methods.find(task.symbol);
    if (it == domain.methods.end()) throw Unsupported("unknown method");
    for (const htn::Method& m : it->second) {
      Env env;
      if (!bind(m.head.args, task.args, env)) continue;
      for (const htn::Branch& b : m.branches) {
        std::set<Env> found = solutions(b.preconditions, facts, env);
        if (found.empty()) continue;
        for (const Env& e : found) {
          Net rest = replace(frontier, where, 0, convert(b.subtasks, e));
          clean(rest);
          run(facts, rest, plan, depth + 1);
        }
        break;
      }
    }
  }
};

Facts initial(const htn::Problem& problem) {
  Facts facts;
  for (const htn::Atom& a : problem.initial_state) facts.insert(fact(a, {}));
  return facts;
}

}  // namespace

Result enumerate(const htn::Domain& domain, const htn::Problem& problem,
                 std::size_t max_depth) {
  Search s{domain, max_depth, {}};
  Net root = convert(problem.initial_network, {});
  clean(root);
  std::vector<Ground> plan;
  s.run(initial(problem), root, plan, 0);
  return std::move(s.result);
}

std::vector<std::size_t> redundant_steps(const htn::Domain& domain,
                                         const htn::Problem& problem,
                                         const htn::Plan& plan) {
  Facts facts = initial(problem);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const htn::Task& step = plan.steps[i];
    const htn::Operator& op = domain.operators.at(step.symbol);
    std::vector<std::string> args;
    for (const htn::Term& t : step.args) args.push_back(t.name());
    Env env;
    if (!bind(op.params, args, env)) throw Unsupported("step does not fit");
    Facts next = facts;
    bool adds_hold = true;
    for (const htn::Atom& a : op.delete_effects) next.erase(fact(a, env));
    for (const htn::Atom& a : op.add_effects) {
      Fact f = fact(a, env);
      adds_hold = adds_hold && facts.contains(f);
      next.insert(f);
    }
    bool repeated = false;
    for (std::size_t j = 0; j < i; ++j) repeated = repeated || plan.steps[j] == step;
    if (repeated && adds_hold && next == facts) out.push_back(i);
    facts = std::move(next);
  }
  return out;
}

htn::Plan without_steps(const htn::Plan& plan,
                        const std::vector<std::size_t>& drop) {
  htn::Plan out;
  std::set<std::size_t> skip(drop.begin(), drop.end());
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (!skip.contains(i)) out.steps.push_back(plan.steps[i]);
  }
  return out;
}

}  // namespace oracle
