#include "generator.hpp"

#include <random>
#include <set>
#include <string>

namespace gen {

namespace {

using htn::Atom;
using htn::Literal;
using htn::Task;
using htn::TaskNetwork;
using htn::TaskNode;
using htn::Term;

struct Rng {
  std::mt19937_64 engine;
  int between(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(engine); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(between(0, static_cast<int>(v.size()) - 1))];
  }
};

struct Signature {
  std::string name;
  int arity = 1;
};

Atom atom_over(Rng& rng, const std::vector<Signature>& preds,
               const std::vector<Term>& pool) {
  const Signature& p = rng.pick(preds);
  Atom a{p.name, {}};
  for (int i = 0; i < p.arity; ++i) a.args.push_back(rng.pick(pool));
  return a;
}

std::vector<Term> vars(int n, const char* stem) {
  std::vector<Term> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(Term::variable(std::string("?") + stem + std::to_string(i)));
  }
  return out;
}

}  // namespace

MiniCase mini_case(std::uint64_t seed) {
  Rng rng{std::mt19937_64(seed)};
  MiniCase c;
  c.domain.name = "mini";

  std::vector<Signature> preds;
  for (int i = 0, n = rng.between(1, 3); i < n; ++i) {
    preds.push_back({"p" + std::to_string(i), rng.between(1, 2)});
  }

  std::vector<Signature> ops;
  for (int i = 0, n = rng.between(1, 4); i < n; ++i) {
    Signature s{"op" + std::to_string(i), rng.between(0, 2)};
    htn::Operator op;
    op.name = s.name;
    op.params = vars(s.arity, "a");
    std::vector<Term> pool = op.params;
    if (pool.empty()) pool.push_back(Term::constant("o0"));
    for (int k = 0, m = rng.between(0, 2); k < m; ++k) {
      op.preconditions.push_back(
          Literal{atom_over(rng, preds, pool), rng.chance(0.4)});
    }
    std::set<Atom> dels;
    std::set<Atom> adds;
    for (int k = 0, m = rng.between(0, 2); k < m; ++k) {
      dels.insert(atom_over(rng, preds, pool));
    }
    for (int k = 0, m = rng.between(0, 2); k < m; ++k) {
      adds.insert(atom_over(rng, preds, pool));
    }
    op.delete_effects.assign(dels.begin(), dels.end());
    op.add_effects.assign(adds.begin(), adds.end());
    c.domain.operators.emplace(op.name, std::move(op));
    ops.push_back(s);
  }

  std::vector<Signature> compounds;
  const int method_count = rng.between(1, 3);
  const int symbol_count = rng.between(1, method_count);
  for (int i = 0; i < symbol_count; ++i) {
    compounds.push_back({"m" + std::to_string(i), rng.between(1, 2)});
  }

  // Compound subtasks only name later symbols, so decomposition terminates.
  std::size_t above = 0;
  auto task_over = [&](const std::vector<Term>& pool, bool compound) {
    compound = compound && above < compounds.size();
    const Signature& s =
        compound ? compounds[above + static_cast<std::size_t>(rng.between(
                                         0, static_cast<int>(compounds.size() - above) - 1))]
                 : rng.pick(ops);
    Task t{s.name, {}, !compound};
    for (int i = 0; i < s.arity; ++i) t.args.push_back(rng.pick(pool));
    return t;
  };
  auto sequence = [&](const std::vector<Term>& pool, int lo, int hi) {
    TaskNetwork n;
    for (int i = 0, m = rng.between(lo, hi); i < m; ++i) {
      n.nodes.push_back(TaskNode{task_over(pool, rng.chance(0.3))});
    }
    return n;
  };
  auto network = [&](const std::vector<Term>& pool, int hi) {
    if (hi >= 2 && rng.chance(0.3)) {
      htn::Unordered group;
      group.members.push_back(sequence(pool, 1, 1));
      group.members.push_back(sequence(pool, 1, hi - 1));
      TaskNetwork n;
      n.nodes.push_back(TaskNode{std::move(group)});
      if (rng.chance(0.3)) n.nodes.push_back(TaskNode{task_over(pool, false)});
      return n;
    }
    return sequence(pool, 0, hi);
  };

  for (int i = 0; i < method_count; ++i) {
    const std::size_t index = static_cast<std::size_t>(i) % compounds.size();
    const Signature& s = compounds[index];
    above = index + 1;
    htn::Method m;
    m.name = s.name;
    m.head = Task{s.name, vars(s.arity, "x"), false};
    for (int b = 0, n = rng.between(1, 2); b < n; ++b) {
      htn::Branch branch;
      std::vector<Term> pool = m.head.args;
      for (int k = 0, n2 = rng.between(0, 2); k < n2; ++k) {
        branch.preconditions.push_back(
            Literal{atom_over(rng, preds, m.head.args), rng.chance(0.4)});
      }
      if (rng.chance(0.15)) {
        // A free variable, bound by a positive literal.
        Atom a = atom_over(rng, preds, m.head.args);
        a.args.back() = Term::variable("?z");
        branch.preconditions.push_back(Literal{a, false});
        pool.push_back(a.args.back());
      }
      branch.subtasks = network(pool, 3);
      m.branches.push_back(std::move(branch));
    }
    c.domain.methods[m.name].push_back(std::move(m));
  }

  above = 0;
  std::vector<Term> objects;
  for (int i = 0, n = rng.between(2, 8); i < n; ++i) {
    objects.push_back(Term::constant("o" + std::to_string(i)));
  }
  c.problem.name = "mini-" + std::to_string(seed);
  c.problem.domain_name = c.domain.name;
  std::set<Atom> init;
  for (int i = 0, n = rng.between(0, 6); i < n; ++i) {
    init.insert(atom_over(rng, preds, objects));
  }
  c.problem.initial_state.assign(init.begin(), init.end());
  if (rng.chance(0.5)) {
    htn::Unordered group;
    group.members.push_back(htn::sequence_of({task_over(objects, true)}));
    group.members.push_back(htn::sequence_of({task_over(objects, rng.chance(0.5))}));
    c.problem.initial_network.nodes.push_back(TaskNode{std::move(group)});
  } else {
    for (int i = 0, n = rng.between(1, 2); i < n; ++i) {
      c.problem.initial_network.nodes.push_back(
          TaskNode{task_over(objects, i == 0 || rng.chance(0.5))});
    }
  }
  return c;
}

}  // namespace gen
