#include "htn/planner.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "htn/logic.hpp"
#include "htn/parser.hpp"

namespace htn {

namespace {

void collect_variables(const std::vector<Term>& args,
                       std::set<std::string>& out) {
  for (const Term& t : args) {
    if (t.is_variable()) out.insert(t.name());
  }
}

void collect_variables(const TaskNetwork& network, std::set<std::string>& out) {
  for (const Task& t : network.tasks()) collect_variables(t.args, out);
}

Substitution renaming(const std::set<std::string>& variables,
                      std::size_t counter) {
  Substitution s;
  std::string suffix = "#" + std::to_string(counter);
  for (const std::string& v : variables) {
    s.bind(Term::variable(v), Term::variable(v + suffix));
  }
  return s;
}

Operator rename_apart(const Operator& op, std::size_t counter) {
  std::set<std::string> vars;
  collect_variables(op.params, vars);
  Substitution s = renaming(vars, counter);
  Operator out = op;
  for (Term& t : out.params) t = apply_substitution(t, s);
  for (Literal& l : out.preconditions) l = apply_substitution(l, s);
  for (Atom& a : out.delete_effects) a = apply_substitution(a, s);
  for (Atom& a : out.add_effects) a = apply_substitution(a, s);
  return out;
}

Method rename_apart(const Method& m, std::size_t counter) {
  std::set<std::string> vars;
  collect_variables(m.head.args, vars);
  for (const Branch& b : m.branches) {
    for (const Literal& l : b.preconditions) collect_variables(l.atom.args, vars);
    collect_variables(b.subtasks, vars);
  }
  Substitution s = renaming(vars, counter);
  Method out = m;
  out.head = apply_substitution(m.head, s);
  for (Branch& b : out.branches) {
    for (Literal& l : b.preconditions) l = apply_substitution(l, s);
    b.subtasks = apply_substitution(b.subtasks, s);
  }
  return out;
}

std::vector<Atom> ground_atoms(const std::vector<Atom>& atoms,
                               const Substitution& s, bool& ground) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) {
    Atom g = apply_substitution(a, s);
    if (!g.is_ground()) ground = false;
    if (std::find(out.begin(), out.end(), g) == out.end()) {
      out.push_back(std::move(g));
    }
  }
  return out;
}

void expand_primitive(const SearchNode& node, const Candidate& candidate,
                      const Operator& op, PlannerMode mode,
                      std::vector<SearchNode>& out) {
  const Task& task = candidate.task;
  const SearchNode* base = &node;
  SearchNode renamed_base;
  const Operator* used = &op;
  Operator renamed;
  if (!task.is_ground()) {
    renamed = rename_apart(op, node.fresh_variables);
    used = &renamed;
    renamed_base = node;
    ++renamed_base.fresh_variables;
    base = &renamed_base;
  }
  std::optional<Substitution> head = unify(used->head(), task);
  if (!head) return;
  BindingStream bindings = satisfy(used->preconditions, base->state, *head);
  while (auto b = bindings.next()) {
    if (auto next = apply_operator(*base, candidate, *used, *b, mode)) {
      out.push_back(std::move(*next));
    }
  }
}

void expand_compound(const SearchNode& node, const Candidate& candidate,
                     std::span<const Method> methods, PlannerMode mode,
                     std::vector<SearchNode>& out) {
  const Task& task = candidate.task;
  for (const Method& m : methods) {
    const SearchNode* base = &node;
    SearchNode renamed_base;
    const Method* used = &m;
    Method renamed;
    if (!task.is_ground()) {
      renamed = rename_apart(m, node.fresh_variables);
      used = &renamed;
      renamed_base = node;
      ++renamed_base.fresh_variables;
      base = &renamed_base;
    }
    std::optional<Substitution> head = unify(used->head, task);
    if (!head) continue;
    // Branches are an if-then-else chain: the first branch whose
    // precondition holds is the only one used.
    for (std::size_t i = 0; i < used->branches.size(); ++i) {
      BindingStream bindings =
          satisfy(used->branches[i].preconditions, base->state, *head);
      std::optional<Substitution> b = bindings.next();
      if (!b) continue;
      do {
        out.push_back(reduce_method(*base, candidate, *used, i, *b, mode));
      } while ((b = bindings.next()));
      break;
    }
  }
}

std::vector<Atom> changed_atoms(const std::vector<SearchNode>& successors,
                                std::size_t from, std::size_t to) {
  std::vector<Atom> out;
  for (std::size_t i = from; i < to; ++i) {
    const SharedSeq<AppliedStep>& plan = successors[i].partial_plan;
    const AppliedStep& step = plan[plan.size() - 1];
    out.insert(out.end(), step.add_effects.begin(), step.add_effects.end());
    out.insert(out.end(), step.delete_effects.begin(), step.delete_effects.end());
  }
  return out;
}

const Atom& as_atom(const Atom& atom) { return atom; }
const Atom& as_atom(const Atom* atom) { return *atom; }

// True when no method precondition for `task` can match a changed atom.
template <typename Atoms>
bool untouched(const Task& task, const Atoms& changed, const Domain& domain) {
  if (changed.empty()) return true;
  auto near = [&](const Literal& l) {
    return std::any_of(changed.begin(), changed.end(), [&](const auto& a) {
      return as_atom(a).predicate == l.atom.predicate &&
             as_atom(a).args.size() == l.atom.args.size();
    });
  };
  for (const Method& m : domain.find_methods(task.symbol)) {
    bool any = false;
    for (const Branch& b : m.branches) {
      any = any || std::any_of(b.preconditions.begin(), b.preconditions.end(), near);
    }
    if (!any) continue;
    std::optional<Substitution> head = unify(m.head, task);
    if (!head) continue;
    for (const Branch& b : m.branches) {
      for (const Literal& l : b.preconditions) {
        if (!near(l)) continue;
        for (const auto& a : changed) {
          if (unify(l.atom, as_atom(a), *head)) return false;
        }
      }
    }
  }
  return true;
}

std::size_t primitive_heads(const TaskNetwork& network) {
  if (network.nodes.empty()) return 0;
  const TaskNode& head = network.nodes.front();
  if (head.is_task()) return head.task().primitive ? 1 : 0;
  std::size_t n = 0;
  for (const TaskNetwork& m : head.group().members) n += primitive_heads(m);
  return n;
}

using Heads = std::vector<std::shared_ptr<const CommutedHead>>;

// Paths move when a member empties out, so a head is known by its task.
// A task heading two members is never skipped.
bool asleep(const SearchNode& node, const Candidate& c,
            const std::vector<Candidate>& candidates) {
  if (!node.commuted) return false;
  auto same = [&](const Candidate& o) { return o.task == c.task; };
  if (std::count_if(candidates.begin(), candidates.end(), same) != 1) return false;
  return std::any_of(node.commuted->begin(), node.commuted->end(),
                     [&](const auto& t) { return same(t->candidate); });
}

// Whether expanding `t` and then `c` reaches what expanding `c` and then
// `t` does. `mine` is what the step of `c` changed.
bool commutes(const CommutedHead& t, const Candidate& c,
              const std::vector<const Atom*>& mine, const Domain& domain) {
  if (t.candidate.task.primitive) {
    return !c.task.primitive && untouched(c.task, t.changed, domain);
  }
  if (!c.task.primitive) return true;
  return t.compound_front && untouched(t.candidate.task, mine, domain);
}

// Records `c`, whose successors start at `from`, and marks in each of them
// the heads whose expansion there is covered elsewhere.
void note_tried(const Candidate& c, std::size_t from, const SearchNode& node,
                const Domain& domain,
                std::vector<SearchNode>& successors,
                Heads& tried) {
  if (successors.size() == from || !c.task.is_ground()) return;
  auto self = std::make_shared<CommutedHead>(CommutedHead{c, {}, true});
  for (std::size_t i = from; i < successors.size(); ++i) {
    const SearchNode& s = successors[i];
    if (s.fresh_variables != node.fresh_variables) return;
    if (!c.task.primitive && primitive_heads(s.frontier) > primitive_heads(node.frontier)) {
      self->compound_front = false;
    }
  }
  if (c.task.primitive) {
    self->changed = changed_atoms(successors, from, successors.size());
  }
  for (std::size_t i = from; i < successors.size(); ++i) {
    std::vector<const Atom*> mine;
    if (c.task.primitive) {
      const SharedSeq<AppliedStep>& plan = successors[i].partial_plan;
      const AppliedStep& step = plan[plan.size() - 1];
      for (const Atom& a : step.add_effects) mine.push_back(&a);
      for (const Atom& a : step.delete_effects) mine.push_back(&a);
    }
    Heads asleep;
    if (node.commuted) {
      for (const auto& t : *node.commuted) {
        if (commutes(*t, c, mine, domain)) asleep.push_back(t);
      }
    }
    for (const auto& t : tried) {
      if (commutes(*t, c, mine, domain)) asleep.push_back(t);
    }
    if (!asleep.empty()) {
      successors[i].commuted = std::make_shared<const Heads>(std::move(asleep));
    }
  }
  tried.push_back(std::move(self));
}

}  // namespace

std::string_view to_string(PlannerMode mode) {
  return mode == PlannerMode::kEnhanced ? "enhanced" : "baseline";
}

std::optional<PlannerMode> parse_mode(std::string_view text) {
  if (text == "baseline") return PlannerMode::kBaseline;
  if (text == "enhanced") return PlannerMode::kEnhanced;
  return std::nullopt;
}

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::kRunning: return "running";
    case SearchStatus::kExhausted: return "exhausted";
    case SearchStatus::kPlanQuotaReached: return "quota-reached";
    case SearchStatus::kTimeLimit: return "time-limit";
    case SearchStatus::kInterrupted: return "interrupted";
  }
  return "unknown";
}

bool SearchStats::same_counts(const SearchStats& o) const {
  return nodes_expanded == o.nodes_expanded && backtracks == o.backtracks &&
         plans_emitted == o.plans_emitted &&
         duplicate_plans_suppressed == o.duplicate_plans_suppressed &&
         duplicate_nodes_skipped == o.duplicate_nodes_skipped &&
         tasks_pruned == o.tasks_pruned && methods_reused == o.methods_reused;
}

Plan SearchNode::plan() const {
  Plan plan;
  plan.steps.reserve(partial_plan.size());
  for (const AppliedStep& step : partial_plan) plan.steps.push_back(step.task);
  return plan;
}

namespace {

// Copy of everything but the frontier, which every successor replaces.
SearchNode successor_base(const SearchNode& node) {
  SearchNode next;
  next.state = node.state;
  next.partial_plan = node.partial_plan;
  next.agenda = node.agenda;
  next.reduced_methods = node.reduced_methods;
  next.depth = node.depth;
  next.fresh_variables = node.fresh_variables;
  return next;
}

}  // namespace

SearchNode initial_node(const Problem& problem) {
  SearchNode node;
  node.state = State(problem.initial_state);
  node.frontier = normalize(problem.initial_network);
  return node;
}

std::vector<Candidate> choose_candidates(const SearchNode& node,
                                         PlannerMode mode) {
  std::vector<Candidate> candidates = first_tasks(node.frontier);
  if (mode == PlannerMode::kBaseline) return candidates;
  return interleave_filter(std::move(candidates), node).keep;
}

std::optional<SearchNode> apply_operator(const SearchNode& node,
                                         const Candidate& candidate,
                                         const Operator& op,
                                         const Substitution& bindings,
                                         PlannerMode mode) {
  Task step = apply_substitution(op.head(), bindings);
  if (!step.is_ground()) return std::nullopt;
  for (const Literal& l : op.preconditions) {
    Atom a = apply_substitution(l.atom, bindings);
    if (!a.is_ground() || node.state.contains(a) == l.negated) {
      return std::nullopt;
    }
  }
  bool ground = true;
  std::vector<Atom> dels = ground_atoms(op.delete_effects, bindings, ground);
  std::vector<Atom> adds = ground_atoms(op.add_effects, bindings, ground);
  if (!ground) return std::nullopt;

  SearchNode next = successor_base(node);
  for (const Atom& a : dels) next.state.remove(a);
  for (const Atom& a : adds) next.state.add(a);
  next.frontier = replace_head_task(node.frontier, candidate.path, {});
  if (!candidate.task.is_ground()) {
    next.frontier = apply_substitution(next.frontier, bindings);
  }
  AppliedStep applied{node.partial_plan.size(), std::move(step),
                      std::move(adds), std::move(dels)};
  if (mode == PlannerMode::kEnhanced) {
    next.agenda = update_agenda_on_apply(std::move(next.agenda), applied);
  }
  next.partial_plan.push_back(std::move(applied));
  ++next.depth;
  return next;
}

SearchNode reduce_method(const SearchNode& node, const Candidate& candidate,
                         const Method& method, std::size_t branch_index,
                         const Substitution& bindings, PlannerMode mode) {
  SearchNode next = successor_base(node);
  TaskNetwork subtasks =
      apply_substitution(method.branches.at(branch_index).subtasks, bindings);
  if (!subtasks.is_ground()) {
    // Variables left free by the branch are local to this instance.
    std::set<std::string> free;
    collect_variables(subtasks, free);
    subtasks = apply_substitution(subtasks, renaming(free, next.fresh_variables));
    ++next.fresh_variables;
  }
  next.frontier = replace_head_task(node.frontier, candidate.path, subtasks);
  if (!candidate.task.is_ground()) {
    next.frontier = apply_substitution(next.frontier, bindings);
  }
  if (mode == PlannerMode::kEnhanced) {
    Task head = apply_substitution(method.head, bindings);
    if (head.is_ground() && subtasks.is_ground()) {
      next.reduced_methods.push_back(ReducedMethodRecord{
          method.name, std::move(head), branch_index, subtasks, node.depth});
    }
  }
  ++next.depth;
  return next;
}

Expansion expand(const SearchNode& node, const Domain& domain,
                 const PlannerOptions& options) {
  const PlannerMode mode = options.mode;
  const bool enhanced = mode == PlannerMode::kEnhanced;
  const bool skip_eagerly = enhanced && !options.explore_both_on_match;
  Expansion result;
  std::vector<Candidate> candidates;
  if (skip_eagerly) {
    for (;;) {
      const SearchNode& at = result.settled ? *result.settled : node;
      InterleaveResult f = interleave_filter(first_tasks(at.frontier), at);
      if (f.pruned.empty()) {
        candidates = std::move(f.keep);
        break;
      }
      result.settled = prune_task(at, f.pruned.front().first);
      ++result.tasks_pruned;
    }
  }
  const SearchNode& current = result.settled ? *result.settled : node;
  if (current.frontier.empty()) {
    result.goal = true;
    return result;
  }
  if (options.max_depth && current.depth >= *options.max_depth) return result;

  if (!skip_eagerly) candidates = first_tasks(current.frontier);
  const bool commute = skip_eagerly && options.skip_commuted &&
                       options.suppresses_duplicates() && !result.settled;
  Heads tried;
  for (const Candidate& c : candidates) {
    std::size_t before = result.successors.size();
    if (commute && asleep(current, c, candidates)) {
      ++result.commuted_skipped;
      continue;
    }
    if (c.task.primitive) {
      const Operator* op = domain.find_operator(c.task.symbol);
      if (op == nullptr) {
        throw PlanningError("unknown task symbol: " + print_task(c.task));
      }
      if (enhanced && options.explore_both_on_match &&
          is_matchable(c.task, current.partial_plan, current.agenda)) {
        SearchNode skipped = prune_task(current, c);
        ++skipped.depth;
        result.successors.push_back(std::move(skipped));
        ++result.tasks_pruned;
      }
      expand_primitive(current, c, *op, mode, result.successors);
      if (commute) {
        note_tried(c, before, current, domain, result.successors, tried);
      }
      continue;
    }
    std::span<const Method> methods = domain.find_methods(c.task.symbol);
    if (methods.empty()) {
      throw PlanningError("unknown task symbol: " + print_task(c.task));
    }
    expand_compound(current, c, methods, mode, result.successors);
    if (commute) {
      note_tried(c, before, current, domain, result.successors, tried);
    }
    if (!enhanced || result.successors.size() != before) continue;

    // No branch applies now; fall back to a branch of the same method
    // instantiated earlier on this path whose work is already done.
    const std::size_t recursion_cap = options.max_depth.value_or(current.depth + 1);
    for (auto at = is_reducible(c.task, current.reduced_methods, current.depth);
         at; at = is_reducible(c.task, current.reduced_methods, current.depth,
                               *at + 1)) {
      if (recursive_subtask_check(current.reduced_methods[*at], current,
                                  recursion_cap)) {
        SearchNode skipped = prune_task(current, c);
        ++skipped.depth;
        result.successors.push_back(std::move(skipped));
        ++result.methods_reused;
        break;
      }
    }
  }
  return result;
}

// SearchStack

SearchStack::SearchStack(SearchNode root) {
  std::vector<SearchNode> alternatives;
  alternatives.push_back(root);
  frames_.push_back(Frame{std::move(root), std::move(alternatives), 0});
}

void SearchStack::push(SearchNode parent, std::vector<SearchNode> alternatives) {
  frames_.push_back(Frame{std::move(parent), std::move(alternatives), 0});
}

std::optional<SearchNode> SearchStack::pop_next() {
  while (!frames_.empty()) {
    Frame& top = frames_.back();
    if (top.next < top.alternatives.size()) {
      return std::move(top.alternatives[top.next++]);
    }
    frames_.pop_back();
  }
  return std::nullopt;
}

std::optional<SearchNode> SearchStack::backtrack() {
  if (frames_.empty()) return std::nullopt;
  SearchNode parent = std::move(frames_.back().parent);
  frames_.pop_back();
  return parent;
}

// PlanStream

PlanStream::PlanStream(const Domain& domain, const Problem& problem,
                       PlannerOptions options)
    : domain_(&domain),
      options_(std::move(options)),
      stack_(initial_node(problem)) {
  if (problem.domain_name != domain.name) {
    throw PlanningError("problem " + problem.name + " is for domain " +
                        problem.domain_name + ", not " + domain.name);
  }
  if (options_.max_plans && *options_.max_plans == 0) {
    throw PlanningError("max plans must be at least 1");
  }
}

bool PlanStream::limits_hit() {
  if (options_.interrupt && options_.interrupt()) {
    status_ = SearchStatus::kInterrupted;
    return true;
  }
  if (options_.time_limit &&
      std::chrono::steady_clock::now() - started_ >= *options_.time_limit) {
    status_ = SearchStatus::kTimeLimit;
    return true;
  }
  return false;
}

std::optional<Plan> PlanStream::next() {
  if (status_ != SearchStatus::kRunning) return std::nullopt;
  auto call_start = std::chrono::steady_clock::now();
  if (!timer_started_) {
    started_ = call_start;
    timer_started_ = true;
  }
  auto account = [&] {
    if (options_.collect_stats) {
      stats_.wall_time += std::chrono::steady_clock::now() - call_start;
    }
  };

  const bool dedupe = options_.suppresses_duplicates();
  while (auto node = stack_.pop_next()) {
    if ((stats_.nodes_expanded & 0xff) == 0 && limits_hit()) {
      account();
      return std::nullopt;
    }
    if (dedupe && !expanded_.insert(fingerprint(*node)).second) {
      ++stats_.duplicate_nodes_skipped;
      continue;
    }
    ++stats_.nodes_expanded;
    if (options_.on_expand) options_.on_expand(*node);
    Expansion e = expand(*node, *domain_, options_);
    stats_.tasks_pruned += e.tasks_pruned;
    stats_.methods_reused += e.methods_reused;
    stats_.duplicate_nodes_skipped += e.commuted_skipped;
    if (e.goal) {
      Plan plan = e.settled ? e.settled->plan() : node->plan();
      if (dedupe && suppress_duplicate(plan, seen_)) {
        ++stats_.duplicate_plans_suppressed;
        continue;
      }
      ++stats_.plans_emitted;
      if (options_.max_plans && stats_.plans_emitted >= *options_.max_plans) {
        status_ = SearchStatus::kPlanQuotaReached;
      }
      account();
      return plan;
    }
    if (e.successors.empty()) {
      ++stats_.backtracks;
      continue;
    }
    stack_.push(std::move(*node), std::move(e.successors));
  }
  status_ = SearchStatus::kExhausted;
  account();
  return std::nullopt;
}

std::vector<Plan> find_plans(const Domain& domain, const Problem& problem,
                             const PlannerOptions& options, SearchStats* stats,
                             SearchStatus* status) {
  PlanStream stream(domain, problem, options);
  std::vector<Plan> plans;
  while (auto p = stream.next()) plans.push_back(std::move(*p));
  if (stats != nullptr) *stats = stream.stats();
  if (status != nullptr) *status = stream.status();
  return plans;
}

}  // namespace htn
