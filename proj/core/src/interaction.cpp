#include "htn/interaction.hpp"

#include <algorithm>
#include <functional>
#include <string_view>
#include <variant>

#include "htn/logic.hpp"

namespace htn {

Agenda::Agenda() : entries_(std::make_shared<Entries>()) {}

Agenda::Entries& Agenda::mutable_entries() {
  if (entries_.use_count() > 1) entries_ = std::make_shared<Entries>(*entries_);
  return *entries_;
}

Agenda::Entries::const_iterator Agenda::find(const Atom& atom) const {
  auto it = std::lower_bound(
      entries_->begin(), entries_->end(), atom,
      [](const std::shared_ptr<const Item>& item, const Atom& a) { return item->atom < a; });
  if (it != entries_->end() && (*it)->atom == atom) return it;
  return entries_->end();
}

bool Agenda::contains(const Atom& atom) const { return find(atom) != entries_->end(); }

const std::set<std::size_t>& Agenda::asserted_by(const Atom& atom) const {
  static const std::set<std::size_t> kNone;
  auto it = find(atom);
  return it == entries_->end() ? kNone : (*it)->steps;
}

void Agenda::assert_atom(const Atom& atom, std::size_t step_index) {
  auto it = std::lower_bound(
      entries_->begin(), entries_->end(), atom,
      [](const std::shared_ptr<const Item>& item, const Atom& a) { return item->atom < a; });
  const auto at = it - entries_->begin();
  if (it != entries_->end() && (*it)->atom == atom) {
    if ((*it)->steps.contains(step_index)) return;
    auto item = std::make_shared<Item>(**it);
    item->steps.insert(step_index);
    mutable_entries()[static_cast<std::size_t>(at)] = std::move(item);
    return;
  }
  Entries& e = mutable_entries();
  e.insert(e.begin() + at, std::make_shared<const Item>(Item{atom, {step_index}}));
}

void Agenda::retract(const Atom& atom) {
  auto it = find(atom);
  if (it == entries_->end()) return;
  const auto at = it - entries_->begin();
  Entries& e = mutable_entries();
  e.erase(e.begin() + at);
}

bool operator==(const Agenda& a, const Agenda& b) {
  if (a.entries_ == b.entries_) return true;
  return std::equal(a.entries_->begin(), a.entries_->end(), b.entries_->begin(),
                    b.entries_->end(), [](const auto& x, const auto& y) {
                      return x == y || *x == *y;
                    });
}

Agenda update_agenda_on_apply(Agenda agenda, const AppliedStep& step) {
  for (const Atom& atom : step.delete_effects) agenda.retract(atom);
  for (const Atom& atom : step.add_effects) agenda.assert_atom(atom, step.index);
  return agenda;
}

std::optional<std::size_t> is_matchable(const Task& task,
                                        const SharedSeq<AppliedStep>& plan,
                                        const Agenda& agenda) {
  if (!task.primitive || !task.is_ground()) return std::nullopt;
  for (const AppliedStep& step : plan) {
    if (step.task != task) continue;
    bool holding = std::all_of(
        step.add_effects.begin(), step.add_effects.end(),
        [&](const Atom& atom) { return agenda.contains(atom); });
    if (holding) return step.index;
  }
  return std::nullopt;
}

InterleaveResult interleave_filter(std::vector<Candidate> candidates,
                                   const SearchNode& node) {
  InterleaveResult result;
  for (Candidate& c : candidates) {
    std::optional<std::size_t> match;
    if (c.task.primitive) {
      match = is_matchable(c.task, node.partial_plan, node.agenda);
    }
    if (match) {
      result.pruned.emplace_back(std::move(c), *match);
    } else {
      result.keep.push_back(std::move(c));
    }
  }
  return result;
}

SearchNode prune_task(const SearchNode& node, const Candidate& candidate) {
  SearchNode next = node;
  next.commuted.reset();
  next.frontier = replace_head_task(node.frontier, candidate.path, {});
  return next;
}

std::optional<std::size_t> is_reducible(
    const Task& task, const SharedSeq<ReducedMethodRecord>& records,
    std::size_t depth, std::size_t from) {
  if (task.primitive) return std::nullopt;
  for (std::size_t i = from; i < records.size(); ++i) {
    const ReducedMethodRecord& r = records[i];
    if (r.method_name != task.symbol || r.state_index >= depth) continue;
    if (unify(task, r.ground_head)) return i;
  }
  return std::nullopt;
}

namespace {

bool check_record(const ReducedMethodRecord& record, const SearchNode& node,
                  std::size_t remaining) {
  if (remaining == 0) return false;
  for (const Task& sub : record.ground_subtasks.tasks()) {
    if (sub.primitive) {
      if (!is_matchable(sub, node.partial_plan, node.agenda)) return false;
      continue;
    }
    bool reused = false;
    std::optional<std::size_t> at =
        is_reducible(sub, node.reduced_methods, node.depth);
    while (at && !reused) {
      reused = check_record(node.reduced_methods[*at], node, remaining - 1);
      if (!reused) at = is_reducible(sub, node.reduced_methods, node.depth, *at + 1);
    }
    if (!reused) return false;
  }
  return true;
}

}  // namespace

bool recursive_subtask_check(const ReducedMethodRecord& record,
                             const SearchNode& node,
                             std::size_t max_recursion) {
  return check_record(record, node, max_recursion + 1);
}

bool agenda_within_state(const Agenda& agenda, const State& state) {
  return std::all_of(agenda.entries().begin(), agenda.entries().end(),
                     [&](const auto& item) { return state.contains(item->atom); });
}

PlanFingerprint fingerprint(const Plan& plan) {
  // FNV-1a over the printed steps, with separators so that step boundaries
  // matter.
  PlanFingerprint h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const Task& step : plan.steps) {
    mix(step.symbol);
    for (const Term& t : step.args) {
      mix("\x1f");
      mix(t.name());
    }
    mix("\x1e");
  }
  return h;
}

bool PlanFingerprintSet::contains(const Plan& plan) const {
  auto it = buckets_.find(fingerprint(plan));
  if (it == buckets_.end()) return false;
  return std::find(it->second.begin(), it->second.end(), plan) !=
         it->second.end();
}

bool PlanFingerprintSet::insert(const Plan& plan) {
  auto& bucket = buckets_[fingerprint(plan)];
  if (std::find(bucket.begin(), bucket.end(), plan) != bucket.end()) {
    return false;
  }
  bucket.push_back(plan);
  ++size_;
  return true;
}

bool suppress_duplicate(const Plan& plan, PlanFingerprintSet& seen) {
  return !seen.insert(plan);
}

namespace {

// Two independent FNV-1a lanes over the same byte stream.
class Digest {
 public:
  // std::hash is a fast 64-bit string hash; distinct symbols colliding
  // under it is far less likely than the 128-bit digest colliding.
  void bytes(std::string_view b) { word(std::hash<std::string_view>{}(b)); }
  void word(std::uint64_t w) {
    a_ = (a_ ^ w) * 0x100000001b3ULL;
    a_ ^= a_ >> 29;
    b_ = (b_ ^ w) * 0xff51afd7ed558ccdULL + 0x9e3779b97f4a7c15ULL;
    b_ ^= b_ >> 31;
  }
  void mark(char m) { word(0xff00u | static_cast<unsigned char>(m)); }
  void term(const Term& t) {
    mark(t.is_variable() ? '?' : '=');
    bytes(t.name());
    mark('\x1f');
  }
  void task(const Task& t) {
    mark(t.primitive ? '!' : '-');
    bytes(t.symbol);
    mark('(');
    for (const Term& a : t.args) term(a);
    mark(')');
  }
  void network(const TaskNetwork& n) {
    mark('[');
    for (const TaskNode& node : n.nodes) {
      if (const Task* t = std::get_if<Task>(&node.value)) {
        task(*t);
      } else {
        mark('{');
        for (const TaskNetwork& m : std::get<Unordered>(node.value).members) {
          network(m);
        }
        mark('}');
      }
    }
    mark(']');
  }
  // Order-independent accumulation of a finished sub-digest.
  void add(std::uint64_t high, std::uint64_t low) {
    sum_a_ += mix(high);
    sum_b_ += mix(low);
  }
  void fold_sums() {
    word(sum_a_);
    word(sum_b_);
    sum_a_ = sum_b_ = 0;
  }
  NodeFingerprint result() const { return {mix(a_), mix(b_)}; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t a_ = 0xcbf29ce484222325ULL;
  std::uint64_t b_ = 0x84222325cbf29ce4ULL;
  std::uint64_t sum_a_ = 0;
  std::uint64_t sum_b_ = 0;
};

}  // namespace

NodeFingerprint fingerprint(const SearchNode& node) {
  Digest d;
  auto [high, low] = node.state.digest();
  d.word(high);
  d.word(low);
  d.network(node.frontier);
  // The agenda is a function of the plan, so it needs no separate digest.
  for (std::size_t i = 0; i < node.partial_plan.size(); ++i) {
    auto [h, l] = node.partial_plan.digest(i, [](const AppliedStep& step) {
      Digest one;
      one.task(step.task);
      NodeFingerprint f = one.result();
      return std::pair{f.high, f.low};
    });
    d.word(h);
    d.word(l);
  }
  d.mark('|');
  for (std::size_t i = 0; i < node.reduced_methods.size(); ++i) {
    auto [h, l] = node.reduced_methods.digest(i, [](const ReducedMethodRecord& r) {
      Digest one;
      one.bytes(r.method_name);
      one.task(r.ground_head);
      one.word(r.branch_index);
      one.network(r.ground_subtasks);
      NodeFingerprint f = one.result();
      return std::pair{f.high, f.low};
    });
    d.add(h, l);
  }
  d.fold_sums();
  d.word(node.depth);
  d.word(node.fresh_variables);
  return d.result();
}

}  // namespace htn
