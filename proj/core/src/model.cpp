#include "htn/model.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>

namespace htn {

namespace {

void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_terms(std::size_t seed, const std::vector<Term>& args) {
  std::hash<std::string> h;
  for (const Term& t : args) hash_combine(seed, h(t.name()));
  return seed;
}

bool all_ground(const std::vector<Term>& args) {
  return std::all_of(args.begin(), args.end(),
                     [](const Term& t) { return t.is_constant(); });
}

void collect_tasks(const TaskNetwork& network, std::vector<Task>& out) {
  for (const TaskNode& node : network.nodes) {
    if (node.is_task()) {
      out.push_back(node.task());
    } else {
      for (const TaskNetwork& member : node.group().members) {
        collect_tasks(member, out);
      }
    }
  }
}

void collect_first(const TaskNetwork& network, TaskPath& prefix,
                   std::vector<Candidate>& out) {
  if (network.nodes.empty()) return;
  const TaskNode& head = network.nodes.front();
  if (head.is_task()) {
    out.push_back(Candidate{prefix, head.task()});
    return;
  }
  const auto& members = head.group().members;
  for (std::size_t i = 0; i < members.size(); ++i) {
    prefix.push_back(i);
    collect_first(members[i], prefix, out);
    prefix.pop_back();
  }
}

TaskNetwork replace_at(const TaskNetwork& network, const TaskPath& path,
                       std::size_t depth, const TaskNetwork& replacement) {
  if (network.nodes.empty()) {
    throw std::out_of_range("task path addresses an empty network");
  }
  const TaskNode& head = network.nodes.front();
  TaskNetwork result;
  if (depth == path.size()) {
    if (!head.is_task()) {
      throw std::out_of_range("task path ends at an unordered group");
    }
    result.nodes.reserve(replacement.nodes.size() + network.nodes.size() - 1);
    result.nodes.insert(result.nodes.end(), replacement.nodes.begin(),
                        replacement.nodes.end());
  } else {
    if (head.is_task()) {
      throw std::out_of_range("task path descends through a task");
    }
    Unordered group = head.group();
    std::size_t member = path[depth];
    if (member >= group.members.size()) {
      throw std::out_of_range("task path member index out of range");
    }
    group.members[member] =
        replace_at(group.members[member], path, depth + 1, replacement);
    result.nodes.reserve(network.nodes.size());
    result.nodes.push_back(TaskNode{std::move(group)});
  }
  result.nodes.insert(result.nodes.end(), network.nodes.begin() + 1,
                      network.nodes.end());
  return result;
}

}  // namespace

Term Term::variable(std::string name) {
  if (name.size() < 2 || name.front() != '?') {
    throw std::invalid_argument("variable name must start with '?': " + name);
  }
  return Term(Kind::kVariable, std::move(name));
}

Term Term::constant(std::string name) {
  if (name.empty() || name.front() == '?') {
    throw std::invalid_argument("invalid constant name: '" + name + "'");
  }
  return Term(Kind::kConstant, std::move(name));
}

Term Term::from_symbol(std::string name) {
  if (!name.empty() && name.front() == '?') return variable(std::move(name));
  return constant(std::move(name));
}

bool Atom::is_ground() const { return all_ground(args); }

std::size_t AtomHash::operator()(const Atom& atom) const noexcept {
  return hash_terms(std::hash<std::string>{}(atom.predicate), atom.args);
}

bool Task::is_ground() const { return all_ground(args); }

std::size_t TaskHash::operator()(const Task& task) const noexcept {
  std::size_t seed = std::hash<std::string>{}(task.symbol);
  hash_combine(seed, task.primitive ? 1 : 0);
  return hash_terms(seed, task.args);
}

bool operator==(const Unordered& a, const Unordered& b) {
  return a.members == b.members;
}

bool operator==(const TaskNode& a, const TaskNode& b) {
  return a.value == b.value;
}

bool operator==(const TaskNetwork& a, const TaskNetwork& b) {
  return a.nodes == b.nodes;
}

bool TaskNetwork::is_primitive() const {
  for (const TaskNode& node : nodes) {
    if (node.is_task()) {
      if (!node.task().primitive) return false;
    } else {
      for (const TaskNetwork& member : node.group().members) {
        if (!member.is_primitive()) return false;
      }
    }
  }
  return true;
}

bool TaskNetwork::is_ground() const {
  for (const TaskNode& node : nodes) {
    if (node.is_task()) {
      if (!node.task().is_ground()) return false;
    } else {
      for (const TaskNetwork& member : node.group().members) {
        if (!member.is_ground()) return false;
      }
    }
  }
  return true;
}

std::vector<Task> TaskNetwork::tasks() const {
  std::vector<Task> out;
  collect_tasks(*this, out);
  return out;
}

std::vector<Candidate> first_tasks(const TaskNetwork& network) {
  std::vector<Candidate> out;
  TaskPath prefix;
  collect_first(network, prefix, out);
  return out;
}

TaskNetwork replace_head_task(const TaskNetwork& network, const TaskPath& path,
                              const TaskNetwork& replacement) {
  return normalize(replace_at(network, path, 0, replacement));
}

TaskNetwork normalize(TaskNetwork network) {
  TaskNetwork out;
  out.nodes.reserve(network.nodes.size());
  for (TaskNode& node : network.nodes) {
    if (node.is_task()) {
      out.nodes.push_back(std::move(node));
      continue;
    }
    Unordered group;
    for (TaskNetwork& member : std::get<Unordered>(node.value).members) {
      TaskNetwork m = normalize(std::move(member));
      if (!m.empty()) group.members.push_back(std::move(m));
    }
    if (group.members.empty()) continue;
    if (group.members.size() == 1) {
      for (TaskNode& inner : group.members.front().nodes) {
        out.nodes.push_back(std::move(inner));
      }
      continue;
    }
    out.nodes.push_back(TaskNode{std::move(group)});
  }
  return out;
}

TaskNetwork sequence_of(std::vector<Task> tasks) {
  TaskNetwork network;
  network.nodes.reserve(tasks.size());
  for (Task& t : tasks) network.nodes.push_back(TaskNode{std::move(t)});
  return network;
}

const Operator* Domain::find_operator(std::string_view symbol) const {
  auto it = operators.find(symbol);
  return it == operators.end() ? nullptr : &it->second;
}

std::span<const Method> Domain::find_methods(std::string_view symbol) const {
  auto it = methods.find(symbol);
  if (it == methods.end()) return {};
  return it->second;
}

// State

namespace {

std::uint64_t finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::pair<std::uint64_t, std::uint64_t> atom_digest(const Atom& atom) {
  std::uint64_t a = 0xcbf29ce484222325ULL;
  std::uint64_t b = 0x84222325cbf29ce4ULL;
  auto feed = [&](std::string_view bytes, unsigned char sep) {
    for (unsigned char c : bytes) {
      a = (a ^ c) * 0x100000001b3ULL;
      b = (b ^ c) * 0x00000100000001b3ULL + 0x9e3779b97f4a7c15ULL;
    }
    a = (a ^ sep) * 0x100000001b3ULL;
    b = (b ^ sep) * 0x00000100000001b3ULL + 0x9e3779b97f4a7c15ULL;
  };
  feed(atom.predicate, '(');
  for (const Term& t : atom.args) feed(t.name(), 0x1f);
  return {finalize(a), finalize(b)};
}

}  // namespace

State::State() : data_(std::make_shared<Data>()) {}

State::State(std::span<const Atom> atoms) : State() {
  for (const Atom& a : atoms) add(a);
}

State::Data& State::mutable_data() {
  if (data_.use_count() > 1) data_ = std::make_shared<Data>(*data_);
  return *data_;
}

bool State::contains(const Atom& atom) const {
  auto it = data_->by_predicate.find(atom.predicate);
  return it != data_->by_predicate.end() && it->second->members.contains(atom);
}

bool State::add(const Atom& atom) {
  if (contains(atom)) return false;
  Data& d = mutable_data();
  auto it = d.by_predicate.find(atom.predicate);
  auto bucket = it == d.by_predicate.end() ? std::make_shared<Bucket>()
                                           : std::make_shared<Bucket>(*it->second);
  bucket->ordered.push_back(atom);
  bucket->members.insert(atom);
  d.by_predicate.insert_or_assign(atom.predicate, std::move(bucket));
  ++d.size;
  auto [high, low] = atom_digest(atom);
  d.digest_high += high;
  d.digest_low += low;
  return true;
}

bool State::remove(const Atom& atom) {
  if (!contains(atom)) return false;
  Data& d = mutable_data();
  auto it = d.by_predicate.find(atom.predicate);
  if (it->second->members.size() == 1) {
    d.by_predicate.erase(it);
  } else {
    auto bucket = std::make_shared<Bucket>(*it->second);
    bucket->members.erase(atom);
    bucket->ordered.erase(
        std::find(bucket->ordered.begin(), bucket->ordered.end(), atom));
    it->second = std::move(bucket);
  }
  --d.size;
  auto [high, low] = atom_digest(atom);
  d.digest_high -= high;
  d.digest_low -= low;
  return true;
}

std::span<const Atom> State::atoms_with(std::string_view predicate) const {
  auto it = data_->by_predicate.find(predicate);
  if (it == data_->by_predicate.end()) return {};
  return it->second->ordered;
}

std::vector<Atom> State::atoms() const {
  std::vector<Atom> out;
  out.reserve(size());
  for (const auto& [pred, bucket] : data_->by_predicate) {
    out.insert(out.end(), bucket->ordered.begin(), bucket->ordered.end());
  }
  return out;
}

std::size_t State::size() const { return data_->size; }

bool operator==(const State& a, const State& b) {
  if (a.data_ == b.data_) return true;
  if (a.size() != b.size()) return false;
  for (const auto& [pred, bucket] : a.data_->by_predicate) {
    auto it = b.data_->by_predicate.find(pred);
    if (it == b.data_->by_predicate.end()) return false;
    if (bucket != it->second && bucket->members != it->second->members) {
      return false;
    }
  }
  return true;
}

// Substitution

const Term* Substitution::lookup(std::string_view variable) const {
  auto it = bindings_.find(variable);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::resolve(const Term& term) const {
  const Term* current = &term;
  // A chain can be at most as long as the number of bindings; the bound
  // also stops a hand-built cycle.
  for (std::size_t steps = 0; steps <= bindings_.size(); ++steps) {
    if (!current->is_variable()) return *current;
    const Term* next = lookup(current->name());
    if (next == nullptr) return *current;
    current = next;
  }
  return *current;
}

void Substitution::bind(const Term& variable, Term value) {
  if (!variable.is_variable()) {
    throw std::invalid_argument("cannot bind constant " + variable.name());
  }
  bindings_.insert_or_assign(variable.name(), std::move(value));
}

Term apply_substitution(const Term& term, const Substitution& s) {
  if (!term.is_variable() || s.empty()) return term;
  return s.resolve(term);
}

Atom apply_substitution(const Atom& atom, const Substitution& s) {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const Term& t : atom.args) out.args.push_back(apply_substitution(t, s));
  return out;
}

Literal apply_substitution(const Literal& literal, const Substitution& s) {
  return Literal{apply_substitution(literal.atom, s), literal.negated};
}

Task apply_substitution(const Task& task, const Substitution& s) {
  Task out{task.symbol, {}, task.primitive};
  out.args.reserve(task.args.size());
  for (const Term& t : task.args) out.args.push_back(apply_substitution(t, s));
  return out;
}

TaskNetwork apply_substitution(const TaskNetwork& network,
                               const Substitution& s) {
  TaskNetwork out;
  out.nodes.reserve(network.nodes.size());
  for (const TaskNode& node : network.nodes) {
    if (node.is_task()) {
      out.nodes.push_back(TaskNode{apply_substitution(node.task(), s)});
    } else {
      Unordered group;
      group.members.reserve(node.group().members.size());
      for (const TaskNetwork& member : node.group().members) {
        group.members.push_back(apply_substitution(member, s));
      }
      out.nodes.push_back(TaskNode{std::move(group)});
    }
  }
  return out;
}

bool Plan::is_ground() const {
  return std::all_of(steps.begin(), steps.end(),
                     [](const Task& t) { return t.is_ground(); });
}

}  // namespace htn
