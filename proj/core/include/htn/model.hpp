#pragma once

// Core symbolic types: terms, atoms, tasks, task networks, operators,
// methods, domains, problems, states, substitutions and plans.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace htn {

/// A first-order term. Variables are spelled with a leading '?'.
class Term {
 public:
  enum class Kind : std::uint8_t { kConstant, kVariable };

  Term() = default;

  static Term variable(std::string name);
  static Term constant(std::string name);
  /// Picks the kind from the spelling.
  static Term from_symbol(std::string name);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::kVariable; }
  bool is_constant() const { return kind_ == Kind::kConstant; }
  const std::string& name() const { return name_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_ = Kind::kConstant;
  std::string name_;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct AtomHash {
  std::size_t operator()(const Atom& atom) const noexcept;
};

/// Precondition literal. States and effects only ever hold positive atoms.
struct Literal {
  Atom atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A task. The surface '!' marker is stripped from `symbol`; `primitive`
/// keeps it.
struct Task {
  std::string symbol;
  std::vector<Term> args;
  bool primitive = false;

  bool is_ground() const;

  friend bool operator==(const Task&, const Task&) = default;
  friend auto operator<=>(const Task&, const Task&) = default;
};

struct TaskHash {
  std::size_t operator()(const Task& task) const noexcept;
};

struct TaskNetwork;

/// Members may interleave freely; each member is internally ordered.
struct Unordered {
  std::vector<TaskNetwork> members;
};

struct TaskNode {
  std::variant<Task, Unordered> value;

  bool is_task() const { return std::holds_alternative<Task>(value); }
  const Task& task() const { return std::get<Task>(value); }
  const Unordered& group() const { return std::get<Unordered>(value); }
};

/// Position encodes precedence: node i is fully accomplished before node i+1
/// starts.
struct TaskNetwork {
  std::vector<TaskNode> nodes;

  bool empty() const { return nodes.empty(); }
  bool is_primitive() const;
  bool is_ground() const;
  /// Every task in the network, depth-first and left to right.
  std::vector<Task> tasks() const;
};

bool operator==(const Unordered& a, const Unordered& b);
bool operator==(const TaskNode& a, const TaskNode& b);
bool operator==(const TaskNetwork& a, const TaskNetwork& b);

/// Member indices through the chain of unordered groups sitting at the head
/// of a network. Empty when the head node is itself a task.
using TaskPath = std::vector<std::size_t>;

/// A task that currently has no unfinished predecessor.
struct Candidate {
  TaskPath path;
  Task task;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// First-eligible tasks, left to right.
std::vector<Candidate> first_tasks(const TaskNetwork& network);

/// Splices `replacement` in place of the task addressed by `path`. Throws
/// std::out_of_range for a path that does not address a head task.
TaskNetwork replace_head_task(const TaskNetwork& network, const TaskPath& path,
                              const TaskNetwork& replacement);

/// Drops empty members and groups; a group left with one member is spliced
/// into the enclosing sequence.
TaskNetwork normalize(TaskNetwork network);

TaskNetwork sequence_of(std::vector<Task> tasks);

struct Operator {
  std::string name;
  std::vector<Term> params;
  std::vector<Literal> preconditions;
  std::vector<Atom> delete_effects;
  std::vector<Atom> add_effects;

  Task head() const { return Task{name, params, true}; }

  friend bool operator==(const Operator&, const Operator&) = default;
};

struct Branch {
  std::vector<Literal> preconditions;
  TaskNetwork subtasks;

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct Method {
  std::string name;
  Task head;
  std::vector<Branch> branches;

  friend bool operator==(const Method&, const Method&) = default;
};

struct Domain {
  std::string name;
  std::map<std::string, Operator, std::less<>> operators;
  std::map<std::string, std::vector<Method>, std::less<>> methods;

  const Operator* find_operator(std::string_view symbol) const;
  std::span<const Method> find_methods(std::string_view symbol) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<Atom> initial_state;
  TaskNetwork initial_network;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Set of ground atoms. Atoms sharing a predicate are kept in insertion
/// order, which fixes the order in which queries enumerate them. Copies share
/// storage until one of them is modified.
class State {
 public:
  State();
  explicit State(std::span<const Atom> atoms);
  // No move operations: a moved-from State must stay usable, and copies are
  // a pointer copy anyway.
  State(const State&) = default;
  State& operator=(const State&) = default;

  bool contains(const Atom& atom) const;
  /// Returns false if the atom was already present.
  bool add(const Atom& atom);
  /// Returns false if the atom was absent.
  bool remove(const Atom& atom);

  std::span<const Atom> atoms_with(std::string_view predicate) const;
  std::vector<Atom> atoms() const;
  std::size_t size() const;

  /// Order-independent 128-bit digest of the atom set, kept up to date by
  /// add and remove.
  std::pair<std::uint64_t, std::uint64_t> digest() const {
    return {data_->digest_high, data_->digest_low};
  }

  friend bool operator==(const State& a, const State& b);

 private:
  // Buckets are shared between copies too, so a modification clones only
  // the buckets it touches.
  struct Bucket {
    std::vector<Atom> ordered;
    std::unordered_set<Atom, AtomHash> members;
  };
  struct Data {
    std::map<std::string, std::shared_ptr<const Bucket>, std::less<>>
        by_predicate;
    std::size_t size = 0;
    std::uint64_t digest_high = 0;
    std::uint64_t digest_low = 0;
  };
  Data& mutable_data();

  std::shared_ptr<Data> data_;
};

/// Variable bindings. Chains (?x -> ?y -> c) are followed on application.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init)
      : bindings_(init) {}

  const Term* lookup(std::string_view variable) const;
  /// Follows the binding chain until reaching a constant or unbound variable.
  Term resolve(const Term& term) const;
  /// `variable` must be a variable; rebinding overwrites.
  void bind(const Term& variable, Term value);

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term, std::less<>>& bindings() const {
    return bindings_;
  }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term, std::less<>> bindings_;
};

Term apply_substitution(const Term& term, const Substitution& s);
Atom apply_substitution(const Atom& atom, const Substitution& s);
Literal apply_substitution(const Literal& literal, const Substitution& s);
Task apply_substitution(const Task& task, const Substitution& s);
TaskNetwork apply_substitution(const TaskNetwork& network,
                               const Substitution& s);

inline bool is_ground(const Atom& atom) { return atom.is_ground(); }
inline bool is_ground(const Task& task) { return task.is_ground(); }

/// A sequence of ground operator instances.
struct Plan {
  std::vector<Task> steps;

  bool is_ground() const;

  friend bool operator==(const Plan&, const Plan&) = default;
  friend auto operator<=>(const Plan&, const Plan&) = default;
};

}  // namespace htn
