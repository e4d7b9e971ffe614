#pragma once

// Unification and precondition satisfaction against a state.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "htn/model.hpp"

namespace htn {

class LogicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Most general unifier extending `s`, or nullopt on predicate/arity
/// mismatch or constant clash.
std::optional<Substitution> unify(const Atom& a, const Atom& b,
                                  Substitution s = {});
/// Tasks unify only if symbol and primitiveness agree.
std::optional<Substitution> unify(const Task& a, const Task& b,
                                  Substitution s = {});

/// Lazily enumerates the substitutions under which a conjunction holds.
///
/// Positive literals are evaluated first (in source order) and bind
/// variables against state atoms, visited in the state's per-predicate
/// insertion order. Negated literals are then checked by negation as failure
/// and must be ground by that point; otherwise next() throws LogicError
/// ("unbound negation"). Single consumer.
class BindingStream {
 public:
  BindingStream(std::span<const Literal> preconditions, State state,
                Substitution initial);

  std::optional<Substitution> next();
  /// Drains the stream.
  std::vector<Substitution> collect();

 private:
  struct Frame {
    std::size_t literal = 0;
    std::size_t cursor = 0;
    Substitution bindings;
  };

  std::vector<Literal> literals_;
  State state_;
  std::vector<Frame> stack_;
};

BindingStream satisfy(std::span<const Literal> preconditions,
                      const State& state, Substitution initial = {});

/// True iff `satisfy` yields at least one binding.
bool satisfiable(std::span<const Literal> preconditions, const State& state,
                 const Substitution& initial = {});

}  // namespace htn
