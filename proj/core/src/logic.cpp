#include "htn/logic.hpp"

#include <algorithm>
#include <utility>

#include "htn/parser.hpp"

namespace htn {

namespace {

bool unify_terms(const std::vector<Term>& a, const std::vector<Term>& b,
                 Substitution& s) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Term x = s.resolve(a[i]);
    Term y = s.resolve(b[i]);
    if (x == y) continue;
    if (x.is_variable()) {
      s.bind(x, std::move(y));
    } else if (y.is_variable()) {
      s.bind(y, std::move(x));
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace

std::optional<Substitution> unify(const Atom& a, const Atom& b,
                                  Substitution s) {
  if (a.predicate != b.predicate) return std::nullopt;
  if (!unify_terms(a.args, b.args, s)) return std::nullopt;
  return s;
}

std::optional<Substitution> unify(const Task& a, const Task& b,
                                  Substitution s) {
  if (a.symbol != b.symbol || a.primitive != b.primitive) return std::nullopt;
  if (!unify_terms(a.args, b.args, s)) return std::nullopt;
  return s;
}

BindingStream::BindingStream(std::span<const Literal> preconditions,
                             State state, Substitution initial)
    : state_(std::move(state)) {
  literals_.reserve(preconditions.size());
  for (const Literal& l : preconditions) {
    if (!l.negated) literals_.push_back(l);
  }
  for (const Literal& l : preconditions) {
    if (l.negated) literals_.push_back(l);
  }
  stack_.push_back(Frame{0, 0, std::move(initial)});
}

std::optional<Substitution> BindingStream::next() {
  while (!stack_.empty()) {
    Frame& frame = stack_.back();
    if (frame.literal == literals_.size()) {
      Substitution result = std::move(frame.bindings);
      stack_.pop_back();
      return result;
    }
    const Literal& literal = literals_[frame.literal];
    Atom atom = apply_substitution(literal.atom, frame.bindings);

    if (literal.negated || atom.is_ground()) {
      if (!atom.is_ground()) {
        throw LogicError("unbound negation: " + print_atom(atom));
      }
      bool holds = state_.contains(atom) != literal.negated;
      Frame child{frame.literal + 1, 0, std::move(frame.bindings)};
      stack_.pop_back();
      if (holds) stack_.push_back(std::move(child));
      continue;
    }

    std::span<const Atom> candidates = state_.atoms_with(atom.predicate);
    std::optional<Substitution> extended;
    while (frame.cursor < candidates.size() && !extended) {
      extended = unify(atom, candidates[frame.cursor++], frame.bindings);
    }
    if (!extended) {
      stack_.pop_back();
      continue;
    }
    std::size_t next_literal = frame.literal + 1;
    stack_.push_back(Frame{next_literal, 0, std::move(*extended)});
  }
  return std::nullopt;
}

std::vector<Substitution> BindingStream::collect() {
  std::vector<Substitution> out;
  while (auto s = next()) out.push_back(std::move(*s));
  return out;
}

BindingStream satisfy(std::span<const Literal> preconditions,
                      const State& state, Substitution initial) {
  return BindingStream(preconditions, state, std::move(initial));
}

bool satisfiable(std::span<const Literal> preconditions, const State& state,
                 const Substitution& initial) {
  return satisfy(preconditions, state, initial).next().has_value();
}

}  // namespace htn
