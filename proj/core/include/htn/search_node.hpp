#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "htn/model.hpp"

namespace htn {

/// Append-only sequence whose elements are immutable and shared between
/// copies, so copying costs one pointer per element.
template <typename T>
class SharedSeq {
  struct Slot {
    T value;
    // Derived data cached by fingerprinting; not part of the value.
    mutable bool has_digest = false;
    mutable std::uint64_t digest_high = 0;
    mutable std::uint64_t digest_low = 0;
  };
  using Slots = std::vector<std::shared_ptr<const Slot>>;

 public:
  class const_iterator {
   public:
    using value_type = T;
    using difference_type = std::ptrdiff_t;
    using reference = const T&;
    using pointer = const T*;
    using iterator_category = std::forward_iterator_tag;

    const_iterator() = default;
    explicit const_iterator(typename Slots::const_iterator it) : it_(it) {}
    const T& operator*() const { return (*it_)->value; }
    const T* operator->() const { return &(*it_)->value; }
    const_iterator& operator++() {
      ++it_;
      return *this;
    }
    const_iterator operator++(int) {
      const_iterator old = *this;
      ++it_;
      return old;
    }
    friend bool operator==(const const_iterator&,
                           const const_iterator&) = default;

   private:
    typename Slots::const_iterator it_;
  };

  SharedSeq() = default;
  SharedSeq(std::initializer_list<T> init) {
    for (const T& v : init) push_back(v);
  }

  void push_back(T value) {
    slots_.push_back(std::make_shared<const Slot>(Slot{std::move(value)}));
  }
  std::size_t size() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }
  const T& operator[](std::size_t i) const { return slots_[i]->value; }
  const T& back() const { return slots_.back()->value; }
  const_iterator begin() const { return const_iterator(slots_.begin()); }
  const_iterator end() const { return const_iterator(slots_.end()); }

  /// Digest of element `i`, computed by `compute` on first use and then
  /// shared by every copy holding that element.
  template <typename F>
  std::pair<std::uint64_t, std::uint64_t> digest(std::size_t i,
                                                 F&& compute) const {
    const Slot& slot = *slots_[i];
    if (!slot.has_digest) {
      std::tie(slot.digest_high, slot.digest_low) = compute(slot.value);
      slot.has_digest = true;
    }
    return {slot.digest_high, slot.digest_low};
  }

  friend bool operator==(const SharedSeq& a, const SharedSeq& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.slots_[i] != b.slots_[i] &&
          !(a.slots_[i]->value == b.slots_[i]->value)) {
        return false;
      }
    }
    return true;
  }

 private:
  Slots slots_;
};

/// A primitive task as applied at position `index` of a partial plan, with
/// its ground effects.
struct AppliedStep {
  std::size_t index = 0;
  Task task;
  std::vector<Atom> add_effects;
  std::vector<Atom> delete_effects;

  friend bool operator==(const AppliedStep&, const AppliedStep&) = default;
};

/// A head expanded at some ancestor, with what its expansion touched.
struct CommutedHead {
  Candidate candidate;
  /// Atoms changed by its steps; empty for a compound task.
  std::vector<Atom> changed;
  /// No reduction of it put a primitive task in front.
  bool compound_front = true;

  friend bool operator==(const CommutedHead&, const CommutedHead&) = default;
};

/// Atoms asserted by applied steps that still hold, each mapped to the plan
/// indices of the steps that asserted it. Atoms true only because of the
/// initial state are never entered.
/// Copies share storage until one of them is modified.
class Agenda {
 public:
  struct Item {
    Atom atom;
    std::set<std::size_t> steps;

    friend bool operator==(const Item&, const Item&) = default;
  };
  /// Sorted by atom. Items are immutable and shared between copies.
  using Entries = std::vector<std::shared_ptr<const Item>>;

  Agenda();
  // Copy only, like State: a moved-from Agenda stays usable.
  Agenda(const Agenda&) = default;
  Agenda& operator=(const Agenda&) = default;

  bool contains(const Atom& atom) const;
  /// Empty set if the atom is absent.
  const std::set<std::size_t>& asserted_by(const Atom& atom) const;

  void assert_atom(const Atom& atom, std::size_t step_index);
  void retract(const Atom& atom);

  std::size_t size() const { return entries_->size(); }
  bool empty() const { return entries_->empty(); }
  const Entries& entries() const { return *entries_; }

  friend bool operator==(const Agenda& a, const Agenda& b);

 private:
  Entries::const_iterator find(const Atom& atom) const;
  Entries& mutable_entries();

  std::shared_ptr<Entries> entries_;
};

/// A method branch instantiated on the current search path.
struct ReducedMethodRecord {
  std::string method_name;
  Task ground_head;
  std::size_t branch_index = 0;
  TaskNetwork ground_subtasks;
  /// Search depth at which the branch was instantiated.
  std::size_t state_index = 0;

  friend bool operator==(const ReducedMethodRecord&,
                         const ReducedMethodRecord&) = default;
};

/// Snapshot of the search at one point. Successors are fresh values, so a
/// parent snapshot is never modified by exploring below it.
struct SearchNode {
  State state;
  TaskNetwork frontier;
  SharedSeq<AppliedStep> partial_plan;
  Agenda agenda;
  SharedSeq<ReducedMethodRecord> reduced_methods;
  std::size_t depth = 0;
  /// Counter used to name variables renamed apart on this path.
  std::size_t fresh_variables = 0;
  /// Heads whose expansion here reaches only nodes an earlier part of the
  /// search already holds.
  std::shared_ptr<const std::vector<std::shared_ptr<const CommutedHead>>> commuted;

  Plan plan() const;

  friend bool operator==(const SearchNode&, const SearchNode&) = default;
};

}  // namespace htn
