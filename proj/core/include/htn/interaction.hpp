#pragma once

// Task interaction: recognising primitive tasks whose effects some earlier
// step already achieved (and that still hold), skipping them, reusing method
// branches instantiated earlier on the path, and suppressing plans that are
// repeated because of the interleavings this opens up.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "htn/model.hpp"
#include "htn/search_node.hpp"

namespace htn {

/// Deletes first, then adds, mirroring the state transition.
Agenda update_agenda_on_apply(Agenda agenda, const AppliedStep& step);

/// Smallest index of an applied step that is the same ground operator
/// instance as `task` and whose add effects are all still on the agenda.
std::optional<std::size_t> is_matchable(const Task& task,
                                        const SharedSeq<AppliedStep>& plan,
                                        const Agenda& agenda);

struct InterleaveResult {
  std::vector<Candidate> keep;
  /// Each pruned candidate with the index of the step it matched.
  std::vector<std::pair<Candidate, std::size_t>> pruned;
};

/// Splits candidates into those to interleave and ground primitive ones that
/// are matchable and so are accomplished by doing nothing. Nonprimitive and
/// non-ground candidates are always kept.
InterleaveResult interleave_filter(std::vector<Candidate> candidates,
                                   const SearchNode& node);

/// Removes the candidate from the frontier without adding a plan step.
SearchNode prune_task(const SearchNode& node, const Candidate& candidate);

/// Index of the first record at or after `from` for the same method whose
/// head unifies with `task` and that was instantiated strictly before
/// `depth`.
std::optional<std::size_t> is_reducible(
    const Task& task, const SharedSeq<ReducedMethodRecord>& records,
    std::size_t depth, std::size_t from = 0);

/// True iff every primitive subtask of the record is matchable in `node`
/// and every nonprimitive one is itself reducible through a record that
/// passes this check. Recursion deeper than `max_recursion` fails.
bool recursive_subtask_check(const ReducedMethodRecord& record,
                             const SearchNode& node,
                             std::size_t max_recursion);

/// True iff every agenda atom holds in the state.
bool agenda_within_state(const Agenda& agenda, const State& state);

using PlanFingerprint = std::uint64_t;

PlanFingerprint fingerprint(const Plan& plan);

/// Plans seen so far. Fingerprint collisions fall back to comparing steps.
class PlanFingerprintSet {
 public:
  bool contains(const Plan& plan) const;
  /// Returns false if an equal plan was already present.
  bool insert(const Plan& plan);
  std::size_t size() const { return size_; }

 private:
  std::unordered_map<PlanFingerprint, std::vector<Plan>> buckets_;
  std::size_t size_ = 0;
};

/// True if `plan` was seen before; otherwise records it and returns false.
bool suppress_duplicate(const Plan& plan, PlanFingerprintSet& seen);

/// 128-bit digest of everything that determines the subtree below a node.
/// Reduced-method records enter as a set: only their existence matters once
/// recorded.
struct NodeFingerprint {
  std::uint64_t high = 0;
  std::uint64_t low = 0;

  friend bool operator==(const NodeFingerprint&,
                         const NodeFingerprint&) = default;
};

struct NodeFingerprintHash {
  std::size_t operator()(const NodeFingerprint& f) const noexcept {
    return static_cast<std::size_t>(f.low ^ (f.high * 0x9e3779b97f4a7c15ULL));
  }
};

NodeFingerprint fingerprint(const SearchNode& node);

}  // namespace htn
