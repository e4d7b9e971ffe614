#pragma once

// Forward task decomposition in the style of SHOP2: always work on a task
// with no unfinished predecessor, apply primitive tasks to the current state,
// reduce nonprimitive ones with the first method branch whose precondition
// holds, and backtrack over every choice (which task, which method, which
// binding).
//
// In enhanced mode the search additionally keeps an agenda of achieved
// atoms, skips primitive tasks that an earlier step already accomplished,
// reuses method branches instantiated earlier on the path, and suppresses
// repeated plans.

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "htn/interaction.hpp"
#include "htn/model.hpp"
#include "htn/search_node.hpp"

namespace htn {

class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PlannerMode { kBaseline, kEnhanced };

std::string_view to_string(PlannerMode mode);
std::optional<PlannerMode> parse_mode(std::string_view text);

struct PlannerOptions {
  PlannerMode mode = PlannerMode::kBaseline;
  /// nullopt: enumerate every plan.
  std::optional<std::size_t> max_plans;
  /// Nodes at this depth are not expanded. nullopt: unbounded.
  std::optional<std::size_t> max_depth = 10000;
  bool collect_stats = true;
  /// Defaults to on in enhanced mode and off in baseline mode.
  std::optional<bool> suppress_duplicates;
  /// When a matchable task could also be applied normally, offer both the
  /// skip and the application as alternatives instead of skipping only.
  bool explore_both_on_match = false;
  /// With duplicate suppression on, skip expanding a head when the same
  /// node is reached by expanding it before an independent sibling. The
  /// plans produced are the same either way.
  bool skip_commuted = true;
  std::optional<std::chrono::milliseconds> time_limit;
  /// Polled during search; returning true stops it.
  std::function<bool()> interrupt;
  /// Called with every node before it is expanded.
  std::function<void(const SearchNode&)> on_expand;

  bool suppresses_duplicates() const {
    return suppress_duplicates.value_or(mode == PlannerMode::kEnhanced);
  }
};

struct SearchStats {
  std::size_t nodes_expanded = 0;
  /// Expanded nodes that were neither a plan nor had any successor.
  std::size_t backtracks = 0;
  std::size_t plans_emitted = 0;
  std::size_t duplicate_plans_suppressed = 0;
  /// Nodes skipped because an identical node was expanded earlier or is
  /// reached through an earlier sibling; only with duplicate suppression on.
  std::size_t duplicate_nodes_skipped = 0;
  /// Matchable primitive tasks skipped.
  std::size_t tasks_pruned = 0;
  /// Nonprimitive tasks skipped through an earlier branch instantiation.
  std::size_t methods_reused = 0;
  std::chrono::nanoseconds wall_time{0};

  /// Equality on everything except wall time.
  bool same_counts(const SearchStats& other) const;
};

enum class SearchStatus {
  kRunning,
  kExhausted,
  kPlanQuotaReached,
  kTimeLimit,
  kInterrupted,
};

std::string_view to_string(SearchStatus status);

SearchNode initial_node(const Problem& problem);

/// First-eligible tasks of the frontier; in enhanced mode, matchable ones
/// are filtered out.
std::vector<Candidate> choose_candidates(const SearchNode& node,
                                         PlannerMode mode);

/// Applies the operator instance selected by `bindings` (which must already
/// unify the operator head with the candidate task). nullopt when the
/// instance is not ground or its preconditions do not hold.
std::optional<SearchNode> apply_operator(const SearchNode& node,
                                         const Candidate& candidate,
                                         const Operator& op,
                                         const Substitution& bindings,
                                         PlannerMode mode);

/// Replaces the candidate by the subtasks of the given branch.
SearchNode reduce_method(const SearchNode& node, const Candidate& candidate,
                         const Method& method, std::size_t branch_index,
                         const Substitution& bindings, PlannerMode mode);

struct Expansion {
  /// The node after matchable tasks were skipped; empty when nothing was
  /// skipped.
  std::optional<SearchNode> settled;
  bool goal = false;
  std::vector<SearchNode> successors;
  std::size_t tasks_pruned = 0;
  std::size_t methods_reused = 0;
  std::size_t commuted_skipped = 0;
};

/// All successors of `node`, in the order the search tries them. Throws
/// PlanningError for a task that names no operator and no method.
Expansion expand(const SearchNode& node, const Domain& domain,
                 const PlannerOptions& options);

/// Choice points of a depth-first search. Each holds the snapshot it was
/// created from, so abandoning it restores that snapshot exactly.
class SearchStack {
 public:
  explicit SearchStack(SearchNode root);

  void push(SearchNode parent, std::vector<SearchNode> alternatives);
  /// Next untried alternative, discarding exhausted choice points.
  std::optional<SearchNode> pop_next();
  /// Abandons the innermost choice point and returns the snapshot it was
  /// created from; nullopt when no choice point remains.
  std::optional<SearchNode> backtrack();

  bool empty() const { return frames_.empty(); }
  std::size_t size() const { return frames_.size(); }

 private:
  struct Frame {
    SearchNode parent;
    std::vector<SearchNode> alternatives;
    std::size_t next = 0;
  };
  std::vector<Frame> frames_;
};

/// Lazily produces plans in a deterministic order. `domain` must outlive
/// the stream.
class PlanStream {
 public:
  PlanStream(const Domain& domain, const Problem& problem,
             PlannerOptions options);

  std::optional<Plan> next();

  const SearchStats& stats() const { return stats_; }
  SearchStatus status() const { return status_; }

 private:
  bool limits_hit();

  const Domain* domain_;
  PlannerOptions options_;
  SearchStack stack_;
  PlanFingerprintSet seen_;
  std::unordered_set<NodeFingerprint, NodeFingerprintHash> expanded_;
  SearchStats stats_;
  SearchStatus status_ = SearchStatus::kRunning;
  std::chrono::steady_clock::time_point started_;
  bool timer_started_ = false;
};

/// Drains a PlanStream.
std::vector<Plan> find_plans(const Domain& domain, const Problem& problem,
                             const PlannerOptions& options,
                             SearchStats* stats = nullptr,
                             SearchStatus* status = nullptr);

}  // namespace htn
