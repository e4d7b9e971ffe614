#pragma once

// Benchmark harness: runs (problem, mode, plan quota) cells, validates every
// plan found and records search statistics.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "htn/planner.hpp"

namespace htn {

/// Name of the environment variable holding the bench memory cap in MiB.
inline constexpr const char* kMemoryCapVariable = "HTN_BENCH_MEMORY_MB";

struct SuiteProblem {
  std::string name;
  std::string domain_path;
  std::string problem_path;
};

struct SuiteConfig {
  std::vector<SuiteProblem> problems;
  std::vector<PlannerMode> modes;
  /// nullopt entries mean "find all plans".
  std::vector<std::optional<std::size_t>> quotas;
  std::optional<bool> suppress_duplicates;
  std::optional<std::size_t> max_depth = 10000;
  std::optional<std::chrono::milliseconds> timeout;
  /// Overridden by the environment variable when set.
  std::optional<std::size_t> memory_limit_mb;
  /// Empty: no results file.
  std::string results_path;
};

enum class CellStatus { kCompleted, kTimeout, kOutOfMemory };

std::string_view to_string(CellStatus status);

struct BenchResult {
  std::string problem_name;
  PlannerMode mode = PlannerMode::kBaseline;
  /// nullopt: all plans requested.
  std::optional<std::size_t> plans_requested;
  std::size_t plans_found = 0;
  SearchStats stats;
  CellStatus status = CellStatus::kCompleted;
  std::size_t invalid_plans = 0;
};

/// Reads a JSON suite description:
///
///   {"problems": [{"name": "...", "domain": "path", "problem": "path"}],
///    "modes": ["baseline", "enhanced"],
///    "quotas": [100, 200, "all"],
///    "suppressDuplicates": false,   // optional
///    "maxDepth": 10000,             // optional
///    "timeoutSeconds": 60,          // optional
///    "memoryLimitMb": 2048,         // optional
///    "results": "results.json"}     // optional
///
/// Relative paths are resolved against the suite file's directory. Throws
/// std::runtime_error on malformed input.
SuiteConfig load_suite(const std::string& path);

/// Runs every cell in problem, mode, quota order.
std::vector<BenchResult> run_benchmark(const SuiteConfig& suite);

/// JSON array of results; timing is the only run-dependent field.
std::string results_to_json(const std::vector<BenchResult>& results);

/// Resident set size of this process, 0 if unknown.
std::size_t resident_memory_bytes();

}  // namespace htn
