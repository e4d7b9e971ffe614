#include "htn/bench.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"

#include "htn/parser.hpp"
#include "htn/validate.hpp"

namespace htn {

namespace {

using nlohmann::json;

std::optional<std::size_t> memory_cap_mb(const SuiteConfig& suite) {
  if (const char* env = std::getenv(kMemoryCapVariable)) {
    char* end = nullptr;
    unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return suite.memory_limit_mb;
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute()) return path.string();
  return (base / path).lexically_normal().string();
}

}  // namespace

std::string_view to_string(CellStatus status) {
  switch (status) {
    case CellStatus::kCompleted: return "completed";
    case CellStatus::kTimeout: return "timeout";
    case CellStatus::kOutOfMemory: return "dnf-memory";
  }
  return "unknown";
}

std::size_t resident_memory_bytes() {
  std::ifstream statm("/proc/self/statm");
  std::size_t size_pages = 0;
  std::size_t resident_pages = 0;
  if (!(statm >> size_pages >> resident_pages)) return 0;
  return resident_pages * static_cast<std::size_t>(sysconf(_SC_PAGESIZE));
}

SuiteConfig load_suite(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed suite file " + path + ": " + e.what());
  }
  const std::filesystem::path base =
      std::filesystem::path(path).parent_path();
  SuiteConfig suite;
  try {
    for (const json& p : j.at("problems")) {
      suite.problems.push_back(SuiteProblem{
          p.at("name").get<std::string>(),
          resolve(base, p.at("domain").get<std::string>()),
          resolve(base, p.at("problem").get<std::string>())});
    }
    for (const json& m : j.value("modes", json::array({"baseline", "enhanced"}))) {
      auto mode = parse_mode(m.get<std::string>());
      if (!mode) throw std::runtime_error("unknown mode " + m.dump());
      suite.modes.push_back(*mode);
    }
    for (const json& q : j.value("quotas", json::array({"all"}))) {
      if (q.is_string() && q.get<std::string>() == "all") {
        suite.quotas.push_back(std::nullopt);
      } else if (q.is_number_unsigned() && q.get<std::size_t>() > 0) {
        suite.quotas.push_back(q.get<std::size_t>());
      } else {
        throw std::runtime_error("invalid quota " + q.dump());
      }
    }
    if (j.contains("suppressDuplicates")) {
      suite.suppress_duplicates = j.at("suppressDuplicates").get<bool>();
    }
    if (j.contains("maxDepth")) {
      suite.max_depth = j.at("maxDepth").get<std::size_t>();
    }
    if (j.contains("timeoutSeconds")) {
      suite.timeout = std::chrono::milliseconds(static_cast<long long>(
          j.at("timeoutSeconds").get<double>() * 1000.0));
    }
    if (j.contains("memoryLimitMb")) {
      suite.memory_limit_mb = j.at("memoryLimitMb").get<std::size_t>();
    }
    if (j.contains("results")) {
      suite.results_path = resolve(base, j.at("results").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed suite file " + path + ": " + e.what());
  }
  return suite;
}

std::vector<BenchResult> run_benchmark(const SuiteConfig& suite) {
  std::vector<BenchResult> results;
  const std::optional<std::size_t> cap_mb = memory_cap_mb(suite);
  std::map<std::string, Domain> domains;

  for (const SuiteProblem& sp : suite.problems) {
    auto dom_it = domains.find(sp.domain_path);
    if (dom_it == domains.end()) {
      dom_it = domains.emplace(sp.domain_path,
                               parse_domain(read_file(sp.domain_path)))
                   .first;
    }
    const Domain& domain = dom_it->second;
    const Problem problem = parse_problem(read_file(sp.problem_path));

    for (PlannerMode mode : suite.modes) {
      for (const std::optional<std::size_t>& quota : suite.quotas) {
        BenchResult r;
        r.problem_name = sp.name;
        r.mode = mode;
        r.plans_requested = quota;

        bool out_of_memory = false;
        PlannerOptions options;
        options.mode = mode;
        options.max_plans = quota;
        options.max_depth = suite.max_depth;
        options.suppress_duplicates = suite.suppress_duplicates;
        options.time_limit = suite.timeout;
        if (cap_mb) {
          const std::size_t cap_bytes = *cap_mb * 1024 * 1024;
          options.interrupt = [cap_bytes, &out_of_memory] {
            out_of_memory = resident_memory_bytes() > cap_bytes;
            return out_of_memory;
          };
        }

        PlanStream stream(domain, problem, options);
        while (auto plan = stream.next()) {
          ++r.plans_found;
          if (!validate_plan(domain, problem, *plan).valid) ++r.invalid_plans;
        }
        r.stats = stream.stats();
        if (stream.status() == SearchStatus::kTimeLimit) {
          r.status = CellStatus::kTimeout;
        } else if (stream.status() == SearchStatus::kInterrupted &&
                   out_of_memory) {
          r.status = CellStatus::kOutOfMemory;
        }
        results.push_back(std::move(r));
      }
    }
  }

  if (!suite.results_path.empty()) {
    std::ofstream out(suite.results_path);
    if (!out) {
      throw std::runtime_error("cannot write results file " +
                               suite.results_path);
    }
    out << results_to_json(results) << '\n';
  }
  return results;
}

std::string results_to_json(const std::vector<BenchResult>& results) {
  json array = json::array();
  for (const BenchResult& r : results) {
    json stats = {
        {"nodesExpanded", r.stats.nodes_expanded},
        {"backtracks", r.stats.backtracks},
        {"plansEmitted", r.stats.plans_emitted},
        {"duplicatePlansSuppressed", r.stats.duplicate_plans_suppressed},
        {"duplicateNodesSkipped", r.stats.duplicate_nodes_skipped},
        {"tasksPruned", r.stats.tasks_pruned},
        {"methodsReused", r.stats.methods_reused},
        {"wallTimeMs",
         std::chrono::duration<double, std::milli>(r.stats.wall_time).count()},
    };
    array.push_back({
        {"problemName", r.problem_name},
        {"mode", std::string(to_string(r.mode))},
        {"plansRequested",
         r.plans_requested ? json(*r.plans_requested) : json(nullptr)},
        {"plansFound", r.plans_found},
        {"stats", stats},
        {"status", std::string(to_string(r.status))},
        {"invalidPlans", r.invalid_plans},
    });
  }
  return array.dump(2);
}

}  // namespace htn
