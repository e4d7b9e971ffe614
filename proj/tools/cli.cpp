#include "cli.hpp"

#include <cstddef>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "htn/bench.hpp"
#include "htn/parser.hpp"
#include "htn/planner.hpp"
#include "htn/validate.hpp"

namespace htn {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

nlohmann::json stats_json(const SearchStats& s) {
  return {
      {"nodesExpanded", s.nodes_expanded},
      {"backtracks", s.backtracks},
      {"plansEmitted", s.plans_emitted},
      {"duplicatePlansSuppressed", s.duplicate_plans_suppressed},
      {"duplicateNodesSkipped", s.duplicate_nodes_skipped},
      {"tasksPruned", s.tasks_pruned},
      {"methodsReused", s.methods_reused},
      {"wallTimeMs", std::chrono::duration<double, std::milli>(s.wall_time).count()},
  };
}

Domain load_domain(const std::string& path) {
  try {
    return parse_domain(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(ParseDiagnostic{e.diagnostic().line, e.diagnostic().column,
                                     path + ": " + e.diagnostic().message});
  }
}

Problem load_problem(const std::string& path) {
  try {
    return parse_problem(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(ParseDiagnostic{e.diagnostic().line, e.diagnostic().column,
                                     path + ": " + e.diagnostic().message});
  }
}

struct PlanArgs {
  std::string domain;
  std::string problem;
  std::string mode = "baseline";
  std::size_t max_plans = 1;
  bool all = false;
  std::size_t max_depth = 10000;
  bool stats = false;
  std::string output = "text";
};

int run_plan(const PlanArgs& args, std::ostream& out) {
  Domain domain = load_domain(args.domain);
  Problem problem = load_problem(args.problem);

  PlannerOptions options;
  options.mode = *parse_mode(args.mode);
  if (!args.all) options.max_plans = args.max_plans;
  options.max_depth = args.max_depth;

  PlanStream stream(domain, problem, options);
  std::vector<Plan> plans;
  while (auto p = stream.next()) plans.push_back(std::move(*p));

  if (args.output == "json") {
    nlohmann::json j;
    j["plans"] = nlohmann::json::array();
    for (const Plan& p : plans) {
      nlohmann::json steps = nlohmann::json::array();
      for (const Task& t : p.steps) steps.push_back(print_task(t));
      j["plans"].push_back(std::move(steps));
    }
    j["status"] = std::string(to_string(stream.status()));
    if (args.stats) j["stats"] = stats_json(stream.stats());
    out << j.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < plans.size(); ++i) {
      if (i > 0) out << '\n';
      out << "; plan " << i + 1 << " (" << plans[i].steps.size()
          << " steps)\n"
          << print_plan(plans[i]);
    }
    if (plans.empty()) out << "; no plan found\n";
    if (args.stats) {
      const SearchStats& s = stream.stats();
      out << "; nodes-expanded " << s.nodes_expanded << '\n'
          << "; backtracks " << s.backtracks << '\n'
          << "; plans-emitted " << s.plans_emitted << '\n'
          << "; duplicate-plans-suppressed " << s.duplicate_plans_suppressed
          << '\n'
          << "; duplicate-nodes-skipped " << s.duplicate_nodes_skipped << '\n'
          << "; tasks-pruned " << s.tasks_pruned << '\n'
          << "; methods-reused " << s.methods_reused << '\n'
          << "; wall-time-ms "
          << std::chrono::duration<double, std::milli>(s.wall_time).count()
          << '\n';
    }
  }
  return plans.empty() ? kNegative : kOk;
}

int run_validate(const std::string& domain_path,
                 const std::string& problem_path, const std::string& plan_path,
                 std::ostream& out) {
  Domain domain = load_domain(domain_path);
  Problem problem = load_problem(problem_path);
  Plan plan;
  try {
    plan = parse_plan(read_file(plan_path));
  } catch (const ParseError& e) {
    throw ParseError(ParseDiagnostic{e.diagnostic().line, e.diagnostic().column,
                                     plan_path + ": " + e.diagnostic().message});
  }
  ValidationReport report = validate_plan(domain, problem, plan);
  if (report.valid) {
    out << "valid (" << plan.steps.size() << " steps)\n";
    return kOk;
  }
  out << "invalid at step " << *report.failing_step + 1 << ": "
      << report.reason << '\n';
  return kNegative;
}

int run_bench(const std::string& suite_path, std::ostream& out) {
  SuiteConfig suite = load_suite(suite_path);
  std::vector<BenchResult> results = run_benchmark(suite);
  out << results_to_json(results) << '\n';
  return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"HTN planner with task interaction", "htn"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  CLI::App* plan = app.add_subcommand("plan", "Search for plans");
  plan->add_option("domain-file", plan_args.domain)->required();
  plan->add_option("problem-file", plan_args.problem)->required();
  plan->add_option("--mode", plan_args.mode, "baseline or enhanced")
      ->check(CLI::IsMember({"baseline", "enhanced"}));
  CLI::Option* max_plans =
      plan->add_option("--max-plans", plan_args.max_plans, "Stop after N plans")
          ->check(CLI::PositiveNumber);
  CLI::Option* all = plan->add_flag("--all", plan_args.all, "Find every plan");
  max_plans->excludes(all);
  plan->add_option("--max-depth", plan_args.max_depth, "Search depth bound")
      ->check(CLI::PositiveNumber);
  plan->add_flag("--stats", plan_args.stats, "Report search statistics");
  plan->add_option("--output", plan_args.output, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string v_domain;
  std::string v_problem;
  std::string v_plan;
  CLI::App* validate = app.add_subcommand("validate", "Check a plan file");
  validate->add_option("domain", v_domain)->required();
  validate->add_option("problem", v_problem)->required();
  validate->add_option("plan-file", v_plan)->required();

  std::string suite_path;
  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("suite-file", suite_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (plan->parsed()) return run_plan(plan_args, out);
    if (validate->parsed()) return run_validate(v_domain, v_problem, v_plan, out);
    return run_bench(suite_path, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.diagnostic().message << " (line "
        << e.diagnostic().line << ", column " << e.diagnostic().column << ")\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kUsage;
}

}  // namespace htn
