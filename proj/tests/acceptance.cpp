// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "htn/parser.hpp"
#include "htn/planner.hpp"
#include "htn/validate.hpp"
#include "oracle.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace htn;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes << " [failed: " << what << "]";
    }
  }
};

PlannerOptions in(PlannerMode mode) {
  PlannerOptions o;
  o.mode = mode;
  return o;
}

bool all_valid(const Domain& d, const Problem& p, const std::vector<Plan>& plans) {
  return std::all_of(plans.begin(), plans.end(),
                     [&](const Plan& plan) { return validate_plan(d, p, plan).valid; });
}

std::size_t count_symbol(const Plan& p, const std::string& symbol) {
  return static_cast<std::size_t>(std::count_if(
      p.steps.begin(), p.steps.end(), [&](const Task& t) { return t.symbol == symbol; }));
}

void office_simple(Verdict& v) {
  Domain d = support::domain("office/office-simple.hddl-lite");
  Problem p = support::problem("office/office.problem.hddl-lite");
  auto base = support::all_plans(d, p, in(PlannerMode::kBaseline));
  auto enh = support::all_plans(d, p, in(PlannerMode::kEnhanced));
  v.notes << " baseline=" << base.size() << " enhanced=" << enh.size();
  v.require(base.empty(), "baseline emits no plan");
  v.require(!enh.empty(), "enhanced emits a plan");
  for (const Plan& plan : enh) {
    v.require(plan.steps.size() == 4, "4 steps");
    v.require(count_symbol(plan, "turn-on-light") == 1, "one turn-on-light");
  }
  v.require(all_valid(d, p, base) && all_valid(d, p, enh), "plans validate");
}

void office_helper(Verdict& v) {
  Domain d = support::domain("office/office-helper.hddl-lite");
  Problem p = support::problem("office/office.problem.hddl-lite");
  auto finals = [&](const std::vector<Plan>& plans) {
    std::set<std::vector<Atom>> out;
    for (const Plan& plan : plans) {
      std::vector<Atom> s = validate_plan(d, p, plan).final_state;
      std::sort(s.begin(), s.end());
      out.insert(s);
    }
    return out;
  };
  auto base = support::all_plans(d, p, in(PlannerMode::kBaseline));
  auto enh = support::all_plans(d, p, in(PlannerMode::kEnhanced));
  v.notes << " baseline=" << base.size() << " enhanced=" << enh.size();
  v.require(!base.empty() && !enh.empty(), "both modes emit a plan");
  v.require(all_valid(d, p, base) && all_valid(d, p, enh), "plans validate");
  v.require(finals(base) == finals(enh), "same final states");
}

void conservative(Verdict& v) {
  Domain d = support::domain("conservative/housekeeping.hddl-lite");
  Problem p = support::problem("conservative/housekeeping.problem.hddl-lite");
  SearchStats bs;
  SearchStats es;
  auto base = support::all_plans(d, p, in(PlannerMode::kBaseline), &bs);
  auto enh = support::all_plans(d, p, in(PlannerMode::kEnhanced), &es);
  v.notes << " plans=" << base.size() << "/" << enh.size()
          << " nodes=" << bs.nodes_expanded << "/" << es.nodes_expanded;
  for (const Plan& plan : base) {
    std::vector<Task> steps = plan.steps;
    std::sort(steps.begin(), steps.end());
    v.require(std::adjacent_find(steps.begin(), steps.end()) == steps.end(),
              "no repeated ground operator instance");
  }
  v.require(!base.empty(), "plans exist");
  v.require(base == enh, "identical plan sequences");
  v.require(bs.nodes_expanded == es.nodes_expanded, "identical nodesExpanded");
}

void duplicates(Verdict& v) {
  Domain d = support::domain("dwr/dwr.hddl-lite");
  Problem p = support::problem("dwr/dwr-duplicates.problem.hddl-lite");
  constexpr std::size_t depth = 12;
  PlannerOptions bo = in(PlannerMode::kBaseline);
  bo.suppress_duplicates = false;
  bo.max_depth = depth;
  PlannerOptions eo = in(PlannerMode::kEnhanced);
  eo.max_depth = depth;
  auto base = support::all_plans(d, p, bo);
  auto enh = support::all_plans(d, p, eo);
  oracle::Result truth = oracle::enumerate(d, p, depth);

  std::vector<Plan> projected;
  for (const Plan& plan : truth.plans) {
    projected.push_back(oracle::without_steps(plan, oracle::redundant_steps(d, p, plan)));
  }
  projected = support::distinct(std::move(projected));

  v.notes << " baseline=" << base.size() << " enhanced=" << enh.size()
          << " oracle=" << truth.plans.size() << " projected=" << projected.size();
  v.require(support::sorted(base) == support::sorted(truth.plans),
            "baseline matches oracle");
  v.require(base.size() > enh.size(), "baseline emits more");
  v.require(support::distinct(enh).size() == enh.size(), "no duplicate sequence");
  v.require(support::sorted(enh) == projected, "enhanced equals projected set");
  v.require(all_valid(d, p, enh), "plans validate");
}

double min_wall_ms(const Domain& d, const Problem& p, PlannerOptions o,
                   std::size_t repeats, std::vector<Plan>& plans,
                   SearchStatus& status) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < repeats; ++i) {
    SearchStats stats;
    auto start = Clock::now();
    plans = find_plans(d, p, o, &stats, &status);
    std::chrono::duration<double, std::milli> took = Clock::now() - start;
    best = std::min(best, took.count());
  }
  return best;
}

void throughput(Verdict& v) {
  Domain d = support::domain("logistics/logistics.hddl-lite");
  double worst = 0;
  for (int n = 1; n <= 3; ++n) {
    Problem p = support::problem("logistics/logistics-" + std::to_string(n) +
                                 ".problem.hddl-lite");
    for (std::size_t quota : {100, 200, 300, 400}) {
      double ms[2];
      int i = 0;
      for (PlannerMode m : {PlannerMode::kBaseline, PlannerMode::kEnhanced}) {
        PlannerOptions o = in(m);
        o.max_plans = quota;
        o.time_limit = std::chrono::seconds(60);
        std::vector<Plan> plans;
        SearchStatus status;
        ms[i++] = min_wall_ms(d, p, o, 5, plans, status);
        v.require(status == SearchStatus::kPlanQuotaReached ||
                      status == SearchStatus::kExhausted,
                  "P" + std::to_string(n) + " completes");
        v.require(!plans.empty(), "P" + std::to_string(n) + " finds plans");
        v.require(all_valid(d, p, plans), "P" + std::to_string(n) + " plans validate");
      }
      double ratio = ms[1] / std::max(ms[0], 1e-3);
      worst = std::max(worst, ratio);
      v.require(ms[1] <= 10.0 * ms[0],
                "P" + std::to_string(n) + " q" + std::to_string(quota) + " ratio");
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, " worst-ratio=%.2f", worst);
  v.notes << buf;
}

void properties(Verdict& v) {
  struct Suite {
    const char* name;
    props::Outcome outcome;
  };
  const Suite suites[] = {
      {"a", props::soundness(250, 10001)},
      {"b", props::agenda_within_state(250, 20001)},
      {"c", props::backtrack_restores(250, 30001)},
      {"d", props::oracle_agreement(250, 40001)},
  };
  for (const Suite& s : suites) {
    v.notes << " " << s.name << "=" << s.outcome.cases - s.outcome.failures << "/"
            << s.outcome.cases;
    v.require(s.outcome.cases >= 200, std::string(s.name) + " case count");
    v.require(s.outcome.ok(), std::string(s.name) + ": " + s.outcome.first_failure);
  }
}

void round_trip(Verdict& v) {
  std::size_t files = 0;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(HTN_FIXTURE_DIR)) {
    if (entry.path().extension() != ".hddl-lite") continue;
    ++files;
    const std::string path = entry.path().string();
    const std::string text = read_file(path);
    if (path.find(".problem.") != std::string::npos) {
      Problem p = parse_problem(text);
      v.require(parse_problem(print_problem(p)) == p, path);
    } else {
      Domain d = parse_domain(text);
      v.require(parse_domain(print_domain(d)) == d, path);
    }
  }
  props::Outcome generated = props::round_trip(100, 50001);
  v.require(generated.ok(), generated.first_failure);
  v.notes << " fixtures=" << files << " generated=" << generated.cases;

  Domain simple = support::domain("office/office-simple.hddl-lite");
  auto shape = [](const Domain& d, const char* name, std::size_t branch,
                  std::size_t subtasks) {
    auto ms = d.find_methods(name);
    return ms.size() == 1 && ms[0].branches.size() > branch &&
           ms[0].branches[branch].subtasks.nodes.size() == subtasks;
  };
  v.require(shape(simple, "adjust-office", 0, 3) &&
                simple.find_methods("adjust-office")[0].branches.size() == 1 &&
                simple.find_methods("adjust-office")[0].branches[0].subtasks.is_primitive(),
            "plain adjust-office");
  v.require(shape(simple, "adjust-desk", 0, 2) &&
                simple.find_methods("adjust-desk")[0].branches.size() == 1 &&
                simple.find_methods("adjust-desk")[0].branches[0].subtasks.is_primitive(),
            "plain adjust-desk");
  Domain helper = support::domain("office/office-helper.hddl-lite");
  v.require(shape(helper, "light-helper", 0, 1) && shape(helper, "light-helper", 1, 0) &&
                helper.find_methods("light-helper")[0].branches.size() == 2,
            "light-helper branches");
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "office, plain methods", 1, office_simple},
      {2, "office, helper method", 1, office_helper},
      {3, "conservativity", 1, conservative},
      {4, "duplicate pruning", 30, duplicates},
      {5, "logistics throughput", 300, throughput},
      {6, "property suites", 120, properties},
      {7, "parser round trip", 5, round_trip},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    auto start = Clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::chrono::duration<double> took = Clock::now() - start;
    v.require(took.count() < c.budget_seconds, "time budget");
    if (!v.pass) ++failed;
    std::printf("criterion %d (%s): %s  %.3fs%s\n", c.id, c.title,
                v.pass ? "PASS" : "FAIL", took.count(), v.notes.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
