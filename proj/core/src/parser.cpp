#include "htn/parser.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace htn {

namespace {

[[noreturn]] void fail(const SExpr& at, std::string message) {
  throw ParseError(ParseDiagnostic{std::max<std::size_t>(at.line(), 1),
                                   std::max<std::size_t>(at.column(), 1),
                                   std::move(message)});
}

// Keywords of the full JSHOP2 language that this reader deliberately rejects.
const std::set<std::string, std::less<>> kUnsupportedPrecondition = {
    "or",     "imply",  "forall", "exists",   "call",
    "assign", ":first", ":sort-by", "eval",   "="};
const std::set<std::string, std::less<>> kUnsupportedItem = {
    ":-", ":axiom", ":protection", ":include"};

bool is_keyword(const std::string& s) { return !s.empty() && s.front() == ':'; }

std::string describe(const SExpr& e) {
  std::string text = to_string(e);
  if (text.size() > 40) text = text.substr(0, 37) + "...";
  return text;
}

Term parse_term(const SExpr& e) {
  if (!e.is_symbol()) fail(e, "expected a term, got " + describe(e));
  const std::string& text = e.text();
  if (text == "?") fail(e, "variable without a name");
  if (text.front() == '!' || is_keyword(text)) {
    fail(e, "'" + text + "' is not a valid term");
  }
  return Term::from_symbol(text);
}

Atom parse_atom(const SExpr& e) {
  if (!e.is_list() || e.items().empty() || !e.items().front().is_symbol()) {
    fail(e, "expected an atom, got " + describe(e));
  }
  const std::string& pred = e.items().front().text();
  if (pred.front() == '?' || pred.front() == '!' || is_keyword(pred)) {
    fail(e, "invalid predicate symbol '" + pred + "'");
  }
  if (pred == "not" || kUnsupportedPrecondition.contains(pred)) {
    fail(e, "unsupported feature: '" + pred + "' inside an atom");
  }
  Atom atom{pred, {}};
  for (auto it = e.items().begin() + 1; it != e.items().end(); ++it) {
    atom.args.push_back(parse_term(*it));
  }
  return atom;
}

void parse_precondition(const SExpr& e, std::vector<Literal>& out) {
  if (e.is_symbol()) fail(e, "expected a precondition list, got " + e.text());
  const auto& items = e.items();
  if (items.empty()) return;
  if (items.front().is_list()) {
    for (const SExpr& item : items) parse_precondition(item, out);
    return;
  }
  const std::string& head = items.front().text();
  if (head == "and") {
    for (auto it = items.begin() + 1; it != items.end(); ++it) {
      parse_precondition(*it, out);
    }
    return;
  }
  if (head == "not") {
    if (items.size() != 2) fail(e, "'not' takes exactly one atom");
    if (items[1].starts_with("not")) {
      fail(items[1], "unsupported feature: nested negation");
    }
    out.push_back(Literal{parse_atom(items[1]), true});
    return;
  }
  if (kUnsupportedPrecondition.contains(head)) {
    fail(e, "unsupported feature: '" + head + "' in precondition");
  }
  out.push_back(Literal{parse_atom(e), false});
}

std::vector<Literal> parse_precondition(const SExpr& e) {
  std::vector<Literal> out;
  parse_precondition(e, out);
  return out;
}

std::vector<Atom> parse_atom_list(const SExpr& e) {
  if (e.is_symbol()) fail(e, "expected an atom list, got " + e.text());
  const auto& items = e.items();
  std::vector<Atom> out;
  if (items.empty()) return out;
  if (items.front().is_symbol()) {
    const std::string& head = items.front().text();
    if (head == "forall" || head == "not" || is_keyword(head)) {
      fail(e, "unsupported feature: '" + head + "' in effect list");
    }
    out.push_back(parse_atom(e));
    return out;
  }
  for (const SExpr& item : items) {
    if (item.is_list() && !item.items().empty() &&
        item.items().front().is_symbol()) {
      const std::string& head = item.items().front().text();
      if (head == "forall" || head == "not" || is_keyword(head)) {
        fail(item, "unsupported feature: '" + head + "' in effect list");
      }
    }
    out.push_back(parse_atom(item));
  }
  return out;
}

Task parse_task(const SExpr& e) {
  if (!e.is_list() || e.items().empty() || !e.items().front().is_symbol()) {
    fail(e, "expected a task, got " + describe(e));
  }
  std::string symbol = e.items().front().text();
  Task task;
  if (symbol.front() == '!') {
    task.primitive = true;
    symbol.erase(0, 1);
  }
  if (symbol.empty() || symbol.front() == '?' || symbol.front() == '!' ||
      is_keyword(symbol)) {
    fail(e, "invalid task symbol '" + e.items().front().text() + "'");
  }
  task.symbol = std::move(symbol);
  for (auto it = e.items().begin() + 1; it != e.items().end(); ++it) {
    task.args.push_back(parse_term(*it));
  }
  return task;
}

void parse_tasklist(const SExpr& e, TaskNetwork& out) {
  if (e.is_symbol()) fail(e, "expected a task list, got " + e.text());
  const auto& items = e.items();
  if (items.empty()) return;
  if (items.front().is_list()) {
    for (const SExpr& item : items) parse_tasklist(item, out);
    return;
  }
  const std::string& head = items.front().text();
  if (head == ":unordered") {
    Unordered group;
    for (auto it = items.begin() + 1; it != items.end(); ++it) {
      TaskNetwork member;
      parse_tasklist(*it, member);
      group.members.push_back(std::move(member));
    }
    out.nodes.push_back(TaskNode{std::move(group)});
    return;
  }
  if (head == ":ordered") {
    for (auto it = items.begin() + 1; it != items.end(); ++it) {
      parse_tasklist(*it, out);
    }
    return;
  }
  if (is_keyword(head)) {
    fail(e, "unsupported feature: '" + head + "' in task list");
  }
  out.nodes.push_back(TaskNode{parse_task(e)});
}

TaskNetwork parse_tasklist(const SExpr& e) {
  TaskNetwork network;
  parse_tasklist(e, network);
  return normalize(std::move(network));
}

Operator parse_operator(const SExpr& e) {
  const auto& items = e.items();
  if (items.size() == 6) fail(e, "unsupported feature: operator cost");
  if (items.size() != 5) {
    fail(e,
         "operator needs a head, a precondition, a delete list and an add "
         "list");
  }
  Task head = parse_task(items[1]);
  if (!head.primitive) {
    fail(items[1], "operator head '" + head.symbol + "' must start with '!'");
  }
  std::set<std::string> params;
  for (const Term& t : head.args) {
    if (!t.is_variable()) {
      fail(items[1], "operator parameter '" + t.name() +
                         "' must be a variable");
    }
    if (!params.insert(t.name()).second) {
      fail(items[1], "duplicate operator parameter " + t.name());
    }
  }
  Operator op;
  op.name = head.symbol;
  op.params = head.args;
  op.preconditions = parse_precondition(items[2]);
  op.delete_effects = parse_atom_list(items[3]);
  op.add_effects = parse_atom_list(items[4]);

  auto check = [&](const SExpr& where, const Atom& atom, const char* what) {
    for (const Term& t : atom.args) {
      if (t.is_variable() && !params.contains(t.name())) {
        fail(where, std::string(what) + " variable " + t.name() +
                        " is absent from the head of operator !" + op.name);
      }
    }
  };
  for (const Literal& l : op.preconditions) check(items[2], l.atom, "precondition");
  for (const Atom& a : op.delete_effects) check(items[3], a, "effect");
  for (const Atom& a : op.add_effects) check(items[4], a, "effect");
  return op;
}

Method parse_method(const SExpr& e) {
  const auto& items = e.items();
  if (items.size() < 2) fail(e, "method needs a head");
  Task head = parse_task(items[1]);
  if (head.primitive) {
    fail(items[1], "method head '!" + head.symbol + "' is marked primitive");
  }
  if (items.size() < 4 || (items.size() - 2) % 2 != 0) {
    for (std::size_t i = 2; i < items.size(); ++i) {
      if (items[i].is_symbol()) {
        fail(items[i], "unsupported feature: branch label '" +
                           items[i].text() + "'");
      }
    }
    fail(e, "method needs one or more (precondition tasklist) pairs");
  }
  Method method;
  method.name = head.symbol;
  method.head = std::move(head);
  for (std::size_t i = 2; i < items.size(); i += 2) {
    if (items[i].is_symbol()) {
      fail(items[i],
           "unsupported feature: branch label '" + items[i].text() + "'");
    }
    Branch branch;
    branch.preconditions = parse_precondition(items[i]);
    branch.subtasks = parse_tasklist(items[i + 1]);
    method.branches.push_back(std::move(branch));
  }
  return method;
}

const SExpr& single_form(const std::vector<SExpr>& forms, const char* head) {
  if (forms.size() != 1) {
    fail(forms[1], std::string("expected exactly one ") + head + " form");
  }
  const SExpr& form = forms.front();
  if (!form.starts_with(head)) {
    fail(form, std::string("expected (") + head + " ...)");
  }
  return form;
}

std::string symbol_at(const SExpr& e, const char* what) {
  if (!e.is_symbol()) fail(e, std::string("expected ") + what);
  return e.text();
}

}  // namespace

Domain parse_domain(std::string_view source) {
  const std::vector<SExpr> forms = tokenize_and_read(source);
  const SExpr& form = single_form(forms, "defdomain");
  const auto& items = form.items();
  if (items.size() != 3) fail(form, "expected (defdomain <name> (<item>*))");
  Domain domain;
  domain.name = symbol_at(items[1], "a domain name");
  if (!items[2].is_list()) fail(items[2], "expected the domain item list");

  for (const SExpr& item : items[2].items()) {
    if (!item.is_list() || item.items().empty() ||
        !item.items().front().is_symbol()) {
      fail(item, "expected a domain item, got " + describe(item));
    }
    const std::string& keyword = item.items().front().text();
    if (keyword == ":operator") {
      Operator op = parse_operator(item);
      if (domain.methods.contains(op.name)) {
        fail(item, "symbol '" + op.name + "' names both an operator and a method");
      }
      std::string name = op.name;
      if (!domain.operators.emplace(name, std::move(op)).second) {
        fail(item, "duplicate operator !" + name);
      }
    } else if (keyword == ":method") {
      Method method = parse_method(item);
      if (domain.operators.contains(method.name)) {
        fail(item, "symbol '" + method.name +
                       "' names both an operator and a method");
      }
      domain.methods[method.name].push_back(std::move(method));
    } else if (kUnsupportedItem.contains(keyword)) {
      fail(item, "unsupported feature: " + keyword);
    } else {
      fail(item, "unknown item keyword '" + keyword + "'");
    }
  }
  return domain;
}

Problem parse_problem(std::string_view source) {
  const std::vector<SExpr> forms = tokenize_and_read(source);
  const SExpr& form = single_form(forms, "defproblem");
  const auto& items = form.items();
  if (items.size() != 5) {
    fail(form,
         "expected (defproblem <name> <domain-name> (<ground-atom>*) "
         "<tasklist>)");
  }
  Problem problem;
  problem.name = symbol_at(items[1], "a problem name");
  problem.domain_name = symbol_at(items[2], "a domain name");
  if (!items[3].is_list()) fail(items[3], "expected the initial state list");
  std::set<Atom> seen;
  for (const SExpr& e : items[3].items()) {
    Atom atom = parse_atom(e);
    if (!atom.is_ground()) fail(e, "variable in initial state");
    if (seen.insert(atom).second) problem.initial_state.push_back(std::move(atom));
  }
  problem.initial_network = parse_tasklist(items[4]);
  return problem;
}

Plan parse_plan(std::string_view source) {
  Plan plan;
  for (const SExpr& e : read_expressions(source)) {
    Task step = parse_task(e);
    if (!step.is_ground()) fail(e, "plan step is not ground");
    step.primitive = true;
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

// Printing

std::string print_term(const Term& term) { return term.name(); }

namespace {

void print_args(const std::vector<Term>& args, std::string& out) {
  for (const Term& t : args) {
    out += ' ';
    out += t.name();
  }
}

void print_literals(const std::vector<Literal>& literals, std::string& out) {
  out += '(';
  bool first = true;
  for (const Literal& l : literals) {
    if (!first) out += ' ';
    first = false;
    if (l.negated) {
      out += "(not " + print_atom(l.atom) + ")";
    } else {
      out += print_atom(l.atom);
    }
  }
  out += ')';
}

void print_atoms(const std::vector<Atom>& atoms, std::string& out) {
  out += '(';
  bool first = true;
  for (const Atom& a : atoms) {
    if (!first) out += ' ';
    first = false;
    out += print_atom(a);
  }
  out += ')';
}

void print_network_into(const TaskNetwork& network, std::string& out) {
  out += '(';
  bool first = true;
  for (const TaskNode& node : network.nodes) {
    if (!first) out += ' ';
    first = false;
    if (node.is_task()) {
      out += print_task(node.task());
    } else {
      out += "(:unordered";
      for (const TaskNetwork& member : node.group().members) {
        out += ' ';
        print_network_into(member, out);
      }
      out += ')';
    }
  }
  out += ')';
}

}  // namespace

std::string print_atom(const Atom& atom) {
  std::string out = "(" + atom.predicate;
  print_args(atom.args, out);
  out += ')';
  return out;
}

std::string print_task(const Task& task) {
  std::string out = task.primitive ? "(!" : "(";
  out += task.symbol;
  print_args(task.args, out);
  out += ')';
  return out;
}

std::string print_network(const TaskNetwork& network) {
  std::string out;
  print_network_into(network, out);
  return out;
}

std::string print_domain(const Domain& domain) {
  std::string out = "(defdomain " + domain.name + " (\n";
  for (const auto& [name, op] : domain.operators) {
    out += "  (:operator " + print_task(op.head()) + "\n    ";
    print_literals(op.preconditions, out);
    out += "\n    ";
    print_atoms(op.delete_effects, out);
    out += "\n    ";
    print_atoms(op.add_effects, out);
    out += ")\n";
  }
  for (const auto& [name, methods] : domain.methods) {
    for (const Method& m : methods) {
      out += "  (:method " + print_task(m.head);
      for (const Branch& b : m.branches) {
        out += "\n    ";
        print_literals(b.preconditions, out);
        out += "\n    ";
        print_network_into(b.subtasks, out);
      }
      out += ")\n";
    }
  }
  out += "))\n";
  return out;
}

std::string print_problem(const Problem& problem) {
  std::string out = "(defproblem " + problem.name + " " +
                    problem.domain_name + "\n  ";
  print_atoms(problem.initial_state, out);
  out += "\n  ";
  print_network_into(problem.initial_network, out);
  out += ")\n";
  return out;
}

std::string print_plan(const Plan& plan) {
  std::string out;
  for (const Task& step : plan.steps) {
    out += print_task(step);
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace htn
