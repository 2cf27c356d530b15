#include "nicmeas/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>
#include <utility>

namespace nicmeas {
namespace {

[[noreturn]] void bad(const std::string& why) { throw std::invalid_argument(why); }

void expect_keys(const Json& j, const std::vector<std::string>& required,
                 const std::vector<std::string>& optional, const std::string& what) {
  if (!j.is_object()) bad(what + " must be a JSON object");
  for (const std::string& k : required)
    if (!j.contains(k)) bad(what + " is missing \"" + k + "\"");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (std::find(required.begin(), required.end(), k) == required.end() &&
        std::find(optional.begin(), optional.end(), k) == optional.end())
      bad(what + " has unknown key \"" + k + "\"");
  }
}

int as_natural(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    bad(what + " must be a natural number");
  return static_cast<int>(j.get<long long>());
}

PlanPath path_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array of naturals");
  PlanPath p;
  for (const Json& e : j) p.push_back(as_natural(e, what + " entry"));
  return p;
}

std::vector<GammaNode> nodes_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array of nodes");
  std::vector<GammaNode> out;
  for (const Json& n : j) out.push_back(node_from_json(n));
  return out;
}

std::vector<std::vector<GammaNode>> relations_from_json(const Json& j) {
  if (!j.is_array()) bad("relations must be an array of node tuples");
  std::vector<std::vector<GammaNode>> out;
  for (const Json& rel : j) out.push_back(nodes_from_json(rel, "relation"));
  return out;
}

}  // namespace

Json plan_to_json(const TreePlan& plan) {
  Json rows = Json::array();
  for (const auto& [path, entry] : plan.entries()) {
    Json row;
    row["path"] = path;
    row["lambda"] = entry.mult == Mult::One ? "one" : "inf";
    if (entry.mult == Mult::Inf) row["component"] = entry.component;
    rows.push_back(std::move(row));
  }
  Json j;
  j["nodes"] = std::move(rows);
  return j;
}

TreePlan plan_from_json(const Json& j) {
  expect_keys(j, {"nodes"}, {}, "plan");
  if (!j["nodes"].is_array()) bad("plan nodes must be an array");
  TreePlan plan;
  for (const Json& row : j["nodes"]) {
    expect_keys(row, {"path", "lambda"}, {"component"}, "plan node");
    PlanPath path = path_from_json(row["path"], "plan path");
    if (!row["lambda"].is_string()) bad("lambda must be a string");
    std::string lambda = row["lambda"].get<std::string>();
    if (lambda == "one") {
      if (row.contains("component")) bad("One nodes carry no component");
      plan.add(path, Mult::One);
    } else if (lambda == "inf") {
      if (!row.contains("component") || !row["component"].is_string())
        bad("Inf nodes need a component theory id");
      std::string th = row["component"].get<std::string>();
      theory(th);  // rejects unknown ids
      plan.add(path, Mult::Inf, th);
    } else {
      bad("lambda must be \"one\" or \"inf\"");
    }
  }
  plan.require_valid();
  return plan;
}

Json node_to_json(const GammaNode& a) {
  Json j = Json::array();
  for (const Step& s : a.steps) {
    Json step = Json::array();
    step.push_back(s.index);
    if (s.tag == kStar)
      step.push_back(nullptr);
    else
      step.push_back(s.tag);
    j.push_back(std::move(step));
  }
  return j;
}

GammaNode node_from_json(const Json& j) {
  if (!j.is_array()) bad("a node must be an array of [index, tag] steps");
  GammaNode a;
  for (const Json& s : j) {
    if (!s.is_array() || s.size() != 2) bad("a step must be [index, tag]");
    int index = as_natural(s[0], "step index");
    int tag = s[1].is_null() ? kStar : as_natural(s[1], "step tag");
    a.steps.push_back({index, tag});
  }
  return a;
}

Json fragment_to_json(const Fragment& f) {
  Json j;
  j["plan"] = plan_to_json(f.plan);
  j["seed"] = f.seed;
  Json nodes = Json::array();
  for (const GammaNode& a : f.nodes) nodes.push_back(node_to_json(a));
  j["nodes"] = std::move(nodes);
  Json comps = Json::array();
  for (const auto& [key, st] : f.components) {
    Json row;
    row["pred"] = node_to_json(key.pred);
    row["path"] = key.path;
    row["theory"] = f.theory_of(key);
    row["elements"] = st.elements;
    Json rels = Json::array();
    for (const auto& tuple : st.relations) rels.push_back(tuple);
    row["relations"] = std::move(rels);
    comps.push_back(std::move(row));
  }
  j["components"] = std::move(comps);
  return j;
}

Fragment fragment_from_json(const Json& j) {
  expect_keys(j, {"plan", "seed", "nodes", "components"}, {}, "fragment");
  Fragment f;
  f.plan = plan_from_json(j["plan"]);
  if (!j["seed"].is_number_unsigned()) bad("seed must be a nonnegative integer");
  f.seed = j["seed"].get<uint64_t>();
  f.rng = Rng(f.seed);
  if (!j["nodes"].is_array()) bad("fragment nodes must be an array");
  for (const Json& n : j["nodes"]) {
    GammaNode a = node_from_json(n);
    if (!plan_admits(f.plan, a)) bad("node " + to_string(a) + " is not admitted by the plan");
    f.nodes.insert(a);
  }
  if (!j["components"].is_array()) bad("fragment components must be an array");
  for (const Json& row : j["components"]) {
    expect_keys(row, {"pred", "path", "theory", "elements", "relations"}, {}, "component");
    ComponentKey key;
    key.pred = node_from_json(row["pred"]);
    key.path = path_from_json(row["path"], "component path");
    if (!f.plan.contains(key.path) || f.plan.mult(key.path) != Mult::Inf)
      bad("component path is not an Inf plan node");
    if (!row["theory"].is_string() ||
        row["theory"].get<std::string>() != f.plan.component(key.path))
      bad("component theory does not match the plan");
    const ComponentTheory& th = theory(f.plan.component(key.path));
    ComponentState st;
    if (!row["elements"].is_array()) bad("component elements must be an array");
    for (const Json& e : row["elements"]) st.elements.insert(as_natural(e, "element id"));
    if (!row["relations"].is_array()) bad("component relations must be an array");
    for (const Json& rel : row["relations"]) {
      if (!rel.is_array()) bad("a relation must be an array of element ids");
      std::vector<ElementId> args;
      for (const Json& e : rel) args.push_back(as_natural(e, "relation argument"));
      th.add_relation(st, args);
    }
    if (!f.components.emplace(key, std::move(st)).second) bad("duplicate component row");
  }
  auto problems = f.audit();
  if (!problems.empty()) bad("fragment fails audit: " + problems.front());
  return f;
}

Term term_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_string()) bad("a term must be [op, ...]");
  std::string op = j[0].get<std::string>();
  if (op == "var") {
    if (j.size() != 2) bad("var takes one index");
    return Term::make_var(as_natural(j[1], "variable index"));
  }
  if (op == "param") {
    if (j.size() != 2) bad("param takes one node");
    return Term::make_param(node_from_json(j[1]));
  }
  if (op == "pred") {
    if (j.size() != 2) bad("pred takes one term");
    return Term::make_pred(term_from_json(j[1]));
  }
  if (op == "meet") {
    if (j.size() != 3) bad("meet takes two terms");
    return Term::make_meet(term_from_json(j[1]), term_from_json(j[2]));
  }
  bad("unknown term operator \"" + op + "\"");
}

Formula formula_from_json(const Json& j) {
  if (j.is_boolean()) return Formula::lit(j.get<bool>());
  if (!j.is_array() || j.empty() || !j[0].is_string())
    bad("a formula must be a boolean literal or [op, ...]");
  std::string op = j[0].get<std::string>();
  if (op == "le" || op == "eq") {
    if (j.size() != 3) bad(op + " takes two terms");
    Term s = term_from_json(j[1]);
    Term t = term_from_json(j[2]);
    return op == "le" ? Formula::le(std::move(s), std::move(t))
                      : Formula::eq(std::move(s), std::move(t));
  }
  if (op == "P") {
    if (j.size() != 3) bad("P takes a plan path and a term");
    return Formula::at(path_from_json(j[1], "plan path"), term_from_json(j[2]));
  }
  if (op == "rel") {
    if (j.size() < 2) bad("rel needs arguments");
    std::vector<Term> args;
    for (size_t i = 1; i < j.size(); ++i) args.push_back(term_from_json(j[i]));
    return Formula::rel(std::move(args));
  }
  if (op == "and" || op == "or") {
    std::vector<Formula> fs;
    for (size_t i = 1; i < j.size(); ++i) fs.push_back(formula_from_json(j[i]));
    return op == "and" ? Formula::conj(std::move(fs)) : Formula::disj(std::move(fs));
  }
  if (op == "not") {
    if (j.size() != 2) bad("not takes one formula");
    return Formula::neg(formula_from_json(j[1]));
  }
  bad("unknown formula operator \"" + op + "\"");
}

SetSpec set_spec_from_json(const Json& j) {
  expect_keys(j, {"params", "arity"}, {"formula", "types", "relations"}, "set file");
  SetSpec s;
  s.params = nodes_from_json(j["params"], "params");
  s.arity = as_natural(j["arity"], "arity");
  if (s.arity < 1) bad("arity must be at least 1");
  bool has_formula = j.contains("formula");
  bool has_types = j.contains("types");
  if (has_formula == has_types) bad("exactly one of \"formula\" and \"types\" is required");
  if (has_formula) {
    s.formula = formula_from_json(j["formula"]);
  } else {
    if (!j["types"].is_array()) bad("types must be an array of descriptor ids");
    std::vector<std::string> ids;
    for (const Json& e : j["types"]) {
      if (!e.is_string()) bad("descriptor ids are strings");
      ids.push_back(e.get<std::string>());
    }
    s.type_ids = std::move(ids);
  }
  if (j.contains("relations")) s.relations = relations_from_json(j["relations"]);
  return s;
}

TypeSpec type_spec_from_json(const Json& j) {
  expect_keys(j, {"params", "tuple"}, {"relations"}, "type file");
  TypeSpec t;
  t.params = nodes_from_json(j["params"], "params");
  t.tuple = nodes_from_json(j["tuple"], "tuple");
  if (j.contains("relations")) t.relations = relations_from_json(j["relations"]);
  return t;
}

void materialize_nodes(Fragment& f, const std::vector<GammaNode>& nodes,
                       const std::vector<std::vector<GammaNode>>& relations) {
  // declared tuples, normalized per theory, plus the original order for the
  // completeness pass at the end
  std::set<std::pair<ComponentKey, std::vector<ElementId>>> declared;
  std::vector<std::pair<ComponentKey, std::vector<ElementId>>> decl_list;
  for (const auto& rel : relations) {
    if (rel.empty()) bad("a relation needs arguments");
    ComponentKey key;
    std::vector<ElementId> args;
    for (const GammaNode& a : rel) {
      if (a.is_root() || !plan_admits(f.plan, a) || a.steps.back().tag == kStar)
        bad("relation argument " + to_string(a) + " is not a component member");
      if (args.empty())
        key = component_key(a);
      else if (!(component_key(a) == key))
        bad("relation arguments span distinct components");
      args.push_back(a.steps.back().tag);
    }
    const ComponentTheory& th = theory(f.plan.component(key.path));
    if (static_cast<int>(args.size()) != th.relation().arity)
      bad("relation arity does not fit the " + th.id() + " component");
    std::vector<ElementId> norm = args;
    if (th.symmetric_relation()) std::sort(norm.begin(), norm.end());
    declared.insert({key, std::move(norm)});
    decl_list.push_back({key, std::move(args)});
  }

  for (const GammaNode& want : nodes) {
    if (!plan_admits(f.plan, want)) bad("node " + to_string(want) + " is not plan-admitted");
    for (int len = 1; len <= want.height(); ++len) {
      GammaNode p = prefix(want, len);
      if (f.contains(p)) continue;
      const Step& step = p.steps.back();
      if (step.tag == kStar) bad("fragment is not tree-closed at " + to_string(parent(p)));
      ComponentKey key{parent(p), plan_path(p)};
      const ComponentTheory& th = theory(f.plan.component(key.path));
      auto it = f.components.find(key);
      ComponentState st = it == f.components.end() ? ComponentState{} : it->second;
      if (st.elements.count(step.tag))
        bad("element id " + std::to_string(step.tag) + " is already taken in " + to_string(key));
      const ElementId x = step.tag;
      std::vector<ElementId> existing(st.elements.begin(), st.elements.end());
      st.elements.insert(x);
      const int arity = th.relation().arity;
      if (arity == 2 && th.symmetric_relation()) {
        for (ElementId u : existing) {
          std::vector<ElementId> pair{std::min(x, u), std::max(x, u)};
          if (declared.count({key, pair})) th.add_relation(st, pair);
        }
      } else if (arity == 2) {
        for (ElementId u : existing) {
          if (declared.count({key, {x, u}}))
            th.add_relation(st, {x, u});
          else if (declared.count({key, {u, x}}))
            th.add_relation(st, {u, x});
          else if (x < u)  // unspecified orientations run low id to high id
            th.add_relation(st, {x, u});
          else
            th.add_relation(st, {u, x});
        }
      } else if (arity == 3) {
        for (size_t i = 0; i < existing.size(); ++i) {
          for (size_t k = i + 1; k < existing.size(); ++k) {
            std::vector<ElementId> tri{existing[i], existing[k], x};
            std::sort(tri.begin(), tri.end());
            if (declared.count({key, tri})) th.add_relation(st, tri);
          }
        }
      }
      f.components[key] = std::move(st);
      f.nodes.insert(p);
      f.nodes = tree_closure(f.plan, f.nodes);
    }
  }

  for (const auto& [key, args] : decl_list) {
    auto it = f.components.find(key);
    if (it == f.components.end()) bad("relation references an absent component");
    const ComponentTheory& th = theory(f.plan.component(key.path));
    for (ElementId e : args)
      if (!it->second.elements.count(e))
        bad("relation references element " + std::to_string(e) + " absent from " +
            to_string(key));
    if (!th.related(it->second, args)) th.add_relation(it->second, args);
  }
}

Json dim_meas_to_json(const DimMeas& h) {
  Json j;
  j["dim"] = h.dim;
  j["meas"] = rat_to_string(h.meas);
  return j;
}

Json report_to_json(const CheckReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["instances"] = r.instances;
  Json fails = Json::array();
  for (const CheckFailure& f : r.failures) {
    Json row;
    row["instance"] = f.instance;
    row["expected"] = f.expected;
    row["actual"] = f.actual;
    fails.push_back(std::move(row));
  }
  j["failures"] = std::move(fails);
  j["seed"] = r.seed;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) bad("cannot open " + path + " for writing");
  out << render_json(j);
  if (!out.good()) bad("failed writing " + path);
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace nicmeas
