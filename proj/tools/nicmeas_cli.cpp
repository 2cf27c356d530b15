#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nicmeas/json_io.hpp"
#include "nicmeas/measure.hpp"
#include "nicmeas/verify.hpp"

using namespace nicmeas;

namespace {

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << render_json(j);
  else
    save_json(out_path, j);
}

TreePlan load_plan(const std::string& path) { return plan_from_json(load_json(path)); }

Fragment grown_fragment(const TreePlan& plan, uint64_t seed, int max_nodes) {
  Fragment f = build_fragment(plan, seed);
  while (static_cast<int>(f.nodes.size()) < max_nodes) grow_random(f);
  return f;
}

NodeSet closed_params(const Fragment& f, const std::vector<GammaNode>& params) {
  return tree_closure(f.plan, NodeSet(params.begin(), params.end()));
}

std::vector<TypeDescriptor> resolve_type_ids(const Fragment& f, const SetSpec& s,
                                             const NodeSet& c) {
  auto all = enumerate_types(f, s.arity, c, kDefaultBudget);
  std::map<std::string, TypeDescriptor> by_id;
  for (const TypeDescriptor& d : all) by_id.emplace(d.canonical, d);
  std::vector<TypeDescriptor> out;
  for (const std::string& id : *s.type_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw std::invalid_argument("unknown descriptor id: " + id);
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite coordinatized tree fragments: build, measure, verify"};
  app.require_subcommand(1);

  std::string plan_path, set_path, type_path, out_path, validate_file;
  std::string suite = "all";
  uint64_t seed = 0;
  int max_nodes = 10;
  int trials = 50;

  auto* validate = app.add_subcommand("plan-validate", "Check a plan file");
  validate->add_option("file", validate_file, "plan file");
  validate->add_option("--plan", plan_path, "plan file");

  auto* build = app.add_subcommand("fragment-build", "Grow a seeded fragment and dump it");
  build->add_option("--plan", plan_path, "plan file")->required();
  build->add_option("--seed", seed, "random seed");
  build->add_option("--max-nodes", max_nodes, "grow until this many nodes");
  build->add_option("--out", out_path, "write here instead of standard output");

  auto* measure = app.add_subcommand("measure", "Dimension and measure of a type or set");
  measure->add_option("--plan", plan_path, "plan file")->required();
  measure->add_option("--set", set_path, "definable-set file");
  measure->add_option("--type", type_path, "type file");
  measure->add_option("--seed", seed, "random seed");
  measure->add_option("--out", out_path, "write here instead of standard output");

  auto* dec = app.add_subcommand("decompose", "Complete types consistent with a formula");
  dec->add_option("--plan", plan_path, "plan file")->required();
  dec->add_option("--set", set_path, "definable-set file with a formula body")->required();
  dec->add_option("--seed", seed, "random seed");
  dec->add_option("--out", out_path, "write here instead of standard output");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--plan", plan_path, "plan file")->required();
  verify->add_option("--suite", suite, "suite bundle")
      ->check(CLI::IsMember({"cms", "ms", "nic", "oracle", "all"}));
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--max-nodes", max_nodes, "fragment growth bound");
  verify->add_option("--trials", trials, "sampled instances per suite");
  verify->add_option("--out", out_path, "write here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate->parsed()) {
      std::string path = !validate_file.empty() ? validate_file : plan_path;
      if (path.empty()) {
        std::cerr << "plan-validate needs a plan file\n";
        return 2;
      }
      Json violations = Json::array();
      try {
        plan_from_json(load_json(path));
      } catch (const std::exception& e) {
        violations.push_back(e.what());
      }
      Json j;
      j["valid"] = violations.empty();
      j["violations"] = violations;
      emit(j, out_path);
      return violations.empty() ? 0 : 2;
    }

    if (build->parsed()) {
      emit(fragment_to_json(grown_fragment(load_plan(plan_path), seed, max_nodes)), out_path);
      return 0;
    }

    if (measure->parsed()) {
      if (set_path.empty() == type_path.empty()) {
        std::cerr << "measure needs exactly one of --set and --type\n";
        return 2;
      }
      Fragment f = build_fragment(load_plan(plan_path), seed);
      DimMeas h;
      if (!type_path.empty()) {
        TypeSpec t = type_spec_from_json(load_json(type_path));
        std::vector<GammaNode> all = t.params;
        all.insert(all.end(), t.tuple.begin(), t.tuple.end());
        materialize_nodes(f, all, t.relations);
        h = dim_meas_tuple(f, t.tuple, closed_params(f, t.params));
      } else {
        SetSpec s = set_spec_from_json(load_json(set_path));
        materialize_nodes(f, s.params, s.relations);
        DefinableSet x;
        x.params = closed_params(f, s.params);
        x.arity = s.arity;
        if (s.formula)
          x.formula = *s.formula;
        else
          x.types = resolve_type_ids(f, s, x.params);
        h = dim_meas_definable(f, x);
      }
      emit(dim_meas_to_json(h), out_path);
      return 0;
    }

    if (dec->parsed()) {
      SetSpec s = set_spec_from_json(load_json(set_path));
      if (!s.formula) {
        std::cerr << "decompose needs a formula body\n";
        return 2;
      }
      Fragment f = build_fragment(load_plan(plan_path), seed);
      materialize_nodes(f, s.params, s.relations);
      auto types = decompose(f, *s.formula, s.arity, closed_params(f, s.params));
      Json rows = Json::array();
      for (const TypeDescriptor& d : types) {
        Json row;
        row["canonical"] = d.canonical;
        row["tree_only"] = d.tree_only;
        rows.push_back(std::move(row));
      }
      Json j;
      j["arity"] = s.arity;
      j["count"] = types.size();
      j["types"] = std::move(rows);
      emit(j, out_path);
      return 0;
    }

    Fragment f = grown_fragment(load_plan(plan_path), seed, max_nodes);
    auto reports = run_suite(suite, f, trials, seed);
    Json arr = Json::array();
    bool ok = true;
    for (const CheckReport& r : reports) {
      ok = ok && r.passed();
      arr.push_back(report_to_json(r));
    }
    emit(arr, out_path);
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
