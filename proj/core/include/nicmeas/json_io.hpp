#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nicmeas/fragment.hpp"
#include "nicmeas/measure.hpp"
#include "nicmeas/verify.hpp"

namespace nicmeas {

// Key order is preserved so every emitter below is byte-deterministic.
using Json = nlohmann::ordered_json;

// Malformed input of any kind throws std::invalid_argument with a reason.

// Plan files: {"nodes":[{"path":[...], "lambda":"one"|"inf", "component":id}]}
// where "component" is present exactly on the "inf" rows. Unknown keys and
// structurally invalid plans are rejected.
Json plan_to_json(const TreePlan& plan);
TreePlan plan_from_json(const Json& j);

// Nodes are step arrays [[index, tag], ...]; the tag is null on One steps.
Json node_to_json(const GammaNode& a);
GammaNode node_from_json(const Json& j);

// Fragment dumps carry the plan, the generating seed, every node, and each
// component's elements and relation tuples. dump -> load -> dump is
// byte-identical; the live random stream is not stored, so a loaded
// fragment's future randomized growth restarts from the seed.
Json fragment_to_json(const Fragment& f);
Fragment fragment_from_json(const Json& j);

// Quantifier-free formulas as s-expressions: true/false literals, terms
// ["var",i] | ["param",node] | ["pred",t] | ["meet",t,t], and connectives
// ["le",t,t] | ["eq",t,t] | ["P",path,t] | ["rel",t...] | ["and",f...] |
// ["or",f...] | ["not",f].
Term term_from_json(const Json& j);
Formula formula_from_json(const Json& j);

// Set files: {"params":[node...], "arity":n, body, "relations":[[node...]]?}
// with body either "formula" or "types" (a list of canonical descriptor ids
// resolved against the enumerated types over the closed parameter set).
struct SetSpec {
  std::vector<GammaNode> params;
  int arity = 0;
  std::optional<Formula> formula;
  std::optional<std::vector<std::string>> type_ids;
  std::vector<std::vector<GammaNode>> relations;
};
SetSpec set_spec_from_json(const Json& j);

// Type files: {"params":[node...], "tuple":[node...], "relations":...?};
// the named tuple realizes the measured type over the closed parameter set.
struct TypeSpec {
  std::vector<GammaNode> params;
  std::vector<GammaNode> tuple;
  std::vector<std::vector<GammaNode>> relations;
};
TypeSpec type_spec_from_json(const Json& j);

// Inserts the named nodes (with their ancestors) into f, wiring the declared
// relations; undeclared slots stay empty, except tournament orientations,
// which complete from the lower element id to the higher. Relations among
// nodes that already exist are added when absent. Conflicts, inadmissible
// nodes, and cross-component relations are rejected.
void materialize_nodes(Fragment& f, const std::vector<GammaNode>& nodes,
                       const std::vector<std::vector<GammaNode>>& relations = {});

Json dim_meas_to_json(const DimMeas& h);
Json report_to_json(const CheckReport& r);

// File helpers shared by the tools: load parses and converts, save writes
// j.dump(2) plus a trailing newline.
Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);
std::string render_json(const Json& j);

}  // namespace nicmeas
