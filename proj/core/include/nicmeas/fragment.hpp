#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nicmeas/component.hpp"
#include "nicmeas/rng.hpp"
#include "nicmeas/tree.hpp"

namespace nicmeas {

// Thrown when an enumeration is asked to run with too small a node budget;
// the caller must raise the budget rather than accept a truncated answer.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite materialized piece of the coordinatized structure: a tree-closed
// node set plus one relational state per touched sibling family. Relations
// live strictly inside component states, so cross-component interaction is
// unrepresentable by construction.
struct Fragment {
  TreePlan plan;
  NodeSet nodes;
  std::map<ComponentKey, ComponentState> components;
  uint64_t seed = 0;
  Rng rng{0};

  bool contains(const GammaNode& a) const { return nodes.count(a) != 0; }
  const std::string& theory_of(const ComponentKey& k) const;
  const ComponentState* component(const ComponentKey& k) const;

  // M(a): every materialized sibling of a, including a itself. pre: Inf path.
  std::vector<GammaNode> siblings(const GammaNode& a) const;

  // Structural violations: closure, node/element correspondence, per-theory
  // relation audits. Empty list == healthy.
  std::vector<std::string> audit() const;
};

// Fragment holding exactly tcl(emptyset). Throws on an invalid plan.
Fragment build_fragment(const TreePlan& plan, uint64_t seed);

// Adds a fresh child of parent at child_path. Inf children take a
// nonalgebraic component type over registered elements (remaining adjacency
// pinned by the fragment's rng); the result is re-closed, so requesting a One
// child always reports it as already present. Returns the new node.
GammaNode realize_node(Fragment& f, const GammaNode& parent, const PlanPath& child_path,
                       const std::optional<ComponentType>& ct = std::nullopt);

// Registers a relation between already-realized siblings; args must live in
// one component (anything else is rejected — nil interaction).
void add_relation(Fragment& f, const std::vector<GammaNode>& args);

// One random plan-admissible extension: uniform over (parent, Inf child path)
// pairs, atoms vs existing siblings flipped fairly. Returns the new node.
GammaNode grow_random(Fragment& f);

// Canonical form of the type of a tuple over a tree-closed parameter set:
// the labeled tree on tcl(B + tuple) with parameters named, fresh nodes
// anonymized per sibling group by the lexicographically minimal ordering, and
// all component relations folded in. tree_only drops the relation data.
struct TypeDescriptor {
  int arity = 0;
  std::string canonical;
  std::string tree_only;
  auto operator<=>(const TypeDescriptor&) const = default;
};
std::string to_string(const TypeDescriptor& d);

TypeDescriptor type_descriptor(const Fragment& f, const std::vector<GammaNode>& tuple,
                               const NodeSet& b);

// The complete list of n-types over b, sorted by canonical form. Every type
// is reachable by adding at most n chains of at most height(plan) fresh
// nodes, so a budget below n*(height+1) realizations is refused outright.
std::vector<TypeDescriptor> enumerate_types(const Fragment& f, int n, const NodeSet& b,
                                            int budget);

// The branch walk behind enumerate_types: fn receives each realized
// coordinate tuple together with the branch fragment it lives in. Distinct
// branches may realize the same type; return false to stop the walk.
void visit_realizations(const Fragment& f, int n, const NodeSet& b, int budget,
                        const std::function<bool(const Fragment&, const std::vector<GammaNode>&)>& fn);

// An automorphism moving one component and dragging its subtrees along:
// identity everywhere outside the upward cone of the keyed sibling family.
struct GeneratorAutomorphism {
  ComponentKey key;
  std::map<ElementId, ElementId> perm;
};

// Relabels the moved coordinate throughout the cone and transports every
// nested component state. perm must be an automorphism of the keyed state.
Fragment apply_generator(const Fragment& f, const GeneratorAutomorphism& g);
GammaNode apply_generator(const GeneratorAutomorphism& g, const GammaNode& a);

// A partial isomorphism between tree-closed subsets of one fragment.
struct PartialMap {
  std::map<GammaNode, GammaNode> fwd;
  std::map<GammaNode, GammaNode> inv;

  bool in_dom(const GammaNode& a) const { return fwd.count(a) != 0; }
  bool in_img(const GammaNode& a) const { return inv.count(a) != 0; }
  const GammaNode& at(const GammaNode& a) const { return fwd.at(a); }
  void insert(const GammaNode& from, const GammaNode& to);
  static PartialMap identity_on(const NodeSet& b);
};

// Extends pm to b (pre: b fresh, parent(b) already mapped): picks an unused
// sibling with the matching transported component type, or realizes one when
// none exists (always, under fresh_only). Returns the chosen image.
GammaNode extend_embedding(Fragment& f, PartialMap& pm, const GammaNode& b,
                           bool fresh_only = false);

// The alternating ladder: walk every node (and every node realized along the
// way), extending domain on odd stages and image on even stages, until pm is
// a total automorphism of the grown fragment. Throws after max_stages.
PartialMap ladder_isomorphism(Fragment& f, PartialMap pm, int max_stages = 1000);

// Fresh tuple realizing the same type as tuple over b: parameters map to
// themselves, everything else is re-realized disjointly.
std::vector<GammaNode> realize_copy(Fragment& f, const std::vector<GammaNode>& tuple,
                                    const NodeSet& b);

}  // namespace nicmeas
