#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nicmeas/rational.hpp"
#include "nicmeas/rng.hpp"

namespace nicmeas {

using ElementId = int;

// Lifted (dimension, measure) value; (0, 0) is reserved for the empty set.
struct DimMeas {
  int dim = 0;
  Rat meas = Rat(1);
  auto operator<=>(const DimMeas&) const = default;
};
inline DimMeas tensor(const DimMeas& a, const DimMeas& b) {
  return DimMeas{a.dim + b.dim, a.meas * b.meas};
}
std::string to_string(const DimMeas& v);

struct RelationSig {
  std::string name;
  int arity = 0;  // 0: the theory has no relation
};

// Quantifier-free 1-type over an ordered parameter list inside one component.
// Nonalgebraic types are atom patterns; algebraic ones pin x to a parameter.
struct ComponentType {
  std::string theory;
  std::vector<ElementId> params;
  bool algebraic = false;
  ElementId equal_to = -1;
  std::vector<bool> atoms;
  auto operator<=>(const ComponentType&) const = default;
};

// Positional rendering, comparable across components with matching arity.
std::string pattern_string(const ComponentType& t);

// Finite induced substructure of one component.
struct ComponentState {
  std::set<ElementId> elements;
  std::set<std::vector<ElementId>> relations;  // args normalized per theory
  ElementId next_id() const { return elements.empty() ? 0 : *elements.rbegin() + 1; }
  bool operator==(const ComponentState&) const = default;
};

class ComponentTheory {
 public:
  virtual ~ComponentTheory() = default;

  virtual const std::string& id() const = 0;
  virtual RelationSig relation() const = 0;
  virtual bool symmetric_relation() const = 0;
  virtual int atom_count(int nparams) const = 0;

  // Atom k of "x over params" as stored in s.
  virtual bool atom_holds(const ComponentState& s, ElementId x,
                          const std::vector<ElementId>& params, int k) const = 0;
  // Record atom k of a diagram being realized.
  virtual void set_atom(ComponentState& s, ElementId x, const std::vector<ElementId>& params,
                        int k, bool value) const = 0;
  // Fill every relation slot between x and non-parameter elements with fair coins.
  virtual void complete(ComponentState& s, ElementId x, const std::vector<ElementId>& params,
                        Rng& rng) const = 0;
  // Relation lookup under theory normalization; false on shape mismatch.
  virtual bool related(const ComponentState& s, const std::vector<ElementId>& args) const = 0;
  // Insert one relation tuple; throws on malformed input or an axiom violation.
  virtual void add_relation(ComponentState& s, const std::vector<ElementId>& args) const = 0;
  // Structural violations of s (registration, arity, theory axioms).
  virtual std::vector<std::string> audit(const ComponentState& s) const;

  // All 1-types over the ordered parameter list: algebraic ones first, then
  // every atom pattern in binary counting order (atom 0 is the low bit).
  std::vector<ComponentType> enumerate_1types(const std::vector<ElementId>& params) const;
  ComponentType type_of(const ComponentState& s, ElementId x,
                        const std::vector<ElementId>& params) const;
  // Algebraic: (0, 1). Nonalgebraic over n parameters: (1, 2^-atom_count(n)).
  DimMeas dim_meas(const ComponentType& t) const;
  // Add one fresh element realizing the (nonalgebraic) diagram; coins fill the
  // slots the diagram leaves open. Returns the fresh id.
  ElementId realize(ComponentState& s, const ComponentType& t, Rng& rng) const;

  // Size of {candidate tuples in s sharing the tuple's q.f. type over c}.
  long orbit_count(const ComponentState& s, const std::vector<ElementId>& tuple,
                   const std::vector<ElementId>& c) const;
  // Does the total permutation of s.elements preserve the induced structure?
  bool is_automorphism(const ComponentState& s, const std::map<ElementId, ElementId>& perm) const;

 protected:
  void check_params(const ComponentState* s, const std::vector<ElementId>& params) const;
};

// Registry of the four concrete theories:
//   pure_set, random_graph, random_tournament, random_3hypergraph
const ComponentTheory& theory(const std::string& id);
const std::vector<std::string>& theory_ids();

}  // namespace nicmeas
