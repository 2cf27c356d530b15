#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace nicmeas {

// A plan path addresses a node of the shape tree by child indexes.
using PlanPath = std::vector<int>;

// Each plan node is realized either once (a named coordinate slot) or by an
// infinite sibling family carrying a component structure.
enum class Mult { One, Inf };

struct PlanEntry {
  Mult mult = Mult::One;
  std::string component;  // theory id; nonempty exactly when mult == Inf
};

// Finite prefix-closed shape tree. The root must exist and be One.
class TreePlan {
 public:
  TreePlan& add(PlanPath path, Mult mult, std::string component = {});

  bool contains(const PlanPath& p) const { return entries_.count(p) != 0; }
  Mult mult(const PlanPath& p) const;
  const std::string& component(const PlanPath& p) const;
  std::vector<PlanPath> children(const PlanPath& p) const;
  const std::map<PlanPath, PlanEntry>& entries() const { return entries_; }

  int height() const;  // longest path length; 0 for the root-only plan

  // Structural violations (empty list == well-formed). Reported, not thrown.
  std::vector<std::string> validate() const;
  void require_valid() const;  // throws std::invalid_argument listing violations

 private:
  std::map<PlanPath, PlanEntry> entries_;
};

// Tag on a One step: no element identity to carry.
constexpr int kStar = -1;

struct Step {
  int index = 0;
  int tag = kStar;  // kStar on One steps, component element id on Inf steps
  auto operator<=>(const Step&) const = default;
};

// A realized tree node: a sequence of (index, tag) steps from the root.
struct GammaNode {
  std::vector<Step> steps;
  auto operator<=>(const GammaNode&) const = default;
  bool is_root() const { return steps.empty(); }
  int height() const { return static_cast<int>(steps.size()); }
};

using NodeSet = std::set<GammaNode>;

PlanPath plan_path(const GammaNode& a);
GammaNode parent(const GammaNode& a);  // parent(root) == root
GammaNode prefix(const GammaNode& a, int len);
bool leq(const GammaNode& a, const GammaNode& b);  // a is a prefix of b
GammaNode meet(const GammaNode& a, const GammaNode& b);

std::string to_string(const PlanPath& p);
std::string to_string(const GammaNode& a);
std::string to_string(const NodeSet& b);

// True when a's tags are consistent with the plan (One steps star, Inf steps
// element ids) and its plan path exists.
bool plan_admits(const TreePlan& plan, const GammaNode& a);

// Sibling family containing a: same parent, same plan path.
struct ComponentKey {
  GammaNode pred;
  PlanPath path;
  auto operator<=>(const ComponentKey&) const = default;
};
ComponentKey component_key(const GammaNode& a);  // pre: !a.is_root()
std::string to_string(const ComponentKey& k);

// Tree closure: downward closure of b plus the root, then every One child of
// a member, iterated to the fixed point. Purely syntactic on the plan.
NodeSet tree_closure(const TreePlan& plan, const NodeSet& b);
bool tree_closed(const TreePlan& plan, const NodeSet& b);

// The largest member of tree_closure(b) below a; total because the root is
// always in the closure. a belongs to the closure iff this returns a itself.
GammaNode meet_closure(const TreePlan& plan, const GammaNode& a, const NodeSet& b);

}  // namespace nicmeas
