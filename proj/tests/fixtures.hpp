#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "nicmeas/tree.hpp"

namespace nicmeas::fixtures {

// Single infinite family of graph vertices under the root.
//   <> One; [0] Inf random_graph
std::shared_ptr<const TreePlan> plan_p1();

// Two-level family with a One sibling branch.
//   <> One; [0] Inf pure_set; [0,0] Inf random_graph; [1] One
std::shared_ptr<const TreePlan> plan_p2();

// Mixed theories and a One link inside a chain.
//   <> One; [0] Inf random_tournament; [0,0] One; [0,0,0] Inf pure_set;
//   [1] Inf random_3hypergraph
std::shared_ptr<const TreePlan> plan_p3();

// Height-3 plan used by the closure/meet law tests.
//   <> One; [0] Inf pure_set; [0,0] One; [0,0,0] Inf random_graph;
//   [1] One; [1,0] Inf random_graph
std::shared_ptr<const TreePlan> plan_deep();

// Node literal: steps as (index, tag) pairs, tag kStar (-1) for One steps.
GammaNode gn(const std::vector<std::pair<int, int>>& steps);

// Nine hand-picked nodes over plan_deep covering every branch.
std::vector<GammaNode> deep_universe();

}  // namespace nicmeas::fixtures
