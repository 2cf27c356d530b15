#include "fixtures.hpp"

namespace nicmeas::fixtures {

std::shared_ptr<const TreePlan> plan_p1() {
  auto p = std::make_shared<TreePlan>();
  p->add({}, Mult::One).add({0}, Mult::Inf, "random_graph");
  return p;
}

std::shared_ptr<const TreePlan> plan_p2() {
  auto p = std::make_shared<TreePlan>();
  p->add({}, Mult::One)
      .add({0}, Mult::Inf, "pure_set")
      .add({0, 0}, Mult::Inf, "random_graph")
      .add({1}, Mult::One);
  return p;
}

std::shared_ptr<const TreePlan> plan_p3() {
  auto p = std::make_shared<TreePlan>();
  p->add({}, Mult::One)
      .add({0}, Mult::Inf, "random_tournament")
      .add({0, 0}, Mult::One)
      .add({0, 0, 0}, Mult::Inf, "pure_set")
      .add({1}, Mult::Inf, "random_3hypergraph");
  return p;
}

std::shared_ptr<const TreePlan> plan_deep() {
  auto p = std::make_shared<TreePlan>();
  p->add({}, Mult::One)
      .add({0}, Mult::Inf, "pure_set")
      .add({0, 0}, Mult::One)
      .add({0, 0, 0}, Mult::Inf, "random_graph")
      .add({1}, Mult::One)
      .add({1, 0}, Mult::Inf, "random_graph");
  return p;
}

GammaNode gn(const std::vector<std::pair<int, int>>& steps) {
  GammaNode n;
  for (auto [i, t] : steps) n.steps.push_back(Step{i, t});
  return n;
}

std::vector<GammaNode> deep_universe() {
  return {
      gn({}),
      gn({{0, 0}}),
      gn({{0, 1}}),
      gn({{0, 0}, {0, kStar}}),
      gn({{0, 0}, {0, kStar}, {0, 0}}),
      gn({{0, 0}, {0, kStar}, {0, 1}}),
      gn({{1, kStar}}),
      gn({{1, kStar}, {0, 0}}),
      gn({{1, kStar}, {0, 1}}),
  };
}

}  // namespace nicmeas::fixtures
