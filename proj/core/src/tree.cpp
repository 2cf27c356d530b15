#include "nicmeas/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace nicmeas {

TreePlan& TreePlan::add(PlanPath path, Mult m, std::string component) {
  entries_[std::move(path)] = PlanEntry{m, std::move(component)};
  return *this;
}

Mult TreePlan::mult(const PlanPath& p) const {
  auto it = entries_.find(p);
  if (it == entries_.end()) throw std::invalid_argument("plan has no entry at " + to_string(p));
  return it->second.mult;
}

const std::string& TreePlan::component(const PlanPath& p) const {
  auto it = entries_.find(p);
  if (it == entries_.end()) throw std::invalid_argument("plan has no entry at " + to_string(p));
  return it->second.component;
}

std::vector<PlanPath> TreePlan::children(const PlanPath& p) const {
  std::vector<PlanPath> out;
  for (const auto& [path, entry] : entries_) {
    if (path.size() != p.size() + 1) continue;
    if (std::equal(p.begin(), p.end(), path.begin())) out.push_back(path);
  }
  return out;
}

int TreePlan::height() const {
  size_t h = 0;
  for (const auto& [path, entry] : entries_) h = std::max(h, path.size());
  return static_cast<int>(h);
}

std::vector<std::string> TreePlan::validate() const {
  std::vector<std::string> out;
  if (entries_.empty()) {
    out.push_back("plan is empty: the root entry is required");
    return out;
  }
  auto root = entries_.find(PlanPath{});
  if (root == entries_.end()) {
    out.push_back("plan has no root entry");
  } else if (root->second.mult != Mult::One) {
    out.push_back("root must be One");
  }
  for (const auto& [path, entry] : entries_) {
    for (int i : path) {
      if (i < 0) {
        out.push_back("negative index in path " + to_string(path));
        break;
      }
    }
    if (!path.empty()) {
      PlanPath pre(path.begin(), path.end() - 1);
      if (!entries_.count(pre))
        out.push_back("path " + to_string(path) + " is missing its parent " + to_string(pre));
    }
    if (entry.mult == Mult::One && !entry.component.empty())
      out.push_back("One entry " + to_string(path) + " must not name a component");
    if (entry.mult == Mult::Inf && entry.component.empty())
      out.push_back("Inf entry " + to_string(path) + " must name a component");
  }
  return out;
}

void TreePlan::require_valid() const {
  auto v = validate();
  if (v.empty()) return;
  std::string msg = "invalid plan:";
  for (const auto& s : v) msg += "\n  " + s;
  throw std::invalid_argument(msg);
}

PlanPath plan_path(const GammaNode& a) {
  PlanPath p;
  p.reserve(a.steps.size());
  for (const Step& s : a.steps) p.push_back(s.index);
  return p;
}

GammaNode parent(const GammaNode& a) {
  if (a.is_root()) return a;
  GammaNode p = a;
  p.steps.pop_back();
  return p;
}

GammaNode prefix(const GammaNode& a, int len) {
  if (len < 0 || len > a.height()) throw std::out_of_range("prefix length out of range");
  GammaNode p;
  p.steps.assign(a.steps.begin(), a.steps.begin() + len);
  return p;
}

bool leq(const GammaNode& a, const GammaNode& b) {
  if (a.steps.size() > b.steps.size()) return false;
  return std::equal(a.steps.begin(), a.steps.end(), b.steps.begin());
}

GammaNode meet(const GammaNode& a, const GammaNode& b) {
  GammaNode m;
  size_t n = std::min(a.steps.size(), b.steps.size());
  for (size_t i = 0; i < n && a.steps[i] == b.steps[i]; ++i) m.steps.push_back(a.steps[i]);
  return m;
}

std::string to_string(const PlanPath& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

std::string to_string(const GammaNode& a) {
  std::string s = "<";
  for (const Step& st : a.steps) {
    s += "(" + std::to_string(st.index) + ",";
    s += st.tag == kStar ? "*" : "#" + std::to_string(st.tag);
    s += ")";
  }
  return s + ">";
}

std::string to_string(const NodeSet& b) {
  std::string s = "{";
  bool first = true;
  for (const auto& n : b) {
    if (!first) s += ", ";
    first = false;
    s += to_string(n);
  }
  return s + "}";
}

bool plan_admits(const TreePlan& plan, const GammaNode& a) {
  PlanPath p;
  for (const Step& s : a.steps) {
    p.push_back(s.index);
    if (!plan.contains(p)) return false;
    bool star = s.tag == kStar;
    if (plan.mult(p) == Mult::One ? !star : star) return false;
    if (!star && s.tag < 0) return false;
  }
  return plan.contains(PlanPath{});
}

ComponentKey component_key(const GammaNode& a) {
  if (a.is_root()) throw std::invalid_argument("the root belongs to no component");
  return ComponentKey{parent(a), plan_path(a)};
}

std::string to_string(const ComponentKey& k) {
  return "(" + to_string(k.pred) + "," + to_string(k.path) + ")";
}

NodeSet tree_closure(const TreePlan& plan, const NodeSet& b) {
  NodeSet out;
  out.insert(GammaNode{});
  for (const auto& n : b) {
    GammaNode cur;
    out.insert(cur);
    for (const Step& s : n.steps) {
      cur.steps.push_back(s);
      out.insert(cur);
    }
  }
  std::vector<GammaNode> work(out.begin(), out.end());
  while (!work.empty()) {
    GammaNode n = std::move(work.back());
    work.pop_back();
    for (const PlanPath& c : plan.children(plan_path(n))) {
      if (plan.mult(c) != Mult::One) continue;
      GammaNode child = n;
      child.steps.push_back(Step{c.back(), kStar});
      if (out.insert(child).second) work.push_back(child);
    }
  }
  return out;
}

bool tree_closed(const TreePlan& plan, const NodeSet& b) { return tree_closure(plan, b) == b; }

GammaNode meet_closure(const TreePlan& plan, const GammaNode& a, const NodeSet& b) {
  NodeSet cl = tree_closure(plan, b);
  GammaNode best;  // the root, always a member
  GammaNode cur;
  for (const Step& s : a.steps) {
    cur.steps.push_back(s);
    if (!cl.count(cur)) break;  // closures are downward closed
    best = cur;
  }
  return best;
}

}  // namespace nicmeas
