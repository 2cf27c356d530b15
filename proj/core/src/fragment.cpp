#include "nicmeas/fragment.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace nicmeas {

namespace {

GammaNode child_node(const GammaNode& parent, int index, int tag) {
  GammaNode c = parent;
  c.steps.push_back(Step{index, tag});
  return c;
}

// insert the One-descendant cone of a freshly added node
void close_ones(const TreePlan& plan, NodeSet& nodes, const GammaNode& from) {
  std::vector<GammaNode> work{from};
  while (!work.empty()) {
    GammaNode cur = work.back();
    work.pop_back();
    for (const PlanPath& c : plan.children(plan_path(cur))) {
      if (plan.mult(c) != Mult::One) continue;
      GammaNode ch = child_node(cur, c.back(), kStar);
      if (nodes.insert(ch).second) work.push_back(ch);
    }
  }
}

}  // namespace

const std::string& Fragment::theory_of(const ComponentKey& k) const {
  return plan.component(k.path);
}

const ComponentState* Fragment::component(const ComponentKey& k) const {
  auto it = components.find(k);
  return it == components.end() ? nullptr : &it->second;
}

std::vector<GammaNode> Fragment::siblings(const GammaNode& a) const {
  ComponentKey key = component_key(a);
  std::vector<GammaNode> out;
  if (const ComponentState* st = component(key))
    for (ElementId e : st->elements) out.push_back(child_node(key.pred, key.path.back(), e));
  return out;
}

std::vector<std::string> Fragment::audit() const {
  std::vector<std::string> out;
  if (!tree_closed(plan, nodes)) out.push_back("node set is not tree-closed");
  for (const GammaNode& a : nodes)
    if (!plan_admits(plan, a)) out.push_back("node off-plan: " + to_string(a));

  std::map<ComponentKey, std::set<ElementId>> present;
  for (const GammaNode& a : nodes) {
    if (a.is_root()) continue;
    if (plan.contains(plan_path(a)) && plan.mult(plan_path(a)) == Mult::Inf)
      present[component_key(a)].insert(a.steps.back().tag);
  }
  for (const auto& [key, st] : components) {
    if (!plan.contains(key.path) || plan.mult(key.path) != Mult::Inf) {
      out.push_back("component key off-plan: " + to_string(key));
      continue;
    }
    if (!nodes.count(key.pred)) out.push_back("component parent missing: " + to_string(key));
    auto it = present.find(key);
    const std::set<ElementId> have = it == present.end() ? std::set<ElementId>{} : it->second;
    if (have != st.elements) out.push_back("element/node mismatch in " + to_string(key));
    for (const auto& v : theory(theory_of(key)).audit(st))
      out.push_back(to_string(key) + ": " + v);
  }
  for (const auto& [key, ids] : present)
    if (!components.count(key))
      out.push_back("nodes without component state: " + to_string(key));
  return out;
}

Fragment build_fragment(const TreePlan& plan, uint64_t seed) {
  plan.require_valid();
  Fragment f;
  f.plan = plan;
  f.seed = seed;
  f.rng = Rng(seed);
  f.nodes = tree_closure(plan, {});
  return f;
}

GammaNode realize_node(Fragment& f, const GammaNode& parent, const PlanPath& child_path,
                       const std::optional<ComponentType>& ct) {
  if (!f.contains(parent)) throw std::invalid_argument("parent is not in the fragment");
  PlanPath ppath = plan_path(parent);
  if (!f.plan.contains(child_path) || child_path.size() != ppath.size() + 1 ||
      !std::equal(ppath.begin(), ppath.end(), child_path.begin()))
    throw std::invalid_argument("not a child path of the parent");

  if (f.plan.mult(child_path) == Mult::One) {
    if (ct) throw std::invalid_argument("One children carry no component type");
    GammaNode ch = child_node(parent, child_path.back(), kStar);
    if (f.contains(ch)) throw std::invalid_argument("One child is already present");
    f.nodes.insert(ch);  // unreachable on a closed fragment; kept honest anyway
    close_ones(f.plan, f.nodes, ch);
    return ch;
  }

  if (!ct) throw std::invalid_argument("component children need a type");
  if (ct->theory != f.plan.component(child_path))
    throw std::invalid_argument("type theory does not match the plan");
  ComponentKey key{parent, child_path};
  auto it = f.components.find(key);
  ComponentState st = it == f.components.end() ? ComponentState{} : it->second;
  ElementId e = theory(ct->theory).realize(st, *ct, f.rng);
  f.components[key] = std::move(st);
  GammaNode ch = child_node(parent, child_path.back(), e);
  f.nodes.insert(ch);
  close_ones(f.plan, f.nodes, ch);
  return ch;
}

void add_relation(Fragment& f, const std::vector<GammaNode>& args) {
  if (args.empty()) throw std::invalid_argument("a relation needs arguments");
  for (const GammaNode& a : args) {
    if (a.is_root()) throw std::invalid_argument("the root carries no component");
    if (!f.contains(a)) throw std::invalid_argument("argument is not in the fragment");
  }
  ComponentKey key = component_key(args.front());
  for (const GammaNode& a : args)
    if (component_key(a) != key)
      throw std::invalid_argument("arguments span distinct components");
  if (f.plan.mult(key.path) != Mult::Inf)
    throw std::invalid_argument("arguments are not component members");
  auto it = f.components.find(key);
  if (it == f.components.end()) throw std::invalid_argument("component has no state");
  std::vector<ElementId> ids;
  for (const GammaNode& a : args) ids.push_back(a.steps.back().tag);
  theory(f.theory_of(key)).add_relation(it->second, ids);
}

GammaNode grow_random(Fragment& f) {
  std::vector<std::pair<GammaNode, PlanPath>> spots;
  for (const GammaNode& a : f.nodes)
    for (const PlanPath& c : f.plan.children(plan_path(a)))
      if (f.plan.mult(c) == Mult::Inf) spots.push_back({a, c});
  if (spots.empty()) throw std::invalid_argument("plan offers no growth points");
  const auto& [par, cpath] = spots[f.rng.pick(spots.size())];
  ComponentType t;
  t.theory = f.plan.component(cpath);
  if (const ComponentState* st = f.component(ComponentKey{par, cpath}))
    t.params.assign(st->elements.begin(), st->elements.end());
  int m = theory(t.theory).atom_count(static_cast<int>(t.params.size()));
  for (int k = 0; k < m; ++k) t.atoms.push_back(f.rng.coin());
  return realize_node(f, par, cpath, t);
}

// ---------------------------------------------------------------------------
// canonical descriptors

namespace {

constexpr size_t kMaxGroupPermutation = 8;

struct CanonContext {
  const Fragment& f;
  const NodeSet& b;
  const std::vector<GammaNode>& tuple;
  std::map<GammaNode, std::map<int, std::vector<GammaNode>>> kids;
  bool with_relations = true;

  std::string relation_block(const GammaNode& owner, const PlanPath& cpath,
                             const std::vector<GammaNode>& named,
                             const std::vector<GammaNode>& fresh,
                             const std::vector<int>& order) const {
    const ComponentTheory& th = theory(f.plan.component(cpath));
    int ar = th.relation().arity;
    std::string r = "R:";
    if (ar == 0) return r;
    const ComponentState* st = f.component(ComponentKey{owner, cpath});
    if (st == nullptr) return r;

    std::vector<std::pair<ElementId, std::string>> mem;
    for (const GammaNode& w : named)
      mem.push_back({w.steps.back().tag, "B" + to_string(w)});
    for (size_t pos = 0; pos < order.size(); ++pos)
      mem.push_back({fresh[order[pos]].steps.back().tag, "n" + std::to_string(pos)});
    if (mem.empty()) return r;

    std::vector<std::string> tuples;
    std::vector<size_t> idx(ar, 0);
    while (true) {
      bool distinct = true;
      for (int i = 0; i < ar && distinct; ++i)
        for (int j = i + 1; j < ar && distinct; ++j)
          if (idx[i] == idx[j]) distinct = false;
      if (distinct) {
        std::vector<ElementId> args;
        for (int i = 0; i < ar; ++i) args.push_back(mem[idx[i]].first);
        if (th.related(*st, args)) {
          std::string t = "(";
          for (int i = 0; i < ar; ++i) t += (i ? "," : "") + mem[idx[i]].second;
          tuples.push_back(t + ")");
        }
      }
      int k = ar - 1;
      while (k >= 0 && idx[k] == mem.size() - 1) idx[k--] = 0;
      if (k < 0) break;
      ++idx[k];
    }
    std::sort(tuples.begin(), tuples.end());
    for (const auto& t : tuples) r += t;
    return r;
  }

  std::string node(const GammaNode& v) const {
    std::string s = b.count(v) ? "B" + to_string(v) : "x";
    for (size_t i = 0; i < tuple.size(); ++i)
      if (tuple[i] == v) s += "@" + std::to_string(i);
    auto it = kids.find(v);
    if (it == kids.end()) return s;
    for (const auto& [index, group] : it->second) {
      PlanPath cpath = plan_path(v);
      cpath.push_back(index);
      s += "[" + std::to_string(index);
      if (f.plan.mult(cpath) == Mult::One) {
        s += "*" + node(group.front());
      } else {
        s += "!";
        std::vector<GammaNode> named, fresh;
        for (const GammaNode& w : group) (b.count(w) ? named : fresh).push_back(w);
        for (const GammaNode& w : named) s += "(" + node(w) + ")";
        std::vector<std::string> forms;
        for (const GammaNode& w : fresh) forms.push_back(node(w));
        if (!with_relations) {
          std::sort(forms.begin(), forms.end());
          for (const auto& c : forms) s += "{" + c + "}";
        } else {
          if (fresh.size() > kMaxGroupPermutation)
            throw std::invalid_argument("sibling group too large to canonicalize");
          std::vector<int> order(fresh.size());
          std::iota(order.begin(), order.end(), 0);
          std::string best;
          bool first = true;
          do {
            std::string cand;
            for (int j : order) cand += "{" + forms[j] + "}";
            cand += relation_block(v, cpath, named, fresh, order);
            if (first || cand < best) {
              best = std::move(cand);
              first = false;
            }
          } while (std::next_permutation(order.begin(), order.end()));
          s += best;
        }
      }
      s += "]";
    }
    return s;
  }
};

}  // namespace

std::string to_string(const TypeDescriptor& d) { return d.canonical; }

TypeDescriptor type_descriptor(const Fragment& f, const std::vector<GammaNode>& tuple,
                               const NodeSet& b) {
  if (!tree_closed(f.plan, b)) throw std::invalid_argument("parameter set is not tree-closed");
  for (const GammaNode& a : b)
    if (!f.contains(a)) throw std::invalid_argument("parameter node is not in the fragment");
  for (const GammaNode& a : tuple)
    if (!f.contains(a)) throw std::invalid_argument("tuple node is not in the fragment");

  NodeSet n = b;
  for (const GammaNode& a : tuple) n.insert(a);
  n = tree_closure(f.plan, n);

  CanonContext ctx{f, b, tuple, {}, true};
  for (const GammaNode& w : n) {
    if (w.is_root()) continue;
    ctx.kids[parent(w)][w.steps.back().index].push_back(w);
  }

  TypeDescriptor d;
  d.arity = static_cast<int>(tuple.size());
  std::string head = "T" + std::to_string(d.arity) + ";";
  d.canonical = head + ctx.node(GammaNode{});
  ctx.with_relations = false;
  d.tree_only = head + ctx.node(GammaNode{});
  return d;
}

// ---------------------------------------------------------------------------
// type enumeration

namespace {

// descending plan paths from base whose first link is a component level
std::vector<std::vector<PlanPath>> descend_chains(const TreePlan& plan, const PlanPath& base) {
  std::vector<std::vector<PlanPath>> out;
  std::vector<PlanPath> acc;
  std::function<void()> rec = [&]() {
    if (!acc.empty()) out.push_back(acc);
    const PlanPath& tip = acc.empty() ? base : acc.back();
    for (const PlanPath& c : plan.children(tip)) {
      if (acc.empty() && plan.mult(c) != Mult::Inf) continue;
      acc.push_back(c);
      rec();
      acc.pop_back();
    }
  };
  rec();
  return out;
}

}  // namespace

void visit_realizations(
    const Fragment& f, int n, const NodeSet& b, int budget,
    const std::function<bool(const Fragment&, const std::vector<GammaNode>&)>& fn) {
  if (!tree_closed(f.plan, b)) throw std::invalid_argument("parameter set is not tree-closed");
  for (const GammaNode& a : b)
    if (!f.contains(a)) throw std::invalid_argument("parameter node is not in the fragment");
  if (n < 0) throw std::invalid_argument("negative arity");
  int need = n * (f.plan.height() + 1);
  if (budget < need)
    throw BudgetError("node budget " + std::to_string(budget) + " is below the required " +
                      std::to_string(need));

  std::vector<GammaNode> coords;
  bool stop = false;

  std::function<void(const Fragment&, const NodeSet&, int)> rec =
      [&](const Fragment& cur, const NodeSet& curb, int used) {
        if (stop) return;
        if (static_cast<int>(coords.size()) == n) {
          if (!fn(cur, coords)) stop = true;
          return;
        }
        for (const GammaNode& a : curb) {  // coordinate already determined over curb
          coords.push_back(a);
          rec(cur, curb, used);
          coords.pop_back();
          if (stop) return;
        }
        for (const GammaNode& e0 : curb) {
          for (const auto& chain : descend_chains(f.plan, plan_path(e0))) {
            int cost = 0;
            for (const PlanPath& p : chain)
              if (f.plan.mult(p) == Mult::Inf) ++cost;
            if (used + cost > budget)
              throw BudgetError("node budget exhausted during enumeration");

            std::vector<ElementId> params;
            if (const ComponentState* st = cur.component(ComponentKey{e0, chain.front()}))
              for (ElementId e : st->elements)
                if (curb.count(child_node(e0, chain.front().back(), e))) params.push_back(e);
            const ComponentTheory& th = theory(f.plan.component(chain.front()));

            for (const ComponentType& t : th.enumerate_1types(params)) {
              if (t.algebraic) continue;
              Fragment next = cur;
              GammaNode x = realize_node(next, e0, chain.front(), t);
              for (size_t j = 1; j < chain.size(); ++j) {
                if (f.plan.mult(chain[j]) == Mult::One) {
                  x = child_node(x, chain[j].back(), kStar);
                } else {
                  ComponentType deep;
                  deep.theory = f.plan.component(chain[j]);
                  x = realize_node(next, x, chain[j], deep);
                }
              }
              NodeSet nb = curb;
              nb.insert(x);
              nb = tree_closure(f.plan, nb);
              coords.push_back(x);
              rec(next, nb, used + cost);
              coords.pop_back();
              if (stop) return;
            }
          }
        }
      };

  rec(f, b, 0);
}

std::vector<TypeDescriptor> enumerate_types(const Fragment& f, int n, const NodeSet& b,
                                            int budget) {
  std::set<TypeDescriptor> out;
  visit_realizations(f, n, b, budget,
                     [&](const Fragment& cur, const std::vector<GammaNode>& coords) {
                       out.insert(type_descriptor(cur, coords, b));
                       return true;
                     });
  return std::vector<TypeDescriptor>(out.begin(), out.end());
}

// ---------------------------------------------------------------------------
// generator automorphisms

GammaNode apply_generator(const GeneratorAutomorphism& g, const GammaNode& a) {
  size_t depth = g.key.path.size();
  if (a.steps.size() < depth) return a;
  if (prefix(a, static_cast<int>(depth) - 1) != g.key.pred) return a;
  const Step& s = a.steps[depth - 1];
  if (s.index != g.key.path.back()) return a;
  auto it = g.perm.find(s.tag);
  if (it == g.perm.end()) return a;
  GammaNode m = a;
  m.steps[depth - 1].tag = it->second;
  return m;
}

Fragment apply_generator(const Fragment& f, const GeneratorAutomorphism& g) {
  auto self = f.components.find(g.key);
  if (self == f.components.end()) throw std::invalid_argument("no such component");
  const ComponentState& st = self->second;
  if (g.perm.size() != st.elements.size())
    throw std::invalid_argument("permutation does not cover the component");
  std::set<ElementId> image;
  for (const auto& [from, to] : g.perm) {
    if (!st.elements.count(from) || !st.elements.count(to))
      throw std::invalid_argument("permutation names a foreign element");
    image.insert(to);
  }
  if (image != st.elements) throw std::invalid_argument("not a permutation of the component");
  const ComponentTheory& th = theory(f.theory_of(g.key));
  if (!th.is_automorphism(st, g.perm))
    throw std::invalid_argument("permutation does not preserve the component structure");

  Fragment out;
  out.plan = f.plan;
  out.seed = f.seed;
  out.rng = f.rng;
  for (const GammaNode& a : f.nodes) out.nodes.insert(apply_generator(g, a));
  for (const auto& [key, state] : f.components) {
    ComponentKey nk{apply_generator(g, key.pred), key.path};
    if (key == g.key) {
      ComponentState ns;
      ns.elements = state.elements;
      for (const auto& tup : state.relations) {
        std::vector<ElementId> mapped;
        for (ElementId e : tup) mapped.push_back(g.perm.at(e));
        th.add_relation(ns, mapped);
      }
      out.components[nk] = std::move(ns);
    } else {
      out.components[nk] = state;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// partial isomorphisms

void PartialMap::insert(const GammaNode& from, const GammaNode& to) {
  if (fwd.count(from)) throw std::invalid_argument("domain node mapped twice");
  if (inv.count(to)) throw std::invalid_argument("image node used twice");
  fwd[from] = to;
  inv[to] = from;
}

PartialMap PartialMap::identity_on(const NodeSet& b) {
  PartialMap pm;
  for (const GammaNode& a : b) pm.insert(a, a);
  return pm;
}

GammaNode extend_embedding(Fragment& f, PartialMap& pm, const GammaNode& b, bool fresh_only) {
  if (b.is_root()) throw std::invalid_argument("the root maps to itself");
  if (pm.in_dom(b)) throw std::invalid_argument("node is already in the domain");
  if (!f.contains(b)) throw std::invalid_argument("node is not in the fragment");
  GammaNode par = parent(b);
  if (!pm.in_dom(par)) throw std::invalid_argument("parent is not in the domain");
  GammaNode ipar = pm.at(par);
  PlanPath bpath = plan_path(b);

  GammaNode img;
  if (f.plan.mult(bpath) == Mult::One) {
    img = child_node(ipar, bpath.back(), kStar);
  } else {
    ComponentKey dkey{par, bpath};
    const ComponentState& dst = *f.component(dkey);
    std::vector<ElementId> dparams, iparams;
    for (ElementId e : dst.elements) {
      GammaNode sib = child_node(par, bpath.back(), e);
      if (pm.in_dom(sib)) {
        dparams.push_back(e);
        iparams.push_back(pm.at(sib).steps.back().tag);
      }
    }
    const ComponentTheory& th = theory(f.theory_of(dkey));
    ComponentType want = th.type_of(dst, b.steps.back().tag, dparams);
    want.params = iparams;

    bool found = false;
    if (!fresh_only) {
      if (const ComponentState* ist = f.component(ComponentKey{ipar, bpath})) {
        for (ElementId c : ist->elements) {
          GammaNode cand = child_node(ipar, bpath.back(), c);
          if (pm.in_img(cand)) continue;
          ComponentType got = th.type_of(*ist, c, iparams);
          if (!got.algebraic && got.atoms == want.atoms) {
            img = cand;
            found = true;
            break;
          }
        }
      }
    }
    if (!found) img = realize_node(f, ipar, bpath, want);
  }
  pm.insert(b, img);

  // both sides stay tree-closed: carry the One cones along
  std::vector<std::pair<GammaNode, GammaNode>> work{{b, img}};
  while (!work.empty()) {
    auto [d, i] = work.back();
    work.pop_back();
    for (const PlanPath& c : f.plan.children(plan_path(d))) {
      if (f.plan.mult(c) != Mult::One) continue;
      GammaNode dc = child_node(d, c.back(), kStar);
      GammaNode ic = child_node(i, c.back(), kStar);
      if (!pm.in_dom(dc)) {
        pm.insert(dc, ic);
        work.push_back({dc, ic});
      }
    }
  }
  return img;
}

namespace {

void extend_through_chain(Fragment& f, PartialMap& pm, const GammaNode& x) {
  int base = 0;
  for (int i = x.height(); i >= 0; --i)
    if (pm.in_dom(prefix(x, i))) {
      base = i;
      break;
    }
  for (int i = base + 1; i <= x.height(); ++i) {
    GammaNode y = prefix(x, i);
    if (!pm.in_dom(y)) extend_embedding(f, pm, y);
  }
}

}  // namespace

PartialMap ladder_isomorphism(Fragment& f, PartialMap pm, int max_stages) {
  for (int stage = 0; stage < max_stages; ++stage) {
    if (pm.fwd.size() == f.nodes.size() && pm.inv.size() == f.nodes.size()) return pm;

    GammaNode next;
    bool have = false;
    for (const GammaNode& x : f.nodes)
      if (!pm.in_dom(x)) {
        next = x;
        have = true;
        break;
      }
    if (have) extend_through_chain(f, pm, next);

    have = false;
    for (const GammaNode& x : f.nodes)
      if (!pm.in_img(x)) {
        next = x;
        have = true;
        break;
      }
    if (have) {
      PartialMap rev;
      rev.fwd = pm.inv;
      rev.inv = pm.fwd;
      extend_through_chain(f, rev, next);
      pm.fwd = rev.inv;
      pm.inv = rev.fwd;
    }
  }
  if (pm.fwd.size() == f.nodes.size() && pm.inv.size() == f.nodes.size()) return pm;
  throw std::runtime_error("embedding ladder did not close");
}

std::vector<GammaNode> realize_copy(Fragment& f, const std::vector<GammaNode>& tuple,
                                    const NodeSet& b) {
  if (!tree_closed(f.plan, b)) throw std::invalid_argument("parameter set is not tree-closed");
  for (const GammaNode& a : b)
    if (!f.contains(a)) throw std::invalid_argument("parameter node is not in the fragment");
  for (const GammaNode& a : tuple)
    if (!f.contains(a)) throw std::invalid_argument("tuple node is not in the fragment");

  NodeSet n = b;
  for (const GammaNode& a : tuple) n.insert(a);
  n = tree_closure(f.plan, n);

  PartialMap pm = PartialMap::identity_on(b);
  for (const GammaNode& y : n) {  // set order puts ancestors first
    if (b.count(y) || pm.in_dom(y)) continue;
    extend_embedding(f, pm, y, /*fresh_only=*/true);
  }
  std::vector<GammaNode> out;
  for (const GammaNode& a : tuple) out.push_back(pm.at(a));
  return out;
}

}  // namespace nicmeas
