#include "nicmeas/fragment.hpp"

#include <algorithm>

#include "doctest.h"

#include "fixtures.hpp"
#include "nicmeas/tree.hpp"

using namespace nicmeas;
using fixtures::gn;
using fixtures::plan_p1;
using fixtures::plan_p2;
using fixtures::plan_p3;

namespace {

ComponentType ctype(const std::string& th, std::vector<ElementId> params,
                    std::vector<bool> atoms) {
  ComponentType t;
  t.theory = th;
  t.params = std::move(params);
  t.atoms = std::move(atoms);
  return t;
}

NodeSet tcl_of(const Fragment& f, const NodeSet& b) { return tree_closure(f.plan, b); }

}  // namespace

TEST_CASE("fragment: build materializes exactly the empty closure") {
  Fragment f1 = build_fragment(*plan_p1(), 11);
  CHECK(f1.nodes == NodeSet{gn({})});
  CHECK(f1.components.empty());
  CHECK(f1.seed == 11);

  Fragment f2 = build_fragment(*plan_p2(), 3);
  CHECK(f2.nodes == NodeSet{gn({}), gn({{1, kStar}})});

  TreePlan minimal;
  minimal.add({}, Mult::One);
  Fragment fm = build_fragment(minimal, 0);
  CHECK(fm.nodes == NodeSet{gn({})});

  TreePlan bad;
  bad.add({}, Mult::Inf, "pure_set");
  CHECK_THROWS_AS(build_fragment(bad, 0), std::invalid_argument);
}

TEST_CASE("fragment: realize_node adds typed elements and re-closes") {
  Fragment f = build_fragment(*plan_p2(), 7);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  CHECK(a0 == gn({{0, 0}}));
  CHECK(f.nodes.size() == 3);
  const ComponentState* st = f.component(ComponentKey{gn({}), {0}});
  REQUIRE(st != nullptr);
  CHECK(st->elements == std::set<ElementId>{0});

  GammaNode d = realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  CHECK(d == gn({{0, 0}, {0, 0}}));
  CHECK(f.component(ComponentKey{a0, {0, 0}}) != nullptr);

  // the One child of the root is part of every closure, so it is always taken
  CHECK_THROWS_AS(realize_node(f, gn({}), {1}), std::invalid_argument);
  CHECK(f.audit().empty());
}

TEST_CASE("fragment: realize_node auto-inserts One descendants") {
  Fragment f = build_fragment(*plan_p3(), 1);
  GammaNode t0 = realize_node(f, gn({}), {0}, ctype("random_tournament", {}, {}));
  CHECK(t0 == gn({{0, 0}}));
  CHECK(f.contains(gn({{0, 0}, {0, kStar}})));
  CHECK(f.nodes.size() == 3);
  CHECK(f.audit().empty());
}

TEST_CASE("fragment: realize_node honors requested adjacency atoms") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode v0 = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  GammaNode v1 = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {true}));
  GammaNode v2 = realize_node(f, gn({}), {0}, ctype("random_graph", {0, 1}, {false, false}));
  CHECK(v0 == gn({{0, 0}}));
  CHECK(v1 == gn({{0, 1}}));
  CHECK(v2 == gn({{0, 2}}));
  const ComponentState& st = *f.component(ComponentKey{gn({}), {0}});
  const ComponentTheory& th = theory("random_graph");
  CHECK(th.related(st, {0, 1}));
  CHECK_FALSE(th.related(st, {0, 2}));
  CHECK_FALSE(th.related(st, {1, 2}));
  CHECK(f.siblings(v0) == std::vector<GammaNode>{v0, v1, v2});
}

TEST_CASE("fragment: realize_node rejects bad requests") {
  Fragment f = build_fragment(*plan_p1(), 5);
  // unregistered parameter
  CHECK_THROWS_AS(realize_node(f, gn({}), {0}, ctype("random_graph", {7}, {true})),
                  std::invalid_argument);
  // algebraic type has no fresh witness
  ComponentType alg;
  alg.theory = "random_graph";
  alg.algebraic = true;
  alg.equal_to = 0;
  CHECK_THROWS_AS(realize_node(f, gn({}), {0}, alg), std::invalid_argument);
  // not a child path of the parent
  CHECK_THROWS_AS(realize_node(f, gn({}), {5}, ctype("random_graph", {}, {})),
                  std::invalid_argument);
  // parent absent
  CHECK_THROWS_AS(realize_node(f, gn({{0, 9}}), {0}, ctype("random_graph", {}, {})),
                  std::invalid_argument);
  // Inf child needs a type, One child refuses one
  CHECK_THROWS_AS(realize_node(f, gn({}), {0}), std::invalid_argument);
  Fragment f3 = build_fragment(*plan_p3(), 1);
  GammaNode t0 = realize_node(f3, gn({}), {0}, ctype("random_tournament", {}, {}));
  CHECK_THROWS_AS(realize_node(f3, t0, {0, 0}, ctype("pure_set", {}, {})),
                  std::invalid_argument);
}

TEST_CASE("fragment: hyperedge atoms reach pair parameters") {
  Fragment f = build_fragment(*plan_p3(), 2);
  realize_node(f, gn({}), {1}, ctype("random_3hypergraph", {}, {}));
  realize_node(f, gn({}), {1}, ctype("random_3hypergraph", {0}, {}));
  realize_node(f, gn({}), {1}, ctype("random_3hypergraph", {0, 1}, {true}));
  const ComponentState& st = *f.component(ComponentKey{gn({}), {1}});
  CHECK(theory("random_3hypergraph").related(st, {0, 1, 2}));
  CHECK(f.audit().empty());
}

TEST_CASE("fragment: same seed, same construction, same relations") {
  auto build = [](uint64_t seed) {
    Fragment f = build_fragment(*plan_p1(), seed);
    realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
    realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));  // rng completes vs 0
    realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {true}));  // rng completes vs 1
    return f;
  };
  Fragment a = build(99), b = build(99);
  CHECK(a.nodes == b.nodes);
  CHECK(a.components == b.components);
}

TEST_CASE("fragment: add_relation stays inside one component") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode v0 = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  GammaNode v1 = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {false}));
  add_relation(f, {v0, v1});
  CHECK(theory("random_graph").related(*f.component(component_key(v0)), {0, 1}));

  Fragment g = build_fragment(*plan_p2(), 5);
  GammaNode a0 = realize_node(g, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode a1 = realize_node(g, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode d0 = realize_node(g, a0, {0, 0}, ctype("random_graph", {}, {}));
  GammaNode d1 = realize_node(g, a1, {0, 0}, ctype("random_graph", {}, {}));
  CHECK_THROWS_AS(add_relation(g, {d0, d1}), std::invalid_argument);  // nil interaction
  CHECK_THROWS_AS(add_relation(g, {gn({}), a0}), std::invalid_argument);
}

TEST_CASE("fragment: grow_random keeps the invariants and the seed discipline") {
  auto grow = [](uint64_t seed) {
    Fragment f = build_fragment(*plan_p2(), seed);
    for (int i = 0; i < 10; ++i) grow_random(f);
    return f;
  };
  Fragment a = grow(12), b = grow(12);
  CHECK(a.nodes == b.nodes);
  CHECK(a.components == b.components);
  CHECK(a.audit().empty());
  CHECK(a.nodes.size() > 10);
  for (const auto& n : a.nodes) CHECK(plan_admits(a.plan, n));
}

TEST_CASE("descriptor: parameters are named, fresh nodes are not") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode b0 = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  NodeSet b = tcl_of(f, {b0});
  TypeDescriptor droot = type_descriptor(f, {gn({})}, b);
  TypeDescriptor db0 = type_descriptor(f, {b0}, b);
  CHECK(droot.arity == 1);
  CHECK(droot != db0);

  GammaNode a1 = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {true}));
  GammaNode a2 = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {true}));
  GammaNode a3 = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {false}));
  TypeDescriptor d1 = type_descriptor(f, {a1}, b);
  TypeDescriptor d2 = type_descriptor(f, {a2}, b);
  TypeDescriptor d3 = type_descriptor(f, {a3}, b);
  CHECK(d1 == d2);
  CHECK(d1 != d3);
  CHECK(d1.tree_only == d3.tree_only);  // adjacency is invisible to the tree reduct
  CHECK(d1.canonical != d3.canonical);
}

TEST_CASE("descriptor: canonical form is construction-order independent") {
  Fragment fa = build_fragment(*plan_p1(), 5);
  GammaNode x = realize_node(fa, gn({}), {0}, ctype("random_graph", {}, {}));
  GammaNode y = realize_node(fa, gn({}), {0}, ctype("random_graph", {0}, {true}));
  NodeSet base_a = tcl_of(fa, {});

  Fragment fb = build_fragment(*plan_p1(), 9);
  GammaNode u = realize_node(fb, gn({}), {0}, ctype("random_graph", {}, {}));
  GammaNode w = realize_node(fb, gn({}), {0}, ctype("random_graph", {0}, {false}));
  GammaNode v = realize_node(fb, gn({}), {0}, ctype("random_graph", {0, 1}, {true, false}));
  NodeSet base_b = tcl_of(fb, {});

  // (x,y) adjacent pair in fa; (u,v) adjacent pair in fb, built around a decoy
  CHECK(type_descriptor(fa, {x, y}, base_a) == type_descriptor(fb, {u, v}, base_b));
  // a symmetric pair reads the same from both ends
  CHECK(type_descriptor(fa, {x, y}, base_a) == type_descriptor(fb, {v, u}, base_b));
  // the non-adjacent pair is a different type
  CHECK(type_descriptor(fa, {x, y}, base_a) != type_descriptor(fb, {u, w}, base_b));
}

TEST_CASE("descriptor: arc direction is positional, not incidental") {
  Fragment f = build_fragment(*plan_p3(), 4);
  GammaNode t0 = realize_node(f, gn({}), {0}, ctype("random_tournament", {}, {}));
  GammaNode t1 = realize_node(f, gn({}), {0}, ctype("random_tournament", {0}, {true}));
  NodeSet base = tcl_of(f, {});
  TypeDescriptor fwd = type_descriptor(f, {t1, t0}, base);  // arc from coord 0 to coord 1
  TypeDescriptor rev = type_descriptor(f, {t0, t1}, base);
  CHECK(fwd != rev);

  GammaNode u0 = realize_node(f, gn({}), {0}, ctype("random_tournament", {0, 1}, {false, false}));
  GammaNode u1 =
      realize_node(f, gn({}), {0}, ctype("random_tournament", {0, 1, 2}, {false, false, true}));
  // arc(u1 -> u0): same positional orientation as (t1, t0)
  CHECK(type_descriptor(f, {u1, u0}, base) == fwd);
  CHECK(type_descriptor(f, {u0, u1}, base) == rev);
}

TEST_CASE("descriptor: repeated coordinates mark one node twice") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode x = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  GammaNode y = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {false}));
  NodeSet base = tcl_of(f, {});
  TypeDescriptor dxx = type_descriptor(f, {x, x}, base);
  TypeDescriptor dxy = type_descriptor(f, {x, y}, base);
  CHECK(dxx != dxy);
  CHECK(dxx == type_descriptor(f, {y, y}, base));
}

TEST_CASE("descriptor: named parameters inside a sibling group") {
  Fragment f = build_fragment(*plan_p2(), 5);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode d = realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  NodeSet b = tcl_of(f, {d});
  GammaNode far = realize_node(f, a0, {0, 0}, ctype("random_graph", {0}, {false}));
  GammaNode s1 = realize_node(f, a0, {0, 0}, ctype("random_graph", {0, 1}, {true, false}));
  GammaNode s2 = realize_node(f, a0, {0, 0}, ctype("random_graph", {0, 1, 2}, {true, false, false}));
  CHECK(type_descriptor(f, {s1}, b) == type_descriptor(f, {s2}, b));
  CHECK(type_descriptor(f, {s1}, b) != type_descriptor(f, {far}, b));

  // a lean fragment gives the same canonical strings: only tcl(B + tuple) counts
  Fragment g = build_fragment(*plan_p2(), 8);
  GammaNode ga0 = realize_node(g, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode gd = realize_node(g, ga0, {0, 0}, ctype("random_graph", {}, {}));
  GammaNode gs = realize_node(g, ga0, {0, 0}, ctype("random_graph", {0}, {true}));
  CHECK(type_descriptor(g, {gs}, tcl_of(g, {gd})) == type_descriptor(f, {s1}, b));
}

TEST_CASE("descriptor: single nodes over the empty closure split only by shape") {
  Fragment f = build_fragment(*plan_p2(), 5);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode a1 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode d0 = realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  GammaNode d1 = realize_node(f, a1, {0, 0}, ctype("random_graph", {}, {}));
  NodeSet base = tcl_of(f, {});
  CHECK(type_descriptor(f, {d0}, base) == type_descriptor(f, {d1}, base));
  CHECK(type_descriptor(f, {a0}, base) == type_descriptor(f, {a1}, base));
  CHECK(type_descriptor(f, {a0}, base) != type_descriptor(f, {d0}, base));
}

TEST_CASE("descriptor: ancestor orientation leaks into the full form only") {
  // Over a parameter set meeting the tournament level, two deep pure_set
  // nodes with opposite ancestor orientations share the tree form but not
  // the full form.
  Fragment f = build_fragment(*plan_p3(), 4);
  GammaNode t0 = realize_node(f, gn({}), {0}, ctype("random_tournament", {}, {}));
  GammaNode t1 = realize_node(f, gn({}), {0}, ctype("random_tournament", {0}, {true}));
  GammaNode t2 = realize_node(f, gn({}), {0}, ctype("random_tournament", {0, 1}, {false, false}));
  GammaNode e1 = realize_node(f, gn({{0, 1}, {0, kStar}}), {0, 0, 0}, ctype("pure_set", {}, {}));
  GammaNode e2 = realize_node(f, gn({{0, 2}, {0, kStar}}), {0, 0, 0}, ctype("pure_set", {}, {}));
  NodeSet c = tcl_of(f, {t0});
  TypeDescriptor d1 = type_descriptor(f, {e1}, c);
  TypeDescriptor d2 = type_descriptor(f, {e2}, c);
  CHECK(d1.tree_only == d2.tree_only);
  CHECK(d1.canonical != d2.canonical);
}

TEST_CASE("descriptor: rejects malformed inputs") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode v = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  CHECK_THROWS_AS(type_descriptor(f, {v}, NodeSet{v}), std::invalid_argument);  // not closed
  CHECK_THROWS_AS(type_descriptor(f, {gn({{0, 9}})}, tcl_of(f, {})), std::invalid_argument);
  NodeSet foreign = tcl_of(f, {gn({{0, 9}})});
  CHECK_THROWS_AS(type_descriptor(f, {v}, foreign), std::invalid_argument);
}

TEST_CASE("enumerate: frozen small counts") {
  Fragment f1 = build_fragment(*plan_p1(), 5);
  CHECK(enumerate_types(f1, 1, tcl_of(f1, {}), 10).size() == 2);

  GammaNode b0 = realize_node(f1, gn({}), {0}, ctype("random_graph", {}, {}));
  CHECK(enumerate_types(f1, 1, tcl_of(f1, {b0}), 10).size() == 4);
  CHECK(enumerate_types(f1, 2, tcl_of(f1, {}), 10).size() == 6);

  TreePlan minimal;
  minimal.add({}, Mult::One);
  Fragment fm = build_fragment(minimal, 0);
  CHECK(enumerate_types(fm, 1, tcl_of(fm, {}), 1).size() == 1);

  Fragment f2 = build_fragment(*plan_p2(), 5);
  CHECK(enumerate_types(f2, 1, tcl_of(f2, {}), 10).size() == 4);
  GammaNode a0 = realize_node(f2, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode d = realize_node(f2, a0, {0, 0}, ctype("random_graph", {}, {}));
  CHECK(enumerate_types(f2, 1, tcl_of(f2, {d}), 10).size() == 8);
}

TEST_CASE("enumerate: results are sorted, unique, and realized in order") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode b0 = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  NodeSet b = tcl_of(f, {b0});
  auto types = enumerate_types(f, 1, b, 10);
  for (size_t i = 0; i + 1 < types.size(); ++i) CHECK(types[i].canonical < types[i + 1].canonical);

  // direct realizations land on enumerated descriptors
  GammaNode adj = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {true}));
  TypeDescriptor d = type_descriptor(f, {adj}, b);
  CHECK(std::count(types.begin(), types.end(), d) == 1);
}

TEST_CASE("enumerate: refuses a short budget") {
  Fragment f1 = build_fragment(*plan_p1(), 5);
  CHECK_THROWS_AS(enumerate_types(f1, 1, tcl_of(f1, {}), 1), BudgetError);
  Fragment f2 = build_fragment(*plan_p2(), 5);
  CHECK_THROWS_AS(enumerate_types(f2, 1, tcl_of(f2, {}), 2), BudgetError);
  CHECK_THROWS_AS(enumerate_types(f2, 2, tcl_of(f2, {}), 5), BudgetError);
}

TEST_CASE("enumerate: the 1-type list partitions every grown node") {
  Fragment f = build_fragment(*plan_p2(), 31);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  NodeSet b = tcl_of(f, f.nodes);
  auto types = enumerate_types(f, 1, b, 12);

  Fragment g = f;
  for (int i = 0; i < 8; ++i) grow_random(g);
  for (const auto& x : g.nodes) {
    TypeDescriptor d = type_descriptor(g, {x}, b);
    CHECK(std::count(types.begin(), types.end(), d) == 1);
  }
}

TEST_CASE("generator: identity moves nothing") {
  Fragment f = build_fragment(*plan_p1(), 5);
  realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {true}));
  GeneratorAutomorphism g;
  g.key = ComponentKey{gn({}), {0}};
  g.perm = {{0, 0}, {1, 1}};
  Fragment f2 = apply_generator(f, g);
  CHECK(f2.nodes == f.nodes);
  CHECK(f2.components == f.components);
}

TEST_CASE("generator: twins swap, non-twins do not") {
  Fragment f = build_fragment(*plan_p1(), 5);
  realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {false}));
  realize_node(f, gn({}), {0}, ctype("random_graph", {0, 1}, {true, true}));
  GeneratorAutomorphism g;
  g.key = ComponentKey{gn({}), {0}};
  g.perm = {{0, 1}, {1, 0}, {2, 2}};
  Fragment f2 = apply_generator(f, g);
  CHECK(f2.nodes == f.nodes);  // twin swap relabels onto the same node set
  CHECK(f2.components == f.components);

  add_relation(f, {gn({{0, 0}}), gn({{0, 1}})});
  Fragment f3 = apply_generator(f, g);  // still an automorphism
  CHECK(f3.components == f.components);

  Fragment h = build_fragment(*plan_p1(), 6);
  realize_node(h, gn({}), {0}, ctype("random_graph", {}, {}));
  realize_node(h, gn({}), {0}, ctype("random_graph", {0}, {false}));
  realize_node(h, gn({}), {0}, ctype("random_graph", {0, 1}, {true, false}));
  CHECK_THROWS_AS(apply_generator(h, g), std::invalid_argument);
}

TEST_CASE("generator: subtrees ride along with their coordinate") {
  Fragment f = build_fragment(*plan_p2(), 5);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode a1 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode d0 = realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  realize_node(f, a0, {0, 0}, ctype("random_graph", {0}, {true}));

  GeneratorAutomorphism g;
  g.key = ComponentKey{gn({}), {0}};
  g.perm = {{0, 1}, {1, 0}};
  Fragment f2 = apply_generator(f, g);
  CHECK(f2.audit().empty());
  CHECK(f2.nodes.size() == f.nodes.size());
  CHECK(f2.contains(gn({{0, 1}, {0, 0}})));
  CHECK_FALSE(f2.contains(d0));
  const ComponentState* moved = f2.component(ComponentKey{a1, {0, 0}});
  REQUIRE(moved != nullptr);
  CHECK(moved->relations == std::set<std::vector<ElementId>>{{0, 1}});
  CHECK(f2.component(ComponentKey{a0, {0, 0}}) == nullptr);

  // descriptors over a g-fixed parameter set are preserved
  NodeSet base = tcl_of(f, {});
  GammaNode d0_moved = apply_generator(g, d0);
  CHECK(d0_moved == gn({{0, 1}, {0, 0}}));
  CHECK(type_descriptor(f2, {d0_moved}, base) == type_descriptor(f, {d0}, base));
  CHECK(type_descriptor(f2, {apply_generator(g, a0)}, base) ==
        type_descriptor(f, {a0}, base));
}

TEST_CASE("generator: malformed permutations are rejected") {
  Fragment f = build_fragment(*plan_p1(), 5);
  realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {false}));
  GeneratorAutomorphism g;
  g.key = ComponentKey{gn({}), {0}};
  g.perm = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(apply_generator(f, g), std::invalid_argument);
  g.perm = {{0, 0}};
  CHECK_THROWS_AS(apply_generator(f, g), std::invalid_argument);
  g.key = ComponentKey{gn({}), {1}};
  g.perm = {{0, 0}, {1, 1}};
  CHECK_THROWS_AS(apply_generator(f, g), std::invalid_argument);
}

TEST_CASE("embedding: extension picks a matching image or realizes one") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode v0 = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  PartialMap pm = PartialMap::identity_on(tcl_of(f, {}));
  GammaNode img = extend_embedding(f, pm, v0);
  CHECK(type_descriptor(f, {img}, tcl_of(f, {})) == type_descriptor(f, {v0}, tcl_of(f, {})));
  CHECK(pm.at(v0) == img);

  // fresh-only extension refuses to reuse v0
  Fragment f2 = build_fragment(*plan_p1(), 5);
  GammaNode w0 = realize_node(f2, gn({}), {0}, ctype("random_graph", {}, {}));
  PartialMap pm2 = PartialMap::identity_on(tcl_of(f2, {}));
  GammaNode fresh = extend_embedding(f2, pm2, w0, /*fresh_only=*/true);
  CHECK(fresh != w0);
  CHECK(f2.nodes.size() == 3);
}

TEST_CASE("embedding: adjacency is transported through the map") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode v0 = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  GammaNode v1 = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {false}));
  GammaNode c = realize_node(f, gn({}), {0}, ctype("random_graph", {0, 1}, {true, false}));
  PartialMap pm = PartialMap::identity_on(tcl_of(f, {}));
  pm.insert(v0, v1);
  pm.insert(v1, v0);
  GammaNode img = extend_embedding(f, pm, c);
  CHECK(img != c);
  CHECK(f.nodes.size() == 5);  // no existing candidate: realized fresh
  const ComponentState& st = *f.component(component_key(v0));
  const ComponentTheory& th = theory("random_graph");
  CHECK(th.related(st, {img.steps[0].tag, v1.steps[0].tag}));
  CHECK_FALSE(th.related(st, {img.steps[0].tag, v0.steps[0].tag}));
}

TEST_CASE("embedding: precondition failures throw") {
  Fragment f = build_fragment(*plan_p2(), 5);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode d = realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  PartialMap pm = PartialMap::identity_on(tcl_of(f, {}));
  CHECK_THROWS_AS(extend_embedding(f, pm, d), std::invalid_argument);  // parent unmapped
  pm.insert(a0, a0);
  extend_embedding(f, pm, d);
  CHECK_THROWS_AS(extend_embedding(f, pm, d), std::invalid_argument);  // already mapped
}

TEST_CASE("embedding: the ladder closes a swap into a total automorphism") {
  Fragment f = build_fragment(*plan_p1(), 17);
  GammaNode v0 = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  GammaNode v1 = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {true}));
  realize_node(f, gn({}), {0}, ctype("random_graph", {0, 1}, {true, false}));
  PartialMap pm = PartialMap::identity_on(tcl_of(f, {}));
  pm.insert(v0, v1);
  pm.insert(v1, v0);
  PartialMap total = ladder_isomorphism(f, pm);
  CHECK(total.fwd.size() == f.nodes.size());
  CHECK(total.inv.size() == f.nodes.size());

  std::map<ElementId, ElementId> perm;
  for (const auto& [from, to] : total.fwd)
    if (!from.is_root()) perm[from.steps[0].tag] = to.steps[0].tag;
  CHECK(theory("random_graph").is_automorphism(*f.component(component_key(v0)), perm));

  NodeSet base = tcl_of(f, {});
  for (const auto& [from, to] : total.fwd)
    CHECK(type_descriptor(f, {from}, base) == type_descriptor(f, {to}, base));
}

TEST_CASE("embedding: the ladder reaches below the first level") {
  Fragment f = build_fragment(*plan_p2(), 23);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode a1 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode d0 = realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  realize_node(f, a0, {0, 0}, ctype("random_graph", {0}, {true}));
  realize_node(f, a1, {0, 0}, ctype("random_graph", {}, {}));
  PartialMap pm = PartialMap::identity_on(tcl_of(f, {}));
  pm.insert(a0, a1);
  pm.insert(a1, a0);
  PartialMap total = ladder_isomorphism(f, pm);
  CHECK(total.fwd.size() == f.nodes.size());
  NodeSet base = tcl_of(f, {});
  for (const auto& [from, to] : total.fwd)
    CHECK(type_descriptor(f, {from}, base) == type_descriptor(f, {to}, base));
  CHECK(total.at(d0).steps[0] == Step{0, a1.steps[0].tag});
  CHECK(f.audit().empty());
}

TEST_CASE("copy: realized twins repeat the type disjointly") {
  Fragment f = build_fragment(*plan_p1(), 5);
  GammaNode b0 = realize_node(f, gn({}), {0}, ctype("random_graph", {}, {}));
  NodeSet b = tcl_of(f, {b0});
  GammaNode x = realize_node(f, gn({}), {0}, ctype("random_graph", {0}, {true}));
  GammaNode y = realize_node(f, gn({}), {0}, ctype("random_graph", {0, 1}, {false, true}));

  auto copy = realize_copy(f, {x, y}, b);
  REQUIRE(copy.size() == 2);
  CHECK(copy[0] != x);
  CHECK(copy[1] != y);
  CHECK(type_descriptor(f, copy, b) == type_descriptor(f, {x, y}, b));

  // parameters stay put
  auto keep = realize_copy(f, {b0, x}, b);
  CHECK(keep[0] == b0);
  CHECK(keep[1] != x);
  CHECK(type_descriptor(f, keep, b) == type_descriptor(f, {b0, x}, b));
}

TEST_CASE("copy: five fresh realizations of one nonalgebraic type") {
  Fragment f = build_fragment(*plan_p2(), 5);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  GammaNode d = realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  NodeSet b = tcl_of(f, {a0});
  TypeDescriptor want = type_descriptor(f, {d}, b);
  std::set<GammaNode> seen{d};
  for (int i = 0; i < 5; ++i) {
    auto copy = realize_copy(f, {d}, b);
    CHECK(seen.insert(copy[0]).second);  // genuinely new witness
    CHECK(type_descriptor(f, copy, b) == want);
  }
  CHECK(f.audit().empty());
}

TEST_CASE("fragment: audit flags structural damage") {
  Fragment f = build_fragment(*plan_p2(), 5);
  GammaNode a0 = realize_node(f, gn({}), {0}, ctype("pure_set", {}, {}));
  realize_node(f, a0, {0, 0}, ctype("random_graph", {}, {}));
  CHECK(f.audit().empty());

  Fragment broken = f;
  broken.nodes.erase(gn({{1, kStar}}));
  CHECK_FALSE(broken.audit().empty());

  Fragment stray = f;
  stray.components[ComponentKey{a0, {0, 0}}].elements.insert(9);
  CHECK_FALSE(stray.audit().empty());
}
