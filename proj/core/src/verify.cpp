#include "nicmeas/verify.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "nicmeas/measure.hpp"

namespace nicmeas {
namespace {

using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

constexpr int kSuiteBudget = 48;

std::vector<GammaNode> node_list(const Fragment& f) {
  return {f.nodes.begin(), f.nodes.end()};
}

const GammaNode& pick_node(const std::vector<GammaNode>& pool, Rng& rng) {
  return pool[static_cast<size_t>(rng.pick(pool.size()))];
}

NodeSet sample_closed(const Fragment& f, const std::vector<GammaNode>& pool, Rng& rng,
                      int max_seeds) {
  NodeSet b;
  int k = rng.pick_int(max_seeds + 1);
  for (int i = 0; i < k; ++i) b.insert(pick_node(pool, rng));
  return tree_closure(f.plan, b);
}

std::vector<GammaNode> sample_tuple(const std::vector<GammaNode>& pool, Rng& rng, int len) {
  std::vector<GammaNode> t;
  t.reserve(len);
  for (int i = 0; i < len; ++i) t.push_back(pick_node(pool, rng));
  return t;
}

std::string describe(const std::vector<GammaNode>& tuple) {
  std::string s = "(";
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += ", ";
    s += to_string(tuple[i]);
  }
  return s + ")";
}

GammaNode sibling_node(const ComponentKey& key, ElementId e) {
  GammaNode a = key.pred;
  a.steps.push_back({key.path.back(), e});
  return a;
}

// A moved-component automorphism of f: a random structure-preserving
// transposition inside some component holding at least two elements, or the
// identity on it when twenty draws find none.
std::optional<GeneratorAutomorphism> sample_generator(const Fragment& f, Rng& rng) {
  std::vector<const ComponentKey*> keys;
  std::vector<const ComponentState*> states;
  for (const auto& [key, st] : f.components) {
    if (st.elements.size() >= 2) {
      keys.push_back(&key);
      states.push_back(&st);
    }
  }
  if (keys.empty()) return std::nullopt;
  size_t which = rng.pick(keys.size());
  const ComponentKey& key = *keys[which];
  const ComponentState& st = *states[which];
  const ComponentTheory& th = theory(f.theory_of(key));
  std::vector<ElementId> elems(st.elements.begin(), st.elements.end());
  std::map<ElementId, ElementId> perm;
  for (ElementId e : elems) perm[e] = e;
  for (int attempt = 0; attempt < 20; ++attempt) {
    size_t i = rng.pick(elems.size());
    size_t j = rng.pick(elems.size());
    if (i == j) continue;
    perm[elems[i]] = elems[j];
    perm[elems[j]] = elems[i];
    if (th.is_automorphism(st, perm)) return GeneratorAutomorphism{key, perm};
    perm[elems[i]] = elems[i];
    perm[elems[j]] = elems[j];
  }
  return GeneratorAutomorphism{key, perm};
}

// Substitute parameter nodes for the variables at positions arity.. of phi.
Term substitute_term(const Term& t, int arity, const std::vector<GammaNode>& params) {
  if (t.kind == Term::Kind::Var) {
    if (t.var < arity) return t;
    int k = t.var - arity;
    if (k >= static_cast<int>(params.size()))
      throw std::invalid_argument("parameter variable out of range");
    return Term::make_param(params[static_cast<size_t>(k)]);
  }
  Term out = t;
  out.args.clear();
  for (const Term& a : t.args) out.args.push_back(substitute_term(a, arity, params));
  return out;
}

Formula substitute(const Formula& phi, int arity, const std::vector<GammaNode>& params) {
  Formula out = phi;
  out.terms.clear();
  for (const Term& t : phi.terms) out.terms.push_back(substitute_term(t, arity, params));
  out.sub.clear();
  for (const Formula& s : phi.sub) out.sub.push_back(substitute(s, arity, params));
  return out;
}

// max dimension / total measure over that dimension, folded incrementally
struct ValueFold {
  DimMeas value{0, Rat(0)};
  bool any = false;
  void add(const DimMeas& h) {
    if (!any || h.dim > value.dim) {
      value = h;
      any = true;
    } else if (h.dim == value.dim) {
      value.meas += h.meas;
    }
  }
};

void fubini_check(const Fragment& f, const std::vector<TypeDescriptor>& xts, const NodeSet& c,
                  int n, int keep, int budget, const std::string& label, CheckReport& r) {
  std::set<TypeDescriptor> xset(xts.begin(), xts.end());
  std::map<std::string, DimMeas> base_val;
  std::map<std::string, std::map<std::string, DimMeas>> fibers;
  std::string clash;
  visit_realizations(
      f, n, c, budget, [&](const Fragment& cur, const std::vector<GammaNode>& coords) {
        if (xset.count(type_descriptor(cur, coords, c)) == 0) return true;
        std::vector<GammaNode> head(coords.begin(), coords.begin() + keep);
        std::vector<GammaNode> tail(coords.begin() + keep, coords.end());
        NodeSet ch = c;
        ch.insert(head.begin(), head.end());
        ch = tree_closure(cur.plan, ch);
        TypeDescriptor q = type_descriptor(cur, head, c);
        TypeDescriptor ft = type_descriptor(cur, tail, ch);
        DimMeas hb = dim_meas_tuple(cur, head, c);
        DimMeas ht = dim_meas_tuple(cur, tail, ch);
        auto [bit, bfresh] = base_val.try_emplace(q.canonical, hb);
        if (!bfresh && !(bit->second == hb)) clash = "projected tuple " + describe(head);
        auto [fit, ffresh] = fibers[q.canonical].try_emplace(ft.canonical, ht);
        if (!ffresh && !(fit->second == ht)) clash = "fiber tuple " + describe(tail);
        return true;
      });
  ++r.instances;
  if (!clash.empty()) {
    r.failures.push_back({label + ": " + clash, "one value per type", "conflicting values"});
    return;
  }
  if (base_val.empty()) {
    r.failures.push_back({label, "a realization of the set", "none within the budget"});
    return;
  }
  std::map<std::string, DimMeas> fiber_val;
  for (const auto& [q, fm] : fibers) {
    ValueFold fold;
    for (const auto& [ft, hv] : fm) fold.add(hv);
    fiber_val[q] = fold.value;
  }
  // group projected types by their fiber value, then recombine
  std::map<std::string, std::pair<DimMeas, std::vector<std::string>>> classes;
  for (const auto& [q, v] : fiber_val) {
    auto& slot = classes[to_string(v)];
    slot.first = v;
    slot.second.push_back(q);
  }
  ValueFold manual;
  for (const auto& [ignored, slot] : classes) {
    ValueFold cls;
    for (const std::string& q : slot.second) cls.add(base_val.at(q));
    manual.add(tensor(slot.first, cls.value));
  }
  DefinableSet x;
  x.params = c;
  x.arity = n;
  x.types = xts;
  DimMeas engine = dim_meas_definable(f, x, budget);
  if (!(engine == manual.value))
    r.failures.push_back({label, to_string(manual.value), to_string(engine)});
}

CheckReport merge_reports(CheckReport into, const CheckReport& more) {
  into.instances += more.instances;
  into.failures.insert(into.failures.end(), more.failures.begin(), more.failures.end());
  into.elapsed_ms += more.elapsed_ms;
  return into;
}

}  // namespace

CheckReport check_cms1(const Fragment& f, int trials, uint64_t seed) {
  auto t0 = Clock::now();
  CheckReport r;
  r.suite = "cms1";
  r.seed = seed;
  Rng rng(seed);
  auto pool = node_list(f);
  for (int trial = 0; trial < trials; ++trial) {
    NodeSet c = sample_closed(f, pool, rng, 3);
    auto tuple = sample_tuple(pool, rng, 1 + rng.pick_int(3));
    DimMeas before = dim_meas_tuple(f, tuple, c);
    Fragment cur = f;
    NodeSet cimg = c;
    std::vector<GammaNode> timg = tuple;
    int depth = 1 + rng.pick_int(3);
    int applied = 0;
    for (int d = 0; d < depth; ++d) {
      auto g = sample_generator(cur, rng);
      if (!g) break;
      Fragment next = apply_generator(cur, *g);
      NodeSet c2;
      for (const GammaNode& a : cimg) c2.insert(apply_generator(*g, a));
      for (GammaNode& a : timg) a = apply_generator(*g, a);
      cur = std::move(next);
      cimg = std::move(c2);
      ++applied;
    }
    ++r.instances;
    DimMeas after = dim_meas_tuple(cur, timg, cimg);
    if (!(before == after)) {
      r.failures.push_back({"trial " + std::to_string(trial) + ": " + describe(tuple) + " over " +
                                to_string(c) + " through " + std::to_string(applied) +
                                " generator(s)",
                            to_string(before), to_string(after)});
    }
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_cms2_cms3(const Fragment& f, int trials, uint64_t seed) {
  auto t0 = Clock::now();
  CheckReport r;
  r.suite = "cms2_cms3";
  r.seed = seed;
  Rng rng(seed);
  auto pool = node_list(f);

  {
    DefinableSet empty;
    empty.params = tree_closure(f.plan, {});
    empty.arity = 1;
    DimMeas h = dim_meas_definable(f, empty);
    ++r.instances;
    if (!(h == DimMeas{0, Rat(0)}))
      r.failures.push_back({"the empty set", "(0, 0)", to_string(h)});
  }

  for (int trial = 0; trial < trials; ++trial) {
    NodeSet c = sample_closed(f, pool, rng, 2);
    int arity = 1 + rng.pick_int(2);
    auto all = enumerate_types(f, arity, c, kSuiteBudget);

    // a union of complete types measures as max dimension / measure total
    std::vector<TypeDescriptor> chosen;
    for (const TypeDescriptor& d : all)
      if (rng.coin()) chosen.push_back(d);
    if (chosen.empty()) chosen.push_back(all[rng.pick(all.size())]);
    DefinableSet x;
    x.params = c;
    x.arity = arity;
    x.types = chosen;
    DimMeas engine = dim_meas_definable(f, x, kSuiteBudget);
    ValueFold manual;
    for (const TypeDescriptor& d : chosen) manual.add(dim_meas_type(f, d, c, kSuiteBudget));
    ++r.instances;
    if (!(engine == manual.value)) {
      r.failures.push_back({"trial " + std::to_string(trial) + ": union of " +
                                std::to_string(chosen.size()) + " types over " + to_string(c),
                            to_string(manual.value), to_string(engine)});
    }

    // a tuple inside the closure is alone in its class, at weight one
    std::vector<GammaNode> cc(c.begin(), c.end());
    int pn = 1 + rng.pick_int(2);
    auto atup = sample_tuple(cc, rng, pn);
    DimMeas ha = dim_meas_tuple(f, atup, c);
    TypeDescriptor da = type_descriptor(f, atup, c);
    long cls = 0;
    std::vector<size_t> idx(static_cast<size_t>(pn), 0);
    while (true) {
      std::vector<GammaNode> cand;
      for (size_t i : idx) cand.push_back(pool[i]);
      if (type_descriptor(f, cand, c) == da) ++cls;
      int i = pn - 1;
      while (i >= 0 && ++idx[static_cast<size_t>(i)] == pool.size())
        idx[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
    }
    ++r.instances;
    if (!(ha.dim == 0 && ha.meas == Rat(1) && cls == 1)) {
      r.failures.push_back({"trial " + std::to_string(trial) + ": closure tuple " +
                                describe(atup) + " over " + to_string(c),
                            "(0, 1) carried by one tuple",
                            to_string(ha) + " carried by " + std::to_string(cls)});
    }
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_cms4(const Fragment& f, int trials, uint64_t seed) {
  auto t0 = Clock::now();
  CheckReport r;
  r.suite = "cms4";
  r.seed = seed;
  Rng rng(seed);
  auto pool = node_list(f);
  for (int trial = 0; trial < trials; ++trial) {
    NodeSet c = sample_closed(f, pool, rng, 2);
    auto atup = sample_tuple(pool, rng, 1 + rng.pick_int(2));
    NodeSet hull = c;
    hull.insert(atup.begin(), atup.end());
    hull = tree_closure(f.plan, hull);
    std::vector<GammaNode> hull_list(hull.begin(), hull.end());
    bool from_hull = rng.pick(5) != 0;
    auto btup = sample_tuple(from_hull ? hull_list : pool, rng, 1 + rng.pick_int(2));
    if (!std::all_of(btup.begin(), btup.end(),
                     [&](const GammaNode& x) { return hull.count(x) != 0; }))
      continue;  // the middle tuple must close inside the joint hull
    NodeSet cb = c;
    cb.insert(btup.begin(), btup.end());
    cb = tree_closure(f.plan, cb);
    DimMeas lhs = dim_meas_tuple(f, atup, c);
    DimMeas rhs = tensor(dim_meas_tuple(f, btup, c), dim_meas_tuple(f, atup, cb));
    ++r.instances;
    if (!(lhs == rhs)) {
      r.failures.push_back({"trial " + std::to_string(trial) + ": " + describe(atup) +
                                " through " + describe(btup) + " over " + to_string(c),
                            to_string(lhs), to_string(rhs)});
    }
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_ms1_ms3(const Fragment& f, const Formula& phi, int arity, int param_arity,
                          int budget, uint64_t seed) {
  auto t0 = Clock::now();
  CheckReport r;
  r.suite = "ms1_ms3";
  r.seed = seed;
  NodeSet base = tree_closure(f.plan, {});
  struct Witness {
    std::string shown;
    DimMeas value;
  };
  std::map<std::string, Witness> per_type;
  std::set<std::pair<int, std::string>> values;
  visit_realizations(
      f, param_arity, base, budget,
      [&](const Fragment& cur, const std::vector<GammaNode>& params) {
        NodeSet cp(params.begin(), params.end());
        DefinableSet x;
        x.params = tree_closure(cur.plan, cp);
        x.arity = arity;
        x.formula = substitute(phi, arity, params);
        DimMeas h = dim_meas_definable(cur, x, budget);
        TypeDescriptor pt = type_descriptor(cur, params, base);
        ++r.instances;
        auto [it, fresh] = per_type.try_emplace(pt.canonical, Witness{describe(params), h});
        if (!fresh && !(it->second.value == h)) {
          r.failures.push_back(
              {"parameters " + describe(params) + " vs " + it->second.shown + " of equal type",
               to_string(it->second.value), to_string(h)});
        }
        values.insert({h.dim, rat_to_string(h.meas)});
        return true;
      });
  if (values.size() > per_type.size()) {
    r.failures.push_back(
        {"value spread", "at most " + std::to_string(per_type.size()) + " values",
         std::to_string(values.size()) + " distinct values"});
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_ms4_fubini(const Fragment& f, int trials, uint64_t seed) {
  auto t0 = Clock::now();
  CheckReport r;
  r.suite = "ms4_fubini";
  r.seed = seed;
  Rng rng(seed);
  auto pool = node_list(f);
  NodeSet base = tree_closure(f.plan, {});

  if (trials > 0) {
    // canonical projection: linked pairs onto their first coordinate (falling
    // back to all pairs when no top-level family carries a binary relation)
    bool relational = false;
    for (const auto& [path, entry] : f.plan.entries())
      if (path.size() == 1 && entry.mult == Mult::Inf &&
          theory(entry.component).relation().arity == 2)
        relational = true;
    Formula phi = relational ? Formula::rel({Term::make_var(0), Term::make_var(1)})
                             : Formula::lit(true);
    auto xts = decompose(f, phi, 2, base, kSuiteBudget);
    if (!xts.empty())
      fubini_check(f, xts, base, 2, 1, kSuiteBudget, "linked pair projection", r);
  }

  for (int trial = 1; trial < trials; ++trial) {
    NodeSet c = sample_closed(f, pool, rng, 2);
    int n = rng.pick(10) == 0 && c.size() <= 3 ? 3 : 2;
    int keep = 1 + rng.pick_int(n - 1);
    auto all = enumerate_types(f, n, c, kSuiteBudget);
    std::vector<TypeDescriptor> xts;
    for (const TypeDescriptor& d : all)
      if (rng.coin()) xts.push_back(d);
    if (xts.empty()) xts.push_back(all[rng.pick(all.size())]);
    fubini_check(f, xts, c, n, keep, kSuiteBudget,
                 "trial " + std::to_string(trial) + ": " + std::to_string(xts.size()) +
                     " types, arity " + std::to_string(n) + ", keeping " + std::to_string(keep),
                 r);
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_well_definedness(const Fragment& f, int trials, uint64_t seed) {
  auto t0 = Clock::now();
  CheckReport r;
  r.suite = "well_definedness";
  r.seed = seed;
  Rng rng(seed);
  auto pool = node_list(f);
  for (int trial = 0; trial < trials; ++trial) {
    NodeSet c = sample_closed(f, pool, rng, 3);
    NodeSet bseed;
    for (const GammaNode& a : c)
      if (rng.coin()) bseed.insert(a);
    NodeSet b = tree_closure(f.plan, bseed);
    int n = c.size() <= 4 && rng.coin() ? 2 : 1;
    auto tuple = sample_tuple(pool, rng, n);
    DimMeas hq = dim_meas_tuple(f, tuple, b);
    TypeDescriptor q = type_descriptor(f, tuple, b);
    std::map<std::string, DimMeas> ext;
    visit_realizations(f, n, c, kSuiteBudget,
                       [&](const Fragment& cur, const std::vector<GammaNode>& coords) {
                         if (type_descriptor(cur, coords, b) == q) {
                           TypeDescriptor dc = type_descriptor(cur, coords, c);
                           ext.try_emplace(dc.canonical, dim_meas_tuple(cur, coords, c));
                         }
                         return true;
                       });
    ++r.instances;
    std::string label = "trial " + std::to_string(trial) + ": " + describe(tuple) +
                        " refined from " + to_string(b) + " to " + to_string(c);
    if (ext.empty()) {
      r.failures.push_back({label, "at least one refinement", "none realized"});
      continue;
    }
    ValueFold fold;
    for (const auto& [ignored, h] : ext) fold.add(h);
    if (!(fold.value == hq)) r.failures.push_back({label, to_string(hq), to_string(fold.value)});
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport sampling_oracle_component(const std::string& theory_id, int c_size, int samples,
                                      uint64_t seed) {
  if (samples < 10000)
    throw std::invalid_argument("sampling oracle needs at least 10000 samples");
  if (c_size < 0) throw std::invalid_argument("negative parameter count");
  const ComponentTheory& th = theory(theory_id);
  if (th.relation().arity == 0)
    throw std::invalid_argument("sampling oracle needs a relational theory");
  int m = th.atom_count(c_size);
  if (m > 20) throw std::invalid_argument("too many atom patterns to tally");

  auto t0 = Clock::now();
  CheckReport r;
  r.suite = "sampling_oracle";
  r.seed = seed;
  Rng rng(seed);
  std::vector<long long> tally(1u << m, 0);
  std::vector<ElementId> params(static_cast<size_t>(c_size));
  std::iota(params.begin(), params.end(), 0);
  const ElementId x = c_size;
  const int total = c_size + 1;
  for (int s = 0; s < samples; ++s) {
    ComponentState st;
    for (ElementId e = 0; e <= c_size; ++e) st.elements.insert(e);
    if (theory_id == "random_graph") {
      for (int i = 0; i < total; ++i)
        for (int j = i + 1; j < total; ++j)
          if (rng.coin()) th.add_relation(st, {i, j});
    } else if (theory_id == "random_tournament") {
      for (int i = 0; i < total; ++i)
        for (int j = i + 1; j < total; ++j)
          th.add_relation(st, rng.coin() ? std::vector<ElementId>{i, j}
                                         : std::vector<ElementId>{j, i});
    } else if (theory_id == "random_3hypergraph") {
      for (int i = 0; i < total; ++i)
        for (int j = i + 1; j < total; ++j)
          for (int k = j + 1; k < total; ++k)
            if (rng.coin()) th.add_relation(st, {i, j, k});
    } else {
      throw std::invalid_argument("no direct sampler for theory " + theory_id);
    }
    unsigned pat = 0;
    for (int k = 0; k < m; ++k)
      if (th.atom_holds(st, x, params, k)) pat |= 1u << k;
    ++tally[pat];
  }
  const double want = 1.0 / static_cast<double>(1u << m);
  for (unsigned pat = 0; pat < (1u << m); ++pat) {
    ++r.instances;
    double freq = static_cast<double>(tally[pat]) / static_cast<double>(samples);
    if (freq < want - 0.02 || freq > want + 0.02) {
      ComponentType t;
      t.theory = theory_id;
      t.params = params;
      t.atoms.resize(static_cast<size_t>(m));
      for (int k = 0; k < m; ++k) t.atoms[static_cast<size_t>(k)] = (pat >> k) & 1u;
      r.failures.push_back({theory_id + " pattern " + pattern_string(t) + " over " +
                                std::to_string(c_size) + " parameters",
                            std::to_string(want) + " within 0.02", std::to_string(freq)});
    }
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_nic_axioms(const Fragment& f, int realizations) {
  auto t0 = Clock::now();
  CheckReport r;
  r.suite = "nic_axioms";
  r.seed = f.seed;
  auto pool = node_list(f);
  NodeSet base = tree_closure(f.plan, {});

  std::vector<NodeSet> closed_sets;
  {
    std::set<NodeSet> seen;
    seen.insert(base);
    for (size_t i = 0; i < pool.size(); ++i) {
      seen.insert(tree_closure(f.plan, {pool[i]}));
      for (size_t j = i + 1; j < pool.size(); ++j)
        seen.insert(tree_closure(f.plan, {pool[i], pool[j]}));
    }
    closed_sets.assign(seen.begin(), seen.end());
  }

  // the tree shape of a point decides its full type over the base closure
  {
    std::map<std::string, std::pair<GammaNode, TypeDescriptor>> seen;
    for (const GammaNode& a : pool) {
      TypeDescriptor d = type_descriptor(f, {a}, base);
      ++r.instances;
      auto [it, fresh] = seen.try_emplace(d.tree_only, std::make_pair(a, d));
      if (!fresh && !(it->second.second == d)) {
        r.failures.push_back({"points " + to_string(it->second.first) + " and " + to_string(a) +
                                  " over the base closure",
                              "equal full types under equal tree shapes",
                              it->second.second.canonical + " vs " + d.canonical});
      }
    }
  }

  // siblings with equal tree shapes and equal atoms over the named parameters
  // have equal full types over every closed set that omits both
  for (const auto& [key, st] : f.components) {
    if (st.elements.size() < 2) continue;
    const ComponentTheory& th = theory(f.theory_of(key));
    std::vector<ElementId> elems(st.elements.begin(), st.elements.end());
    for (size_t i = 0; i < elems.size(); ++i) {
      for (size_t j = i + 1; j < elems.size(); ++j) {
        GammaNode ni = sibling_node(key, elems[i]);
        GammaNode nj = sibling_node(key, elems[j]);
        for (const NodeSet& c : closed_sets) {
          if (c.count(ni) || c.count(nj)) continue;
          std::vector<ElementId> params;
          for (ElementId e : elems)
            if (c.count(sibling_node(key, e))) params.push_back(e);
          ComponentType ti = th.type_of(st, elems[i], params);
          ComponentType tj = th.type_of(st, elems[j], params);
          TypeDescriptor di = type_descriptor(f, {ni}, c);
          TypeDescriptor dj = type_descriptor(f, {nj}, c);
          ++r.instances;
          if (di.tree_only == dj.tree_only && ti.atoms == tj.atoms && !(di == dj)) {
            r.failures.push_back({"siblings " + to_string(ni) + " and " + to_string(nj) +
                                      " over " + to_string(c),
                                  "equal full types (shapes and atoms agree)",
                                  di.canonical + " vs " + dj.canonical});
          }
        }
      }
    }
  }

  // fresh copies: a point outside the closure re-realizes to fresh distinct
  // points of the same type, so nothing outside the closure is pinned
  {
    int done = 0;
    for (const NodeSet& c : closed_sets) {
      if (done >= 6) break;
      const GammaNode* pick = nullptr;
      for (const GammaNode& a : pool) {
        if (!a.is_root() && a.steps.back().tag != kStar && c.count(a) == 0) {
          pick = &a;
          break;
        }
      }
      if (!pick) continue;
      ++done;
      ++r.instances;
      Fragment clone = f;
      TypeDescriptor want = type_descriptor(f, {*pick}, c);
      std::set<GammaNode> images{*pick};
      std::string problem;
      for (int i = 0; i < realizations && problem.empty(); ++i) {
        auto copy = realize_copy(clone, {*pick}, c);
        TypeDescriptor d = type_descriptor(clone, copy, c);
        if (!(d == want))
          problem = "copy " + std::to_string(i) + " drifted to " + d.canonical;
        else if (!images.insert(copy[0]).second)
          problem = "copy " + std::to_string(i) + " reused " + to_string(copy[0]);
      }
      if (!problem.empty()) {
        r.failures.push_back({"fresh copies of " + to_string(*pick) + " over " + to_string(c),
                              std::to_string(realizations) + " distinct same-type copies",
                              problem});
      }
    }
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

std::vector<CheckReport> run_suite(const std::string& name, const Fragment& f, int trials,
                                   uint64_t seed) {
  if (name == "cms") {
    return {check_cms1(f, trials, seed), check_cms2_cms3(f, trials, seed + 1),
            check_cms4(f, trials, seed + 2)};
  }
  if (name == "ms") {
    Formula linked = Formula::rel({Term::make_var(0), Term::make_var(1)});
    Formula pinned = Formula::eq(Term::make_var(0), Term::make_var(1));
    Formula above = Formula::le(Term::make_var(1), Term::make_var(0));
    CheckReport ms = check_ms1_ms3(f, linked, 1, 1, kSuiteBudget, seed);
    ms = merge_reports(std::move(ms), check_ms1_ms3(f, pinned, 1, 1, kSuiteBudget, seed));
    ms = merge_reports(std::move(ms), check_ms1_ms3(f, above, 1, 1, kSuiteBudget, seed));
    return {std::move(ms), check_ms4_fubini(f, trials, seed + 1)};
  }
  if (name == "nic") {
    return {check_nic_axioms(f), check_well_definedness(f, trials, seed)};
  }
  if (name == "oracle") {
    int samples = std::max(trials, 10000);
    return {sampling_oracle_component("random_graph", 1, samples, seed),
            sampling_oracle_component("random_graph", 2, samples, seed + 1),
            sampling_oracle_component("random_tournament", 1, samples, seed + 2),
            sampling_oracle_component("random_3hypergraph", 2, samples, seed + 3)};
  }
  if (name == "all") {
    std::vector<CheckReport> out;
    for (const char* part : {"cms", "ms", "nic", "oracle"}) {
      auto bundle = run_suite(part, f, trials, seed);
      out.insert(out.end(), bundle.begin(), bundle.end());
    }
    return out;
  }
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace nicmeas
