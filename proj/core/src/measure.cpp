#include "nicmeas/measure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace nicmeas {

// ---------------------------------------------------------------------------
// formulas

Term Term::make_var(int i) {
  Term t;
  t.kind = Kind::Var;
  t.var = i;
  return t;
}

Term Term::make_param(GammaNode a) {
  Term t;
  t.kind = Kind::Param;
  t.param = std::move(a);
  return t;
}

Term Term::make_pred(Term s) {
  Term t;
  t.kind = Kind::Pred;
  t.args.push_back(std::move(s));
  return t;
}

Term Term::make_meet(Term s, Term u) {
  Term t;
  t.kind = Kind::Meet;
  t.args.push_back(std::move(s));
  t.args.push_back(std::move(u));
  return t;
}

Formula Formula::lit(bool v) {
  Formula f;
  f.kind = v ? Kind::True : Kind::False;
  return f;
}

Formula Formula::le(Term s, Term t) {
  Formula f;
  f.kind = Kind::Le;
  f.terms.push_back(std::move(s));
  f.terms.push_back(std::move(t));
  return f;
}

Formula Formula::eq(Term s, Term t) {
  Formula f;
  f.kind = Kind::Eq;
  f.terms.push_back(std::move(s));
  f.terms.push_back(std::move(t));
  return f;
}

Formula Formula::at(PlanPath p, Term t) {
  Formula f;
  f.kind = Kind::P;
  f.path = std::move(p);
  f.terms.push_back(std::move(t));
  return f;
}

Formula Formula::rel(std::vector<Term> args) {
  Formula f;
  f.kind = Kind::Rel;
  f.terms = std::move(args);
  return f;
}

Formula Formula::conj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::And;
  f.sub = std::move(fs);
  return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::Or;
  f.sub = std::move(fs);
  return f;
}

Formula Formula::neg(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.sub.push_back(std::move(g));
  return f;
}

GammaNode eval_term(const Fragment& f, const Term& t, const std::vector<GammaNode>& tuple) {
  switch (t.kind) {
    case Term::Kind::Var:
      if (t.var < 0 || t.var >= static_cast<int>(tuple.size()))
        throw std::invalid_argument("variable index outside the tuple");
      return tuple[t.var];
    case Term::Kind::Param:
      return t.param;
    case Term::Kind::Pred:
      if (t.args.size() != 1) throw std::invalid_argument("pred takes one term");
      return parent(eval_term(f, t.args[0], tuple));
    case Term::Kind::Meet:
      if (t.args.size() != 2) throw std::invalid_argument("meet takes two terms");
      return meet(eval_term(f, t.args[0], tuple), eval_term(f, t.args[1], tuple));
  }
  throw std::invalid_argument("malformed term");
}

bool eval_formula(const Fragment& f, const Formula& phi, const std::vector<GammaNode>& tuple) {
  switch (phi.kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Le:
      if (phi.terms.size() != 2) throw std::invalid_argument("le takes two terms");
      return leq(eval_term(f, phi.terms[0], tuple), eval_term(f, phi.terms[1], tuple));
    case Formula::Kind::Eq:
      if (phi.terms.size() != 2) throw std::invalid_argument("eq takes two terms");
      return eval_term(f, phi.terms[0], tuple) == eval_term(f, phi.terms[1], tuple);
    case Formula::Kind::P:
      if (phi.terms.size() != 1) throw std::invalid_argument("P takes one term");
      return plan_path(eval_term(f, phi.terms[0], tuple)) == phi.path;
    case Formula::Kind::Rel: {
      if (phi.terms.empty()) throw std::invalid_argument("rel takes arguments");
      std::vector<GammaNode> args;
      for (const Term& t : phi.terms) args.push_back(eval_term(f, t, tuple));
      for (const GammaNode& a : args)
        if (a.is_root()) return false;
      ComponentKey key = component_key(args.front());
      for (const GammaNode& a : args)
        if (component_key(a) != key) return false;  // relations never cross components
      const ComponentState* st = f.component(key);
      if (st == nullptr) return false;
      std::vector<ElementId> ids;
      for (const GammaNode& a : args) ids.push_back(a.steps.back().tag);
      return theory(f.theory_of(key)).related(*st, ids);
    }
    case Formula::Kind::And:
      for (const Formula& g : phi.sub)
        if (!eval_formula(f, g, tuple)) return false;
      return true;
    case Formula::Kind::Or:
      for (const Formula& g : phi.sub)
        if (eval_formula(f, g, tuple)) return true;
      return false;
    case Formula::Kind::Not:
      if (phi.sub.size() != 1) throw std::invalid_argument("not takes one formula");
      return !eval_formula(f, phi.sub[0], tuple);
  }
  throw std::invalid_argument("malformed formula");
}

// ---------------------------------------------------------------------------
// the lifted value

DimMeas dim_meas_1type(const Fragment& f, const GammaNode& a, const NodeSet& b) {
  if (!tree_closed(f.plan, b)) throw std::invalid_argument("parameter set is not tree-closed");
  for (const GammaNode& p : b)
    if (!f.contains(p)) throw std::invalid_argument("parameter node is not in the fragment");
  if (!f.contains(a)) throw std::invalid_argument("node is not in the fragment");
  if (b.count(a)) return {0, Rat(1)};

  GammaNode m = meet_closure(f.plan, a, b);
  NodeSet cur = b;
  DimMeas h{0, Rat(1)};
  for (int i = m.height() + 1; i <= a.height(); ++i) {
    GammaNode e = prefix(a, i);
    if (cur.count(e)) continue;  // One links arrive with the closure
    if (f.plan.mult(plan_path(e)) == Mult::Inf) {
      ComponentKey key = component_key(e);
      const ComponentState& st = *f.component(key);
      std::vector<ElementId> params;
      for (ElementId u : st.elements) {
        GammaNode sib = key.pred;
        sib.steps.push_back(Step{key.path.back(), u});
        if (cur.count(sib)) params.push_back(u);
      }
      const ComponentTheory& th = theory(f.theory_of(key));
      DimMeas hm = th.dim_meas(th.type_of(st, e.steps.back().tag, params));
      h.dim += hm.dim;
      h.meas *= hm.meas;
    }
    cur.insert(e);
    cur = tree_closure(f.plan, cur);
  }
  return h;
}

DimMeas dim_meas_tuple(const Fragment& f, const std::vector<GammaNode>& tuple,
                       const NodeSet& b) {
  if (!tree_closed(f.plan, b)) throw std::invalid_argument("parameter set is not tree-closed");
  for (const GammaNode& a : tuple)
    if (!f.contains(a)) throw std::invalid_argument("tuple node is not in the fragment");

  NodeSet cur = b;
  DimMeas h{0, Rat(1)};
  for (size_t j = tuple.size(); j-- > 0;) {  // rightmost coordinate first
    DimMeas hj = dim_meas_1type(f, tuple[j], cur);
    h.dim += hj.dim;
    h.meas *= hj.meas;
    cur.insert(tuple[j]);
    cur = tree_closure(f.plan, cur);
  }
  return h;
}

// ---------------------------------------------------------------------------
// definable sets

namespace {

// one enumeration pass, measuring each distinct type as it appears; with a
// target list the walk stops as soon as every target is valued
std::map<TypeDescriptor, DimMeas> measure_pass(const Fragment& f, int arity, const NodeSet& b,
                                               int budget,
                                               const std::set<TypeDescriptor>* want) {
  std::map<TypeDescriptor, DimMeas> out;
  visit_realizations(f, arity, b, budget,
                     [&](const Fragment& cur, const std::vector<GammaNode>& coords) {
                       TypeDescriptor d = type_descriptor(cur, coords, b);
                       if (want != nullptr && !want->count(d)) return true;
                       if (!out.count(d)) out.emplace(std::move(d), dim_meas_tuple(cur, coords, b));
                       return want == nullptr || out.size() < want->size();
                     });
  return out;
}

void collect_params(const Term& t, std::vector<GammaNode>& out) {
  if (t.kind == Term::Kind::Param) out.push_back(t.param);
  for (const Term& s : t.args) collect_params(s, out);
}

void collect_params(const Formula& phi, std::vector<GammaNode>& out) {
  for (const Term& t : phi.terms) collect_params(t, out);
  for (const Formula& g : phi.sub) collect_params(g, out);
}

}  // namespace

DimMeas dim_meas_type(const Fragment& f, const TypeDescriptor& d, const NodeSet& b,
                      int budget) {
  std::set<TypeDescriptor> want{d};
  auto got = measure_pass(f, d.arity, b, budget, &want);
  auto it = got.find(d);
  if (it == got.end())
    throw std::invalid_argument("type has no realization within the budget");
  return it->second;
}

std::vector<TypeDescriptor> decompose(const Fragment& f, const Formula& phi, int arity,
                                      const NodeSet& c, int budget) {
  NodeSet cc = tree_closure(f.plan, c);
  std::vector<GammaNode> params;
  collect_params(phi, params);
  for (const GammaNode& p : params)
    if (!cc.count(p)) throw std::invalid_argument("formula parameter outside the set");

  std::set<TypeDescriptor> keep;
  visit_realizations(f, arity, cc, budget,
                     [&](const Fragment& cur, const std::vector<GammaNode>& coords) {
                       if (eval_formula(cur, phi, coords))
                         keep.insert(type_descriptor(cur, coords, cc));
                       return true;
                     });
  return std::vector<TypeDescriptor>(keep.begin(), keep.end());
}

DimMeas dim_meas_definable(const Fragment& f, const DefinableSet& x, int budget) {
  if (x.formula && !x.types.empty())
    throw std::invalid_argument("a definable set has one body, not two");
  NodeSet c = tree_closure(f.plan, x.params);

  std::vector<TypeDescriptor> types = x.types;
  if (x.formula) types = decompose(f, *x.formula, x.arity, c, budget);
  if (types.empty()) return {0, Rat(0)};
  for (const TypeDescriptor& d : types)
    if (d.arity != x.arity) throw std::invalid_argument("mixed arities in one set");

  std::set<TypeDescriptor> want(types.begin(), types.end());
  auto valued = measure_pass(f, x.arity, c, budget, &want);
  if (valued.size() != want.size())
    throw std::invalid_argument("type has no realization within the budget");

  DimMeas h{0, Rat(0)};
  for (const auto& [d, hd] : valued) h.dim = std::max(h.dim, hd.dim);
  for (const auto& [d, hd] : valued)
    if (hd.dim == h.dim) h.meas += hd.meas;
  return h;
}

}  // namespace nicmeas
