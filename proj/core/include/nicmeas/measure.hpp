#pragma once

#include <optional>
#include <vector>

#include "nicmeas/component.hpp"
#include "nicmeas/fragment.hpp"
#include "nicmeas/tree.hpp"

namespace nicmeas {

// Quantifier-free formulas over the tree signature (le, pred, meet, P, eq)
// and the component relations (rel), with parameters drawn from a closed set.

struct Term {
  enum class Kind { Var, Param, Pred, Meet };
  Kind kind = Kind::Var;
  int var = 0;             // Var: tuple position
  GammaNode param;         // Param: a named node
  std::vector<Term> args;  // Pred: 1, Meet: 2

  static Term make_var(int i);
  static Term make_param(GammaNode a);
  static Term make_pred(Term t);
  static Term make_meet(Term s, Term t);
};

struct Formula {
  enum class Kind { True, False, Le, Eq, P, Rel, And, Or, Not };
  Kind kind = Kind::True;
  std::vector<Term> terms;   // Le/Eq: 2, P: 1, Rel: relation arity
  PlanPath path;             // P: the plan position tested
  std::vector<Formula> sub;  // And/Or: any, Not: 1

  static Formula lit(bool v);
  static Formula le(Term s, Term t);
  static Formula eq(Term s, Term t);
  static Formula at(PlanPath p, Term t);
  static Formula rel(std::vector<Term> args);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula neg(Formula f);
};

GammaNode eval_term(const Fragment& f, const Term& t, const std::vector<GammaNode>& tuple);
bool eval_formula(const Fragment& f, const Formula& phi, const std::vector<GammaNode>& tuple);

// A definable set over a closed parameter set: either an explicit finite
// union of complete types or a quantifier-free formula, never both.
struct DefinableSet {
  NodeSet params;
  int arity = 0;
  std::vector<TypeDescriptor> types;
  std::optional<Formula> formula;
};

constexpr int kDefaultBudget = 64;

// h(a / b): a chain walk from the deepest prefix of a inside b.
DimMeas dim_meas_1type(const Fragment& f, const GammaNode& a, const NodeSet& b);

// h(tuple / b): right fold, h(x0 x1... / b) = h(x1... / b) * h(x0 / tcl(b x1...)).
DimMeas dim_meas_tuple(const Fragment& f, const std::vector<GammaNode>& tuple, const NodeSet& b);

// h of one complete type over b, found by realization search.
DimMeas dim_meas_type(const Fragment& f, const TypeDescriptor& d, const NodeSet& b,
                      int budget = kDefaultBudget);

// The complete types over tcl(c) consistent with phi, in canonical order.
std::vector<TypeDescriptor> decompose(const Fragment& f, const Formula& phi, int arity,
                                      const NodeSet& c, int budget = kDefaultBudget);

// h(X) = (max dim, sum of meas over the types of maximal dim); (0,0) if empty.
DimMeas dim_meas_definable(const Fragment& f, const DefinableSet& x,
                           int budget = kDefaultBudget);

}  // namespace nicmeas
