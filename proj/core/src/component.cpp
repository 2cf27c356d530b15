#include "nicmeas/component.hpp"

#include <algorithm>
#include <stdexcept>

namespace nicmeas {

std::string to_string(const DimMeas& v) {
  return "(" + std::to_string(v.dim) + ", " + rat_to_string(v.meas) + ")";
}

Rat rat_from_string(const std::string& s) {
  size_t slash = s.find('/');
  try {
    long long num = std::stoll(s.substr(0, slash));
    long long den = slash == std::string::npos ? 1 : std::stoll(s.substr(slash + 1));
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

std::string pattern_string(const ComponentType& t) {
  std::string s = t.theory + "/" + std::to_string(t.params.size()) + ":";
  if (t.algebraic) {
    auto it = std::find(t.params.begin(), t.params.end(), t.equal_to);
    if (it == t.params.end()) throw std::logic_error("algebraic type names a non-parameter");
    return s + "=" + std::to_string(it - t.params.begin());
  }
  for (bool b : t.atoms) s += b ? '1' : '0';
  return s;
}

void ComponentTheory::check_params(const ComponentState* s,
                                   const std::vector<ElementId>& params) const {
  for (size_t i = 0; i < params.size(); ++i) {
    if (s && !s->elements.count(params[i]))
      throw std::invalid_argument("parameter " + std::to_string(params[i]) + " is not registered");
    for (size_t j = i + 1; j < params.size(); ++j)
      if (params[i] == params[j]) throw std::invalid_argument("duplicate parameter list");
  }
}

std::vector<ComponentType> ComponentTheory::enumerate_1types(
    const std::vector<ElementId>& params) const {
  check_params(nullptr, params);
  int m = atom_count(static_cast<int>(params.size()));
  if (m > 20)
    throw std::invalid_argument("1-type enumeration over " + std::to_string(params.size()) +
                                " parameters is out of supported range");
  std::vector<ComponentType> out;
  for (ElementId p : params) {
    ComponentType t;
    t.theory = id();
    t.params = params;
    t.algebraic = true;
    t.equal_to = p;
    out.push_back(std::move(t));
  }
  for (unsigned pat = 0; pat < (1u << m); ++pat) {
    ComponentType t;
    t.theory = id();
    t.params = params;
    for (int k = 0; k < m; ++k) t.atoms.push_back((pat >> k) & 1u);
    out.push_back(std::move(t));
  }
  return out;
}

ComponentType ComponentTheory::type_of(const ComponentState& s, ElementId x,
                                       const std::vector<ElementId>& params) const {
  check_params(&s, params);
  if (!s.elements.count(x))
    throw std::invalid_argument("element " + std::to_string(x) + " is not registered");
  ComponentType t;
  t.theory = id();
  t.params = params;
  if (std::find(params.begin(), params.end(), x) != params.end()) {
    t.algebraic = true;
    t.equal_to = x;
    return t;
  }
  int m = atom_count(static_cast<int>(params.size()));
  for (int k = 0; k < m; ++k) t.atoms.push_back(atom_holds(s, x, params, k));
  return t;
}

DimMeas ComponentTheory::dim_meas(const ComponentType& t) const {
  if (t.theory != id()) throw std::invalid_argument("type belongs to theory " + t.theory);
  if (t.algebraic) return DimMeas{0, Rat(1)};
  int m = atom_count(static_cast<int>(t.params.size()));
  if (static_cast<int>(t.atoms.size()) != m) throw std::invalid_argument("atom list has wrong size");
  return DimMeas{1, pow2_inv(m)};
}

ElementId ComponentTheory::realize(ComponentState& s, const ComponentType& t, Rng& rng) const {
  if (t.theory != id()) throw std::invalid_argument("type belongs to theory " + t.theory);
  if (t.algebraic) throw std::invalid_argument("cannot realize an algebraic type afresh");
  check_params(&s, t.params);
  int m = atom_count(static_cast<int>(t.params.size()));
  if (static_cast<int>(t.atoms.size()) != m) throw std::invalid_argument("atom list has wrong size");
  ElementId x = s.next_id();
  s.elements.insert(x);
  for (int k = 0; k < m; ++k) set_atom(s, x, t.params, k, t.atoms[k]);
  complete(s, x, t.params, rng);
  return x;
}

std::vector<std::string> ComponentTheory::audit(const ComponentState& s) const {
  std::vector<std::string> out;
  int ar = relation().arity;
  for (const auto& tup : s.relations) {
    if (static_cast<int>(tup.size()) != ar) {
      out.push_back(id() + ": relation tuple of arity " + std::to_string(tup.size()));
      continue;
    }
    std::set<ElementId> distinct(tup.begin(), tup.end());
    if (distinct.size() != tup.size()) out.push_back(id() + ": repeated argument in a relation");
    for (ElementId e : tup)
      if (!s.elements.count(e))
        out.push_back(id() + ": relation names unregistered element " + std::to_string(e));
  }
  return out;
}

long ComponentTheory::orbit_count(const ComponentState& s, const std::vector<ElementId>& tuple,
                                  const std::vector<ElementId>& c) const {
  check_params(&s, c);
  for (ElementId e : tuple)
    if (!s.elements.count(e))
      throw std::invalid_argument("tuple element " + std::to_string(e) + " is not registered");
  const int n = static_cast<int>(tuple.size());
  const int ar = relation().arity;
  std::vector<ElementId> pool(s.elements.begin(), s.elements.end());

  // every relation argument pattern mixing tuple positions (< n) and fixed
  // parameters (>= n), with at least one tuple position
  std::vector<std::vector<int>> patterns;
  if (ar > 0) {
    std::vector<int> idx(ar, 0);
    const int symbols = n + static_cast<int>(c.size());
    while (true) {
      if (std::any_of(idx.begin(), idx.end(), [&](int v) { return v < n; }))
        patterns.push_back(idx);
      int k = ar - 1;
      while (k >= 0 && idx[k] == symbols - 1) idx[k--] = 0;
      if (k < 0) break;
      ++idx[k];
    }
  }

  auto args_for = [&](const std::vector<ElementId>& cand, const std::vector<int>& pat) {
    std::vector<ElementId> args;
    for (int v : pat) args.push_back(v < n ? cand[v] : c[v - n]);
    return args;
  };

  long count = 0;
  std::vector<int> pick(n, 0);
  while (true) {
    std::vector<ElementId> cand;
    for (int v : pick) cand.push_back(pool[v]);
    bool match = true;
    for (int i = 0; i < n && match; ++i) {
      for (int j = i + 1; j < n && match; ++j)
        if ((tuple[i] == tuple[j]) != (cand[i] == cand[j])) match = false;
      for (size_t j = 0; j < c.size() && match; ++j)
        if ((tuple[i] == c[j]) != (cand[i] == c[j])) match = false;
    }
    for (const auto& pat : patterns) {
      if (!match) break;
      if (related(s, args_for(tuple, pat)) != related(s, args_for(cand, pat))) match = false;
    }
    if (match) ++count;
    int k = n - 1;
    while (k >= 0 && pick[k] == static_cast<int>(pool.size()) - 1) pick[k--] = 0;
    if (k < 0) break;
    ++pick[k];
  }
  return count;
}

bool ComponentTheory::is_automorphism(const ComponentState& s,
                                      const std::map<ElementId, ElementId>& perm) const {
  if (perm.size() != s.elements.size()) return false;
  std::set<ElementId> image;
  for (const auto& [from, to] : perm) {
    if (!s.elements.count(from) || !s.elements.count(to)) return false;
    image.insert(to);
  }
  if (image.size() != s.elements.size()) return false;

  const int ar = relation().arity;
  if (ar == 0) return true;
  std::vector<ElementId> pool(s.elements.begin(), s.elements.end());
  std::vector<int> idx(ar, 0);
  while (true) {
    std::vector<ElementId> args, mapped;
    for (int v : idx) {
      args.push_back(pool[v]);
      mapped.push_back(perm.at(pool[v]));
    }
    if (related(s, args) != related(s, mapped)) return false;
    int k = ar - 1;
    while (k >= 0 && idx[k] == static_cast<int>(pool.size()) - 1) idx[k--] = 0;
    if (k < 0) return true;
    ++idx[k];
  }
}

namespace {

void check_registered(const ComponentState& s, const std::vector<ElementId>& args) {
  for (ElementId e : args)
    if (!s.elements.count(e))
      throw std::invalid_argument("relation names unregistered element " + std::to_string(e));
}

class PureSet final : public ComponentTheory {
 public:
  const std::string& id() const override {
    static const std::string n = "pure_set";
    return n;
  }
  RelationSig relation() const override { return {"", 0}; }
  bool symmetric_relation() const override { return false; }
  int atom_count(int) const override { return 0; }
  bool atom_holds(const ComponentState&, ElementId, const std::vector<ElementId>&,
                  int) const override {
    throw std::logic_error("pure_set has no atoms");
  }
  void set_atom(ComponentState&, ElementId, const std::vector<ElementId>&, int,
                bool) const override {
    throw std::logic_error("pure_set has no atoms");
  }
  void complete(ComponentState&, ElementId, const std::vector<ElementId>&, Rng&) const override {}
  bool related(const ComponentState&, const std::vector<ElementId>&) const override {
    return false;
  }
  void add_relation(ComponentState&, const std::vector<ElementId>&) const override {
    throw std::invalid_argument("pure_set has no relation");
  }
};

class RandomGraph final : public ComponentTheory {
 public:
  const std::string& id() const override {
    static const std::string n = "random_graph";
    return n;
  }
  RelationSig relation() const override { return {"edge", 2}; }
  bool symmetric_relation() const override { return true; }
  int atom_count(int nparams) const override { return nparams; }
  bool atom_holds(const ComponentState& s, ElementId x, const std::vector<ElementId>& params,
                  int k) const override {
    return related(s, {x, params[k]});
  }
  void set_atom(ComponentState& s, ElementId x, const std::vector<ElementId>& params, int k,
                bool value) const override {
    if (value) add_relation(s, {x, params[k]});
  }
  void complete(ComponentState& s, ElementId x, const std::vector<ElementId>& params,
                Rng& rng) const override {
    for (ElementId u : s.elements) {
      if (u == x || std::find(params.begin(), params.end(), u) != params.end()) continue;
      if (rng.coin()) add_relation(s, {x, u});
    }
  }
  bool related(const ComponentState& s, const std::vector<ElementId>& args) const override {
    if (args.size() != 2 || args[0] == args[1]) return false;
    return s.relations.count({std::min(args[0], args[1]), std::max(args[0], args[1])}) != 0;
  }
  void add_relation(ComponentState& s, const std::vector<ElementId>& args) const override {
    if (args.size() != 2) throw std::invalid_argument("edge needs two arguments");
    if (args[0] == args[1]) throw std::invalid_argument("edges are irreflexive");
    check_registered(s, args);
    s.relations.insert({std::min(args[0], args[1]), std::max(args[0], args[1])});
  }
  std::vector<std::string> audit(const ComponentState& s) const override {
    auto out = ComponentTheory::audit(s);
    for (const auto& tup : s.relations)
      if (tup.size() == 2 && tup[0] > tup[1]) out.push_back("edge stored in non-canonical order");
    return out;
  }
};

class RandomTournament final : public ComponentTheory {
 public:
  const std::string& id() const override {
    static const std::string n = "random_tournament";
    return n;
  }
  RelationSig relation() const override { return {"arc", 2}; }
  bool symmetric_relation() const override { return false; }
  int atom_count(int nparams) const override { return nparams; }
  bool atom_holds(const ComponentState& s, ElementId x, const std::vector<ElementId>& params,
                  int k) const override {
    return related(s, {x, params[k]});
  }
  void set_atom(ComponentState& s, ElementId x, const std::vector<ElementId>& params, int k,
                bool value) const override {
    // a false atom still pins the pair: the reverse arc holds
    if (value)
      add_relation(s, {x, params[k]});
    else
      add_relation(s, {params[k], x});
  }
  void complete(ComponentState& s, ElementId x, const std::vector<ElementId>& params,
                Rng& rng) const override {
    for (ElementId u : s.elements) {
      if (u == x || std::find(params.begin(), params.end(), u) != params.end()) continue;
      if (rng.coin())
        add_relation(s, {x, u});
      else
        add_relation(s, {u, x});
    }
  }
  bool related(const ComponentState& s, const std::vector<ElementId>& args) const override {
    if (args.size() != 2 || args[0] == args[1]) return false;
    return s.relations.count({args[0], args[1]}) != 0;
  }
  void add_relation(ComponentState& s, const std::vector<ElementId>& args) const override {
    if (args.size() != 2) throw std::invalid_argument("arc needs two arguments");
    if (args[0] == args[1]) throw std::invalid_argument("arcs are irreflexive");
    check_registered(s, args);
    if (s.relations.count({args[1], args[0]}))
      throw std::invalid_argument("reverse arc already present");
    s.relations.insert({args[0], args[1]});
  }
  std::vector<std::string> audit(const ComponentState& s) const override {
    auto out = ComponentTheory::audit(s);
    for (auto i = s.elements.begin(); i != s.elements.end(); ++i)
      for (auto j = std::next(i); j != s.elements.end(); ++j) {
        int n = s.relations.count({*i, *j}) + s.relations.count({*j, *i});
        if (n != 1)
          out.push_back("pair (" + std::to_string(*i) + "," + std::to_string(*j) + ") has " +
                        std::to_string(n) + " arcs");
      }
    return out;
  }
};

class RandomHypergraph final : public ComponentTheory {
 public:
  const std::string& id() const override {
    static const std::string n = "random_3hypergraph";
    return n;
  }
  RelationSig relation() const override { return {"hyperedge", 3}; }
  bool symmetric_relation() const override { return true; }
  int atom_count(int nparams) const override { return nparams * (nparams - 1) / 2; }
  bool atom_holds(const ComponentState& s, ElementId x, const std::vector<ElementId>& params,
                  int k) const override {
    auto [i, j] = pair_at(static_cast<int>(params.size()), k);
    return related(s, {x, params[i], params[j]});
  }
  void set_atom(ComponentState& s, ElementId x, const std::vector<ElementId>& params, int k,
                bool value) const override {
    if (!value) return;
    auto [i, j] = pair_at(static_cast<int>(params.size()), k);
    add_relation(s, {x, params[i], params[j]});
  }
  void complete(ComponentState& s, ElementId x, const std::vector<ElementId>& params,
                Rng& rng) const override {
    // every pair of existing elements not both parameters
    std::vector<ElementId> others(s.elements.begin(), s.elements.end());
    for (size_t a = 0; a < others.size(); ++a) {
      if (others[a] == x) continue;
      for (size_t b = a + 1; b < others.size(); ++b) {
        if (others[b] == x) continue;
        bool pa = std::find(params.begin(), params.end(), others[a]) != params.end();
        bool pb = std::find(params.begin(), params.end(), others[b]) != params.end();
        if (pa && pb) continue;
        if (rng.coin()) add_relation(s, {x, others[a], others[b]});
      }
    }
  }
  bool related(const ComponentState& s, const std::vector<ElementId>& args) const override {
    if (args.size() != 3) return false;
    std::vector<ElementId> key(args);
    std::sort(key.begin(), key.end());
    if (key[0] == key[1] || key[1] == key[2]) return false;
    return s.relations.count(key) != 0;
  }
  void add_relation(ComponentState& s, const std::vector<ElementId>& args) const override {
    if (args.size() != 3) throw std::invalid_argument("hyperedge needs three arguments");
    std::vector<ElementId> key(args);
    std::sort(key.begin(), key.end());
    if (key[0] == key[1] || key[1] == key[2])
      throw std::invalid_argument("hyperedge arguments must be distinct");
    check_registered(s, args);
    s.relations.insert(key);
  }

 private:
  static std::pair<int, int> pair_at(int n, int k) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (k-- == 0) return {i, j};
    throw std::logic_error("atom index out of range");
  }
};

}  // namespace

const ComponentTheory& theory(const std::string& id) {
  static const PureSet pure_set;
  static const RandomGraph random_graph;
  static const RandomTournament random_tournament;
  static const RandomHypergraph random_3hypergraph;
  if (id == "pure_set") return pure_set;
  if (id == "random_graph") return random_graph;
  if (id == "random_tournament") return random_tournament;
  if (id == "random_3hypergraph") return random_3hypergraph;
  throw std::invalid_argument("unknown component theory: " + id);
}

const std::vector<std::string>& theory_ids() {
  static const std::vector<std::string> ids = {"pure_set", "random_graph", "random_tournament",
                                               "random_3hypergraph"};
  return ids;
}

}  // namespace nicmeas
