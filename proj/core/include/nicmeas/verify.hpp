#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nicmeas/fragment.hpp"
#include "nicmeas/measure.hpp"

namespace nicmeas {

struct CheckFailure {
  std::string instance;  // enough to replay the case under the report's seed
  std::string expected;
  std::string actual;
};

struct CheckReport {
  std::string suite;
  int instances = 0;
  std::vector<CheckFailure> failures;
  uint64_t seed = 0;
  long long elapsed_ms = 0;
  bool passed() const { return failures.empty(); }
};

// Values are invariant under generator automorphisms and their compositions:
// h applied after moving a component equals h before.
CheckReport check_cms1(const Fragment& f, int trials, uint64_t seed);

// Set values recompute from raw type lists (max dim, sum over the argmax),
// and tuples inside the closure have value (0, 1) with a one-point
// descriptor class standing in for the orbit.
CheckReport check_cms2_cms3(const Fragment& f, int trials, uint64_t seed);

// Chain additivity over definably closed subtuples: for sampled tuples
// and subtuples drawn from tcl(C a), h(a/C) = h(b/C) * h(a/tcl(C b)).
CheckReport check_cms4(const Fragment& f, int trials, uint64_t seed);

// Finite value set, bounded by the number of parameter types, and equal
// values across realizations of the same parameter type. The formula's
// variables split: 0..arity-1 range over the measured tuple, the following
// param_arity indices over the sampled parameters.
CheckReport check_ms1_ms3(const Fragment& f, const Formula& phi, int arity, int param_arity,
                          int budget, uint64_t seed);

// Coordinate projections: the image partitions into classes by fiber value
// and the dim/meas of the domain recompute from base and fiber exactly.
CheckReport check_ms4_fubini(const Fragment& f, int trials, uint64_t seed);

// Nested closed sets refine types without changing totals: the value of a
// type over the smaller set is the max dim / measure sum of its extensions.
CheckReport check_well_definedness(const Fragment& f, int trials, uint64_t seed);

// Monte Carlo cross-check of the component pattern measures: frequencies of
// the 2^m patterns over a |c_size| parameter set in coin-flip structures.
CheckReport sampling_oracle_component(const std::string& theory_id, int c_size, int samples,
                                      uint64_t seed);

// Fragment-scale coordinatization laws: tree types of single nodes decide
// full types over the empty closure; sibling pairs with equal tree shape and
// equal component atoms over a closed set have equal full descriptors; every
// nonalgebraic 1-type admits at least `realizations` distinct fresh points.
CheckReport check_nic_axioms(const Fragment& f, int realizations = 5);

// Named bundles for the CLI: cms, ms, nic, oracle, or all.
std::vector<CheckReport> run_suite(const std::string& name, const Fragment& f, int trials,
                                   uint64_t seed);

}  // namespace nicmeas
