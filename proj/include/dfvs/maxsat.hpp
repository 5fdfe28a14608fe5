#pragma once

#include <functional>
#include <vector>

#include "dfvs/satcore.hpp"

namespace dfvs {

/// Minimize the number of true variables among 0..num_vars-1 subject to the
/// hard clauses (every variable carries an implicit unit soft clause asking
/// it to be false). The optional propagator may inject further hard clauses
/// during search.
struct MaxSatInstance {
    int num_vars = 0;
    std::vector<std::vector<sat::Lit>> hard;
    sat::Propagator* propagator = nullptr;
    /// Invoked with every satisfying model found during the descent; used
    /// by tests to audit intermediate models.
    std::function<void(const std::vector<bool>&)> model_callback;
};

struct MaxSatResult {
    std::vector<bool> model;
    int optimum = 0;
    sat::Solver::Stats sat_stats;
};

/// Totalizer-style cardinality circuit over `counted`, built once; the
/// bound is tightened by assuming single output literals, so learned
/// clauses survive across descent steps. Outputs are created up to `cap`:
/// output i (1-based) means "at least i counted variables are true".
class CardinalityLayer {
  public:
    CardinalityLayer(sat::Solver& solver, const std::vector<sat::Var>& counted, int cap);

    /// Assumption literal enforcing (true count ≤ k), or kLitUndef when the
    /// bound does not restrict anything representable (k ≥ cap).
    sat::Lit bound_assumption(int k) const;

  private:
    std::vector<sat::Var> outputs_;
};

/// Linear SAT-UNSAT descent. Requires the hard clauses (plus propagator
/// closure) to be satisfiable; throws std::runtime_error otherwise.
MaxSatResult minimize(const MaxSatInstance& instance);

}  // namespace dfvs
