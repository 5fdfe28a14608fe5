#pragma once

#include <cstdint>
#include <vector>

#include "dfvs/cycles.hpp"
#include "dfvs/digraph.hpp"
#include "dfvs/reductions.hpp"
#include "dfvs/satcore.hpp"

namespace dfvs {

struct SolveConfig {
    enum class Mode { Propagate, Cegar };
    int max_cycle_len = 4;
    long max_cycles = 25000;  // 0 = start with no cycle clauses at all
    Mode mode = Mode::Propagate;
    bool reductions = true;
    std::uint32_t rules = kDefaultRules;
    long node_budget = 10'000'000;
    unsigned seed = 0;  // reserved; the solver is deterministic
};

struct SolveReport {
    std::vector<VertexId> solution;  // sorted original vertex ids
    int optimum = 0;

    ReductionStats reduction_stats;
    int kernel_vertices = 0;
    std::size_t kernel_arcs = 0;

    long initial_cycles = 0;
    bool cycles_complete = false;

    sat::Solver::Stats sat_stats;
    long propagator_injections = 0;
    long cegar_iterations = 0;

    double reduce_seconds = 0.0;
    double enumerate_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// True iff removing `candidate` from g leaves it acyclic; false (with a
/// stderr diagnostic) if the candidate names a vertex g does not have.
bool validate(const DiGraph& g, const std::vector<VertexId>& candidate);

/// Full pipeline: reduce, enumerate short cycles, reduce with the complete
/// cycle set, minimize (lazy cycle injection or the counterexample loop,
/// per config.mode), map the kernel solution back, and validate. Throws
/// std::logic_error if the final validation ever fails.
SolveReport solve_dfvs(const DiGraph& g, const SolveConfig& config = {});

/// Counterexample-driven loop on g itself (no reductions): minimize over
/// the current clauses; while the model is infeasible, harvest a maximal
/// set of vertex-disjoint cycles avoiding the model and add their clauses.
SolveReport cegar_solve(const DiGraph& g, const CycleSet& cycles,
                        const SolveConfig& config = {});

}  // namespace dfvs
