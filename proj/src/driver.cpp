#include "dfvs/driver.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <stdexcept>

#include "dfvs/acyclic_prop.hpp"
#include "dfvs/maxsat.hpp"

namespace dfvs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct VarMap {
    std::vector<VertexId> vertex_of_var;
    std::vector<int> var_of_vertex;  // -1 when absent
};

VarMap make_var_map(const DiGraph& g) {
    VarMap m;
    m.var_of_vertex.assign(g.capacity(), -1);
    for (VertexId v : g.vertices()) {
        m.var_of_vertex[v] = (int)m.vertex_of_var.size();
        m.vertex_of_var.push_back(v);
    }
    return m;
}

std::vector<std::vector<sat::Lit>> cycle_clauses(const CycleSet& cycles, const VarMap& m) {
    std::vector<std::vector<sat::Lit>> out;
    out.reserve(cycles.cycles.size());
    for (const Cycle& c : cycles.cycles) {
        std::vector<sat::Lit> cl;
        cl.reserve(c.vertices.size());
        for (VertexId v : c.vertices) cl.push_back(sat::mk_lit(m.var_of_vertex[v]));
        out.push_back(std::move(cl));
    }
    return out;
}

std::vector<VertexId> model_to_vertices(const std::vector<bool>& model, const VarMap& m) {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < model.size(); ++i)
        if (model[i]) out.push_back(m.vertex_of_var[i]);
    return out;
}

// Minimize over the kernel with lazy cycle injection.
std::vector<VertexId> solve_propagate(const DiGraph& kernel, const CycleSet& cycles,
                                      SolveReport& report) {
    VarMap m = make_var_map(kernel);
    if (m.vertex_of_var.empty()) return {};
    CyclePropagator prop(kernel, m.var_of_vertex);
    MaxSatInstance inst;
    inst.num_vars = (int)m.vertex_of_var.size();
    inst.hard = cycle_clauses(cycles, m);
    inst.propagator = &prop;
    MaxSatResult res = minimize(inst);
    report.sat_stats = res.sat_stats;
    report.propagator_injections = prop.injections();
    return model_to_vertices(res.model, m);
}

// Minimize, and on infeasibility add a maximal vertex-disjoint cycle batch
// from the leftover graph, then start over.
std::vector<VertexId> solve_cegar(const DiGraph& kernel, const CycleSet& cycles,
                                  SolveReport& report) {
    VarMap m = make_var_map(kernel);
    if (m.vertex_of_var.empty()) return {};
    MaxSatInstance inst;
    inst.num_vars = (int)m.vertex_of_var.size();
    inst.hard = cycle_clauses(cycles, m);

    while (true) {
        ++report.cegar_iterations;
        MaxSatResult res = minimize(inst);
        report.sat_stats = res.sat_stats;
        std::vector<VertexId> sol = model_to_vertices(res.model, m);
        if (validate(kernel, sol)) return sol;

        std::vector<char> removed(kernel.capacity(), 0);
        for (VertexId v : sol) removed[v] = 1;
        bool found = false;
        while (true) {
            std::vector<VertexId> rest;
            for (VertexId v : kernel.vertices())
                if (!removed[v]) rest.push_back(v);
            auto cyc = kernel.find_cycle(&rest);
            if (!cyc) break;
            found = true;
            std::vector<sat::Lit> cl;
            for (VertexId v : cyc->vertices) {
                cl.push_back(sat::mk_lit(m.var_of_vertex[v]));
                removed[v] = 1;  // keep the harvest vertex-disjoint
            }
            inst.hard.push_back(std::move(cl));
        }
        if (!found)
            throw std::logic_error("cegar: infeasible model but no uncovered cycle found");
    }
}

void append_trace(ReductionTrace& into, ReductionTrace&& more) {
    for (auto& e : more.events) into.events.push_back(std::move(e));
    into.forced.insert(into.forced.end(), more.forced.begin(), more.forced.end());
    into.offset += more.offset;
}

}  // namespace

bool validate(const DiGraph& g, const std::vector<VertexId>& candidate) {
    for (VertexId v : candidate)
        if (!g.has_vertex(v)) {
            std::cerr << "validate: unknown vertex " << v << " in candidate\n";
            return false;
        }
    std::vector<char> drop(g.capacity(), 0);
    for (VertexId v : candidate) drop[v] = 1;
    std::vector<VertexId> rest;
    for (VertexId v : g.vertices())
        if (!drop[v]) rest.push_back(v);
    return g.is_acyclic(&rest);
}

SolveReport solve_dfvs(const DiGraph& g, const SolveConfig& config) {
    SolveReport report;
    DiGraph kernel = g;
    ReductionTrace trace;

    auto t0 = Clock::now();
    if (config.reductions) {
        ReduceResult r = reduce(std::move(kernel), config.rules, &report.reduction_stats);
        kernel = std::move(r.kernel);
        trace = std::move(r.trace);
    }
    report.reduce_seconds = seconds_since(t0);

    t0 = Clock::now();
    CycleSet cycles;
    if (config.max_cycles > 0)
        cycles = find_short_cycles(kernel, config.max_cycle_len, config.max_cycles);
    report.enumerate_seconds = seconds_since(t0);

    if (config.reductions && cycles.complete && (config.rules & rule_bit(RuleId::AllCycles))) {
        t0 = Clock::now();
        ReduceWithCyclesResult r =
            reduce_with_all_cycles(std::move(kernel), std::move(cycles), config.rules,
                                   config.node_budget, &report.reduction_stats);
        kernel = std::move(r.kernel);
        cycles = std::move(r.cycles);
        append_trace(trace, std::move(r.trace));

        // Folding rules were deferred; one more plain pass may shrink the
        // kernel further, at the cost of refreshing the cycle set.
        ReduceResult r2 = reduce(std::move(kernel), config.rules, &report.reduction_stats);
        kernel = std::move(r2.kernel);
        if (!r2.trace.events.empty()) {
            append_trace(trace, std::move(r2.trace));
            cycles = config.max_cycles > 0
                         ? find_short_cycles(kernel, config.max_cycle_len, config.max_cycles)
                         : CycleSet{};
        }
        report.reduce_seconds += seconds_since(t0);
    }

    report.kernel_vertices = kernel.num_vertices();
    report.kernel_arcs = kernel.arc_count();
    report.initial_cycles = (long)cycles.cycles.size();
    report.cycles_complete = cycles.complete;

    t0 = Clock::now();
    std::vector<VertexId> kernel_sol = config.mode == SolveConfig::Mode::Propagate
                                           ? solve_propagate(kernel, cycles, report)
                                           : solve_cegar(kernel, cycles, report);
    report.solve_seconds = seconds_since(t0);

    report.solution = reconstruct(trace, std::move(kernel_sol));
    report.optimum = (int)report.solution.size();
    if (!validate(g, report.solution))
        throw std::logic_error("solve_dfvs produced an infeasible solution");
    return report;
}

SolveReport cegar_solve(const DiGraph& g, const CycleSet& cycles, const SolveConfig& config) {
    (void)config;
    SolveReport report;
    auto t0 = Clock::now();
    report.solution = solve_cegar(g, cycles, report);
    std::sort(report.solution.begin(), report.solution.end());
    report.solve_seconds = seconds_since(t0);
    report.optimum = (int)report.solution.size();
    if (!validate(g, report.solution))
        throw std::logic_error("cegar_solve produced an infeasible solution");
    return report;
}

}  // namespace dfvs
