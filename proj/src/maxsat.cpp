#include "dfvs/maxsat.hpp"

#include <stdexcept>

namespace dfvs {

using sat::Lit;
using sat::Solver;
using sat::Var;

CardinalityLayer::CardinalityLayer(Solver& solver, const std::vector<Var>& counted, int cap) {
    if (cap <= 0 || counted.empty()) return;

    // Bottom-up totalizer merge; each node's outputs o_1..o_m are "count ≥ i"
    // indicators, truncated at cap. Only the direction needed for upper
    // bounds is encoded: a_i ∧ b_j → o_min(i+j, cap).
    std::vector<std::vector<Var>> nodes;
    for (Var v : counted) nodes.push_back({v});
    while (nodes.size() > 1) {
        std::vector<std::vector<Var>> next;
        for (std::size_t i = 0; i + 1 < nodes.size(); i += 2) {
            const auto& a = nodes[i];
            const auto& b = nodes[i + 1];
            int m = std::min<int>((int)(a.size() + b.size()), cap);
            std::vector<Var> r(m);
            for (int k = 0; k < m; ++k) r[k] = solver.new_var();
            for (int ia = 0; ia <= (int)a.size(); ++ia)
                for (int jb = 0; jb <= (int)b.size(); ++jb) {
                    if (ia + jb == 0) continue;
                    int out = std::min(ia + jb, m);
                    std::vector<Lit> cl;
                    if (ia > 0) cl.push_back(sat::mk_lit(a[ia - 1], true));
                    if (jb > 0) cl.push_back(sat::mk_lit(b[jb - 1], true));
                    cl.push_back(sat::mk_lit(r[out - 1]));
                    solver.add_clause(std::move(cl));
                }
            next.push_back(std::move(r));
        }
        if (nodes.size() % 2 == 1) next.push_back(std::move(nodes.back()));
        nodes = std::move(next);
    }
    outputs_ = std::move(nodes.front());
}

Lit CardinalityLayer::bound_assumption(int k) const {
    if (k < 0 || k >= (int)outputs_.size()) return sat::kLitUndef;
    return sat::mk_lit(outputs_[k], true);  // ¬(count ≥ k+1)
}

MaxSatResult minimize(const MaxSatInstance& instance) {
    Solver solver;
    std::vector<Var> counted;
    for (int i = 0; i < instance.num_vars; ++i) {
        Var v = solver.new_var();
        solver.set_phase_preference(v, false);
        counted.push_back(v);
    }
    for (const auto& cl : instance.hard) solver.add_clause(cl);
    if (instance.propagator) solver.set_propagator(instance.propagator);

    auto extract = [&](std::vector<bool>& model) {
        model.assign(instance.num_vars, false);
        int t = 0;
        for (int i = 0; i < instance.num_vars; ++i)
            if (solver.model_value(counted[i]) == sat::lbool::True) {
                model[i] = true;
                ++t;
            }
        return t;
    };

    MaxSatResult res;
    if (solver.solve() != sat::SolveResult::Sat)
        throw std::runtime_error("minimize: hard clauses unsatisfiable");
    int best = extract(res.model);
    if (instance.model_callback) instance.model_callback(res.model);

    if (best > 0) {
        // Built once, sized to the first model; the bound then only drops.
        CardinalityLayer layer(solver, counted, best);
        while (best > 0) {
            Lit assume = layer.bound_assumption(best - 1);
            std::vector<Lit> assumptions;
            if (!(assume == sat::kLitUndef)) assumptions.push_back(assume);
            if (solver.solve(assumptions) != sat::SolveResult::Sat) break;
            std::vector<bool> model;
            int t = extract(model);
            if (t >= best) throw std::logic_error("minimize: descent failed to progress");
            best = t;
            res.model = std::move(model);
            if (instance.model_callback) instance.model_callback(res.model);
        }
    }
    res.optimum = best;
    res.sat_stats = solver.stats();
    return res;
}

}  // namespace dfvs
