#pragma once

#include <optional>
#include <vector>

#include "dfvs/digraph.hpp"
#include "dfvs/satcore.hpp"

namespace dfvs {

/// Maintains the subgraph induced by a dynamic "present" vertex set of a
/// fixed digraph as a DAG with cached topological orders:
/// order(v) = 0 without present predecessors, else 1 + their maximum order.
/// Mutations are queued and applied by flush_and_check, removals first.
/// Each insertion propagates raised orders along arcs; if the propagation
/// wave returns to the inserted vertex, a cycle is reported, the insertion
/// is rolled back (the vertex stays queued for the next flush) and the
/// structure remains a DAG.
class IncrementalDag {
  public:
    explicit IncrementalDag(const DiGraph& g);

    void queue_insert(VertexId v);
    void queue_remove(VertexId v);

    /// Applies the pending batch. Returns the first cycle formed, or
    /// nullopt once every pending change is applied without one.
    std::optional<Cycle> flush_and_check();

    bool is_present(VertexId v) const { return present_[v]; }
    int order_of(VertexId v) const { return order_[v]; }
    std::vector<VertexId> present_vertices() const;

    /// Recomputes orders from scratch and compares; for tests.
    bool check_order_invariant() const;

  private:
    enum class Pending : char { None, Insert, Remove };

    void apply_removals();
    std::optional<Cycle> apply_insert(VertexId v);

    const DiGraph& g_;
    std::vector<char> present_;
    std::vector<int> order_;
    std::vector<VertexId> from_;  // predecessor that forced the last raise
    std::vector<Pending> pending_;
    std::vector<VertexId> queue_;  // queued vertices in arrival order
};

/// Bridges the SAT trail to an IncrementalDag over the reduced graph:
/// a variable assigned false inserts its vertex (the vertex is excluded
/// from the solution and must stay acyclic), true removes it. On a cycle,
/// yields the clause of positive literals over the cycle's vertices, which
/// the current trail falsifies.
class CyclePropagator final : public sat::Propagator {
  public:
    /// var_of_vertex[v] = SAT variable of vertex v, or -1 if v is not in
    /// the instance. Variables without a vertex (cardinality auxiliaries)
    /// are ignored.
    CyclePropagator(const DiGraph& g, std::vector<int> var_of_vertex);

    void on_assign(std::span<const sat::Lit> lits) override;
    void on_unassign(std::span<const sat::Var> vars) override;
    std::optional<std::vector<sat::Lit>> propagate() override;

    long injections() const { return injections_; }
    const IncrementalDag& dag() const { return dag_; }

  private:
    IncrementalDag dag_;
    std::vector<int> var_of_vertex_;
    std::vector<VertexId> vertex_of_var_;
    std::vector<char> last_value_;  // 0 unassigned, 1 false-assigned, 2 true
    long injections_ = 0;
};

}  // namespace dfvs
