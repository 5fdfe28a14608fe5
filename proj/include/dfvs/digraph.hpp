#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace dfvs {

using VertexId = int;

/// A directed cycle given as the list of its distinct vertices; the closing
/// arc from the last vertex back to the first is implied. A single vertex
/// denotes a self-loop, two vertices a bi-edge.
struct Cycle {
    std::vector<VertexId> vertices;
};

/// Strongly connected components of the graph with all bi-edges removed.
/// Two vertices with different labels cannot reach each other without
/// crossing a bi-edge.
struct SccLabeling {
    std::vector<int> label;
};

/// Mutable digraph over integer vertex ids. Ids are stable: removing a
/// vertex never renumbers the others, and removed ids are not reused.
/// Adjacency is kept as sorted vectors on both sides so that neighborhood
/// containment tests run in linear time in the degrees involved.
class DiGraph {
  public:
    DiGraph() = default;
    explicit DiGraph(int n);

    VertexId add_vertex();

    /// Inserts the arc (u, v). Returns false if it was already present.
    /// Self-loops are allowed at this layer; callers decide policy.
    /// Throws std::invalid_argument if either endpoint is not alive.
    bool add_arc(VertexId u, VertexId v);

    /// Removes the arc if present; returns false (and leaves the graph
    /// unchanged) otherwise.
    bool remove_arc(VertexId u, VertexId v);

    /// Removes the vertex together with all incident arcs; returns false if
    /// the vertex does not exist.
    bool remove_vertex(VertexId v);

    bool has_vertex(VertexId v) const;
    bool has_arc(VertexId u, VertexId v) const;
    bool is_bi(VertexId u, VertexId v) const { return has_arc(u, v) && has_arc(v, u); }

    const std::vector<VertexId>& succ(VertexId v) const;
    const std::vector<VertexId>& pred(VertexId v) const;
    /// pred(v) ∪ succ(v), sorted.
    std::vector<VertexId> neighbors(VertexId v) const;
    /// pred(v) ∩ succ(v), sorted.
    std::vector<VertexId> bi_neighbors(VertexId v) const;

    std::size_t arc_count() const { return arc_count_; }
    int num_vertices() const { return alive_count_; }
    /// One past the largest id ever allocated; valid ids are [0, capacity).
    int capacity() const { return static_cast<int>(alive_.size()); }
    std::vector<VertexId> vertices() const;

    /// The unordered pairs {u, v} connected by arcs in both directions.
    std::vector<std::pair<VertexId, VertexId>> bi_projection() const;

    /// SCC labels of the graph without its bi-edges. Labels are cached:
    /// adding an arc marks them dirty (components may merge), removals keep
    /// them usable because components only split, so a "different label"
    /// verdict stays sound. Recomputed on the first dirty query.
    const SccLabeling& scc_par() const;

    /// Returns a directed cycle of the graph (restricted to `restrict` if
    /// given), or nullopt if the (induced) graph is acyclic.
    std::optional<Cycle> find_cycle(const std::vector<VertexId>* restrict = nullptr) const;
    bool is_acyclic(const std::vector<VertexId>* restrict = nullptr) const {
        return !find_cycle(restrict).has_value();
    }

    /// Succ/pred symmetry and arc-count consistency; used by debug checks.
    bool check_consistency() const;

  private:
    std::vector<char> alive_;
    std::vector<std::vector<VertexId>> succ_;
    std::vector<std::vector<VertexId>> pred_;
    std::size_t arc_count_ = 0;
    int alive_count_ = 0;

    mutable SccLabeling scc_cache_;
    mutable bool scc_valid_ = false;

    void require_alive(VertexId v) const;
};

}  // namespace dfvs
