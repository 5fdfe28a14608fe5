#include "dfvs/acyclic_prop.hpp"

#include <algorithm>

namespace dfvs {

IncrementalDag::IncrementalDag(const DiGraph& g)
    : g_(g),
      present_(g.capacity(), 0),
      order_(g.capacity(), 0),
      from_(g.capacity(), -1),
      pending_(g.capacity(), Pending::None) {}

void IncrementalDag::queue_insert(VertexId v) {
    if (present_[v]) {
        if (pending_[v] == Pending::Remove) pending_[v] = Pending::None;
        return;
    }
    if (pending_[v] == Pending::Insert) return;
    pending_[v] = Pending::Insert;
    queue_.push_back(v);
}

void IncrementalDag::queue_remove(VertexId v) {
    if (!present_[v]) {
        if (pending_[v] == Pending::Insert) pending_[v] = Pending::None;
        return;
    }
    if (pending_[v] == Pending::Remove) return;
    pending_[v] = Pending::Remove;
    queue_.push_back(v);
}

void IncrementalDag::apply_removals() {
    std::vector<VertexId> removed;
    for (VertexId v : queue_)
        if (pending_[v] == Pending::Remove && present_[v]) {
            present_[v] = 0;
            pending_[v] = Pending::None;
            removed.push_back(v);
        }
    if (removed.empty()) return;
    // Settle orders downward from the removal sites.
    std::vector<VertexId> work;
    for (VertexId v : removed)
        for (VertexId w : g_.succ(v))
            if (present_[w]) work.push_back(w);
    while (!work.empty()) {
        VertexId w = work.back();
        work.pop_back();
        if (!present_[w]) continue;
        int no = 0;
        for (VertexId p : g_.pred(w))
            if (present_[p]) no = std::max(no, order_[p] + 1);
        if (no == order_[w]) continue;
        order_[w] = no;
        for (VertexId s : g_.succ(w))
            if (present_[s]) work.push_back(s);
    }
}

std::optional<Cycle> IncrementalDag::apply_insert(VertexId v) {
    present_[v] = 1;
    int base = 0;
    for (VertexId p : g_.pred(v))
        if (present_[p] && p != v) base = std::max(base, order_[p] + 1);
    struct Undo {
        VertexId w;
        int order;
        VertexId from;
    };
    std::vector<Undo> undo;
    undo.push_back({v, order_[v], from_[v]});
    order_[v] = base;
    from_[v] = -1;

    std::vector<VertexId> work{v};
    while (!work.empty()) {
        VertexId u = work.back();
        work.pop_back();
        for (VertexId w : g_.succ(u)) {
            if (!present_[w]) continue;
            // Recursion is needed only when the propagated order actually
            // exceeds the successor's current order.
            if (order_[u] + 1 <= order_[w]) continue;
            if (w == v) {
                // The wave returned to the inserted vertex: extract the
                // cycle along the raise antecedents, then roll back.
                Cycle cyc;
                for (VertexId x = u; x != v; x = from_[x]) cyc.vertices.push_back(x);
                cyc.vertices.push_back(v);
                std::reverse(cyc.vertices.begin(), cyc.vertices.end());
                for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
                    order_[it->w] = it->order;
                    from_[it->w] = it->from;
                }
                present_[v] = 0;
                pending_[v] = Pending::Insert;  // retry on the next flush
                queue_.push_back(v);
                return cyc;
            }
            undo.push_back({w, order_[w], from_[w]});
            order_[w] = order_[u] + 1;
            from_[w] = u;
            work.push_back(w);
        }
    }
    return std::nullopt;
}

std::optional<Cycle> IncrementalDag::flush_and_check() {
    apply_removals();
    std::vector<VertexId> pending_inserts;
    for (VertexId v : queue_)
        if (pending_[v] == Pending::Insert) pending_inserts.push_back(v);
    queue_.clear();
    for (std::size_t i = 0; i < pending_inserts.size(); ++i) {
        VertexId v = pending_inserts[i];
        if (pending_[v] != Pending::Insert || present_[v]) continue;
        pending_[v] = Pending::None;
        auto cyc = apply_insert(v);
        if (cyc) {
            // Re-queue the untouched remainder and report the cycle.
            for (std::size_t j = i + 1; j < pending_inserts.size(); ++j)
                if (pending_[pending_inserts[j]] == Pending::Insert)
                    queue_.push_back(pending_inserts[j]);
            return cyc;
        }
    }
    return std::nullopt;
}

std::vector<VertexId> IncrementalDag::present_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < (int)present_.size(); ++v)
        if (present_[v]) out.push_back(v);
    return out;
}

bool IncrementalDag::check_order_invariant() const {
    for (VertexId v = 0; v < (int)present_.size(); ++v) {
        if (!present_[v]) continue;
        int expect = 0;
        for (VertexId p : g_.pred(v))
            if (present_[p] && p != v) expect = std::max(expect, order_[p] + 1);
        if (order_[v] != expect) return false;
    }
    return true;
}

CyclePropagator::CyclePropagator(const DiGraph& g, std::vector<int> var_of_vertex)
    : dag_(g), var_of_vertex_(std::move(var_of_vertex)) {
    int max_var = -1;
    for (int x : var_of_vertex_) max_var = std::max(max_var, x);
    vertex_of_var_.assign(max_var + 1, -1);
    for (VertexId v = 0; v < (int)var_of_vertex_.size(); ++v)
        if (var_of_vertex_[v] >= 0) vertex_of_var_[var_of_vertex_[v]] = v;
    last_value_.assign(max_var + 1, 0);
}

void CyclePropagator::on_assign(std::span<const sat::Lit> lits) {
    for (sat::Lit l : lits) {
        sat::Var x = sat::var_of(l);
        if (x >= (int)vertex_of_var_.size() || vertex_of_var_[x] < 0) continue;
        VertexId v = vertex_of_var_[x];
        if (sat::sign_of(l)) {
            dag_.queue_insert(v);  // excluded vertices must stay acyclic
            last_value_[x] = 1;
        } else {
            dag_.queue_remove(v);
            last_value_[x] = 2;
        }
    }
}

void CyclePropagator::on_unassign(std::span<const sat::Var> vars) {
    for (sat::Var x : vars) {
        if (x >= (int)vertex_of_var_.size() || vertex_of_var_[x] < 0) continue;
        if (last_value_[x] == 1) dag_.queue_remove(vertex_of_var_[x]);
        last_value_[x] = 0;
    }
}

std::optional<std::vector<sat::Lit>> CyclePropagator::propagate() {
    auto cyc = dag_.flush_and_check();
    if (!cyc) return std::nullopt;
    ++injections_;
    std::vector<sat::Lit> clause;
    clause.reserve(cyc->vertices.size());
    for (VertexId v : cyc->vertices) clause.push_back(sat::mk_lit(var_of_vertex_[v]));
    return clause;
}

}  // namespace dfvs
