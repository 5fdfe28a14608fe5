#include "dfvs/digraph.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

namespace dfvs {

namespace {

bool sorted_contains(const std::vector<VertexId>& xs, VertexId v) {
    return std::binary_search(xs.begin(), xs.end(), v);
}

// Returns true if v was inserted (i.e. not already present).
bool sorted_insert(std::vector<VertexId>& xs, VertexId v) {
    auto it = std::lower_bound(xs.begin(), xs.end(), v);
    if (it != xs.end() && *it == v) return false;
    xs.insert(it, v);
    return true;
}

bool sorted_erase(std::vector<VertexId>& xs, VertexId v) {
    auto it = std::lower_bound(xs.begin(), xs.end(), v);
    if (it == xs.end() || *it != v) return false;
    xs.erase(it);
    return true;
}

}  // namespace

DiGraph::DiGraph(int n)
    : alive_(n, 1), succ_(n), pred_(n), alive_count_(n) {}

VertexId DiGraph::add_vertex() {
    alive_.push_back(1);
    succ_.emplace_back();
    pred_.emplace_back();
    ++alive_count_;
    scc_valid_ = false;
    return static_cast<VertexId>(alive_.size()) - 1;
}

void DiGraph::require_alive(VertexId v) const {
    if (!has_vertex(v))
        throw std::invalid_argument("unknown vertex id " + std::to_string(v));
}

bool DiGraph::has_vertex(VertexId v) const {
    return v >= 0 && v < capacity() && alive_[v];
}

bool DiGraph::add_arc(VertexId u, VertexId v) {
    require_alive(u);
    require_alive(v);
    if (!sorted_insert(succ_[u], v)) return false;
    sorted_insert(pred_[v], u);
    ++arc_count_;
    scc_valid_ = false;  // components may merge
    assert(check_consistency());
    return true;
}

bool DiGraph::remove_arc(VertexId u, VertexId v) {
    if (!has_vertex(u) || !has_vertex(v)) return false;
    if (!sorted_erase(succ_[u], v)) return false;
    sorted_erase(pred_[v], u);
    --arc_count_;
    assert(check_consistency());
    return true;
}

bool DiGraph::remove_vertex(VertexId v) {
    if (!has_vertex(v)) return false;
    for (VertexId w : succ_[v]) {
        if (w == v) continue;
        sorted_erase(pred_[w], v);
    }
    for (VertexId w : pred_[v]) {
        if (w == v) continue;
        sorted_erase(succ_[w], v);
    }
    std::size_t self = sorted_contains(succ_[v], v) ? 1 : 0;
    arc_count_ -= succ_[v].size() + pred_[v].size() - self;
    succ_[v].clear();
    pred_[v].clear();
    alive_[v] = 0;
    --alive_count_;
    assert(check_consistency());
    return true;
}

bool DiGraph::has_arc(VertexId u, VertexId v) const {
    if (!has_vertex(u) || !has_vertex(v)) return false;
    return sorted_contains(succ_[u], v);
}

const std::vector<VertexId>& DiGraph::succ(VertexId v) const {
    require_alive(v);
    return succ_[v];
}

const std::vector<VertexId>& DiGraph::pred(VertexId v) const {
    require_alive(v);
    return pred_[v];
}

std::vector<VertexId> DiGraph::neighbors(VertexId v) const {
    require_alive(v);
    std::vector<VertexId> out;
    out.reserve(succ_[v].size() + pred_[v].size());
    std::set_union(succ_[v].begin(), succ_[v].end(), pred_[v].begin(), pred_[v].end(),
                   std::back_inserter(out));
    return out;
}

std::vector<VertexId> DiGraph::bi_neighbors(VertexId v) const {
    require_alive(v);
    std::vector<VertexId> out;
    std::set_intersection(succ_[v].begin(), succ_[v].end(), pred_[v].begin(), pred_[v].end(),
                          std::back_inserter(out));
    return out;
}

std::vector<VertexId> DiGraph::vertices() const {
    std::vector<VertexId> out;
    out.reserve(alive_count_);
    for (VertexId v = 0; v < capacity(); ++v)
        if (alive_[v]) out.push_back(v);
    return out;
}

std::vector<std::pair<VertexId, VertexId>> DiGraph::bi_projection() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (VertexId v = 0; v < capacity(); ++v) {
        if (!alive_[v]) continue;
        for (VertexId w : succ_[v])
            if (v < w && sorted_contains(succ_[w], v)) out.emplace_back(v, w);
    }
    return out;
}

const SccLabeling& DiGraph::scc_par() const {
    if (scc_valid_) return scc_cache_;

    // Iterative Tarjan over the graph with every bi-edge (both directions)
    // deleted. Self-loops are bi by definition of is_bi and thus ignored,
    // which is fine: a self-loop never connects two distinct vertices.
    const int n = capacity();
    scc_cache_.label.assign(n, -1);
    std::vector<int> low(n, -1), idx(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<VertexId> stack;
    int next_idx = 0, next_comp = 0;

    struct Frame {
        VertexId v;
        std::size_t child;
    };
    std::vector<Frame> frames;

    for (VertexId root = 0; root < n; ++root) {
        if (!alive_[root] || idx[root] != -1) continue;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            VertexId v = f.v;
            if (f.child == 0) {
                idx[v] = low[v] = next_idx++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.child < succ_[v].size()) {
                VertexId w = succ_[v][f.child++];
                if (sorted_contains(succ_[w], v)) continue;  // bi-edge: skipped
                if (idx[w] == -1) {
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], idx[w]);
            }
            if (descended) continue;
            if (low[v] == idx[v]) {
                while (true) {
                    VertexId w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    scc_cache_.label[w] = next_comp;
                    if (w == v) break;
                }
                ++next_comp;
            }
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    scc_valid_ = true;
    return scc_cache_;
}

std::optional<Cycle> DiGraph::find_cycle(const std::vector<VertexId>* restrict) const {
    const int n = capacity();
    std::vector<char> allowed(n, 0);
    if (restrict) {
        for (VertexId v : *restrict)
            if (has_vertex(v)) allowed[v] = 1;
    } else {
        for (VertexId v = 0; v < n; ++v) allowed[v] = alive_[v];
    }

    // Colors: 0 unvisited, 1 on current DFS path, 2 done.
    std::vector<char> color(n, 0);
    struct Frame {
        VertexId v;
        std::size_t child;
    };
    std::vector<Frame> frames;

    for (VertexId root = 0; root < n; ++root) {
        if (!allowed[root] || color[root] != 0) continue;
        frames.push_back({root, 0});
        color[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            VertexId v = f.v;
            bool descended = false;
            while (f.child < succ_[v].size()) {
                VertexId w = succ_[v][f.child++];
                if (!allowed[w]) continue;
                if (color[w] == 1) {
                    // Back arc closes a cycle; read it off the frame stack.
                    Cycle c;
                    std::size_t i = 0;
                    while (frames[i].v != w) ++i;
                    for (; i < frames.size(); ++i) c.vertices.push_back(frames[i].v);
                    return c;
                }
                if (color[w] == 0) {
                    color[w] = 1;
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
            }
            if (descended) continue;
            color[v] = 2;
            frames.pop_back();
        }
    }
    return std::nullopt;
}

bool DiGraph::check_consistency() const {
    std::size_t arcs = 0;
    for (VertexId v = 0; v < capacity(); ++v) {
        if (!alive_[v]) {
            if (!succ_[v].empty() || !pred_[v].empty()) return false;
            continue;
        }
        if (!std::is_sorted(succ_[v].begin(), succ_[v].end())) return false;
        if (!std::is_sorted(pred_[v].begin(), pred_[v].end())) return false;
        arcs += succ_[v].size();
        for (VertexId w : succ_[v]) {
            if (!has_vertex(w)) return false;
            if (!sorted_contains(pred_[w], v)) return false;
        }
        for (VertexId w : pred_[v])
            if (!has_vertex(w) || !sorted_contains(succ_[w], v)) return false;
    }
    return arcs == arc_count_;
}

}  // namespace dfvs
