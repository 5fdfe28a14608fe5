#include "dfvs/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace dfvs {
namespace oracle {

namespace {

void require_small(const DiGraph& g, int max_n, const char* what) {
    if (g.num_vertices() > max_n)
        throw std::invalid_argument(std::string(what) + ": instance has " +
                                    std::to_string(g.num_vertices()) +
                                    " vertices, limit is " + std::to_string(max_n));
}

// Kahn-style elimination over a dense matrix; deliberately shares no code
// with DiGraph::find_cycle.
bool matrix_acyclic(const std::vector<std::vector<char>>& adj, std::vector<char> present) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> indeg(n, 0);
    for (int u = 0; u < n; ++u) {
        if (!present[u]) continue;
        for (int v = 0; v < n; ++v)
            if (present[v] && adj[u][v]) ++indeg[v];
    }
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (present[v] && indeg[v] == 0) queue.push_back(v);
    int removed = 0, alive = 0;
    for (int v = 0; v < n; ++v)
        if (present[v]) ++alive;
    while (!queue.empty()) {
        int u = queue.back();
        queue.pop_back();
        present[u] = 0;
        ++removed;
        for (int v = 0; v < n; ++v)
            if (present[v] && adj[u][v] && --indeg[v] == 0) queue.push_back(v);
    }
    return removed == alive;
}

std::vector<std::vector<char>> dense_adj(const DiGraph& g) {
    const int n = g.capacity();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (VertexId u : g.vertices())
        for (VertexId v : g.succ(u)) adj[u][v] = 1;
    return adj;
}

}  // namespace

bool is_acyclic_after_removal(const DiGraph& g, const std::vector<VertexId>& removed) {
    auto adj = dense_adj(g);
    std::vector<char> present(g.capacity(), 0);
    for (VertexId v : g.vertices()) present[v] = 1;
    for (VertexId v : removed)
        if (v >= 0 && v < g.capacity()) present[v] = 0;
    return matrix_acyclic(adj, std::move(present));
}

std::vector<VertexId> brute_force_dfvs(const DiGraph& g, int max_n) {
    require_small(g, max_n, "brute_force_dfvs");
    auto adj = dense_adj(g);
    std::vector<VertexId> ids = g.vertices();
    const int n = static_cast<int>(ids.size());
    std::vector<char> all_present(g.capacity(), 0);
    for (VertexId v : ids) all_present[v] = 1;

    for (int k = 0; k <= n; ++k) {
        // Lexicographically ordered k-combinations of ids.
        std::vector<int> pick(k);
        for (int i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::vector<char> present = all_present;
            for (int i : pick) present[ids[i]] = 0;
            if (matrix_acyclic(adj, std::move(present))) {
                std::vector<VertexId> out;
                for (int i : pick) out.push_back(ids[i]);
                return out;
            }
            int pos = k - 1;
            while (pos >= 0 && pick[pos] == n - k + pos) --pos;
            if (pos < 0) break;
            ++pick[pos];
            for (int i = pos + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
        }
    }
    return g.vertices();  // unreachable: removing everything is always acyclic
}

int brute_force_dfvs_size(const DiGraph& g, int max_n) {
    return static_cast<int>(brute_force_dfvs(g, max_n).size());
}

std::vector<std::vector<VertexId>> brute_force_cycles(const DiGraph& g, int max_n) {
    require_small(g, max_n, "brute_force_cycles");
    auto adj = dense_adj(g);
    const int n = g.capacity();
    std::vector<char> alive(n, 0);
    for (VertexId v : g.vertices()) alive[v] = 1;

    // Every simple cycle, enumerated from its smallest vertex by exhaustive
    // DFS over larger vertices. No pruning beyond simplicity, so the set of
    // vertex sets collected is exactly the set of all cycles' vertex sets.
    std::set<std::vector<VertexId>> sets;
    std::vector<VertexId> path;
    std::vector<char> on_path(n, 0);
    for (int root = 0; root < n; ++root) {
        if (!alive[root]) continue;
        if (adj[root][root]) sets.insert({root});
        path.assign(1, root);
        on_path.assign(n, 0);
        on_path[root] = 1;
        // Explicit stack of (vertex, next successor to try).
        std::vector<std::pair<int, int>> st{{root, 0}};
        while (!st.empty()) {
            int v = st.back().first;
            if (st.back().second == 0 && path.size() >= 2 && adj[v][root]) {
                auto s = path;
                std::sort(s.begin(), s.end());
                sets.insert(std::move(s));
            }
            bool descended = false;
            while (st.back().second < n) {
                int w = st.back().second++;
                if (w <= root || !alive[w] || on_path[w] || !adj[v][w]) continue;
                path.push_back(w);
                on_path[w] = 1;
                st.push_back({w, 0});
                descended = true;
                break;
            }
            if (descended) continue;
            st.pop_back();
            on_path[v] = 0;
            path.pop_back();
        }
    }

    std::vector<std::vector<VertexId>> all(sets.begin(), sets.end());
    std::vector<std::vector<VertexId>> out;
    for (const auto& s : all) {
        bool covered = false;
        for (const auto& t : all) {
            if (t.size() >= s.size() || t.empty()) continue;
            if (std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                covered = true;
                break;
            }
        }
        if (!covered) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

}  // namespace oracle
}  // namespace dfvs
