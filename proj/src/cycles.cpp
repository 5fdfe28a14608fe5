#include "dfvs/cycles.hpp"

#include <algorithm>
#include <limits>

namespace dfvs {

namespace {

// DFS enumeration of uncovered cycles, rooted at each cycle's smallest
// vertex. A cycle is covered exactly when some arc shortcuts its path
// (the shortcut closes a cycle on a strict subset of its vertices), so the
// search prunes any extension that would create such a shortcut and the
// surviving closures are precisely the uncovered cycles.
class CycleSearch {
  public:
    CycleSearch(const DiGraph& g, int max_len, long max_count, long budget)
        : g_(g),
          max_len_(max_len),
          max_count_(max_count),
          budget_(budget),
          on_path_(g.capacity(), 0),
          cnt_in_(g.capacity(), 0),
          cnt_out_(g.capacity(), 0) {}

    void run() {
        for (VertexId s : g_.vertices()) {
            if (aborted_) return;
            if (g_.has_arc(s, s)) {
                emit({s});
                continue;  // every other cycle through s is covered
            }
            root_ = s;
            push(s);
            dfs();
            pop(s);
        }
    }

    std::vector<Cycle> take_cycles() { return std::move(found_); }
    bool depth_cutoff() const { return depth_cutoff_; }
    bool cap_hit() const { return cap_hit_; }
    bool budget_hit() const { return budget_hit_; }
    long steps() const { return steps_; }
    bool complete() const { return !depth_cutoff_ && !cap_hit_ && !budget_hit_; }

  private:
    void push(VertexId v) {
        on_path_[v] = 1;
        path_.push_back(v);
        for (VertexId w : g_.succ(v)) ++cnt_in_[w];
        for (VertexId u : g_.pred(v)) ++cnt_out_[u];
    }

    void pop(VertexId v) {
        on_path_[v] = 0;
        path_.pop_back();
        for (VertexId w : g_.succ(v)) --cnt_in_[w];
        for (VertexId u : g_.pred(v)) --cnt_out_[u];
    }

    void emit(std::vector<VertexId> vs) {
        if (static_cast<long>(found_.size()) >= max_count_) {
            cap_hit_ = true;
            aborted_ = true;
            return;
        }
        found_.push_back(Cycle{std::move(vs)});
    }

    // w may extend the current path without creating a shortcut.
    bool admissible(VertexId w) const {
        if (w <= root_ || on_path_[w]) return false;
        if (g_.has_arc(w, w)) return false;  // covered by the self-loop
        if (cnt_in_[w] != 1) return false;   // shortcut into w
        int out_to_path = cnt_out_[w] - (g_.has_arc(w, root_) ? 1 : 0);
        return out_to_path == 0;  // else shortcut back into the path
    }

    // Called with the path one past the length bound: true when the branch
    // still has a live continuation, i.e. the bound really pruned something.
    // Every prefix of an uncovered cycle extends only through admissible
    // vertices, so "closes now or extends admissibly" cannot miss one.
    bool over_limit_alive() {
        if (cnt_in_[root_] >= 1)
            return cnt_in_[root_] == 1 && g_.has_arc(path_.back(), root_);
        for (VertexId w : g_.succ(path_.back()))
            if (admissible(w)) return true;
        return false;
    }

    void dfs() {
        if (aborted_) return;
        VertexId vk = path_.back();
        // Some path vertex has an arc back to the root: either this path
        // closes an uncovered cycle right now, or every further closure
        // would contain that arc as a shortcut. Either way, stop extending.
        if (cnt_in_[root_] >= 1) {
            if (path_.size() >= 2 && cnt_in_[root_] == 1 && g_.has_arc(vk, root_))
                emit(path_);
            return;
        }
        for (VertexId w : g_.succ(vk)) {
            if (aborted_) return;
            if (++steps_ > budget_) {
                budget_hit_ = true;
                aborted_ = true;
                return;
            }
            if (!admissible(w)) continue;
            if (static_cast<int>(path_.size()) >= max_len_) {
                if (!depth_cutoff_) {
                    push(w);
                    if (over_limit_alive()) depth_cutoff_ = true;
                    pop(w);
                }
                continue;
            }
            push(w);
            dfs();
            pop(w);
        }
    }

    const DiGraph& g_;
    const int max_len_;
    const long max_count_;
    const long budget_;
    VertexId root_ = 0;
    std::vector<VertexId> path_;
    std::vector<char> on_path_;
    std::vector<int> cnt_in_;   // arcs from path vertices into w
    std::vector<int> cnt_out_;  // arcs from w into path vertices
    std::vector<Cycle> found_;
    bool depth_cutoff_ = false, cap_hit_ = false, budget_hit_ = false, aborted_ = false;
    long steps_ = 0;
};

constexpr long kNoBudget = std::numeric_limits<long>::max();

// The monotone stopping rule exists to abort exponential blowups; tiny
// fluctuations on small instances should not cut enumeration short.
constexpr long kMonotoneFloor = 64;

}  // namespace

CycleSet find_short_cycles(const DiGraph& g, int max_len, long max_count) {
    CycleSearch search(g, max_len, max_count, kNoBudget);
    search.run();
    CycleSet out;
    out.cycles = filter_covered(search.take_cycles());
    out.complete = search.complete();
    return out;
}

CycleSet enumerate_all_uncovered(const DiGraph& g, long node_budget, int initial_len) {
    long spent = 0;
    long prev_total = 0, prev_new = -1;
    CycleSet best;
    for (int len = initial_len;; ++len) {
        CycleSearch search(g, len, kNoBudget, node_budget - spent);
        search.run();
        spent += search.steps();
        if (search.budget_hit()) return best;  // keep the last finished round
        best.cycles = filter_covered(search.take_cycles());
        best.complete = search.complete();
        if (best.complete) return best;
        long total = static_cast<long>(best.cycles.size());
        long fresh = total - prev_total;
        if (prev_new >= 0 && fresh > prev_new && fresh > kMonotoneFloor) return best;
        prev_total = total;
        prev_new = fresh;
    }
}

std::vector<Cycle> filter_covered(std::vector<Cycle> cycles) {
    const std::size_t n = cycles.size();
    std::vector<std::vector<VertexId>> sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        sets[i] = cycles[i].vertices;
        std::sort(sets[i].begin(), sets[i].end());
    }
    std::vector<char> drop(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (drop[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || drop[j]) continue;
            if (sets[j].size() > sets[i].size()) continue;
            if (sets[j] == sets[i]) {
                if (j > i) drop[j] = 1;  // duplicate set: keep the first
                continue;
            }
            if (std::includes(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end())) {
                drop[i] = 1;
                break;
            }
        }
    }
    std::vector<Cycle> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!drop[i]) out.push_back(std::move(cycles[i]));
    return out;
}

bool cycle_valid(const DiGraph& g, const Cycle& c) {
    if (c.vertices.empty()) return false;
    auto sorted = c.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
        VertexId u = c.vertices[i];
        VertexId v = c.vertices[(i + 1) % c.vertices.size()];
        if (!g.has_arc(u, v)) return false;
    }
    return true;
}

}  // namespace dfvs
