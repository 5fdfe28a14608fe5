#include "dfvs/reductions.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>
#include <string>

namespace dfvs {

namespace {

constexpr std::string_view kRuleNames[kNumRules] = {
    "loop",     "in0out0",   "in1out1",  "subset",   "pie",      "dome",     "inoutdiclique",
    "core",     "diclique23", "unconfined", "manyfold", "fourpath", "threeempty", "allcycles"};

bool contains(const std::vector<VertexId>& sorted, VertexId v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

// xs ⊆ ys ∪ {extra}?  Both sorted.
bool subset_with_extra(const std::vector<VertexId>& xs, const std::vector<VertexId>& ys,
                       VertexId extra) {
    for (VertexId x : xs) {
        if (x == extra) continue;
        if (!contains(ys, x)) return false;
    }
    return true;
}

bool pairwise_bi(const DiGraph& g, const std::vector<VertexId>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (!g.is_bi(vs[i], vs[j])) return false;
    return true;
}

bool bi_with_all(const DiGraph& g, VertexId v, const std::vector<VertexId>& vs) {
    for (VertexId w : vs)
        if (!g.is_bi(v, w)) return false;
    return true;
}

void commit(ReductionTrace& trace, VertexId v, EventKind kind) {
    if (kind == EventKind::Loop)
        trace.events.push_back({EventKind::Loop, LoopData{v}});
    else
        trace.events.push_back({EventKind::CommitVertex, CommitData{v}});
    trace.forced.push_back(v);
}

}  // namespace

std::string_view rule_name(RuleId r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<RuleId> rule_from_name(std::string_view name) {
    for (int i = 0; i < kNumRules; ++i)
        if (kRuleNames[i] == name) return static_cast<RuleId>(i);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exclusion
// ---------------------------------------------------------------------------

void exclude_in_place(DiGraph& g, VertexId v) {
    if (g.has_arc(v, v))
        throw std::invalid_argument("exclude: vertex " + std::to_string(v) +
                                    " carries a self-loop; the loop rule must fire first");
    const std::vector<VertexId> preds = g.pred(v);
    const std::vector<VertexId> succs = g.succ(v);
    g.remove_vertex(v);
    for (VertexId p : preds)
        for (VertexId s : succs) g.add_arc(p, s);  // p == s yields a self-loop
}

DiGraph exclude(const DiGraph& g, VertexId v) {
    DiGraph out = g;
    exclude_in_place(out, v);
    return out;
}

// ---------------------------------------------------------------------------
// Simple rules
// ---------------------------------------------------------------------------

bool try_loop(DiGraph& g, ReductionTrace& trace) {
    bool fired = false;
    for (VertexId v : g.vertices()) {
        if (!g.has_arc(v, v)) continue;
        g.remove_vertex(v);
        commit(trace, v, EventKind::Loop);
        fired = true;
    }
    return fired;
}

namespace {

// Greedy two-diclique partition of N(v) with the bi-neighbors of v forced
// into (and strictly extended within) the first part.
bool diclique2_applicable(const DiGraph& g, VertexId v) {
    std::vector<VertexId> n1 = g.bi_neighbors(v);
    if (!pairwise_bi(g, n1)) return false;
    std::vector<VertexId> n2;
    bool extended = false;
    for (VertexId w : g.neighbors(v)) {
        if (g.is_bi(v, w)) continue;  // seeded already
        if (bi_with_all(g, w, n1)) {
            n1.push_back(w);
            extended = true;
        } else if (bi_with_all(g, w, n2)) {
            n2.push_back(w);
        } else {
            return false;
        }
    }
    return extended;
}

bool diclique3_applicable(const DiGraph& g, VertexId v) {
    if (!g.bi_neighbors(v).empty()) return false;
    std::vector<VertexId> part[3];
    for (VertexId w : g.neighbors(v)) {
        bool placed = false;
        for (auto& p : part) {
            if (bi_with_all(g, w, p)) {
                p.push_back(w);
                placed = true;
                break;
            }
        }
        if (!placed) return false;
    }
    return true;
}

}  // namespace

bool try_exclusion_rules(DiGraph& g, ReductionTrace& trace, std::uint32_t rules, RuleId* fired) {
    for (VertexId v : g.vertices()) {
        if (g.has_arc(v, v)) continue;  // loop rule owns this vertex
        RuleId hit = RuleId::kCount;
        const auto& preds = g.pred(v);
        const auto& succs = g.succ(v);
        if (rules & rule_bit(RuleId::In0Out0)) {
            if (preds.empty() || succs.empty()) hit = RuleId::In0Out0;
        }
        if (hit == RuleId::kCount && (rules & rule_bit(RuleId::In1Out1))) {
            if (preds.size() == 1 || succs.size() == 1) hit = RuleId::In1Out1;
        }
        if (hit == RuleId::kCount && (rules & rule_bit(RuleId::InOutDiclique))) {
            if (pairwise_bi(g, preds) || pairwise_bi(g, succs)) hit = RuleId::InOutDiclique;
        }
        if (hit == RuleId::kCount && (rules & rule_bit(RuleId::Core))) {
            if (preds == succs && pairwise_bi(g, preds)) hit = RuleId::Core;
        }
        if (hit == RuleId::kCount && (rules & rule_bit(RuleId::Diclique23))) {
            if (diclique2_applicable(g, v) || diclique3_applicable(g, v))
                hit = RuleId::Diclique23;
        }
        if (hit == RuleId::kCount) continue;
        exclude_in_place(g, v);
        trace.events.push_back({EventKind::Exclude, ExcludeData{v}});
        if (fired) *fired = hit;
        return true;
    }
    return false;
}

bool try_pie(DiGraph& g, const SccLabeling& scc, ReductionTrace& trace) {
    std::vector<std::pair<VertexId, VertexId>> doomed;
    for (VertexId u : g.vertices())
        for (VertexId v : g.succ(u)) {
            if (u == v || g.has_arc(v, u)) continue;  // bi-edges and loops stay
            if (scc.label[u] != scc.label[v]) doomed.emplace_back(u, v);
        }
    if (doomed.empty()) return false;
    for (auto [u, v] : doomed) g.remove_arc(u, v);
    trace.events.push_back({EventKind::ArcDelete, ArcDeleteData{std::move(doomed)}});
    return true;
}

bool try_dome(DiGraph& g, ReductionTrace& trace) {
    for (VertexId v : g.vertices()) {
        for (VertexId u : g.succ(v)) {
            if (u == v || g.has_arc(u, v)) continue;
            bool dominated = true;
            for (VertexId p : g.pred(v)) {
                if (g.has_arc(v, p)) continue;  // bi-edge predecessors exempt
                if (!g.has_arc(p, u)) {
                    dominated = false;
                    break;
                }
            }
            if (!dominated) {
                dominated = true;
                for (VertexId s : g.succ(u)) {
                    if (g.has_arc(s, u)) continue;
                    if (!g.has_arc(v, s)) {
                        dominated = false;
                        break;
                    }
                }
            }
            if (!dominated) continue;
            g.remove_arc(v, u);
            trace.events.push_back({EventKind::ArcDelete, ArcDeleteData{{{v, u}}}});
            return true;
        }
    }
    return false;
}

bool try_allcycles(DiGraph& g, const CycleSet& cycles, ReductionTrace& trace) {
    if (!cycles.complete)
        throw std::invalid_argument("try_allcycles requires a complete cycle set");
    std::set<std::pair<VertexId, VertexId>> used;
    for (const Cycle& c : cycles.cycles) {
        const auto& vs = c.vertices;
        for (std::size_t i = 0; i < vs.size(); ++i)
            used.insert({vs[i], vs[(i + 1) % vs.size()]});
    }
    std::vector<std::pair<VertexId, VertexId>> doomed;
    for (VertexId u : g.vertices())
        for (VertexId v : g.succ(u))
            if (!used.count({u, v})) doomed.emplace_back(u, v);
    if (doomed.empty()) return false;
    for (auto [u, v] : doomed) g.remove_arc(u, v);
    trace.events.push_back({EventKind::ArcDelete, ArcDeleteData{std::move(doomed)}});
    return true;
}

bool try_subset(DiGraph& g, ReductionTrace& trace) {
    for (VertexId v : g.vertices()) {
        for (VertexId u : g.bi_neighbors(v)) {
            if (!subset_with_extra(g.pred(v), g.pred(u), u)) continue;
            if (!subset_with_extra(g.succ(v), g.succ(u), u)) continue;
            g.remove_vertex(u);
            commit(trace, u, EventKind::CommitVertex);
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Unconfined vertices
// ---------------------------------------------------------------------------

bool check_unconfined(const DiGraph& g, VertexId v) {
    const int cap = g.capacity();
    std::vector<char> in_a(cap, 0);
    std::vector<VertexId> a{v};
    in_a[v] = 1;

    while (true) {
        // n_set = vertices u outside A whose addition closes a cycle in G[A∪{u}].
        std::vector<char> in_n(cap, 0);
        std::vector<VertexId> n_set;
        for (VertexId u : g.vertices()) {
            if (in_a[u]) continue;
            std::vector<VertexId> sub = a;
            sub.push_back(u);
            if (!g.is_acyclic(&sub)) {
                in_n[u] = 1;
                n_set.push_back(u);
            }
        }
        // Candidates touch A by exactly two arc endpoints (one bi-edge or
        // one in- plus one out-arc).
        VertexId best = -1;
        int best_outside = -1;
        VertexId best_witness = -1;
        for (VertexId u : n_set) {
            int touch = 0;
            for (VertexId w : g.succ(u)) touch += in_a[w];
            for (VertexId w : g.pred(u)) touch += in_a[w];
            if (touch != 2) continue;
            int outside = 0;
            VertexId witness = -1;
            for (VertexId w : g.neighbors(u)) {
                if (in_a[w] || in_n[w]) continue;
                ++outside;
                if (witness < 0) witness = w;
            }
            if (best < 0 || outside < best_outside) {
                best = u;
                best_outside = outside;
                best_witness = witness;
            }
        }
        if (best < 0) return false;
        if (best_outside == 0) return true;
        if (best_outside != 1) return false;
        // Exactly one neighbor of the tightest candidate escapes N ∪ A:
        // every solution avoiding v must handle it too, so absorb it.
        in_a[best_witness] = 1;
        a.push_back(best_witness);
    }
}

bool try_unconfined(DiGraph& g, ReductionTrace& trace) {
    for (VertexId v : g.vertices()) {
        if (g.has_arc(v, v)) continue;
        if (!check_unconfined(g, v)) continue;
        g.remove_vertex(v);
        commit(trace, v, EventKind::CommitVertex);
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Folding rules
// ---------------------------------------------------------------------------

bool is_straight(const DiGraph& g, VertexId d, VertexId c) {
    if (!g.has_arc(d, c))
        throw std::invalid_argument("is_straight: (" + std::to_string(d) + "," +
                                    std::to_string(c) + ") is not an arc");
    if (g.has_arc(c, d)) return false;
    bool d_ok = true;
    for (VertexId s : g.succ(d)) {
        if (s == c) continue;
        if (!g.has_arc(s, d)) {
            d_ok = false;
            break;
        }
    }
    if (d_ok) return true;
    for (VertexId p : g.pred(c)) {
        if (p == d) continue;
        if (!g.has_arc(c, p)) return false;
    }
    return true;
}

namespace {

bool all_bi_neighborhood(const DiGraph& g, VertexId v) {
    return !g.has_arc(v, v) && g.pred(v) == g.succ(v);
}

// Checks the tractable sufficient condition for a non-bi pair {x, y}:
// no arc either way → different bi-edge-free component labels; exactly one
// arc → that arc is straight.
bool missing_pair_ok(const DiGraph& g, const SccLabeling& scc, VertexId x, VertexId y) {
    bool xy = g.has_arc(x, y), yx = g.has_arc(y, x);
    if (!xy && !yx) return scc.label[x] != scc.label[y];
    if (xy && !yx) return is_straight(g, x, y);
    if (yx && !xy) return is_straight(g, y, x);
    return false;  // bi pairs are never passed in
}

}  // namespace

bool try_manyfold(DiGraph& g, const SccLabeling& scc, ReductionTrace& trace) {
    for (VertexId v : g.vertices()) {
        if (!all_bi_neighborhood(g, v)) continue;
        const std::vector<VertexId> nbrs = g.succ(v);
        if (nbrs.size() < 2) continue;

        // "Missing" graph on the neighborhood: x ~ y iff the pair is not a
        // bi-edge. Degree-one vertices are the only candidates for C1.
        const int k = static_cast<int>(nbrs.size());
        std::vector<std::vector<int>> miss(k);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (!g.is_bi(nbrs[i], nbrs[j])) {
                    miss[i].push_back(j);
                    miss[j].push_back(i);
                }

        bool ok = true;
        std::vector<char> in_c1(k, 0);
        for (int i = 0; i < k && ok; ++i) {
            if (miss[i].size() != 1) continue;
            int j = miss[i][0];
            if (miss[j].size() != 1)
                in_c1[i] = 1;  // partner is forced to C2
            else if (i < j)
                in_c1[i] = 1;  // matched degree-one pair: lower id folds
        }
        if (!ok) continue;
        // C2 must itself be a diclique: any missing pair between two
        // C2-bound vertices rules the partition out.
        for (int i = 0; i < k && ok; ++i) {
            if (in_c1[i]) continue;
            for (int j : miss[i])
                if (!in_c1[j]) {
                    ok = false;
                    break;
                }
        }
        if (!ok) continue;
        std::vector<VertexId> c1, c2, partner;
        for (int i = 0; i < k; ++i) {
            if (in_c1[i]) {
                c1.push_back(nbrs[i]);
                partner.push_back(nbrs[miss[i][0]]);
            } else {
                c2.push_back(nbrs[i]);
            }
        }
        if (c1.empty() || c1.size() < c2.size()) continue;
        for (std::size_t i = 0; i < c1.size() && ok; ++i)
            ok = missing_pair_ok(g, scc, c1[i], partner[i]);
        if (!ok) continue;

        // Contract: C1 inherits each partner's outside neighborhoods, then
        // v and C2 disappear. Self-arcs (c1,c1) are dropped per the rule.
        trace.events.push_back({EventKind::ManyFold, ManyFoldData{v, c1, c2, partner}});
        for (std::size_t i = 0; i < c1.size(); ++i) {
            const std::vector<VertexId> ps = g.pred(partner[i]);
            const std::vector<VertexId> ss = g.succ(partner[i]);
            for (VertexId s : ss) {
                if (s == v || s == c1[i] || contains(c2, s)) continue;
                g.add_arc(c1[i], s);
            }
            for (VertexId p : ps) {
                if (p == v || p == c1[i] || contains(c2, p)) continue;
                g.add_arc(p, c1[i]);
            }
        }
        g.remove_vertex(v);
        for (VertexId w : c2) g.remove_vertex(w);
        trace.offset += static_cast<int>(c2.size());
        return true;
    }
    return false;
}

bool try_4path(DiGraph& g, const SccLabeling& scc, ReductionTrace& trace) {
    for (VertexId v : g.vertices()) {
        if (!all_bi_neighborhood(g, v)) continue;
        const std::vector<VertexId> nbrs = g.succ(v);
        if (nbrs.size() != 4) continue;

        // The neighborhood must induce exactly the bi-path a↔b↔c↔d: three
        // bi pairs forming a path and no arcs at all between the others.
        int adj[4][4] = {};
        bool ok = true;
        int bi_pairs = 0;
        for (int i = 0; i < 4 && ok; ++i)
            for (int j = i + 1; j < 4; ++j) {
                bool ij = g.has_arc(nbrs[i], nbrs[j]), ji = g.has_arc(nbrs[j], nbrs[i]);
                if (ij != ji) {
                    ok = false;  // a one-directional arc breaks the pattern
                    break;
                }
                adj[i][j] = adj[j][i] = ij;
                bi_pairs += ij;
            }
        if (!ok || bi_pairs != 3) continue;
        int deg[4] = {};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) deg[i] += adj[i][j];
        int ends[2], nends = 0;
        for (int i = 0; i < 4; ++i) {
            if (deg[i] == 1) {
                if (nends < 2) ends[nends] = i;
                ++nends;
            } else if (deg[i] != 2) {
                nends = 3;
                break;
            }
        }
        if (nends != 2) continue;  // a triangle-plus-isolated split, not a path
        int ia = std::min(ends[0], ends[1]);
        int ib = -1, ic = -1, id = -1;
        for (int j = 0; j < 4; ++j)
            if (adj[ia][j]) ib = j;
        for (int j = 0; j < 4; ++j)
            if (adj[ib][j] && j != ia) ic = j;
        for (int j = 0; j < 4; ++j)
            if (adj[ic][j] && j != ib) id = j;
        VertexId a = nbrs[ia], b = nbrs[ib], c = nbrs[ic], d = nbrs[id];

        if (scc.label[a] == scc.label[c] || scc.label[a] == scc.label[d] ||
            scc.label[d] == scc.label[b])
            continue;

        trace.events.push_back({EventKind::FourPath, FourPathData{v, a, b, c, d}});
        const std::vector<VertexId> sd = g.succ(d), pd = g.pred(d);
        const std::vector<VertexId> sa = g.succ(a), pa = g.pred(a);
        g.remove_vertex(v);
        auto add_bi = [&](VertexId x, VertexId y) {
            g.add_arc(x, y);
            g.add_arc(y, x);
        };
        add_bi(a, c);
        add_bi(a, d);
        add_bi(b, d);
        for (VertexId s : sd)
            if (s != v) {
                if (s != a) g.add_arc(a, s);
                if (s != b) g.add_arc(b, s);
            }
        for (VertexId p : pd)
            if (p != v) {
                if (p != a) g.add_arc(p, a);
                if (p != b) g.add_arc(p, b);
            }
        for (VertexId s : sa)
            if (s != v) {
                if (s != c) g.add_arc(c, s);
                if (s != d) g.add_arc(d, s);
            }
        for (VertexId p : pa)
            if (p != v) {
                if (p != c) g.add_arc(p, c);
                if (p != d) g.add_arc(p, d);
            }
        return true;
    }
    return false;
}

bool try_3empty(DiGraph& g, ReductionTrace& trace) {
    for (VertexId v : g.vertices()) {
        if (!all_bi_neighborhood(g, v)) continue;
        const std::vector<VertexId> nbrs = g.succ(v);
        if (nbrs.size() != 3) continue;
        VertexId a = nbrs[0], b = nbrs[1], c = nbrs[2];
        bool independent = true;
        for (int i = 0; i < 3 && independent; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j && g.has_arc(nbrs[i], nbrs[j])) {
                    independent = false;
                    break;
                }
        if (!independent) continue;

        trace.events.push_back({EventKind::ThreeEmpty, ThreeEmptyData{v, a, b, c}});
        const std::vector<VertexId> na = g.neighbors(a);
        const std::vector<VertexId> nb = g.neighbors(b);
        const std::vector<VertexId> nc = g.neighbors(c);
        g.remove_vertex(v);
        auto add_bi = [&](VertexId x, VertexId y) {
            if (x == y) return;
            g.add_arc(x, y);
            g.add_arc(y, x);
        };
        add_bi(a, b);
        add_bi(b, c);
        for (VertexId w : nb)
            if (w != v) add_bi(a, w);
        for (VertexId w : nc)
            if (w != v) add_bi(b, w);
        for (VertexId w : na)
            if (w != v) add_bi(c, w);
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

namespace {

bool in_sol(const std::vector<VertexId>& sol, VertexId v) {
    return std::find(sol.begin(), sol.end(), v) != sol.end();
}

void erase_from(std::vector<VertexId>& sol, VertexId v) {
    sol.erase(std::remove(sol.begin(), sol.end(), v), sol.end());
}

}  // namespace

std::vector<VertexId> reconstruct_manyfold(const ManyFoldData& ev,
                                           std::vector<VertexId> sol) {
    std::vector<VertexId> missing;
    for (VertexId x : ev.c1)
        if (!in_sol(sol, x)) missing.push_back(x);
    if (missing.empty()) {
        sol.insert(sol.end(), ev.c2.begin(), ev.c2.end());
        return sol;
    }
    if (missing.size() > 1)
        throw std::logic_error("manyfold reconstruction: several fold vertices unused");
    VertexId c1 = missing[0];
    VertexId partner = -1;
    for (std::size_t i = 0; i < ev.c1.size(); ++i)
        if (ev.c1[i] == c1) partner = ev.partner[i];
    for (VertexId x : ev.c2)
        if (x != partner) sol.push_back(x);
    sol.push_back(ev.v_star);
    return sol;
}

std::vector<VertexId> reconstruct_4path(const FourPathData& ev, std::vector<VertexId> sol) {
    int present = in_sol(sol, ev.a) + in_sol(sol, ev.b) + in_sol(sol, ev.c) + in_sol(sol, ev.d);
    if (present == 4) return sol;
    if (present != 3)
        throw std::logic_error("4path reconstruction: fewer than three path vertices used");
    if (!in_sol(sol, ev.c) || !in_sol(sol, ev.d))
        erase_from(sol, ev.a);
    else
        erase_from(sol, ev.d);
    sol.push_back(ev.v_star);
    return sol;
}

std::vector<VertexId> reconstruct_3empty(const ThreeEmptyData& ev, std::vector<VertexId> sol) {
    bool ha = in_sol(sol, ev.a), hb = in_sol(sol, ev.b), hc = in_sol(sol, ev.c);
    if (ha && hb && hc) return sol;
    if (!ha)
        erase_from(sol, ev.b);
    else if (!hc)
        erase_from(sol, ev.a);
    else
        erase_from(sol, ev.c);
    sol.push_back(ev.v);
    return sol;
}

std::vector<VertexId> reconstruct(const ReductionTrace& trace,
                                  std::vector<VertexId> sol) {
    for (auto it = trace.events.rbegin(); it != trace.events.rend(); ++it) {
        switch (it->kind) {
            case EventKind::Loop:
                sol.push_back(std::get<LoopData>(it->payload).v);
                break;
            case EventKind::CommitVertex:
                sol.push_back(std::get<CommitData>(it->payload).v);
                break;
            case EventKind::Exclude:
            case EventKind::ArcDelete:
                break;
            case EventKind::ManyFold:
                sol = reconstruct_manyfold(std::get<ManyFoldData>(it->payload), std::move(sol));
                break;
            case EventKind::FourPath:
                sol = reconstruct_4path(std::get<FourPathData>(it->payload), std::move(sol));
                break;
            case EventKind::ThreeEmpty:
                sol = reconstruct_3empty(std::get<ThreeEmptyData>(it->payload), std::move(sol));
                break;
        }
    }
    std::sort(sol.begin(), sol.end());
    sol.erase(std::unique(sol.begin(), sol.end()), sol.end());
    return sol;
}

// ---------------------------------------------------------------------------
// Fixpoint drivers
// ---------------------------------------------------------------------------

namespace {

// Runs one rule attempt and books the net size deltas on success.
template <typename F>
bool attempt(DiGraph& g, RuleId id, ReductionStats* stats, F&& f) {
    long nv = g.num_vertices(), na = static_cast<long>(g.arc_count());
    if (!f()) return false;
    if (stats) {
        auto& s = (*stats)[id];
        ++s.fires;
        s.vertices_removed += nv - g.num_vertices();
        s.arcs_removed += na - static_cast<long>(g.arc_count());
    }
    return true;
}

}  // namespace

ReduceResult reduce(DiGraph g, std::uint32_t rules, ReductionStats* stats) {
    ReductionTrace trace;
    auto on = [&](RuleId r) { return (rules & rule_bit(r)) != 0; };
    bool fired = true;
    while (fired) {
        fired = false;
        if (on(RuleId::Loop) &&
            attempt(g, RuleId::Loop, stats, [&] { return try_loop(g, trace); })) {
            fired = true;
            continue;
        }
        for (RuleId band : {RuleId::In0Out0, RuleId::In1Out1}) {
            if (on(band) && attempt(g, band, stats, [&] {
                    return try_exclusion_rules(g, trace, rule_bit(band));
                })) {
                fired = true;
                break;
            }
        }
        if (fired) continue;
        if (on(RuleId::Subset) &&
            attempt(g, RuleId::Subset, stats, [&] { return try_subset(g, trace); })) {
            fired = true;
            continue;
        }
        if (on(RuleId::Pie) && attempt(g, RuleId::Pie, stats, [&] {
                return try_pie(g, g.scc_par(), trace);
            })) {
            fired = true;
            continue;
        }
        if (on(RuleId::Dome) &&
            attempt(g, RuleId::Dome, stats, [&] { return try_dome(g, trace); })) {
            fired = true;
            continue;
        }
        for (RuleId band : {RuleId::InOutDiclique, RuleId::Core, RuleId::Diclique23}) {
            if (on(band) && attempt(g, band, stats, [&] {
                    return try_exclusion_rules(g, trace, rule_bit(band));
                })) {
                fired = true;
                break;
            }
        }
        if (fired) continue;
        if (on(RuleId::Unconfined) &&
            attempt(g, RuleId::Unconfined, stats, [&] { return try_unconfined(g, trace); })) {
            fired = true;
            continue;
        }
        if (on(RuleId::ManyFold) && attempt(g, RuleId::ManyFold, stats, [&] {
                return try_manyfold(g, g.scc_par(), trace);
            })) {
            fired = true;
            continue;
        }
        if (on(RuleId::FourPath) && attempt(g, RuleId::FourPath, stats, [&] {
                return try_4path(g, g.scc_par(), trace);
            })) {
            fired = true;
            continue;
        }
        if (on(RuleId::ThreeEmpty) &&
            attempt(g, RuleId::ThreeEmpty, stats, [&] { return try_3empty(g, trace); })) {
            fired = true;
            continue;
        }
    }
    return {std::move(g), std::move(trace)};
}

ReduceWithCyclesResult reduce_with_all_cycles(DiGraph g, CycleSet cycles, std::uint32_t rules,
                                              long node_budget, ReductionStats* stats) {
    if (!cycles.complete)
        throw std::invalid_argument("reduce_with_all_cycles requires a complete cycle set");
    ReductionTrace trace;
    auto on = [&](RuleId r) { return (rules & rule_bit(r)) != 0; };

    // Removing committed vertices keeps the set exact: any cycle covering a
    // surviving one lies inside its vertex set and thus also survives.
    auto prune_removed = [&] {
        std::erase_if(cycles.cycles, [&](const Cycle& c) {
            for (VertexId v : c.vertices)
                if (!g.has_vertex(v)) return true;
            return false;
        });
    };
    // Arc deletions may uncover previously covered cycles, so completeness
    // must be re-established by a fresh enumeration.
    auto reenumerate = [&] {
        if (!cycles.complete) return;
        cycles = enumerate_all_uncovered(g, node_budget);
    };

    bool fired = true;
    while (fired) {
        fired = false;
        if (on(RuleId::Loop) &&
            attempt(g, RuleId::Loop, stats, [&] { return try_loop(g, trace); })) {
            prune_removed();
            fired = true;
            continue;
        }
        if (on(RuleId::In0Out0) && attempt(g, RuleId::In0Out0, stats, [&] {
                // Vertices missing a side sit on no cycle; plain removal.
                for (VertexId v : g.vertices()) {
                    if (g.has_arc(v, v)) continue;
                    if (!g.pred(v).empty() && !g.succ(v).empty()) continue;
                    g.remove_vertex(v);
                    trace.events.push_back({EventKind::Exclude, ExcludeData{v}});
                    return true;
                }
                return false;
            })) {
            fired = true;
            continue;
        }
        if (on(RuleId::Subset) &&
            attempt(g, RuleId::Subset, stats, [&] { return try_subset(g, trace); })) {
            prune_removed();
            fired = true;
            continue;
        }
        if (on(RuleId::Pie) && attempt(g, RuleId::Pie, stats, [&] {
                return try_pie(g, g.scc_par(), trace);
            })) {
            reenumerate();
            fired = true;
            continue;
        }
        if (on(RuleId::Dome) &&
            attempt(g, RuleId::Dome, stats, [&] { return try_dome(g, trace); })) {
            reenumerate();
            fired = true;
            continue;
        }
        if (on(RuleId::Unconfined) &&
            attempt(g, RuleId::Unconfined, stats, [&] { return try_unconfined(g, trace); })) {
            prune_removed();
            fired = true;
            continue;
        }
        if (cycles.complete && on(RuleId::AllCycles) &&
            attempt(g, RuleId::AllCycles, stats, [&] {
                return try_allcycles(g, cycles, trace);
            })) {
            fired = true;
            continue;
        }
    }
    return {std::move(g), std::move(cycles), std::move(trace)};
}

}  // namespace dfvs
