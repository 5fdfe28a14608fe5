#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "dfvs/oracle.hpp"
#include "dfvs/reductions.hpp"
#include "test_util.hpp"

using namespace dfvs;
using oracle::brute_force_dfvs;
using oracle::brute_force_dfvs_size;
using oracle::is_acyclic_after_removal;
using testutil::sorted;

namespace {

DiGraph bidirected_clique(int n) {
    DiGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) g.add_arc(u, v);
    return g;
}

// End-to-end soundness of a reduce() run against the brute-force optimum.
void check_reduce_sound(const DiGraph& g, std::uint32_t rules = kDefaultRules) {
    ReduceResult r = reduce(g, rules);
    std::vector<VertexId> kernel_sol = brute_force_dfvs(r.kernel);
    std::vector<VertexId> sol = reconstruct(r.trace, kernel_sol);
    CHECK(is_acyclic_after_removal(g, sol));
    CHECK((int)sol.size() == brute_force_dfvs_size(g));
}

}  // namespace

TEST_CASE("exclusion bypasses the removed vertex") {
    DiGraph g(3);
    g.add_arc(0, 1);  // p -> v
    g.add_arc(1, 2);  // v -> s
    exclude_in_place(g, 1);
    CHECK(g.has_arc(0, 2));
    CHECK_FALSE(g.has_arc(2, 0));
    CHECK(g.is_acyclic());

    DiGraph h(4);  // one predecessor, two successors
    h.add_arc(0, 1);
    h.add_arc(1, 2);
    h.add_arc(1, 3);
    DiGraph h2 = exclude(h, 1);
    CHECK(h2.has_arc(0, 2));
    CHECK(h2.has_arc(0, 3));
    CHECK(h2.arc_count() == 2);
    CHECK(h.has_arc(1, 2));  // non-mutating variant left h alone

    DiGraph loop(1);
    loop.add_arc(0, 0);
    CHECK_THROWS_AS(exclude_in_place(loop, 0), std::invalid_argument);
}

TEST_CASE("exclusion turns a bi-neighbor into a self-loop") {
    DiGraph g(2);
    g.add_arc(0, 1);
    g.add_arc(1, 0);
    exclude_in_place(g, 1);
    CHECK(g.has_arc(0, 0));
}

TEST_CASE("loop rule commits every looped vertex") {
    DiGraph g(3);
    g.add_arc(0, 0);
    g.add_arc(1, 1);
    g.add_arc(2, 2);
    ReductionTrace t;
    CHECK(try_loop(g, t));
    CHECK(sorted(t.forced) == std::vector<VertexId>{0, 1, 2});
    CHECK(g.num_vertices() == 0);
    CHECK_FALSE(try_loop(g, t));
}

TEST_CASE("degree rules exclude trivial vertices") {
    ReductionTrace t;
    DiGraph g(1);  // isolated vertex
    RuleId fired;
    CHECK(try_exclusion_rules(g, t, kDefaultRules, &fired));
    CHECK(fired == RuleId::In0Out0);
    CHECK(g.num_vertices() == 0);

    // 3-cycle: each vertex has one predecessor; exclusion shortens it.
    DiGraph c3(3);
    c3.add_arc(0, 1);
    c3.add_arc(1, 2);
    c3.add_arc(2, 0);
    CHECK(try_exclusion_rules(c3, t, kDefaultRules, &fired));
    CHECK(fired == RuleId::In1Out1);
    CHECK(c3.num_vertices() == 2);
    CHECK(c3.bi_projection().size() == 1);

    // Mask disables the rules that would apply: a bi-edge pair has both an
    // in-arc and an out-arc at each vertex, so In0Out0 alone never fires.
    DiGraph pair(2);
    pair.add_arc(0, 1);
    pair.add_arc(1, 0);
    CHECK_FALSE(try_exclusion_rules(pair, t, rule_bit(RuleId::In0Out0), &fired));
}

TEST_CASE("component rule deletes arcs crossing the bi-free partition") {
    DiGraph g(4);  // two bi-edge pairs joined by one plain arc
    g.add_arc(0, 1);
    g.add_arc(1, 0);
    g.add_arc(2, 3);
    g.add_arc(3, 2);
    g.add_arc(1, 2);
    ReductionTrace t;
    CHECK(try_pie(g, g.scc_par(), t));
    CHECK_FALSE(g.has_arc(1, 2));
    CHECK(g.arc_count() == 4);
    CHECK_FALSE(try_pie(g, g.scc_par(), t));

    DiGraph f = testutil::two_triangle_fold();
    f.add_arc(2, 5);  // stray arc between the triangles
    CHECK(try_pie(f, f.scc_par(), t));
    CHECK_FALSE(f.has_arc(2, 5));
}

TEST_CASE("domination rule removes dominated arcs") {
    // 3-cycle plus chord 0->2: every non-bi successor of 1 ({2}) is also a
    // successor of 0, so the arc (0,1) is dominated and scanned first.
    DiGraph g(3);
    g.add_arc(0, 1);
    g.add_arc(0, 2);
    g.add_arc(1, 2);
    g.add_arc(2, 0);
    ReductionTrace t;
    CHECK(try_dome(g, t));
    CHECK_FALSE(g.has_arc(0, 1));
    CHECK(brute_force_dfvs_size(g) == 1);

    // Tail with only bi-edge in-arcs: first condition holds vacuously.
    DiGraph h(3);
    h.add_arc(0, 1);
    h.add_arc(1, 0);
    h.add_arc(1, 2);
    h.add_arc(2, 1);
    h.add_arc(0, 2);
    ReductionTrace t2;
    CHECK(try_dome(h, t2));
    CHECK_FALSE(h.has_arc(0, 2));

    DiGraph bi(2);  // lone bi-edge: nothing dominated
    bi.add_arc(0, 1);
    bi.add_arc(1, 0);
    ReductionTrace t3;
    CHECK_FALSE(try_dome(bi, t3));
}

TEST_CASE("listed-cycle rule deletes arcs no uncovered cycle uses") {
    DiGraph g = testutil::sample8();
    CycleSet cs = find_short_cycles(g, 4, 25000);
    REQUIRE(cs.complete);
    ReductionTrace t;
    CHECK(try_allcycles(g, cs, t));
    CHECK_FALSE(g.has_arc(0, 2));  // no uncovered cycle goes 0 then 2
    CHECK(brute_force_dfvs_size(g) == 2);

    DiGraph bi(2);
    bi.add_arc(0, 1);
    bi.add_arc(1, 0);
    CycleSet one = find_short_cycles(bi, 4, 100);
    ReductionTrace t2;
    CHECK_FALSE(try_allcycles(bi, one, t2));

    CycleSet incomplete;
    incomplete.complete = false;
    CHECK_THROWS_AS(try_allcycles(bi, incomplete, t2), std::invalid_argument);
}

TEST_CASE("neighborhood-subset rule forces the dominating endpoint") {
    DiGraph g(2);
    g.add_arc(0, 1);
    g.add_arc(1, 0);
    ReductionTrace t;
    CHECK(try_subset(g, t));
    CHECK(t.forced.size() == 1);
    CHECK(g.num_vertices() == 1);
    CHECK(g.arc_count() == 0);

    ReduceResult k3 = reduce(bidirected_clique(3));
    CHECK(k3.kernel.num_vertices() == 0);
    CHECK((int)k3.trace.forced.size() + k3.trace.offset == 2);
}

TEST_CASE("confinement check") {
    DiGraph tri = bidirected_clique(3);
    CHECK(check_unconfined(tri, 0));
    CHECK(check_unconfined(tri, 1));
    CHECK(check_unconfined(tri, 2));

    DiGraph dag(3);
    dag.add_arc(0, 1);
    dag.add_arc(1, 2);
    for (int v = 0; v < 3; ++v) CHECK_FALSE(check_unconfined(dag, v));

    ReductionTrace t;
    DiGraph tri2 = bidirected_clique(3);
    CHECK(try_unconfined(tri2, t));
    CHECK(t.forced.size() == 1);
}

TEST_CASE("straight arcs") {
    DiGraph g = testutil::straight_arc_fold();
    // 1's only other out-arc is the bi-edge to 0.
    CHECK(is_straight(g, 1, 2));
    CHECK_THROWS_AS(is_straight(g, 2, 1), std::invalid_argument);

    // Plain 3-cycle plus a non-bi out-arc at the tail and in-arc at the
    // head: neither side condition holds.
    DiGraph h(5);
    h.add_arc(0, 1);
    h.add_arc(1, 2);
    h.add_arc(2, 0);
    h.add_arc(0, 3);
    h.add_arc(4, 1);
    CHECK_FALSE(is_straight(h, 0, 1));
    // The bi-edge (1,2),(2,1) is never straight.
    h.add_arc(2, 1);
    CHECK_FALSE(is_straight(h, 1, 2));
}

TEST_CASE("fold with two disjoint triangles") {
    DiGraph g = testutil::two_triangle_fold();
    REQUIRE(brute_force_dfvs_size(g) == 2);
    ReductionTrace t;
    REQUIRE(try_manyfold(g, g.scc_par(), t));
    CHECK(t.offset == 1);
    REQUIRE(t.events.size() == 1);
    const auto& ev = std::get<ManyFoldData>(t.events[0].payload);
    CHECK(ev.v_star == 0);
    CHECK(ev.c1 == std::vector<VertexId>{1});
    CHECK(ev.c2 == std::vector<VertexId>{4});
    CHECK(ev.partner == std::vector<VertexId>{4});

    // Kernel: both triangles share vertex 1.
    CHECK_FALSE(g.has_vertex(0));
    CHECK_FALSE(g.has_vertex(4));
    CHECK(g.has_arc(1, 5));
    CHECK(g.has_arc(6, 1));
    CHECK(brute_force_dfvs_size(g) == 1);

    auto sol = reconstruct_manyfold(ev, {1});
    CHECK(sorted(sol) == std::vector<VertexId>{1, 4});
    CHECK(is_acyclic_after_removal(testutil::two_triangle_fold(), sol));
}

TEST_CASE("fold across a straight arc") {
    DiGraph g = testutil::straight_arc_fold();
    REQUIRE(brute_force_dfvs_size(g) == 2);
    ReductionTrace t;
    REQUIRE(try_manyfold(g, g.scc_par(), t));
    CHECK(t.offset == 1);
    const auto& ev = std::get<ManyFoldData>(t.events[0].payload);
    CHECK(ev.v_star == 0);
    CHECK(ev.c1 == std::vector<VertexId>{1});
    CHECK(ev.c2 == std::vector<VertexId>{2});

    // Kernel is the bi-edge 1<->3.
    CHECK(g.num_vertices() == 2);
    CHECK(g.is_bi(1, 3));
    CHECK(g.arc_count() == 2);

    // Keep-the-kept-side case and the swap case.
    auto s1 = reconstruct_manyfold(ev, {1});
    CHECK(sorted(s1) == std::vector<VertexId>{1, 2});
    CHECK(is_acyclic_after_removal(testutil::straight_arc_fold(), s1));
    auto s2 = reconstruct_manyfold(ev, {3});
    CHECK(sorted(s2) == std::vector<VertexId>{0, 3});
    CHECK(is_acyclic_after_removal(testutil::straight_arc_fold(), s2));
}

TEST_CASE("four-neighbor path fold") {
    auto gadget = [] {
        DiGraph g(5);
        for (int i = 1; i <= 4; ++i) {
            g.add_arc(0, i);
            g.add_arc(i, 0);
        }
        for (int i = 1; i <= 3; ++i) {
            g.add_arc(i, i + 1);
            g.add_arc(i + 1, i);
        }
        return g;
    };
    DiGraph g = gadget();
    REQUIRE(brute_force_dfvs_size(g) == 3);
    ReductionTrace t;
    REQUIRE(try_4path(g, g.scc_par(), t));
    CHECK(t.offset == 0);
    const auto& ev = std::get<FourPathData>(t.events[0].payload);
    CHECK(ev.v_star == 0);
    CHECK(ev.a == 1);
    CHECK(ev.b == 2);
    CHECK(ev.c == 3);
    CHECK(ev.d == 4);
    CHECK_FALSE(g.has_vertex(0));
    CHECK(brute_force_dfvs_size(g) == 3);

    auto s1 = reconstruct_4path(ev, {1, 2, 3});  // d missing: swap a for v
    CHECK(sorted(s1) == std::vector<VertexId>{0, 2, 3});
    CHECK(is_acyclic_after_removal(gadget(), s1));
    auto s2 = reconstruct_4path(ev, {2, 3, 4});  // a missing: swap d for v
    CHECK(sorted(s2) == std::vector<VertexId>{0, 2, 3});
    CHECK(is_acyclic_after_removal(gadget(), s2));
    auto s3 = reconstruct_4path(ev, {1, 2, 3, 4});
    CHECK(sorted(s3) == std::vector<VertexId>{1, 2, 3, 4});

    // Extra arc inside the neighborhood breaks the pattern.
    DiGraph h = gadget();
    h.add_arc(1, 3);
    ReductionTrace t2;
    CHECK_FALSE(try_4path(h, h.scc_par(), t2));
}

TEST_CASE("reduce: fixpoints on easy families") {
    // DAG collapses completely with nothing forced.
    DiGraph dag(5);
    dag.add_arc(0, 1);
    dag.add_arc(1, 2);
    dag.add_arc(2, 3);
    dag.add_arc(0, 4);
    ReduceResult r = reduce(dag);
    CHECK(r.kernel.num_vertices() == 0);
    CHECK(r.trace.forced.empty());
    CHECK(r.trace.offset == 0);

    ReduceResult k5 = reduce(bidirected_clique(5));
    CHECK(k5.kernel.num_vertices() == 0);
    CHECK((int)k5.trace.forced.size() + k5.trace.offset == 4);

    ReduceResult sample = reduce(testutil::sample8());
    CHECK(sample.kernel.num_vertices() == 0);
    std::vector<VertexId> sol = reconstruct(sample.trace, {});
    CHECK(sol.size() == 2);
    CHECK(is_acyclic_after_removal(testutil::sample8(), sol));
}

TEST_CASE("reduce: random soundness sweep") {
    for (int it = 0; it < 150; ++it) {
        int n = 4 + it % 6;
        double p = (it % 2) ? 0.3 : 0.5;
        check_reduce_sound(testutil::random_digraph(n, p, 9000 + it));
    }
}

TEST_CASE("reduce_with_all_cycles keeps the optimum") {
    DiGraph g = testutil::sample8();
    CycleSet cs = find_short_cycles(g, 4, 25000);
    REQUIRE(cs.complete);
    ReduceWithCyclesResult r = reduce_with_all_cycles(g, cs);
    std::vector<VertexId> sol =
        reconstruct(r.trace, brute_force_dfvs(r.kernel));
    CHECK(sol.size() == 2);
    CHECK(is_acyclic_after_removal(g, sol));
    for (const auto& c : r.cycles.cycles) CHECK(cycle_valid(r.kernel, c));

    CycleSet bad;
    bad.complete = false;
    CHECK_THROWS_AS(reduce_with_all_cycles(g, bad), std::invalid_argument);

    for (int it = 0; it < 60; ++it) {
        DiGraph rg = testutil::random_digraph(7, 0.35, 1700 + it);
        CycleSet rc = enumerate_all_uncovered(rg, 10'000'000);
        REQUIRE(rc.complete);
        ReduceWithCyclesResult rr = reduce_with_all_cycles(rg, rc);
        std::vector<VertexId> rsol =
            reconstruct(rr.trace, brute_force_dfvs(rr.kernel));
        CHECK(is_acyclic_after_removal(rg, rsol));
        CHECK((int)rsol.size() == brute_force_dfvs_size(rg));
    }
}

namespace {

// Planted all-bi-edge instance: vertex 0 has exactly three pairwise
// non-adjacent neighbors, the rest is random undirected structure.
DiGraph planted_triple(unsigned seed) {
    std::mt19937 rng(seed);
    DiGraph g(8);
    auto bi = [&](int u, int v) {
        g.add_arc(u, v);
        g.add_arc(v, u);
    };
    bi(0, 1);
    bi(0, 2);
    bi(0, 3);
    for (int u = 1; u < 8; ++u)
        for (int v = u + 1; v < 8; ++v) {
            if (u <= 3 && v <= 3) continue;  // keep the triple independent
            if (rng() % 3 == 0) bi(u, v);
        }
    return g;
}

}  // namespace

TEST_CASE("independent-triple fold: zero offset, valid reconstruction") {
    int fired = 0;
    for (unsigned seed = 0; seed < 80; ++seed) {
        DiGraph g = planted_triple(seed);
        int before = brute_force_dfvs_size(g);
        ReductionTrace t;
        if (!try_3empty(g, t)) continue;
        ++fired;
        REQUIRE(t.events.size() == 1);
        CHECK(t.offset == 0);
        const auto& ev = std::get<ThreeEmptyData>(t.events[0].payload);
        CHECK(ev.v == 0);
        CHECK(before == brute_force_dfvs_size(g));

        auto sol = reconstruct_3empty(ev, brute_force_dfvs(g));
        CHECK((int)sol.size() == before);
        CHECK(is_acyclic_after_removal(planted_triple(seed), sol));
    }
    CHECK(fired >= 50);
}
