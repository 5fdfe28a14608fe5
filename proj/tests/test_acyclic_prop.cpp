#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dfvs/acyclic_prop.hpp"
#include "dfvs/cycles.hpp"
#include "dfvs/oracle.hpp"
#include "test_util.hpp"

using namespace dfvs;

TEST_CASE("two-cycle is caught on the second insertion") {
    DiGraph g(2);
    g.add_arc(0, 1);
    g.add_arc(1, 0);
    IncrementalDag dag(g);
    dag.queue_insert(0);
    CHECK_FALSE(dag.flush_and_check().has_value());
    dag.queue_insert(1);
    auto c = dag.flush_and_check();
    REQUIRE(c.has_value());
    CHECK(testutil::sorted(c->vertices) == std::vector<VertexId>{0, 1});
    CHECK(cycle_valid(g, *c));
    // The failed insertion was rolled back; the DAG still holds one vertex.
    CHECK(dag.present_vertices().size() == 1);
    CHECK(dag.check_order_invariant());
}

TEST_CASE("sample graph: inserting everything reports an uncovered cycle") {
    DiGraph g = testutil::sample8();
    IncrementalDag dag(g);
    std::optional<Cycle> first;
    for (VertexId v = 0; v < 8; ++v) {
        dag.queue_insert(v);
        auto c = dag.flush_and_check();
        if (c) {
            first = c;
            break;
        }
    }
    REQUIRE(first.has_value());
    CHECK(cycle_valid(g, *first));
    // Inserting 0..7 in order, the bi-edge {0,1} closes first.
    CHECK(testutil::sorted(first->vertices) == std::vector<VertexId>{0, 1});
}

TEST_CASE("orders follow the longest-path rule") {
    DiGraph g(4);
    g.add_arc(0, 1);
    g.add_arc(1, 2);
    g.add_arc(0, 2);
    g.add_arc(2, 3);
    IncrementalDag dag(g);
    for (VertexId v = 0; v < 4; ++v) dag.queue_insert(v);
    CHECK_FALSE(dag.flush_and_check().has_value());
    CHECK(dag.order_of(0) == 0);
    CHECK(dag.order_of(1) == 1);
    CHECK(dag.order_of(2) == 2);
    CHECK(dag.order_of(3) == 3);
    CHECK(dag.check_order_invariant());

    // Removing 1 lets 2 settle back down.
    dag.queue_remove(1);
    CHECK_FALSE(dag.flush_and_check().has_value());
    CHECK(dag.order_of(2) == 1);
    CHECK(dag.order_of(3) == 2);
    CHECK(dag.check_order_invariant());
}

TEST_CASE("a rolled-back vertex is retried on the next flush") {
    DiGraph g(3);
    g.add_arc(0, 1);
    g.add_arc(1, 0);
    g.add_arc(2, 2);
    IncrementalDag dag(g);
    dag.queue_insert(0);
    dag.queue_insert(1);
    REQUIRE(dag.flush_and_check().has_value());  // {0,1} blocked
    dag.queue_remove(0);
    CHECK_FALSE(dag.flush_and_check().has_value());  // 1 now fits
    CHECK(dag.is_present(1));
    CHECK_FALSE(dag.is_present(0));

    dag.queue_insert(2);  // self-loop can never enter
    auto c = dag.flush_and_check();
    REQUIRE(c.has_value());
    CHECK(c->vertices == std::vector<VertexId>{2});
}

TEST_CASE("random batch sequences match the acyclicity oracle") {
    std::mt19937 rng(12345);
    long sequences = 0;
    while (sequences < 10'000) {
        int n = 5 + (int)(rng() % 26);  // 5..30
        double p = (sequences % 2) ? 2.5 / n : 5.0 / n;
        DiGraph g = testutil::random_digraph(n, p, (unsigned)(77 + sequences));
        IncrementalDag dag(g);
        std::vector<char> want(n, 0);  // target membership per batch

        int batches = 3 + (int)(rng() % 5);
        for (int b = 0; b < batches; ++b, ++sequences) {
            // Queue a random batch of flips.
            int flips = 1 + (int)(rng() % n);
            for (int f = 0; f < flips; ++f) {
                VertexId v = (VertexId)(rng() % n);
                if (want[v]) {
                    want[v] = 0;
                    dag.queue_remove(v);
                } else {
                    want[v] = 1;
                    dag.queue_insert(v);
                }
            }
            // Drain: each reported cycle removes its vertices from the
            // target, mirroring what the SAT propagator's clause does.
            while (auto c = dag.flush_and_check()) {
                REQUIRE(cycle_valid(g, *c));
                for (VertexId v : c->vertices) {
                    REQUIRE(want[v]);
                    want[v] = 0;
                    dag.queue_remove(v);
                }
            }
            std::vector<VertexId> present = dag.present_vertices();
            std::vector<VertexId> expect;
            for (int v = 0; v < n; ++v)
                if (want[v]) expect.push_back(v);
            REQUIRE(present == expect);
            REQUIRE(oracle::is_acyclic_after_removal(
                g, [&] {
                    std::vector<VertexId> removed;
                    for (int v = 0; v < n; ++v)
                        if (!want[v]) removed.push_back(v);
                    return removed;
                }()));
            REQUIRE(dag.check_order_invariant());
        }
    }
}

TEST_CASE("propagator injects the falsified cycle clause") {
    DiGraph g(2);
    g.add_arc(0, 1);
    g.add_arc(1, 0);
    CyclePropagator prop(g, {0, 1});  // vertex i <-> var i
    sat::Lit assigns[] = {~sat::mk_lit(0), ~sat::mk_lit(1)};  // both excluded
    prop.on_assign(std::span<const sat::Lit>(assigns, 2));
    auto clause = prop.propagate();
    REQUIRE(clause.has_value());
    std::sort(clause->begin(), clause->end());
    CHECK(*clause == std::vector<sat::Lit>{sat::mk_lit(0), sat::mk_lit(1)});
    CHECK(prop.injections() == 1);

    // Unassigning one vertex resolves the conflict.
    sat::Var undo[] = {1};
    prop.on_unassign(std::span<const sat::Var>(undo, 1));
    CHECK_FALSE(prop.propagate().has_value());
}
