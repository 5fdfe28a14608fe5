#pragma once

#include <vector>

#include "dfvs/digraph.hpp"

namespace dfvs {

/// A collection of uncovered cycles. When `complete` is true the vertex
/// sets of `cycles` are exactly the vertex sets of all uncovered cycles of
/// the source graph.
struct CycleSet {
    std::vector<Cycle> cycles;
    bool complete = false;
};

/// Bounded search for uncovered cycles of length at most `max_len`,
/// returning at most `max_count` of them. `complete` is set when neither
/// the length bound nor the count cap pruned any branch that could have
/// closed a further uncovered cycle.
CycleSet find_short_cycles(const DiGraph& g, int max_len, long max_count);

/// Raises the length bound round by round, starting from `initial_len`,
/// until a round finishes without hitting the bound (complete), the number
/// of newly found cycles grows between rounds, or `node_budget` search
/// steps are spent (both incomplete).
CycleSet enumerate_all_uncovered(const DiGraph& g, long node_budget, int initial_len = 4);

/// Drops every cycle whose vertex set strictly contains another listed
/// cycle's vertex set and deduplicates equal vertex sets (keeping the first
/// representative). Idempotent.
std::vector<Cycle> filter_covered(std::vector<Cycle> cycles);

/// True iff consecutive vertices (including last back to first) are arcs of
/// g and the vertices are distinct.
bool cycle_valid(const DiGraph& g, const Cycle& c);

}  // namespace dfvs
