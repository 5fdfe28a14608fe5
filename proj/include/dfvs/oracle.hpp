#pragma once

#include <vector>

#include "dfvs/digraph.hpp"

namespace dfvs {
namespace oracle {

/// Largest instance the brute-force routines accept; they throw
/// std::invalid_argument on anything bigger.
inline constexpr int kMaxOracleVertices = 12;

/// Minimum-size set of vertices whose removal makes g acyclic, found by
/// checking all vertex subsets in order of increasing size (ties broken by
/// lexicographically smallest set, so the result is deterministic).
/// Acyclicity is decided by an independent in-degree elimination, not by the
/// main library code.
std::vector<VertexId> brute_force_dfvs(const DiGraph& g, int max_n = kMaxOracleVertices);

/// Size of the minimum solution; convenience wrapper.
int brute_force_dfvs_size(const DiGraph& g, int max_n = kMaxOracleVertices);

/// Vertex sets of all uncovered cycles of g (cycles whose vertex set does
/// not strictly contain another cycle's vertex set), each sorted, the list
/// sorted by (size, lexicographic). Exhaustive simple-cycle enumeration
/// followed by a superset filter.
std::vector<std::vector<VertexId>> brute_force_cycles(const DiGraph& g,
                                                      int max_n = kMaxOracleVertices);

/// Independent acyclicity check by repeatedly deleting vertices without
/// incoming arcs (restricted to the alive vertices of g minus `removed`).
bool is_acyclic_after_removal(const DiGraph& g, const std::vector<VertexId>& removed);

}  // namespace oracle
}  // namespace dfvs
