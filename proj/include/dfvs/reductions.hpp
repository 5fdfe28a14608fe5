#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dfvs/cycles.hpp"
#include "dfvs/digraph.hpp"

namespace dfvs {

// ---------------------------------------------------------------------------
// Rule identities, selection mask, statistics
// ---------------------------------------------------------------------------

enum class RuleId : int {
    Loop = 0,
    In0Out0,
    In1Out1,
    Subset,
    Pie,
    Dome,
    InOutDiclique,
    Core,
    Diclique23,
    Unconfined,
    ManyFold,
    FourPath,
    ThreeEmpty,
    AllCycles,
    kCount,
};

constexpr int kNumRules = static_cast<int>(RuleId::kCount);

constexpr std::uint32_t rule_bit(RuleId r) { return 1u << static_cast<int>(r); }

/// All rules except ThreeEmpty, which is off unless explicitly requested.
constexpr std::uint32_t kDefaultRules =
    ((1u << kNumRules) - 1) & ~rule_bit(RuleId::ThreeEmpty);
constexpr std::uint32_t kAllRules = (1u << kNumRules) - 1;

std::string_view rule_name(RuleId r);
std::optional<RuleId> rule_from_name(std::string_view name);

struct RuleStats {
    long fires = 0;
    long vertices_removed = 0;  // net change, summed over fires
    long arcs_removed = 0;      // net change; folds may add arcs
};

struct ReductionStats {
    std::array<RuleStats, kNumRules> per_rule{};
    RuleStats& operator[](RuleId r) { return per_rule[static_cast<int>(r)]; }
    const RuleStats& operator[](RuleId r) const { return per_rule[static_cast<int>(r)]; }
};

// ---------------------------------------------------------------------------
// Trace of applied reductions
// ---------------------------------------------------------------------------

enum class EventKind { Loop, Exclude, ArcDelete, CommitVertex, ManyFold, FourPath, ThreeEmpty };

/// Payloads hold everything reconstruction needs; the original graph is not
/// consulted when mapping a kernel solution back.
struct LoopData {
    VertexId v;
};
struct ExcludeData {
    VertexId v;
};
struct ArcDeleteData {
    std::vector<std::pair<VertexId, VertexId>> arcs;
};
struct CommitData {
    VertexId v;
};
struct ManyFoldData {
    VertexId v_star;
    std::vector<VertexId> c1;       // each keeps exactly one non-bi partner in c2
    std::vector<VertexId> c2;       // removed side; offset contribution |c2|
    std::vector<VertexId> partner;  // partner[i] ∈ c2 is the partner of c1[i]
};
struct FourPathData {
    VertexId v_star, a, b, c, d;
};
struct ThreeEmptyData {
    VertexId v, a, b, c;
};

struct ReductionEvent {
    EventKind kind;
    std::variant<LoopData, ExcludeData, ArcDeleteData, CommitData, ManyFoldData, FourPathData,
                 ThreeEmptyData>
        payload;
};

struct ReductionTrace {
    std::vector<ReductionEvent> events;
    std::vector<VertexId> forced;  // vertices committed to every solution
    int offset = 0;                // extra solution size added by folding events
};

// ---------------------------------------------------------------------------
// The exclusion operator and individual rules
// ---------------------------------------------------------------------------

/// Removes v and adds a bypass arc p→s for every p ∈ pred(v), s ∈ succ(v)
/// with p, s ≠ v, so every path through v survives. A bi-neighbor of v
/// (p == s) gains a self-loop, to be consumed by the loop rule.
/// Throws std::invalid_argument if v has a self-loop.
void exclude_in_place(DiGraph& g, VertexId v);
DiGraph exclude(const DiGraph& g, VertexId v);

/// Removes every vertex carrying a self-loop and commits it to the solution.
bool try_loop(DiGraph& g, ReductionTrace& trace);

/// Exclusion-based rules on the first qualifying vertex: missing or unique
/// in/out-neighborhoods, in/out-neighborhood dicliques, all-bi-edge
/// diclique neighborhoods, and greedy two/three-diclique partitions.
/// `rules` selects which of In0Out0, In1Out1, InOutDiclique, Core,
/// Diclique23 to consider. `fired` reports which one applied.
bool try_exclusion_rules(DiGraph& g, ReductionTrace& trace, std::uint32_t rules,
                         RuleId* fired = nullptr);

/// Deletes every non-bi arc whose endpoints lie in different strongly
/// connected components of the graph without bi-edges.
bool try_pie(DiGraph& g, const SccLabeling& scc, ReductionTrace& trace);

/// Deletes the first dominated arc (v,u): (u,v) absent and either every
/// non-bi predecessor of v is a predecessor of u, or every non-bi successor
/// of u is a successor of v.
bool try_dome(DiGraph& g, ReductionTrace& trace);

/// Deletes every arc no listed cycle traverses consecutively. Requires and
/// preserves cycles.complete; throws std::invalid_argument otherwise.
bool try_allcycles(DiGraph& g, const CycleSet& cycles, ReductionTrace& trace);

/// For a bi-edge (v,u) with N_pre(v) ⊆ N_pre(u) ∪ {u} and
/// N_succ(v) ⊆ N_succ(u) ∪ {u}: removes u and commits it.
bool try_subset(DiGraph& g, ReductionTrace& trace);

/// Confinement test: grows a set A around v through forced neighbors; true
/// means some minimum solution contains v. Call on loop-free vertices.
bool check_unconfined(const DiGraph& g, VertexId v);

/// Removes and commits the first unconfined vertex.
bool try_unconfined(DiGraph& g, ReductionTrace& trace);

/// Arc (d,c) is straight when (c,d) is absent and all other out-arcs of d
/// are bi-edges, or all other in-arcs of c are bi-edges.
/// Throws std::invalid_argument if (d,c) is not an arc.
bool is_straight(const DiGraph& g, VertexId d, VertexId c);

/// Folds a vertex v whose neighborhood is all-bi and splits into diclique
/// halves C1, C2 where each C1 vertex misses arcs to exactly one C2
/// partner; requires the component-label / straightness side conditions.
/// Removes v and C2, rewires C1 to the partners' neighborhoods, and adds
/// |C2| to the trace offset. Run only at a fixpoint of the component rule.
bool try_manyfold(DiGraph& g, const SccLabeling& scc, ReductionTrace& trace);

/// Folds a vertex v whose all-bi neighborhood {a,b,c,d} induces exactly the
/// bi-path a↔b↔c↔d, subject to component-label separation conditions.
/// Offset contribution is zero.
bool try_4path(DiGraph& g, const SccLabeling& scc, ReductionTrace& trace);

/// Folds a vertex v with all-bi arcs and three pairwise non-adjacent
/// neighbors, realizing the undirected fold with bi-edges. Offset zero.
/// Disabled by default at the reduce() level.
bool try_3empty(DiGraph& g, ReductionTrace& trace);

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

std::vector<VertexId> reconstruct_manyfold(const ManyFoldData& ev,
                                           std::vector<VertexId> kernel_solution);
std::vector<VertexId> reconstruct_4path(const FourPathData& ev,
                                        std::vector<VertexId> kernel_solution);
std::vector<VertexId> reconstruct_3empty(const ThreeEmptyData& ev,
                                         std::vector<VertexId> kernel_solution);

/// Replays the trace newest-first on a minimum kernel solution, producing a
/// minimum solution of the pre-reduction graph (sorted).
std::vector<VertexId> reconstruct(const ReductionTrace& trace,
                                  std::vector<VertexId> kernel_solution);

// ---------------------------------------------------------------------------
// Fixpoint drivers
// ---------------------------------------------------------------------------

struct ReduceResult {
    DiGraph kernel;
    ReductionTrace trace;
};

/// Applies the enabled rules to a fixpoint, cheapest first, restarting
/// after every fire.
ReduceResult reduce(DiGraph g, std::uint32_t rules = kDefaultRules,
                    ReductionStats* stats = nullptr);

struct ReduceWithCyclesResult {
    DiGraph kernel;
    CycleSet cycles;  // kept synchronized with the kernel
    ReductionTrace trace;
};

/// Fixpoint over the arc-deletion and commit rules plus the all-cycles arc
/// rule, keeping the complete cycle set synchronized (vertex removals prune
/// it; arc deletions trigger re-enumeration within `node_budget`). Folding
/// rules are excluded here. If re-enumeration fails the cycle set degrades
/// to incomplete and the all-cycles rule stops. Requires cycles.complete.
ReduceWithCyclesResult reduce_with_all_cycles(DiGraph g, CycleSet cycles,
                                              std::uint32_t rules = kDefaultRules,
                                              long node_budget = 10'000'000,
                                              ReductionStats* stats = nullptr);

}  // namespace dfvs
