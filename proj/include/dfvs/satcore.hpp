#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace dfvs::sat {

using Var = int;

/// Literal packed as 2*var + sign, sign 1 meaning negated.
struct Lit {
    int x = -2;
    friend bool operator==(Lit a, Lit b) { return a.x == b.x; }
    friend bool operator<(Lit a, Lit b) { return a.x < b.x; }
};
inline Lit mk_lit(Var v, bool neg = false) { return Lit{2 * v + (neg ? 1 : 0)}; }
inline Lit operator~(Lit l) { return Lit{l.x ^ 1}; }
inline Var var_of(Lit l) { return l.x >> 1; }
inline bool sign_of(Lit l) { return l.x & 1; }  // true = negated
constexpr Lit kLitUndef{-2};

enum class lbool : unsigned char { False = 0, True = 1, Undef = 2 };

/// Callback invoked at every unit-propagation fixpoint, before decisions.
/// May hand back at most one clause per invocation, which must be falsified
/// or undetermined under the trail at the moment of return.
class Propagator {
  public:
    virtual ~Propagator() = default;
    /// Literals appended to the trail since the previous notification.
    virtual void on_assign(std::span<const Lit> lits) = 0;
    /// Variables whose previously notified assignments were undone.
    virtual void on_unassign(std::span<const Var> vars) = 0;
    /// nullopt: nothing to add, the solver may decide or conclude SAT.
    virtual std::optional<std::vector<Lit>> propagate() = 0;
};

enum class SolveResult { Sat, Unsat };

class Solver {
  public:
    Solver();
    ~Solver();
    Solver(Solver&&) noexcept;
    Solver& operator=(Solver&&) noexcept;
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    Var new_var();
    int num_vars() const;

    /// False means the clause made the instance unsatisfiable at level 0
    /// (including the empty clause). Duplicates are merged, tautologies
    /// silently accepted and dropped.
    bool add_clause(std::vector<Lit> lits);
    bool okay() const;

    /// The decision heuristic picks this sign whenever it branches on v,
    /// overriding phase saving. Propagation still assigns freely.
    void set_phase_preference(Var v, bool prefer_true);

    void set_propagator(Propagator* p);

    SolveResult solve(const std::vector<Lit>& assumptions = {});

    /// Valid after Sat. Every variable has a concrete value in the model.
    lbool model_value(Var v) const;
    /// Valid after Unsat under assumptions: a (not necessarily minimal)
    /// subset of the assumptions sufficient for unsatisfiability.
    const std::vector<Lit>& conflict_core() const;

    /// Runs unit propagation to fixpoint at the current level without
    /// searching; false on conflict. Exposed for tests.
    bool propagate_fixpoint();
    /// Trail value of a variable right now (not the last model).
    lbool value_of(Var v) const;

    struct Stats {
        long decisions = 0;
        long propagations = 0;
        long conflicts = 0;
        long restarts = 0;
        long learned = 0;
        long injected = 0;
        long removed_learned = 0;
    };
    const Stats& stats() const;

    /// Order-sensitive digest of every enqueued literal and learned clause;
    /// equal runs produce equal hashes.
    std::uint64_t transcript_hash() const;

    /// Problem clauses (user-added and injected) in DIMACS CNF.
    void to_dimacs(std::ostream& os) const;

  private:
    struct Impl;
    Impl* impl_;
};

/// Reads a DIMACS CNF stream into a fresh solver; throws std::runtime_error
/// with a line number on malformed input.
Solver from_dimacs(std::istream& is);

}  // namespace dfvs::sat
