#include "dfvs/satcore.hpp"

#include <algorithm>
#include <cassert>
#include <climits>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfvs::sat {

namespace {

struct Clause {
    std::vector<Lit> lits;
    double act = 0.0;
    bool learnt = false;
};

struct Watcher {
    Clause* c;
    Lit blocker;
};

// Max-heap over variable activities with position tracking; ties break
// toward the smaller variable id for reproducible runs.
class VarHeap {
  public:
    explicit VarHeap(const std::vector<double>& act) : act_(act) {}

    bool contains(Var v) const { return v < (int)pos_.size() && pos_[v] >= 0; }
    bool empty() const { return heap_.empty(); }

    void insert(Var v) {
        if (contains(v)) return;
        if (v >= (int)pos_.size()) pos_.resize(v + 1, -1);
        pos_[v] = heap_.size();
        heap_.push_back(v);
        up(pos_[v]);
    }

    Var pop_max() {
        Var top = heap_[0];
        swap_at(0, heap_.size() - 1);
        pos_[top] = -1;
        heap_.pop_back();
        if (!heap_.empty()) down(0);
        return top;
    }

    void bumped(Var v) {
        if (contains(v)) up(pos_[v]);
    }

  private:
    bool before(Var a, Var b) const {
        return act_[a] > act_[b] || (act_[a] == act_[b] && a < b);
    }
    void swap_at(std::size_t i, std::size_t j) {
        std::swap(heap_[i], heap_[j]);
        pos_[heap_[i]] = i;
        pos_[heap_[j]] = j;
    }
    void up(std::size_t i) {
        while (i > 0) {
            std::size_t p = (i - 1) / 2;
            if (!before(heap_[i], heap_[p])) break;
            swap_at(i, p);
            i = p;
        }
    }
    void down(std::size_t i) {
        while (true) {
            std::size_t l = 2 * i + 1, r = 2 * i + 2, best = i;
            if (l < heap_.size() && before(heap_[l], heap_[best])) best = l;
            if (r < heap_.size() && before(heap_[r], heap_[best])) best = r;
            if (best == i) break;
            swap_at(i, best);
            i = best;
        }
    }

    const std::vector<double>& act_;
    std::vector<Var> heap_;
    std::vector<int> pos_;
};

}  // namespace

struct Solver::Impl {
    // Clause database. `clauses` holds problem clauses (user-added and
    // propagator-injected) which are never removed; `learnts` may shrink.
    std::vector<Clause*> clauses;
    std::vector<Clause*> learnts;
    std::vector<Lit> units;  // for DIMACS output; enforced via the trail

    std::vector<std::vector<Watcher>> watches;  // indexed by Lit.x
    std::vector<lbool> assigns;
    std::vector<int> level;
    std::vector<Clause*> reason;
    std::vector<Lit> trail;
    std::vector<int> trail_lim;
    int qhead = 0;

    std::vector<double> activity;
    VarHeap heap{activity};
    double var_inc = 1.0;
    double cla_inc = 1.0;
    static constexpr double kVarDecay = 1.0 / 0.95;
    static constexpr double kClaDecay = 1.0 / 0.999;

    std::vector<char> saved_sign;  // phase saving: last assigned sign
    std::vector<char> pref;       // 0 none, 1 prefer true, 2 prefer false
    std::vector<char> seen;

    Propagator* propagator = nullptr;
    int prop_head = 0;  // trail prefix already reported to the propagator

    bool ok = true;
    std::vector<lbool> model;
    std::vector<Lit> core;
    Stats st;
    std::uint64_t hash = 1469598103934665603ull;

    ~Impl() {
        for (Clause* c : clauses) delete c;
        for (Clause* c : learnts) delete c;
    }

    void hash_mix(std::uint64_t x) {
        hash ^= x + 0x9e3779b97f4a7c15ull;
        hash *= 1099511628211ull;
    }

    int n_vars() const { return (int)assigns.size(); }
    int decision_level() const { return (int)trail_lim.size(); }

    lbool value(Var v) const { return assigns[v]; }
    lbool value(Lit l) const {
        lbool a = assigns[var_of(l)];
        if (a == lbool::Undef) return a;
        return (a == lbool::True) != sign_of(l) ? lbool::True : lbool::False;
    }

    Var new_var() {
        Var v = n_vars();
        assigns.push_back(lbool::Undef);
        level.push_back(0);
        reason.push_back(nullptr);
        activity.push_back(0.0);
        saved_sign.push_back(1);  // default preference: negative
        pref.push_back(0);
        seen.push_back(0);
        watches.emplace_back();
        watches.emplace_back();
        heap.insert(v);
        return v;
    }

    void var_bump(Var v) {
        if ((activity[v] += var_inc) > 1e100) {
            for (double& a : activity) a *= 1e-100;
            var_inc *= 1e-100;
        }
        heap.bumped(v);
    }
    void cla_bump(Clause& c) {
        if ((c.act += cla_inc) > 1e20) {
            for (Clause* lc : learnts) lc->act *= 1e-20;
            cla_inc *= 1e-20;
        }
    }

    void attach(Clause* c) {
        watches[(~c->lits[0]).x].push_back({c, c->lits[1]});
        watches[(~c->lits[1]).x].push_back({c, c->lits[0]});
    }
    void detach(Clause* c) {
        for (Lit w : {c->lits[0], c->lits[1]}) {
            auto& ws = watches[(~w).x];
            for (std::size_t i = 0; i < ws.size(); ++i)
                if (ws[i].c == c) {
                    ws[i] = ws.back();
                    ws.pop_back();
                    break;
                }
        }
    }

    void unchecked_enqueue(Lit p, Clause* from) {
        Var v = var_of(p);
        assigns[v] = sign_of(p) ? lbool::False : lbool::True;
        level[v] = decision_level();
        reason[v] = from;
        saved_sign[v] = sign_of(p);
        trail.push_back(p);
        hash_mix((std::uint64_t)p.x);
    }

    void new_decision_level() { trail_lim.push_back((int)trail.size()); }

    void cancel_until(int lvl) {
        if (decision_level() <= lvl) return;
        int lim = trail_lim[lvl];
        std::vector<Var> undone;
        for (int i = (int)trail.size() - 1; i >= lim; --i) {
            Var v = var_of(trail[i]);
            if (i < prop_head) undone.push_back(v);
            assigns[v] = lbool::Undef;
            reason[v] = nullptr;
            heap.insert(v);
        }
        trail.resize(lim);
        trail_lim.resize(lvl);
        qhead = std::min(qhead, lim);
        prop_head = std::min(prop_head, lim);
        if (propagator && !undone.empty()) propagator->on_unassign(undone);
    }

    Clause* bcp() {
        while (qhead < (int)trail.size()) {
            Lit p = trail[qhead++];
            ++st.propagations;
            auto& ws = watches[p.x];  // clauses in which ~p is watched
            std::size_t i = 0, j = 0;
            while (i < ws.size()) {
                Watcher w = ws[i];
                if (value(w.blocker) == lbool::True) {
                    ws[j++] = ws[i++];
                    continue;
                }
                Clause& c = *w.c;
                ++i;
                Lit false_lit = ~p;
                if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
                Lit first = c.lits[0];
                if (first != w.blocker && value(first) == lbool::True) {
                    ws[j++] = {w.c, first};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.lits.size(); ++k)
                    if (value(c.lits[k]) != lbool::False) {
                        std::swap(c.lits[1], c.lits[k]);
                        watches[(~c.lits[1]).x].push_back({w.c, first});
                        moved = true;
                        break;
                    }
                if (moved) continue;
                ws[j++] = {w.c, first};
                if (value(first) == lbool::False) {
                    while (i < ws.size()) ws[j++] = ws[i++];
                    ws.resize(j);
                    qhead = (int)trail.size();
                    return w.c;
                }
                unchecked_enqueue(first, w.c);
            }
            ws.resize(j);
        }
        return nullptr;
    }

    void analyze(Clause* confl, std::vector<Lit>& out, int& bt_level) {
        out.clear();
        out.push_back(kLitUndef);  // slot for the asserting literal
        int path = 0;
        Lit p = kLitUndef;
        int index = (int)trail.size() - 1;
        do {
            Clause& c = *confl;
            if (c.learnt) cla_bump(c);
            for (std::size_t k = (p == kLitUndef ? 0 : 1); k < c.lits.size(); ++k) {
                Lit q = c.lits[k];
                Var v = var_of(q);
                if (seen[v] || level[v] == 0) continue;
                var_bump(v);
                seen[v] = 1;
                if (level[v] >= decision_level())
                    ++path;
                else
                    out.push_back(q);
            }
            while (!seen[var_of(trail[index--])]) {}
            p = trail[index + 1];
            confl = reason[var_of(p)];
            seen[var_of(p)] = 0;
            --path;
        } while (path > 0);
        out[0] = ~p;

        if (out.size() == 1) {
            bt_level = 0;
        } else {
            std::size_t max_i = 1;
            for (std::size_t k = 2; k < out.size(); ++k)
                if (level[var_of(out[k])] > level[var_of(out[max_i])]) max_i = k;
            std::swap(out[1], out[max_i]);
            bt_level = level[var_of(out[1])];
        }
        for (Lit l : out) seen[var_of(l)] = 0;
    }

    // Collects the subset of assumptions implying the failure of `failed`.
    void analyze_final(Lit failed) {
        core.clear();
        core.push_back(failed);
        if (decision_level() == 0) return;
        seen[var_of(failed)] = 1;
        for (int i = (int)trail.size() - 1; i >= trail_lim[0]; --i) {
            Var x = var_of(trail[i]);
            if (!seen[x]) continue;
            if (reason[x] == nullptr) {
                // A decision below the assumption prefix is an assumption.
                core.push_back(trail[i]);
            } else {
                for (std::size_t k = 1; k < reason[x]->lits.size(); ++k) {
                    Var v = var_of(reason[x]->lits[k]);
                    if (level[v] > 0) seen[v] = 1;
                }
            }
            seen[x] = 0;
        }
        seen[var_of(failed)] = 0;
        std::sort(core.begin(), core.end());
        core.erase(std::unique(core.begin(), core.end()), core.end());
    }

    // Normalizes and installs a clause at any decision level. Returns a
    // conflicting clause to be analyzed, or nullptr. May clear `ok` on a
    // level-0 contradiction. `lits` assigned-rank order decides watches:
    // unassigned literals outrank assigned ones, which rank by level.
    Clause* add_any(std::vector<Lit> lits) {
        if (!ok) return nullptr;
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t k = 0; k + 1 < lits.size(); ++k)
            if (lits[k + 1] == ~lits[k]) return nullptr;  // tautology
        if (lits.empty()) {
            ok = false;
            return nullptr;
        }
        // Non-false literals rank highest: if the top literal is false the
        // whole clause is false, and a true top literal means "satisfied".
        auto rank = [&](Lit l) {
            return value(l) == lbool::False ? level[var_of(l)] : INT_MAX;
        };
        std::stable_sort(lits.begin(), lits.end(),
                         [&](Lit a, Lit b) { return rank(a) > rank(b); });

        if (lits.size() == 1) {
            Lit l = lits[0];
            units.push_back(l);
            if (value(l) == lbool::True && level[var_of(l)] == 0) return nullptr;
            cancel_until(0);
            if (value(l) == lbool::False) {
                ok = false;
                return nullptr;
            }
            if (value(l) == lbool::Undef) unchecked_enqueue(l, nullptr);
            return nullptr;
        }

        Clause* c = new Clause{std::move(lits), 0.0, false};
        clauses.push_back(c);
        if (value(c->lits[0]) == lbool::False) {
            // Every literal is false; rewind to where it first conflicts.
            int lvl = level[var_of(c->lits[0])];
            if (lvl == 0) {
                ok = false;
                return nullptr;
            }
            cancel_until(lvl);
            attach(c);
            return c;
        }
        if (value(c->lits[0]) == lbool::Undef && value(c->lits[1]) == lbool::False) {
            // Unit; enqueue where it became unit so backtracking re-derives it.
            cancel_until(level[var_of(c->lits[1])]);
            attach(c);
            unchecked_enqueue(c->lits[0], c);
            return nullptr;
        }
        attach(c);
        return nullptr;
    }

    void notify_assigns() {
        if (!propagator || prop_head >= (int)trail.size()) return;
        propagator->on_assign(
            std::span<const Lit>(trail.data() + prop_head, trail.size() - prop_head));
        prop_head = (int)trail.size();
    }

    bool resolve_conflict(Clause* confl) {
        ++st.conflicts;
        if (decision_level() == 0) {
            ok = false;
            return false;
        }
        std::vector<Lit> learnt;
        int bt = 0;
        analyze(confl, learnt, bt);
        cancel_until(bt);
        ++st.learned;
        for (Lit l : learnt) hash_mix((std::uint64_t)l.x ^ 0xabcdull);
        if (learnt.size() == 1) {
            unchecked_enqueue(learnt[0], nullptr);
        } else {
            Clause* c = new Clause{std::move(learnt), 0.0, true};
            learnts.push_back(c);
            attach(c);
            cla_bump(*c);
            unchecked_enqueue(c->lits[0], c);
        }
        var_inc *= kVarDecay;
        cla_inc *= kClaDecay;
        return true;
    }

    bool locked(Clause* c) const {
        return value(c->lits[0]) == lbool::True && reason[var_of(c->lits[0])] == c;
    }

    void reduce_db() {
        std::vector<Clause*> order = learnts;
        std::stable_sort(order.begin(), order.end(),
                         [](Clause* a, Clause* b) { return a->act < b->act; });
        std::size_t target = order.size() / 2;
        std::vector<Clause*> dead;
        for (Clause* c : order) {
            if (dead.size() >= target) break;
            if (c->lits.size() <= 2 || locked(c)) continue;
            dead.push_back(c);
        }
        for (Clause* c : dead) {
            detach(c);
            learnts.erase(std::find(learnts.begin(), learnts.end(), c));
            delete c;
            ++st.removed_learned;
        }
    }

    Lit pick_branch_lit() {
        while (!heap.empty()) {
            Var v = heap.pop_max();
            if (assigns[v] != lbool::Undef) continue;
            bool neg = pref[v] ? pref[v] == 2 : saved_sign[v];
            return mk_lit(v, neg);
        }
        return kLitUndef;
    }

    SolveResult search(const std::vector<Lit>& assumptions) {
        long restart_budget = 100;
        long conflicts_at_restart = st.conflicts;
        std::size_t max_learnts = std::max<std::size_t>(2000, 2 * clauses.size());

        while (true) {
            Clause* confl = bcp();
            if (confl) {
                if (!resolve_conflict(confl)) return SolveResult::Unsat;
                continue;
            }
            if (propagator) {
                notify_assigns();
                auto cl = propagator->propagate();
                if (cl) {
                    ++st.injected;
                    Clause* cc = add_any(std::move(*cl));
                    if (!ok) return SolveResult::Unsat;
                    if (cc && !resolve_conflict(cc)) return SolveResult::Unsat;
                    continue;
                }
            }
            if (st.conflicts - conflicts_at_restart >= restart_budget) {
                ++st.restarts;
                restart_budget = restart_budget * 3 / 2;
                conflicts_at_restart = st.conflicts;
                cancel_until(0);
                continue;
            }
            if (learnts.size() >= max_learnts) {
                reduce_db();
                max_learnts += max_learnts / 10;
            }

            Lit next = kLitUndef;
            while (decision_level() < (int)assumptions.size()) {
                Lit p = assumptions[decision_level()];
                if (value(p) == lbool::True) {
                    new_decision_level();
                } else if (value(p) == lbool::False) {
                    analyze_final(p);
                    return SolveResult::Unsat;
                } else {
                    next = p;
                    break;
                }
            }
            if (next == kLitUndef) {
                next = pick_branch_lit();
                if (next == kLitUndef) {
                    model.assign(assigns.begin(), assigns.end());
                    return SolveResult::Sat;
                }
                ++st.decisions;
            }
            new_decision_level();
            unchecked_enqueue(next, nullptr);
        }
    }
};

Solver::Solver() : impl_(new Impl) {}
Solver::~Solver() { delete impl_; }
Solver::Solver(Solver&& o) noexcept : impl_(o.impl_) { o.impl_ = nullptr; }
Solver& Solver::operator=(Solver&& o) noexcept {
    if (this != &o) {
        delete impl_;
        impl_ = o.impl_;
        o.impl_ = nullptr;
    }
    return *this;
}

Var Solver::new_var() { return impl_->new_var(); }
int Solver::num_vars() const { return impl_->n_vars(); }

bool Solver::add_clause(std::vector<Lit> lits) {
    if (!impl_->ok) return false;
    assert(impl_->decision_level() == 0);
    Clause* confl = impl_->add_any(std::move(lits));
    (void)confl;  // at level 0 a contradiction clears ok instead
    return impl_->ok;
}

bool Solver::okay() const { return impl_->ok; }

void Solver::set_phase_preference(Var v, bool prefer_true) {
    impl_->pref[v] = prefer_true ? 1 : 2;
}

void Solver::set_propagator(Propagator* p) { impl_->propagator = p; }

SolveResult Solver::solve(const std::vector<Lit>& assumptions) {
    impl_->model.clear();
    impl_->core.clear();
    if (!impl_->ok) return SolveResult::Unsat;
    SolveResult r = impl_->search(assumptions);
    impl_->cancel_until(0);
    return r;
}

lbool Solver::model_value(Var v) const { return impl_->model[v]; }
const std::vector<Lit>& Solver::conflict_core() const { return impl_->core; }

bool Solver::propagate_fixpoint() {
    if (!impl_->ok) return false;
    return impl_->bcp() == nullptr;
}

lbool Solver::value_of(Var v) const { return impl_->assigns[v]; }

const Solver::Stats& Solver::stats() const { return impl_->st; }
std::uint64_t Solver::transcript_hash() const { return impl_->hash; }

void Solver::to_dimacs(std::ostream& os) const {
    os << "p cnf " << impl_->n_vars() << ' '
       << impl_->clauses.size() + impl_->units.size() << '\n';
    auto put = [&](const std::vector<Lit>& ls) {
        for (Lit l : ls) os << (sign_of(l) ? -(var_of(l) + 1) : var_of(l) + 1) << ' ';
        os << "0\n";
    };
    for (Lit u : impl_->units) put({u});
    for (const Clause* c : impl_->clauses) put(c->lits);
}

Solver from_dimacs(std::istream& is) {
    Solver s;
    std::string line;
    int line_no = 0, declared_vars = -1;
    std::vector<Lit> cur;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("dimacs line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            int nv = 0, nc = 0;
            if (!(ls >> p >> cnf >> nv >> nc) || cnf != "cnf") fail("bad problem line");
            declared_vars = nv;
            while (s.num_vars() < nv) s.new_var();
            continue;
        }
        long v;
        while (ls >> v) {
            if (v == 0) {
                s.add_clause(cur);
                cur.clear();
            } else {
                if (declared_vars < 0) fail("clause before problem line");
                if (std::abs(v) > declared_vars) fail("variable out of range");
                cur.push_back(mk_lit((Var)std::abs(v) - 1, v < 0));
            }
        }
        if (!ls.eof()) fail("non-numeric token");
    }
    if (!cur.empty()) throw std::runtime_error("dimacs: unterminated clause");
    return s;
}

}  // namespace dfvs::sat
