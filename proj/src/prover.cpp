#include "eqbase/prover.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace eqbase {

namespace {

// ---------------------------------------------------------------------------
// Syntactic unification (terms share one variable namespace; callers rename
// apart beforehand).

bool occurs(const std::string& v, const TermPtr& t, const Substitution& s) {
    if (t->is_var()) {
        if (t->name() == v) return true;
        auto it = s.find(t->name());
        return it != s.end() && occurs(v, it->second, s);
    }
    if (occurs(v, t->child0(), s)) return true;
    return t->is_meet() && occurs(v, t->child1(), s);
}

TermPtr walk(TermPtr t, const Substitution& s) {
    while (t->is_var()) {
        auto it = s.find(t->name());
        if (it == s.end()) break;
        t = it->second;
    }
    return t;
}

bool unify_rec(TermPtr a, TermPtr b, Substitution& s) {
    a = walk(a, s);
    b = walk(b, s);
    if (a->is_var()) {
        if (b->is_var() && b->name() == a->name()) return true;
        if (occurs(a->name(), b, s)) return false;
        s[a->name()] = b;
        return true;
    }
    if (b->is_var()) return unify_rec(b, a, s);
    if (a->kind() != b->kind()) return false;
    if (!unify_rec(a->child0(), b->child0(), s)) return false;
    return !a->is_meet() || unify_rec(a->child1(), b->child1(), s);
}

TermPtr resolve(const TermPtr& t, const Substitution& s) {
    if (t->is_var()) {
        auto it = s.find(t->name());
        return it == s.end() ? t : resolve(it->second, s);
    }
    if (t->is_comp()) return Term::comp(resolve(t->child0(), s));
    return Term::meet(resolve(t->child0(), s), resolve(t->child1(), s));
}

/// Most general unifier as an idempotent substitution, or nullopt.
std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b) {
    Substitution tri;
    if (!unify_rec(a, b, tri)) return std::nullopt;
    Substitution out;
    for (const auto& [v, t] : tri) out[v] = resolve(t, tri);
    return out;
}

// ---------------------------------------------------------------------------
// Ground KBO: every variable treated as a constant. Total on distinct terms,
// well-founded, closed under contexts; used for rewriting goal terms, whose
// variables are fixed (skolemized in place).

int ground_rank(const TermPtr& t) {
    switch (t->kind()) {
        case Term::Kind::Comp: return 3;
        case Term::Kind::Meet: return 2;
        default: return 1;
    }
}

int ground_cmp(const TermPtr& a, const TermPtr& b) {
    if (a->size() != b->size()) return a->size() < b->size() ? -1 : 1;
    int ra = ground_rank(a), rb = ground_rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (a->is_var()) return a->name().compare(b->name()) < 0 ? -1 : (a->name() == b->name() ? 0 : 1);
    int c0 = ground_cmp(a->child0(), b->child0());
    if (c0 != 0 || a->is_comp()) return c0;
    return ground_cmp(a->child1(), b->child1());
}

bool ground_greater(const TermPtr& a, const TermPtr& b) { return ground_cmp(a, b) > 0; }

// ---------------------------------------------------------------------------
// AC redundancy. Flatten nested meets, normalize arguments recursively and
// sort them; two terms are AC-equal iff their normal forms coincide.

void ac_atoms(const TermPtr& t, std::vector<TermPtr>& out);

TermPtr ac_norm(const TermPtr& t) {
    if (t->is_var()) return t;
    if (t->is_comp()) return Term::comp(ac_norm(t->child0()));
    std::vector<TermPtr> atoms;
    ac_atoms(t, atoms);
    std::sort(atoms.begin(), atoms.end(),
              [](const TermPtr& a, const TermPtr& b) { return term_key(a) < term_key(b); });
    TermPtr acc = atoms.back();
    for (std::size_t k = atoms.size() - 1; k-- > 0;) acc = Term::meet(atoms[k], acc);
    return acc;
}

void ac_atoms(const TermPtr& t, std::vector<TermPtr>& out) {
    if (t->is_meet()) {
        ac_atoms(t->child0(), out);
        ac_atoms(t->child1(), out);
    } else {
        out.push_back(ac_norm(t));
    }
}

bool ac_equal(const TermPtr& a, const TermPtr& b) { return equal(ac_norm(a), ac_norm(b)); }

/// Alpha-invariant key of an identity modulo AC of meet: minimum of the
/// plain keys of the AC-normal forms over all canonical renamings and both
/// side orders. Falls back to the AC-normal key for identities with many
/// variables.
std::string ac_canonical_key(const TermPtr& l, const TermPtr& r) {
    std::set<std::string> names;
    for (const auto& v : vars(l)) names.insert(v);
    for (const auto& v : vars(r)) names.insert(v);
    auto key_of = [](const TermPtr& a, const TermPtr& b) {
        std::string ka = term_key(ac_norm(a)), kb = term_key(ac_norm(b));
        return ka <= kb ? ka + "=" + kb : kb + "=" + ka;
    };
    if (names.size() > 6) return key_of(l, r);
    std::vector<std::string> order(names.begin(), names.end());
    std::string best;
    std::vector<int> perm(order.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
    do {
        Substitution ren;
        for (std::size_t k = 0; k < order.size(); ++k) {
            ren[order[k]] = Term::var(canonical_var_name(perm[k]));
        }
        std::string key = key_of(substitute(l, ren), substitute(r, ren));
        if (best.empty() || key < best) best = key;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Keys of the equations that stay exempt from AC-redundancy deletion:
/// commutativity, associativity and extended commutativity, which together
/// sort ground meets under ordered rewriting.
const std::set<std::string>& ac_exempt_keys() {
    static const std::set<std::string> keys = [] {
        TermPtr x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
        std::set<std::string> k;
        k.insert(unordered_identity_key(Term::meet(x, y), Term::meet(y, x)));
        k.insert(unordered_identity_key(Term::meet(x, Term::meet(y, z)),
                                        Term::meet(Term::meet(x, y), z)));
        k.insert(unordered_identity_key(Term::meet(x, Term::meet(y, z)),
                                        Term::meet(y, Term::meet(x, z))));
        return k;
    }();
    return keys;
}

// ---------------------------------------------------------------------------
// Equation store.

struct Just {
    enum Kind { AxiomJ, CPJ, SimpJ } kind = AxiomJ;
    // CPJ: overlap of e2's p-side into e1's s-side at pos. sX_is_lhs says
    // which stored side of eX was used as s (for e1) resp. p (for e2).
    int e1 = -1, e2 = -1;
    bool s1_is_lhs = true, s2_is_lhs = true;
    Position pos;
    Substitution sigma1, sigma2;  // over e1's / e2's own variable names
    // SimpJ: re-simplified copy of a deactivated equation.
    int parent = -1;
};

struct Rw {
    int eq;              // rule applied
    bool source_is_lhs;  // source side of the rule
    Position pos;
    Substitution sigma;
};

enum class EqState { Passive, Active, Deactivated, Discarded };

struct EqRec {
    int id = -1;
    std::string axiom_name;  // nonempty for axioms
    TermPtr raw_lhs, raw_rhs;
    std::vector<Rw> simp_lhs, simp_rhs;  // rewrites applied to the raw sides so far
    TermPtr cur_lhs, cur_rhs;            // raw sides after the recorded rewrites
    bool swapped = false;                // stored sides = swap of simplified raw sides
    TermPtr lhs, rhs;                    // final stored sides
    bool oriented = false;               // lhs > rhs under compare_kbo
    int weight = 0;                      // passive-queue priority
    Just just;
    EqState state = EqState::Passive;
    int keep_seq = -1;  // finalization order; -1 while passive
};

struct GoalProof {
    std::vector<Rw> steps_lhs, steps_rhs;  // goal.lhs ->* nf <-* goal.rhs
};

class Completion {
public:
    Completion(const std::vector<Identity>& axioms, const Identity& goal,
               const ProverLimits& limits)
        : goal_(goal), limits_(limits), start_(std::chrono::steady_clock::now()) {
        for (const auto& ax : axioms) {
            EqRec e;
            e.axiom_name = ax.name;
            e.raw_lhs = ax.lhs;
            e.raw_rhs = ax.rhs;
            admit(std::move(e));
        }
    }

    ProverOutcome run() {
        ProverOutcome out;
        GoalProof gp;
        if (goal_joinable(&gp)) {
            out.status = ProverStatus::Proved;
            out.script = reconstruct(gp);
            finish_stats(out);
            return out;
        }
        while (!passive_.empty()) {
            if (elapsed() > limits_.max_seconds) {
                out.status = ProverStatus::TimedOut;
                finish_stats(out);
                return out;
            }
            int id = pop_passive();
            if (!process(id)) continue;
            if (goal_joinable(&gp)) {
                out.status = ProverStatus::Proved;
                out.script = reconstruct(gp);
                finish_stats(out);
                return out;
            }
            generate_cps(id);
            if (kept_ >= limits_.max_kept) break;
        }
        out.status = ProverStatus::Exhausted;
        finish_stats(out);
        return out;
    }

private:
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    void finish_stats(ProverOutcome& out) {
        out.stats.generated = generated_;
        out.stats.kept = kept_;
        out.stats.seconds = elapsed();
    }

    // --- passive queue -----------------------------------------------------

    void push_passive(int id, int weight) {
        passive_.insert({weight, id});
        passive_ids_.insert(id);
    }

    /// Mostly smallest-combined-size-first; every sixth pick takes the oldest
    /// passive equation instead so large consequences are not starved.
    int pop_passive() {
        int id;
        if (++picks_ % 6 == 0) {
            id = *passive_ids_.begin();
            passive_.erase({eqs_[id].weight, id});
        } else {
            id = passive_.begin()->second;
            passive_.erase(passive_.begin());
        }
        passive_ids_.erase(id);
        return id;
    }

    // --- ordered rewriting -------------------------------------------------

    /// Try rule `e` at `pos` of `t` using `source_is_lhs`; ground flag picks
    /// the ordering used for the instance check on unorientable rules.
    bool try_rw(const TermPtr& t, const Position& pos, const EqRec& e, bool source_is_lhs,
                bool ground, TermPtr* out, Rw* rw) const {
        const TermPtr& src = source_is_lhs ? e.lhs : e.rhs;
        const TermPtr& tgt = source_is_lhs ? e.rhs : e.lhs;
        if (e.oriented && !source_is_lhs) return false;
        TermPtr sub = subterm_at(t, pos);
        if (sub->size() < src->size()) return false;
        if (!src->is_var() && src->kind() != sub->kind()) return false;
        auto sigma = match_pattern(src, sub);
        if (!sigma) return false;
        TermPtr replacement = substitute(tgt, *sigma);
        if (!e.oriented || !source_is_lhs) {
            bool decreasing = ground ? ground_greater(sub, replacement)
                                     : kbo_greater(sub, replacement);
            if (!decreasing) return false;
        }
        *out = replace_at(t, pos, replacement);
        if (rw) *rw = Rw{e.id, source_is_lhs, pos, *sigma};
        return true;
    }

    /// Try every active rule at the root of `t` only.
    bool try_rules_at_root(const TermPtr& t, bool ground, TermPtr* out, Rw* rw) const {
        static const Position root;
        for (int id : active_) {
            const EqRec& e = eqs_[id];
            if (try_rw(t, root, e, true, ground, out, rw)) return true;
            if (!e.oriented && try_rw(t, root, e, false, ground, out, rw)) return true;
        }
        return false;
    }

    /// Leftmost-innermost single rewrite; returns the rewritten term or null
    /// at normal form. `prefix` accumulates the position for the trace.
    TermPtr rewrite_rec(const TermPtr& t, bool ground, Position& prefix, Rw* rw) const {
        if (!t->is_var()) {
            prefix.push_back(0);
            if (TermPtr n0 = rewrite_rec(t->child0(), ground, prefix, rw)) {
                prefix.pop_back();
                return t->is_comp() ? Term::comp(n0) : Term::meet(n0, t->child1());
            }
            prefix.pop_back();
            if (t->is_meet()) {
                prefix.push_back(1);
                if (TermPtr n1 = rewrite_rec(t->child1(), ground, prefix, rw)) {
                    prefix.pop_back();
                    return Term::meet(t->child0(), n1);
                }
                prefix.pop_back();
            }
        }
        TermPtr out;
        if (try_rules_at_root(t, ground, &out, rw)) {
            if (rw) rw->pos = prefix;
            return out;
        }
        return nullptr;
    }

    TermPtr normal_form(TermPtr t, bool ground, std::vector<Rw>* trace) const {
        Position prefix;
        Rw rw;
        while (TermPtr next = rewrite_rec(t, ground, prefix, &rw)) {
            if (trace) trace->push_back(rw);
            t = next;
        }
        return t;
    }

    // --- keeping equations -------------------------------------------------

    /// Admission filter run at generation time: simplify, dedup, weigh,
    /// enqueue. The candidate owns its raw sides and justification already.
    void admit(EqRec&& cand) {
        cand.id = static_cast<int>(eqs_.size());
        // Most candidates are renamings of earlier ones; reject those before
        // paying for normalization.
        std::string raw_key = unordered_identity_key(cand.raw_lhs, cand.raw_rhs);
        if (!generated_keys_.insert(raw_key).second) return;
        cand.cur_lhs = normal_form(cand.raw_lhs, false, &cand.simp_lhs);
        cand.cur_rhs = normal_form(cand.raw_rhs, false, &cand.simp_rhs);
        if (equal(cand.cur_lhs, cand.cur_rhs)) return;
        if (cand.cur_lhs->size() > limits_.max_term_size ||
            cand.cur_rhs->size() > limits_.max_term_size) {
            return;
        }
        std::string key = unordered_identity_key(cand.cur_lhs, cand.cur_rhs);
        if (key != raw_key && !generated_keys_.insert(key).second) return;
        if (ac_available_ && !ac_exempt_keys().count(key) &&
            ac_equal(cand.cur_lhs, cand.cur_rhs)) {
            return;
        }
        cand.weight = cand.cur_lhs->size() + cand.cur_rhs->size();
        if (compare_kbo(cand.cur_lhs, cand.cur_rhs) == Ordering::Incomparable) {
            cand.weight += 4;  // prefer orientable consequences
        }
        eqs_.push_back(std::move(cand));
        push_passive(eqs_.back().id, eqs_.back().weight);
    }

    /// Pop-side processing: simplify, orient, dedup; true if kept (active).
    bool process(int id) {
        EqRec& e = eqs_[id];
        TermPtr a = normal_form(e.cur_lhs, false, &e.simp_lhs);
        TermPtr b = normal_form(e.cur_rhs, false, &e.simp_rhs);
        e.cur_lhs = a;
        e.cur_rhs = b;
        if (equal(a, b)) {
            e.state = EqState::Discarded;
            return false;
        }
        if (a->size() > limits_.max_term_size || b->size() > limits_.max_term_size) {
            e.state = EqState::Discarded;
            return false;
        }
        std::string key = unordered_identity_key(a, b);
        if (!kept_keys_.insert(key).second) {
            e.state = EqState::Discarded;
            return false;
        }
        if (ac_available_ && !ac_exempt_keys().count(key)) {
            if (ac_equal(a, b)) {
                e.state = EqState::Discarded;
                return false;
            }
            if (!kept_ac_keys_.insert(ac_canonical_key(a, b)).second) {
                e.state = EqState::Discarded;
                return false;
            }
        }
        if (!ac_available_) {
            TermPtr x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
            static const std::string comm_key =
                unordered_identity_key(Term::meet(x, y), Term::meet(y, x));
            static const std::string assoc_key = unordered_identity_key(
                Term::meet(x, Term::meet(y, z)), Term::meet(Term::meet(x, y), z));
            if (key == comm_key) have_comm_ = true;
            if (key == assoc_key) have_assoc_ = true;
            ac_available_ = have_comm_ && have_assoc_;
        }
        Ordering ord = compare_kbo(a, b);
        e.swapped = (ord == Ordering::Less);
        e.lhs = e.swapped ? b : a;
        e.rhs = e.swapped ? a : b;
        e.oriented = (ord == Ordering::Greater || ord == Ordering::Less);
        e.state = EqState::Active;
        e.keep_seq = static_cast<int>(kept_++);
        active_.push_back(id);
#ifdef EQBASE_TRACE
        std::fprintf(stderr, "[%llu] e%d%s: %s = %s\n", (unsigned long long)kept_, id,
                     e.oriented ? "" : " (unor)", format_term(e.lhs).c_str(),
                     format_term(e.rhs).c_str());
#endif
        backward_simplify(id);
        return true;
    }

    /// Retire active equations the new rule reduces; re-queue their
    /// simplified forms.
    void backward_simplify(int new_id) {
        const EqRec& r = eqs_[new_id];
        std::vector<int> hit;
        for (int id : active_) {
            if (id == new_id) continue;
            const EqRec& e = eqs_[id];
            TermPtr out;
            bool reducible = false;
            for (const TermPtr& side : {e.lhs, e.rhs}) {
                for (const auto& pos : all_positions(side)) {
                    if (try_rw(side, pos, r, true, false, &out, nullptr) ||
                        (!r.oriented && try_rw(side, pos, r, false, false, &out, nullptr))) {
                        reducible = true;
                        break;
                    }
                }
                if (reducible) break;
            }
            if (reducible) hit.push_back(id);
        }
        for (int id : hit) {
            EqRec& e = eqs_[id];
            e.state = EqState::Deactivated;
            active_.erase(std::find(active_.begin(), active_.end(), id));
            EqRec copy;
            copy.just.kind = Just::SimpJ;
            copy.just.parent = id;
            copy.raw_lhs = e.lhs;
            copy.raw_rhs = e.rhs;
            admit(std::move(copy));
        }
    }

    // --- critical pairs ----------------------------------------------------

    void generate_cps(int new_id) {
        for (int other : active_) {
            overlap(new_id, other);
            if (other != new_id) overlap(other, new_id);
        }
    }

    /// Overlap e2's maximal sides into non-variable positions of e1's
    /// maximal sides.
    void overlap(int id1, int id2) {
        const EqRec& e1 = eqs_[id1];
        const EqRec& e2 = eqs_[id2];
        for (bool s1_lhs : {true, false}) {
            if (!s1_lhs && e1.oriented) continue;
            for (bool s2_lhs : {true, false}) {
                if (!s2_lhs && e2.oriented) continue;
                overlap_sides(e1, s1_lhs, e2, s2_lhs);
            }
        }
    }

    void overlap_sides(const EqRec& e1, bool s1_lhs, const EqRec& e2, bool s2_lhs) {
        const TermPtr& s = s1_lhs ? e1.lhs : e1.rhs;
        const TermPtr& t = s1_lhs ? e1.rhs : e1.lhs;

        // Rename e2 apart from e1.
        std::set<std::string> taken;
        for (const auto& v : vars(e1.lhs)) taken.insert(v);
        for (const auto& v : vars(e1.rhs)) taken.insert(v);
        Substitution ren;
        int counter = 1;
        auto renamed = [&](const TermPtr& side) {
            Substitution local;
            for (const auto& v : vars(side)) {
                if (ren.count(v)) continue;
                std::string fresh;
                do {
                    fresh = "b" + std::to_string(counter++);
                } while (taken.count(fresh));
                ren[v] = Term::var(fresh);
            }
            return substitute(side, ren);
        };
        TermPtr p = renamed(s2_lhs ? e2.lhs : e2.rhs);
        TermPtr q = renamed(s2_lhs ? e2.rhs : e2.lhs);

        for (const auto& pos : all_positions(s)) {
            TermPtr sp = subterm_at(s, pos);
            if (sp->is_var()) continue;
            if (pos.empty() && e1.id == e2.id && s1_lhs == s2_lhs) continue;
            auto theta = unify(sp, p);
            if (!theta) continue;
            TermPtr s_inst = substitute(s, *theta);
            TermPtr t_inst = substitute(t, *theta);
            TermPtr q_inst = substitute(q, *theta);
            // Unfailing restriction: only overlap maximal instances.
            if (kbo_greater(t_inst, s_inst)) continue;
            if (kbo_greater(q_inst, substitute(p, *theta))) continue;
            TermPtr cp_lhs = t_inst;
            TermPtr cp_rhs = replace_at(s_inst, pos, q_inst);
            ++generated_;
            if (equal(cp_lhs, cp_rhs)) continue;
            if (cp_lhs->size() > limits_.max_term_size ||
                cp_rhs->size() > limits_.max_term_size) {
                continue;
            }

            EqRec cp;
            cp.raw_lhs = cp_lhs;
            cp.raw_rhs = cp_rhs;
            cp.just.kind = Just::CPJ;
            cp.just.e1 = e1.id;
            cp.just.e2 = e2.id;
            cp.just.s1_is_lhs = s1_lhs;
            cp.just.s2_is_lhs = s2_lhs;
            cp.just.pos = pos;
            for (const auto& v : vars(e1.lhs)) {
                auto it = theta->find(v);
                if (it != theta->end()) cp.just.sigma1[v] = it->second;
            }
            for (const auto& v : vars(e1.rhs)) {
                auto it = theta->find(v);
                if (it != theta->end()) cp.just.sigma1[v] = it->second;
            }
            for (const auto& [orig, fresh] : ren) {
                auto it = theta->find(fresh->name());
                cp.just.sigma2[orig] = (it != theta->end()) ? it->second : fresh;
            }
            admit(std::move(cp));
        }
    }

    // --- goal handling -----------------------------------------------------

    bool goal_joinable(GoalProof* gp) const {
        gp->steps_lhs.clear();
        gp->steps_rhs.clear();
        TermPtr a = normal_form(goal_.lhs, true, &gp->steps_lhs);
        TermPtr b = normal_form(goal_.rhs, true, &gp->steps_rhs);
        return equal(a, b);
    }

    // --- proof reconstruction ----------------------------------------------

    /// Equations whose use needs no lemma of their own: unmodified axioms.
    bool axiom_pure(const EqRec& e) const {
        return e.just.kind == Just::AxiomJ && e.simp_lhs.empty() && e.simp_rhs.empty() &&
               !e.swapped;
    }

    std::string rule_name(int id) const {
        const EqRec& e = eqs_[id];
        if (axiom_pure(e)) return e.axiom_name;
        return "e" + std::to_string(id);
    }

    void collect_needed(int id, std::set<int>& need) const {
        const EqRec& e = eqs_[id];
        if (axiom_pure(e)) return;
        if (!need.insert(id).second) return;
        for (const auto& rw : e.simp_lhs) collect_needed(rw.eq, need);
        for (const auto& rw : e.simp_rhs) collect_needed(rw.eq, need);
        switch (e.just.kind) {
            case Just::CPJ:
                collect_needed(e.just.e1, need);
                collect_needed(e.just.e2, need);
                break;
            case Just::SimpJ:
                collect_needed(e.just.parent, need);
                break;
            case Just::AxiomJ:
                break;
        }
    }

    ScriptStep make_step(const TermPtr& current, int eq_id, bool source_is_lhs,
                         const Position& pos, const Substitution& sigma,
                         TermPtr* next) const {
        const EqRec& e = eqs_[eq_id];
        const TermPtr& tgt = source_is_lhs ? e.rhs : e.lhs;
        ScriptStep step;
        step.rule = rule_name(eq_id);
        step.direction = source_is_lhs ? StepDirection::LhsToRhs : StepDirection::RhsToLhs;
        step.position = pos;
        step.substitution = sigma;
        step.explicit_subst = !sigma.empty();
        *next = replace_at(current, pos, substitute(tgt, sigma));
        step.result = *next;
        return step;
    }

    /// Append `rw` applied forward to `current`.
    void emit_fwd(std::vector<ScriptStep>& steps, TermPtr& current, const Rw& rw) const {
        TermPtr next;
        steps.push_back(make_step(current, rw.eq, rw.source_is_lhs, rw.pos, rw.sigma, &next));
        current = next;
    }

    /// Append the inverse of `rw` (its source/target sides exchanged).
    void emit_inv(std::vector<ScriptStep>& steps, TermPtr& current, const Rw& rw) const {
        TermPtr next;
        steps.push_back(make_step(current, rw.eq, !rw.source_is_lhs, rw.pos, rw.sigma, &next));
        current = next;
    }

    /// The chain from an equation's simplified-lhs to its simplified-rhs,
    /// i.e. the pre-swap orientation.
    std::vector<ScriptStep> core_chain(const EqRec& e, TermPtr* start, TermPtr* end) const {
        // The recorded simp_lhs steps run raw_lhs ->* simplified lhs; the
        // lemma needs their inverses, last first.
        TermPtr simplified_lhs = e.raw_lhs;
        for (const auto& rw : e.simp_lhs) {
            TermPtr tmp;
            make_step(simplified_lhs, rw.eq, rw.source_is_lhs, rw.pos, rw.sigma, &tmp);
            simplified_lhs = tmp;
        }

        std::vector<ScriptStep> chain;
        TermPtr pos_cur = simplified_lhs;
        for (auto it = e.simp_lhs.rbegin(); it != e.simp_lhs.rend(); ++it) {
            TermPtr next;
            chain.push_back(
                make_step(pos_cur, it->eq, !it->source_is_lhs, it->pos, it->sigma, &next));
            pos_cur = next;
        }
        // pos_cur == raw_lhs now.
        switch (e.just.kind) {
            case Just::AxiomJ:
            case Just::SimpJ: {
                ScriptStep step;
                step.rule = e.just.kind == Just::AxiomJ ? e.axiom_name
                                                        : rule_name(e.just.parent);
                step.direction = StepDirection::LhsToRhs;
                step.position = {};
                step.explicit_subst = false;
                step.result = e.raw_rhs;
                chain.push_back(step);
                pos_cur = e.raw_rhs;
                break;
            }
            case Just::CPJ: {
                const EqRec& e1 = eqs_[e.just.e1];
                // Step 1: t-instance -> s-instance by e1 at the root.
                bool src_is_lhs = !e.just.s1_is_lhs;  // source side is t
                TermPtr next;
                chain.push_back(
                    make_step(pos_cur, e1.id, src_is_lhs, Position{}, e.just.sigma1, &next));
                pos_cur = next;
                // Step 2: p-instance -> q-instance by e2 at pos.
                chain.push_back(make_step(pos_cur, e.just.e2, e.just.s2_is_lhs, e.just.pos,
                                          e.just.sigma2, &next));
                pos_cur = next;
                break;
            }
        }
        for (const auto& rw : e.simp_rhs) emit_fwd(chain, pos_cur, rw);
        *start = simplified_lhs;
        *end = pos_cur;
        return chain;
    }

    LemmaBlock lemma_for(const EqRec& e) const {
        TermPtr start, end;
        std::vector<ScriptStep> chain = core_chain(e, &start, &end);
        LemmaBlock block;
        block.name = rule_name(e.id);
        if (!e.swapped) {
            block.initial = start;
            block.steps = std::move(chain);
        } else {
            // Invert the whole chain: walk it backwards from `end`.
            block.initial = end;
            std::vector<TermPtr> fronts;  // term before each forward step
            fronts.push_back(start);
            for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
                fronts.push_back(chain[k].result);
            }
            for (std::size_t k = chain.size(); k-- > 0;) {
                const ScriptStep& fwd = chain[k];
                ScriptStep inv;
                inv.rule = fwd.rule;
                inv.direction = fwd.direction == StepDirection::LhsToRhs
                                    ? StepDirection::RhsToLhs
                                    : StepDirection::LhsToRhs;
                inv.position = fwd.position;
                inv.substitution = fwd.substitution;
                inv.explicit_subst = fwd.explicit_subst;
                inv.result = fronts[k];
                block.steps.push_back(inv);
            }
        }
        std::set<std::string> hyps;
        for (const auto& s : block.steps) hyps.insert(s.rule);
        block.hypotheses.assign(hyps.begin(), hyps.end());
        return block;
    }

    ProofScriptFile reconstruct(const GoalProof& gp) const {
        std::set<int> need;
        for (const auto& rw : gp.steps_lhs) collect_needed(rw.eq, need);
        for (const auto& rw : gp.steps_rhs) collect_needed(rw.eq, need);
        std::vector<int> order(need.begin(), need.end());
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return eqs_[a].keep_seq < eqs_[b].keep_seq; });

        ProofScriptFile script;
        for (int id : order) script.items.emplace_back(lemma_for(eqs_[id]));

        LemmaBlock goal_block;
        goal_block.name = goal_.name.empty() ? "goal" : goal_.name;
        goal_block.initial = goal_.lhs;
        TermPtr cur = goal_.lhs;
        for (const auto& rw : gp.steps_lhs) emit_fwd(goal_block.steps, cur, rw);
        // Reverse the rhs chain: replay it forward to learn the fronts.
        std::vector<TermPtr> fronts;
        {
            TermPtr replay = goal_.rhs;
            for (const auto& rw : gp.steps_rhs) {
                fronts.push_back(replay);
                TermPtr next;
                make_step(replay, rw.eq, rw.source_is_lhs, rw.pos, rw.sigma, &next);
                replay = next;
            }
        }
        for (std::size_t k = gp.steps_rhs.size(); k-- > 0;) {
            const Rw& rw = gp.steps_rhs[k];
            TermPtr next;
            goal_block.steps.push_back(
                make_step(cur, rw.eq, !rw.source_is_lhs, rw.pos, rw.sigma, &next));
            cur = next;
        }
        std::set<std::string> hyps;
        for (const auto& s : goal_block.steps) hyps.insert(s.rule);
        goal_block.hypotheses.assign(hyps.begin(), hyps.end());
        script.items.emplace_back(std::move(goal_block));
        return script;
    }

    Identity goal_;
    ProverLimits limits_;
    std::chrono::steady_clock::time_point start_;

    std::deque<EqRec> eqs_;  // deque: references stay valid while appending
    std::set<std::pair<int, int>> passive_;  // (combined size, id)
    std::set<int> passive_ids_;
    std::uint64_t picks_ = 0;
    std::vector<int> active_;
    std::set<std::string> generated_keys_;
    std::set<std::string> kept_keys_;
    std::set<std::string> kept_ac_keys_;
    std::uint64_t generated_ = 0;
    std::uint64_t kept_ = 0;
    bool have_comm_ = false;
    bool have_assoc_ = false;
    bool ac_available_ = false;
};

}  // namespace

ProverOutcome prove(const std::vector<Identity>& axioms, const Identity& goal,
                    const ProverLimits& limits) {
    if (!limits.hints.empty()) {
        ProverLimits inner = limits;
        inner.hints.clear();
        std::vector<Identity> goals = limits.hints;
        goals.push_back(goal);
        auto outcomes = prove_staged(axioms, goals, inner);
        return outcomes.back();
    }
    Completion engine(axioms, goal, limits);
    return engine.run();
}

std::vector<ProverOutcome> prove_staged(const std::vector<Identity>& axioms,
                                        const std::vector<Identity>& goals,
                                        const ProverLimits& limits) {
    std::vector<ProverOutcome> out;
    std::vector<Identity> current = axioms;
    int unnamed = 0;
    for (const auto& g : goals) {
        Identity goal = g;
        if (goal.name.empty()) goal.name = "stage" + std::to_string(++unnamed);
        Completion engine(current, goal, limits);
        out.push_back(engine.run());
        if (out.back().proved()) current.push_back(goal);
    }
    return out;
}

TermPtr normalize(const TermPtr& t, const std::vector<Identity>& oriented_rules) {
    TermPtr cur = t;
    bool changed = true;
    while (changed) {
        changed = false;
        auto positions = all_positions(cur);
        std::sort(positions.begin(), positions.end(),
                  [](const Position& a, const Position& b) {
                      if (a.size() != b.size()) return a.size() > b.size();
                      return a < b;
                  });
        for (const auto& pos : positions) {
            TermPtr sub = subterm_at(cur, pos);
            for (const auto& rule : oriented_rules) {
                auto sigma = match_pattern(rule.lhs, sub);
                if (!sigma) continue;
                cur = replace_at(cur, pos, substitute(rule.rhs, *sigma));
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
    return cur;
}

}  // namespace eqbase
