// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Run from the repository root (or set EQBASE_DATA_DIR).
#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eqbase/assoc.hpp"
#include "eqbase/harness.hpp"
#include "eqbase/kernel.hpp"
#include "eqbase/model.hpp"
#include "eqbase/prover.hpp"
#include "eqbase/syntax.hpp"
#include "eqbase/term.hpp"

using namespace eqbase;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%2d. %-28s %s  (%s)\n", number, name.c_str(), ok ? "PASS" : "FAIL",
                detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Identity ident(const std::string& name, const std::string& l, const std::string& r) {
    return {name, parse_term(l), parse_term(r)};
}

const BaseRecord& record(const std::string& name) {
    for (const auto& b : registry()) {
        if (b.name == name) return b;
    }
    throw std::runtime_error("no registry record " + name);
}

// ---- 1: corpus replay ------------------------------------------------------

void criterion_corpus() {
    const std::pair<const char*, const char*> pairs[] = {
        {"corpus/section2.eqp", "axioms/johnson-4.eqb"},
        {"corpus/section4.eqp", "axioms/a6-j5p.eqb"},
        {"corpus/section5.eqp", "axioms/a8-j5p.eqb"},
        {"corpus/section6.eqp", "axioms/a5-j5p.eqb"},
        {"corpus/section7.eqp", "axioms/a9-j4-j5.eqb"},
        {"corpus/section8.eqp", "axioms/j1-a1-j5p.eqb"},
        {"corpus/section9.eqp", "axioms/a13-j5p.eqb"},
    };
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    int steps = 0;
    for (const auto& [script_rel, axioms_rel] : pairs) {
        auto script = parse_proof_script(read_file(data_dir() + "/" + script_rel));
        auto axioms = parse_axiom_file(read_file(data_dir() + "/" + axioms_rel));
        Verdict v = check_script(script, axioms);
        ok = ok && v.all_passed;
        steps += v.total_steps_checked;
    }
    double dt = seconds_since(t0);
    ok = ok && steps >= 95 && dt < 5.0;
    report(1, "corpus replay", ok,
           std::to_string(steps) + " steps, " + std::to_string(dt).substr(0, 4) + "s");
}

// ---- 2: J3 redundancy ------------------------------------------------------

void criterion_j3() {
    const BaseRecord& b = record("{J1, J2, J4, J5}");
    ProverLimits limits;
    auto out = prove(b.axioms, ident("J3", "x ^ x", "x"), limits);
    AxiomFile axf;
    axf.identities = b.axioms;
    bool ok = out.proved() && out.stats.seconds < 60.0 &&
              check_script(out.script, axf).all_passed;
    report(2, "J3 redundancy", ok,
           std::string(out.proved() ? "proved" : "not proved") + ", " +
               std::to_string(out.stats.seconds).substr(0, 4) + "s, replayed");
}

// ---- 3: commutativity and associativity from {A9, J4, J5} ------------------

void criterion_a9_3base() {
    const BaseRecord& b = record("{A9, J4, J5}");
    ProverLimits limits;
    auto t0 = std::chrono::steady_clock::now();
    auto outs = prove_staged(
        b.axioms, {ident("J1", "x ^ y", "y ^ x"), ident("J2", "(x ^ y) ^ z", "x ^ (y ^ z)")},
        limits);
    double dt = seconds_since(t0);
    bool ok = outs.size() == 2 && outs[0].proved() && outs[1].proved() && dt < 60.0;
    report(3, "{A9, J4, J5} completeness", ok,
           "J1 " + std::string(outs[0].proved() ? "proved" : "failed") + ", J2 " +
               std::string(outs[1].proved() ? "proved" : "failed") + ", " +
               std::to_string(dt).substr(0, 4) + "s");
}

// ---- 4: staged 2-base completeness -----------------------------------------

void criterion_two_bases() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const char* name : {"{A6, J5'}", "{A8, J5'}", "{A5, J5'}", "{A13, J5'}"}) {
        CompletenessReport rep = verify_completeness(record(name));
        bool all_stages = rep.verdict == CheckVerdict::Pass && rep.staged;
        for (const auto& s : rep.stages) all_stages = all_stages && s.status == ProverStatus::Proved;
        ok = ok && all_stages;
        if (!all_stages) detail += std::string(name) + " failed; ";
    }
    double dt = seconds_since(t0);
    ok = ok && dt < 600.0;
    report(4, "2-base staged completeness", ok,
           detail + "total " + std::to_string(dt).substr(0, 5) + "s");
}

// ---- 5: countermodel reproduction ------------------------------------------

void criterion_countermodels() {
    auto t0 = std::chrono::steady_clock::now();

    SearchOptions a;
    a.size = 2;
    a.must_satisfy = {named_identity("A9"), named_identity("J5")};
    a.must_violate = named_identity("J4");
    auto ra = search_models(a);
    FiniteModel all_zero = parse_model(read_file(data_dir() + "/models/all-zero.eqm"));
    bool found_a = false;
    for (const auto& m : ra.models) found_a = found_a || m == all_zero;

    SearchOptions b;
    b.size = 2;
    b.must_satisfy = {named_identity("A1"), named_identity("J5'")};
    b.must_violate = named_identity("J1");
    auto rb = search_models(b);
    FiniteModel left_proj = parse_model(read_file(data_dir() + "/models/left-projection.eqm"));
    bool found_b = false;
    for (const auto& m : rb.models) found_b = found_b || m == left_proj;

    double dt = seconds_since(t0);
    bool ok = found_a && found_b && dt < 2.0;
    report(5, "countermodel reproduction", ok,
           std::string(found_a ? "all-zero ok" : "all-zero MISSING") + ", " +
               (found_b ? "left-projection ok" : "left-projection MISSING"));
}

// ---- 6: classification -----------------------------------------------------

void criterion_classification() {
    auto t0 = std::chrono::steady_clock::now();
    auto classes = classify_all();
    std::size_t total = 0;
    std::set<std::string> seen;
    bool one_rep_each = classes.size() == 14;
    for (const auto& c : classes) {
        total += c.members.size();
        int reps = 0;
        for (const auto& m : c.members) {
            std::string ka = format_term(m.lhs), kb = format_term(m.rhs);
            seen.insert(ka < kb ? ka + "=" + kb : kb + "=" + ka);
            for (const auto& r : assoc_representatives()) {
                if ((equal(m.lhs, r.lhs) && equal(m.rhs, r.rhs)) ||
                    (equal(m.lhs, r.rhs) && equal(m.rhs, r.lhs))) {
                    ++reps;
                }
            }
        }
        one_rep_each = one_rep_each && reps == 1;
    }
    double dt = seconds_since(t0);
    bool ok = one_rep_each && total == 66 && seen.size() == 66 && dt < 1.0;
    report(6, "14-class classification", ok,
           std::to_string(classes.size()) + " classes over " + std::to_string(total) +
               " identities");
}

// ---- 7: spectrum -----------------------------------------------------------

void criterion_spectrum() {
    bool ok = true;
    std::string detail;
    for (const auto& b : registry()) {
        if (b.status != BaseStatus::ProvedInPaper) continue;
        auto t0 = std::chrono::steady_clock::now();
        SpectrumReport rep = verify_spectrum(b);
        double dt = seconds_since(t0);
        bool this_ok = rep.verdict == CheckVerdict::Pass &&
                       rep.counts == std::vector<std::uint64_t>{1, 1, 0, 1} && dt < 60.0;
        ok = ok && this_ok;
        if (!this_ok) detail += b.name + " off; ";
    }
    report(7, "spectrum 1,1,0,1", ok, detail.empty() ? "all proved bases" : detail);
}

// ---- 8: oracle equivalence -------------------------------------------------

void criterion_oracle() {
    std::mt19937 rng(9001);
    auto random_term = [&](auto&& self, int depth) -> TermPtr {
        static const char* names[] = {"x", "y", "z"};
        if (depth <= 0 || rng() % 3 == 0) return Term::var(names[rng() % 3]);
        if (rng() % 2) return Term::comp(self(self, depth - 1));
        return Term::meet(self(self, depth - 1), self(self, depth - 1));
    };
    int agree = 0;
    for (int trial = 0; trial < 20; ++trial) {
        SearchOptions so;
        so.size = 2 + static_cast<int>(rng() % 2);
        int axiom_count = 1 + rng() % 3;
        for (int j = 0; j < axiom_count; ++j) {
            so.must_satisfy.push_back({"r" + std::to_string(j), random_term(random_term, 2),
                                       random_term(random_term, 2)});
        }
        if (rng() % 2) {
            so.must_violate =
                Identity{"v", random_term(random_term, 2), random_term(random_term, 2)};
        }
        auto fast = search_models(so);
        auto slow = enumerate_models(so);
        if (fast.models.size() == slow.models.size()) {
            bool same = true;
            for (std::size_t k = 0; k < fast.models.size(); ++k) {
                same = same && fast.models[k] == slow.models[k];
            }
            if (same) ++agree;
        }
    }
    report(8, "oracle equivalence", agree == 20, std::to_string(agree) + "/20 inputs agree");
}

// ---- 9: property suites ----------------------------------------------------

void criterion_properties() {
    // The full randomized suites live in the per-module test binaries; this
    // gate re-runs each law with an independent seed, >= 1,000 cases per
    // suite.
    std::mt19937 rng(777);
    auto random_term = [&](auto&& self, int depth) -> TermPtr {
        static const char* names[] = {"x", "y", "z", "u"};
        if (depth <= 0 || rng() % 3 == 0) return Term::var(names[rng() % 4]);
        if (rng() % 2) return Term::comp(self(self, depth - 1));
        return Term::meet(self(self, depth - 1), self(self, depth - 1));
    };
    int bad = 0;

    // Term core: substitute/match inversion + ordering laws.
    for (int k = 0; k < 1000; ++k) {
        TermPtr pat = random_term(random_term, 3);
        Substitution sigma;
        for (const auto& v : vars(pat)) {
            if (rng() % 2) sigma[v] = random_term(random_term, 2);
        }
        TermPtr subject = substitute(pat, sigma);
        auto found = match_pattern(pat, subject);
        if (!found || !equal(substitute(pat, *found), subject)) ++bad;
        TermPtr other = random_term(random_term, 3);
        if (kbo_greater(pat, other) && kbo_greater(other, pat)) ++bad;
        if (!kbo_greater(Term::comp(pat), pat)) ++bad;
    }

    // Syntax round trip.
    for (int k = 0; k < 1000; ++k) {
        TermPtr t = random_term(random_term, 4);
        if (!equal(parse_term(format_term(t)), t)) ++bad;
    }

    // Kernel soundness against BA2.
    Environment env;
    std::vector<Identity> johnson = record("{J1, J2, J3, J4, J5}").axioms;
    for (const auto& ax : johnson) env.add(ax);
    FiniteModel ba2 = FiniteModel::ba2();
    int kernel_cases = 0;
    for (int k = 0; kernel_cases < 1000 && k < 4000; ++k) {
        TermPtr t = random_term(random_term, 3);
        for (const auto& pos : all_positions(t)) {
            TermPtr sub = subterm_at(t, pos);
            for (const auto& rule : env.rules()) {
                auto sigma = match_pattern(rule.lhs, sub);
                if (!sigma) continue;
                Substitution full = *sigma;
                for (const auto& v : vars(rule.rhs)) {
                    if (!full.count(v)) full[v] = Term::var("x");
                }
                ScriptStep step;
                step.rule = rule.name;
                step.position = pos;
                step.substitution = full;
                step.explicit_subst = true;
                step.result = replace_at(t, pos, substitute(rule.rhs, full));
                StepOutcome o = apply_step(t, step, env);
                if (!o.ok() || !satisfies(ba2, {"", t, o.result})) ++bad;
                ++kernel_cases;
            }
        }
    }
    if (kernel_cases < 1000) ++bad;

    // Prover-output replay on quick provable goals.
    AxiomFile axf;
    axf.identities = johnson;
    ProverLimits limits;
    limits.max_seconds = 10.0;
    int prover_cases = 0;
    for (int k = 0; k < 1000; ++k) {
        TermPtr lhs = random_term(random_term, 2);
        TermPtr rhs = normalize(lhs, {ident("J3", "x ^ x", "x"), ident("J4", "x''", "x")});
        auto out = prove(johnson, {"g", lhs, rhs}, limits);
        if (!out.proved() || !check_script(out.script, axf).all_passed) ++bad;
        ++prover_cases;
    }

    report(9, "property suites", bad == 0,
           std::to_string(3000 + kernel_cases + prover_cases) + " cases, " +
               std::to_string(bad) + " failures");
}

// ---- 10: claimed records ---------------------------------------------------

void criterion_claimed() {
    int records = 0;
    int sound = 0;
    int findings = 0;
    ReplicateOptions opts;
    opts.claimed_goal_seconds = 0.5;  // completeness here is evidence, not proof
    for (const auto& b : registry()) {
        if (b.status != BaseStatus::Claimed) continue;
        ++records;
        if (verify_soundness(b).verdict == CheckVerdict::Pass) ++sound;
        CompletenessReport rep = verify_completeness(b, opts);
        if (rep.verdict != CheckVerdict::Pass) ++findings;  // recorded, never fatal
    }
    bool ok = records == 22 && sound == records;
    report(10, "claimed-base soundness", ok,
           std::to_string(sound) + "/" + std::to_string(records) + " sound, " +
               std::to_string(findings) + " completeness findings");
}

}  // namespace

int main() {
    criterion_corpus();
    criterion_j3();
    criterion_a9_3base();
    criterion_two_bases();
    criterion_countermodels();
    criterion_classification();
    criterion_spectrum();
    criterion_oracle();
    criterion_properties();
    criterion_claimed();
    if (failures == 0) {
        std::printf("acceptance: all 10 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failing\n", failures);
    return 1;
}
