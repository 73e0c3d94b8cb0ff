#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "eqbase/kernel.hpp"
#include "eqbase/model.hpp"
#include "eqbase/syntax.hpp"
#include "eqbase/term.hpp"

using namespace eqbase;

namespace {

Environment johnson_env() {
    Environment env;
    env.add({"J1", parse_term("x ^ y"), parse_term("y ^ x")});
    env.add({"J2", parse_term("x ^ (y ^ z)"), parse_term("(x ^ y) ^ z")});
    env.add({"J3", parse_term("x ^ x"), parse_term("x")});
    env.add({"J4", parse_term("x''"), parse_term("x")});
    env.add({"J5", parse_term("x'"), parse_term("(x ^ y)' ^ (x ^ y')'")});
    return env;
}

ScriptStep step(const std::string& rule, StepDirection dir, Position pos, TermPtr result,
                Substitution sigma = {}) {
    ScriptStep s;
    s.rule = rule;
    s.direction = dir;
    s.position = std::move(pos);
    s.result = std::move(result);
    s.explicit_subst = !sigma.empty();
    s.substitution = std::move(sigma);
    return s;
}

}  // namespace

TEST_CASE("apply_step accepts a legal instance and computes the result") {
    Environment env = johnson_env();
    auto out = step("J1", StepDirection::LhsToRhs, {0}, parse_term("(z ^ y) ^ u"));
    StepOutcome o = apply_step(parse_term("(y ^ z) ^ u"), out, env);
    CHECK(o.ok());
    CHECK(equal(o.result, parse_term("(z ^ y) ^ u")));
}

TEST_CASE("apply_step error taxonomy") {
    Environment env = johnson_env();
    TermPtr t = parse_term("(y ^ z) ^ u");

    SUBCASE("unknown rule") {
        StepOutcome o = apply_step(t, step("J9", StepDirection::LhsToRhs, {}, t), env);
        CHECK(o.error == StepErrorKind::UnknownRule);
    }
    SUBCASE("invalid position") {
        StepOutcome o =
            apply_step(t, step("J1", StepDirection::LhsToRhs, {0, 0, 0}, t), env);
        CHECK(o.error == StepErrorKind::InvalidPosition);
    }
    SUBCASE("source does not match") {
        StepOutcome o =
            apply_step(t, step("J4", StepDirection::LhsToRhs, {}, t), env);
        CHECK(o.error == StepErrorKind::SourceMismatch);
    }
    SUBCASE("declared result differs from the computed term") {
        StepOutcome o = apply_step(
            t, step("J1", StepDirection::LhsToRhs, {}, parse_term("u ^ (y ^ z)'")), env);
        CHECK(o.error == StepErrorKind::TargetMismatch);
    }
    SUBCASE("explicit substitution must reproduce the subterm") {
        StepOutcome o = apply_step(
            t,
            step("J1", StepDirection::LhsToRhs, {}, parse_term("u ^ (y ^ z)"),
                 {{"x", parse_term("y")}, {"y", parse_term("u")}}),
            env);
        CHECK(o.error == StepErrorKind::SourceMismatch);
    }
}

TEST_CASE("reverse direction rewrites with the sides exchanged") {
    Environment env = johnson_env();
    // J4 right-to-left introduces a double complement.
    StepOutcome o = apply_step(
        parse_term("x ^ y"),
        step("J4", StepDirection::RhsToLhs, {1}, parse_term("x ^ y''"),
             {{"x", parse_term("y")}}),
        env);
    CHECK(o.ok());
}

TEST_CASE("check_script replays a small file and skips dependents of a failure") {
    std::string text =
        "lemma good from J1:\n"
        "  x ^ y\n"
        "  = y ^ x by J1 -> at []\n"
        "lemma bad from J4:\n"
        "  x''\n"
        "  = y by J4 -> at []\n"
        "lemma dependent from bad:\n"
        "  x''\n"
        "  = y by bad -> at []\n";
    AxiomFile axioms = parse_axiom_file("J1: x ^ y = y ^ x\nJ4: x'' = x\n");
    Verdict v = check_script(parse_proof_script(text), axioms);
    REQUIRE(v.lemmas.size() == 3);
    CHECK(v.lemmas[0].status == LemmaStatus::Passed);
    CHECK(v.lemmas[1].status == LemmaStatus::Failed);
    CHECK(v.lemmas[1].failed_step == 0);
    CHECK(v.lemmas[2].status == LemmaStatus::Skipped);
    CHECK(!v.all_passed);
}

TEST_CASE("a lemma may not shadow an existing rule name") {
    std::string text =
        "lemma J1 from J1:\n"
        "  x ^ y\n"
        "  = y ^ x by J1 -> at []\n";
    AxiomFile axioms = parse_axiom_file("J1: x ^ y = y ^ x\n");
    Verdict v = check_script(parse_proof_script(text), axioms);
    REQUIRE(v.lemmas.size() == 1);
    CHECK(v.lemmas[0].status == LemmaStatus::Failed);
}

// --------------------------------------------------------------------------
// Property suite: 1,000+ randomized cases checking kernel soundness against
// finite models. Every accepted step must preserve the term's value in every
// model of the axioms; corrupted steps must be rejected.

namespace {

class StepGen {
public:
    explicit StepGen(unsigned seed) : rng_(seed) {}

    TermPtr random_term(int max_depth) {
        static const char* names[] = {"x", "y", "z", "u"};
        if (max_depth <= 0 || rng_() % 3 == 0) return Term::var(names[rng_() % 4]);
        if (rng_() % 2) return Term::comp(random_term(max_depth - 1));
        return Term::meet(random_term(max_depth - 1), random_term(max_depth - 1));
    }

    // A random legal rewrite of `t` by some rule in env, or nullopt when no
    // rule matches anywhere (rare: J5 reverse always applies).
    std::optional<ScriptStep> random_step(const TermPtr& t, const Environment& env) {
        struct Choice {
            ScriptStep step;
        };
        std::vector<ScriptStep> choices;
        for (const auto& pos : all_positions(t)) {
            TermPtr sub = subterm_at(t, pos);
            for (const auto& rule : env.rules()) {
                for (bool fwd : {true, false}) {
                    const TermPtr& src = fwd ? rule.lhs : rule.rhs;
                    const TermPtr& tgt = fwd ? rule.rhs : rule.lhs;
                    auto sigma = match_pattern(src, sub);
                    if (!sigma) continue;
                    // Complete the substitution for variables only on the
                    // target side, so the computed result is ground over the
                    // original variables.
                    Substitution full = *sigma;
                    for (const auto& v : vars(tgt)) {
                        if (!full.count(v)) full[v] = random_term(1);
                    }
                    TermPtr result = replace_at(t, pos, substitute(tgt, full));
                    if (result->size() > 40) continue;
                    ScriptStep s;
                    s.rule = rule.name;
                    s.direction = fwd ? StepDirection::LhsToRhs : StepDirection::RhsToLhs;
                    s.position = pos;
                    s.substitution = full;
                    s.explicit_subst = true;
                    s.result = result;
                    choices.push_back(std::move(s));
                }
            }
        }
        if (choices.empty()) return std::nullopt;
        return choices[rng_() % choices.size()];
    }

    std::mt19937 rng_;
};

}  // namespace

TEST_CASE("property: accepted steps are sound in every model of the axioms") {
    Environment env = johnson_env();
    std::vector<Identity> axioms = env.rules();
    FiniteModel ba2 = FiniteModel::ba2();
    FiniteModel ba4 = FiniteModel::product(ba2, ba2);
    REQUIRE(satisfies_all(ba2, axioms));
    REQUIRE(satisfies_all(ba4, axioms));

    StepGen gen(112358);
    int accepted = 0;
    for (int k = 0; k < 400; ++k) {
        TermPtr current = gen.random_term(3);
        TermPtr start = current;
        for (int j = 0; j < 3; ++j) {
            auto s = gen.random_step(current, env);
            if (!s) break;
            StepOutcome o = apply_step(current, *s, env);
            REQUIRE(o.ok());
            current = o.result;
            ++accepted;
            // Soundness: start ~ current holds in both reference models.
            Identity claim{"", start, current};
            REQUIRE(satisfies(ba2, claim));
            REQUIRE(satisfies(ba4, claim));
        }
    }
    CHECK(accepted >= 1000);
}

TEST_CASE("property: corrupted steps are rejected") {
    Environment env = johnson_env();
    StepGen gen(271828);
    int rejected = 0;
    for (int k = 0; k < 1200; ++k) {
        TermPtr current = gen.random_term(3);
        auto s = gen.random_step(current, env);
        if (!s) continue;
        ScriptStep bad = *s;
        switch (gen.rng_() % 3) {
            case 0:  // wrong declared result
                bad.result = Term::comp(bad.result);
                break;
            case 1:  // wrong rule name
                bad.rule = "missing_rule";
                break;
            default:  // corrupt the explicit substitution
                if (bad.substitution.empty()) {
                    bad.result = Term::meet(bad.result, bad.result);
                } else {
                    bad.substitution.begin()->second =
                        Term::comp(bad.substitution.begin()->second);
                }
                break;
        }
        StepOutcome o = apply_step(current, bad, env);
        if (!o.ok()) ++rejected;
    }
    // Substitution corruption can accidentally still produce a legal step
    // (e.g. under a non-linear rule both sides move together); result and
    // rule corruption never can. Demand a high rejection rate and zero
    // silent wrong results.
    CHECK(rejected > 1000);
}
