#include "eqbase/kernel.hpp"

#include <set>

namespace eqbase {

void Environment::add(const Identity& i) {
    index_[i.name] = rules_.size();
    rules_.push_back(i);
}

bool Environment::contains(const std::string& name) const { return index_.count(name) > 0; }

const Identity* Environment::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &rules_[it->second];
}

StepOutcome apply_step(const TermPtr& current, const ScriptStep& step, const Environment& env) {
    StepOutcome out;
    const Identity* rule = env.find(step.rule);
    if (!rule) {
        out.error = StepErrorKind::UnknownRule;
        out.message = "unknown rule '" + step.rule + "'";
        return out;
    }
    const TermPtr& source = step.direction == StepDirection::LhsToRhs ? rule->lhs : rule->rhs;
    const TermPtr& target = step.direction == StepDirection::LhsToRhs ? rule->rhs : rule->lhs;
    TermPtr sub = find_subterm(current, step.position);
    if (!sub) {
        out.error = StepErrorKind::InvalidPosition;
        out.message = "position " + format_position(step.position) + " addresses no subterm of " +
                      format_term(current);
        return out;
    }
    Substitution sigma;
    if (step.explicit_subst) {
        sigma = step.substitution;
        TermPtr instantiated = substitute(source, sigma);
        if (!equal(instantiated, sub)) {
            out.error = StepErrorKind::SourceMismatch;
            out.message = "substituted source " + format_term(instantiated) +
                          " does not equal the addressed subterm " + format_term(sub);
            return out;
        }
    } else {
        auto inferred = match_pattern(source, sub);
        if (!inferred) {
            out.error = StepErrorKind::SourceMismatch;
            out.message = "rule source " + format_term(source) +
                          " does not match the addressed subterm " + format_term(sub);
            return out;
        }
        sigma = std::move(*inferred);
    }
    TermPtr computed = replace_at(current, step.position, substitute(target, sigma));
    if (!equal(computed, step.result)) {
        out.error = StepErrorKind::TargetMismatch;
        out.message = "declared result " + format_term(step.result) +
                      " differs from computed result " + format_term(computed);
        return out;
    }
    out.result = computed;
    return out;
}

Verdict check_script(const ProofScriptFile& script, const AxiomFile& axioms) {
    Verdict verdict;
    Environment env;
    for (const auto& a : axioms.identities) env.add(a);
    std::set<std::string> failed_rules;

    for (const auto& item : script.items) {
        if (const auto* decl = std::get_if<AbbrevDecl>(&item)) {
            // Well-definedness: some accepted rule must state body(x) = body(y).
            Identity expected{"", substitute(decl->body, {{decl->body_var, Term::var("x")}}),
                              substitute(decl->body, {{decl->body_var, Term::var("y")}})};
            std::string want = unordered_identity_key(expected.lhs, expected.rhs);
            bool justified = false;
            for (const auto& r : env.rules()) {
                if (unordered_identity_key(r.lhs, r.rhs) == want) {
                    justified = true;
                    break;
                }
            }
            if (!justified) {
                LemmaVerdict lv;
                lv.name = "abbrev " + decl->name;
                lv.status = LemmaStatus::Failed;
                lv.message = "no accepted lemma of the form " + format_identity(expected) +
                             " justifies the abbreviation";
                lv.statement = Identity{lv.name, decl->body, decl->body};
                verdict.lemmas.push_back(std::move(lv));
                verdict.all_passed = false;
            }
            continue;
        }
        const auto& lemma = std::get<LemmaBlock>(item);
        LemmaVerdict lv;
        lv.name = lemma.name;
        lv.statement = lemma.statement();

        bool depends_on_failed = false;
        for (const auto& h : lemma.hypotheses) {
            if (failed_rules.count(h)) depends_on_failed = true;
        }
        for (const auto& s : lemma.steps) {
            if (failed_rules.count(s.rule)) depends_on_failed = true;
        }
        if (depends_on_failed) {
            lv.status = LemmaStatus::Skipped;
            lv.message = "depends on a failed or skipped lemma";
            failed_rules.insert(lemma.name);
            verdict.all_passed = false;
            verdict.lemmas.push_back(std::move(lv));
            continue;
        }

        bool ok = true;
        for (const auto& h : lemma.hypotheses) {
            if (!env.contains(h)) {
                lv.status = LemmaStatus::Failed;
                lv.message = "unknown hypothesis '" + h + "'";
                ok = false;
                break;
            }
        }
        if (ok && env.contains(lemma.name)) {
            lv.status = LemmaStatus::Failed;
            lv.message = "name '" + lemma.name + "' already names a rule";
            ok = false;
        }
        if (ok) {
            TermPtr current = lemma.initial;
            for (std::size_t i = 0; i < lemma.steps.size(); ++i) {
                StepOutcome so = apply_step(current, lemma.steps[i], env);
                if (!so.ok()) {
                    lv.status = LemmaStatus::Failed;
                    lv.failed_step = static_cast<int>(i);
                    lv.message = "step " + std::to_string(i + 1) + ": " + so.message;
                    ok = false;
                    break;
                }
                ++lv.steps_checked;
                verdict.total_steps_checked += 1;
                current = so.result;
            }
        }
        if (ok) {
            env.add(lv.statement);
        } else {
            failed_rules.insert(lemma.name);
            verdict.all_passed = false;
        }
        verdict.lemmas.push_back(std::move(lv));
    }
    return verdict;
}

std::string Verdict::render_table() const {
    std::string out;
    for (const auto& lv : lemmas) {
        const char* tag = lv.status == LemmaStatus::Passed   ? "PASS"
                          : lv.status == LemmaStatus::Failed ? "FAIL"
                                                             : "SKIP";
        out += tag;
        out += "  " + lv.name + "  " + format_identity(lv.statement);
        if (lv.status == LemmaStatus::Passed) {
            out += "  (" + std::to_string(lv.steps_checked) + " steps)";
        } else {
            out += "  [" + lv.message + "]";
        }
        out += "\n";
    }
    out += all_passed ? "all lemmas passed" : "FAILURES present";
    out += " (" + std::to_string(total_steps_checked) + " steps checked)\n";
    return out;
}

}  // namespace eqbase
