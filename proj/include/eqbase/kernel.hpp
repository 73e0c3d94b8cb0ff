#pragma once

#include <map>
#include <string>
#include <vector>

#include "eqbase/syntax.hpp"
#include "eqbase/term.hpp"

namespace eqbase {

/// Append-only rule table: axioms plus lemmas accepted so far.
class Environment {
public:
    void add(const Identity& i);
    bool contains(const std::string& name) const;
    const Identity* find(const std::string& name) const;
    const std::vector<Identity>& rules() const { return rules_; }

private:
    std::vector<Identity> rules_;
    std::map<std::string, std::size_t> index_;
};

enum class StepErrorKind { None, UnknownRule, InvalidPosition, SourceMismatch, TargetMismatch };

struct StepOutcome {
    StepErrorKind error = StepErrorKind::None;
    TermPtr result;       // set when the rewrite itself succeeded
    std::string message;  // set on error
    bool ok() const { return error == StepErrorKind::None; }
};

/// Apply one script step to `current`. The step must be a legal instance of a
/// named rule at the stated position, and its declared result must equal the
/// computed term.
StepOutcome apply_step(const TermPtr& current, const ScriptStep& step, const Environment& env);

enum class LemmaStatus { Passed, Failed, Skipped };

struct LemmaVerdict {
    std::string name;
    LemmaStatus status = LemmaStatus::Passed;
    int steps_checked = 0;
    int failed_step = -1;  // 0-based index into the lemma's steps
    std::string message;
    Identity statement;
};

struct Verdict {
    std::vector<LemmaVerdict> lemmas;
    bool all_passed = true;
    int total_steps_checked = 0;
    std::string render_table() const;
};

/// Replay every lemma in order. Passing lemmas join the environment for later
/// lemmas in the same file; lemmas citing a failed lemma are reported skipped.
Verdict check_script(const ProofScriptFile& script, const AxiomFile& axioms);

}  // namespace eqbase
