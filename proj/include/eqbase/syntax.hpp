#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "eqbase/term.hpp"

namespace eqbase {

struct ParseError : std::runtime_error {
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line(line),
          column(column) {}
    int line;
    int column;
};

struct DuplicateNameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownRuleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grammar: variable = lowercase identifier; complement = postfix ' (binds
/// tightest, stackable); meet = infix ^ and NON-associative, so any nested
/// meet must be parenthesized. Unicode aliases for the two operators are
/// accepted on input, never emitted.
TermPtr parse_term(const std::string& input);

/// Inverse of parse_term with minimal parentheses.
std::string format_term(const TermPtr& t);

std::string format_identity(const Identity& i);
std::string format_position(const Position& p);
std::string format_substitution(const Substitution& s);

enum class StepDirection { LhsToRhs, RhsToLhs };

/// One proof-script line: rewrite by `rule` in `direction` at `position`.
/// `substitution` may be empty with explicit_subst == false, in which case the
/// checker infers it by matching.
struct ScriptStep {
    std::string rule;
    StepDirection direction = StepDirection::LhsToRhs;
    Position position;
    Substitution substitution;
    bool explicit_subst = false;
    TermPtr result;  // the declared term after this step
};

struct LemmaBlock {
    std::string name;
    std::vector<std::string> hypotheses;
    TermPtr initial;
    std::vector<ScriptStep> steps;
    /// The identity this lemma proves: initial ~ last step's result.
    Identity statement() const;
};

/// `abbrev NAME = TERM`, where TERM has a single variable. Occurrences of
/// NAME in later terms of the same file are expanded at parse time with the
/// reserved fresh variable; the checker verifies the well-definedness lemma.
struct AbbrevDecl {
    std::string name;
    TermPtr body;          // over one variable
    std::string body_var;  // that variable's name
    TermPtr expansion;     // body with body_var renamed to the fresh variable
};

/// Variable used when expanding abbreviations; must not occur elsewhere in a
/// script that declares one.
extern const std::string kAbbrevFreshVar;

struct AxiomFile {
    std::vector<Identity> identities;
    const Identity* find(const std::string& name) const;
};

struct ProofScriptFile {
    using Item = std::variant<LemmaBlock, AbbrevDecl>;
    std::vector<Item> items;
    std::vector<const LemmaBlock*> lemmas() const;
};

AxiomFile parse_axiom_file(const std::string& input);
ProofScriptFile parse_proof_script(const std::string& input);

std::string format_axiom_file(const AxiomFile& f, const std::string& header = "");
std::string format_proof_script(const ProofScriptFile& f, const std::string& header = "");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace eqbase
