#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqbase/syntax.hpp"
#include "eqbase/term.hpp"

namespace eqbase {

struct ProverLimits {
    std::size_t max_kept = 50'000;
    int max_term_size = 40;
    double max_seconds = 60.0;
    std::vector<Identity> hints;  // lemmas to prove first, in order
};

struct ProverStats {
    std::uint64_t generated = 0;
    std::uint64_t kept = 0;
    double seconds = 0.0;
};

enum class ProverStatus { Proved, Exhausted, TimedOut };

struct ProverOutcome {
    ProverStatus status = ProverStatus::Exhausted;
    ProofScriptFile script;  // kernel-checkable; meaningful when Proved
    ProverStats stats;
    bool proved() const { return status == ProverStatus::Proved; }
};

/// Derive `goal` from `axioms` by unfailing completion: ordered rewriting
/// plus critical-pair generation, keeping unorientable equations. On success
/// the emitted script replays through the proof kernel against the same
/// axioms. Deterministic for identical inputs and limits.
ProverOutcome prove(const std::vector<Identity>& axioms, const Identity& goal,
                    const ProverLimits& limits);

/// Prove goals in order; each proved goal becomes an extra axiom for the
/// later ones (the paper-style lemma ladder).
std::vector<ProverOutcome> prove_staged(const std::vector<Identity>& axioms,
                                        const std::vector<Identity>& goals,
                                        const ProverLimits& limits);

/// Exhaustive rewriting to normal form with an oriented rule set
/// (every rule must satisfy lhs > rhs under compare_kbo).
TermPtr normalize(const TermPtr& t, const std::vector<Identity>& oriented_rules);

}  // namespace eqbase
