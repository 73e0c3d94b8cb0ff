#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqbase/kernel.hpp"
#include "eqbase/model.hpp"
#include "eqbase/prover.hpp"
#include "eqbase/term.hpp"

namespace eqbase {

enum class BaseStatus { ProvedInPaper, Claimed };

/// A candidate axiomatization of Boolean algebras from the source material.
struct BaseRecord {
    std::string name;   // e.g. "{A6, J5'}"
    int arity = 0;      // number of axioms
    BaseStatus status = BaseStatus::ProvedInPaper;
    std::vector<Identity> axioms;
    std::string provenance;  // section reference / label notes
    std::vector<std::string> ladder_corpus;  // corpus files (relative to the data
                                             // dir, in order) whose lemma statements
                                             // form the staged goal ladder; chains
                                             // that reduce to another base's axioms
                                             // list that base's corpus afterwards
};

/// All bases stated in the source: the proved ones and the claimed records
/// whose proofs are deferred.
const std::vector<BaseRecord>& registry();

/// The named identity table (J1-J5, J5', A1-A14, D, c, d, idem).
const Identity& named_identity(const std::string& name);

/// The reference base every candidate must reproduce: {J1, J2, J4, J5}.
const std::vector<Identity>& reference_base();

/// Root of the shipped data tree (axioms/, corpus/, models/). Honors the
/// EQBASE_DATA_DIR environment variable, falling back to the build-time path.
std::string data_dir();

enum class CheckVerdict { Pass, Fail, Inconclusive };

struct SoundnessReport {
    CheckVerdict verdict = CheckVerdict::Pass;
    std::vector<std::string> violated;  // axiom names failing on BA2 or BA4
};

struct StageReport {
    std::string goal_name;
    Identity goal;
    ProverStatus status = ProverStatus::Exhausted;
    ProverStats stats;
};

struct CompletenessReport {
    CheckVerdict verdict = CheckVerdict::Inconclusive;
    bool staged = false;
    std::vector<StageReport> stages;  // ladder stages, then the reference goals
    double seconds = 0.0;
};

struct SpectrumReport {
    CheckVerdict verdict = CheckVerdict::Pass;
    std::vector<std::uint64_t> counts;  // models up to isomorphism, sizes 1..4
    bool budget_exhausted = false;
};

struct IndependenceWitness {
    std::string axiom;
    CheckVerdict verdict = CheckVerdict::Inconclusive;  // Pass = independent
    std::optional<FiniteModel> witness;                 // model of b minus axiom violating it
};

struct IndependenceReport {
    std::vector<IndependenceWitness> axioms;
};

struct BaseReport {
    BaseRecord record;
    SoundnessReport soundness;
    CompletenessReport completeness;
    SpectrumReport spectrum;
    IndependenceReport independence;
};

struct ReplicateOptions {
    double proved_goal_seconds = 60.0;   // per staged/unstaged goal, proved bases
    double claimed_goal_seconds = 2.0;  // per goal on claimed records
    int spectrum_max_size = 4;
    int independence_max_size = 4;
    int workers = 1;
};

struct CorpusFileReport {
    std::string file;
    Verdict verdict;
};

struct ReplicationReport {
    std::vector<CorpusFileReport> corpus;
    int assoc_classes = 0;
    int assoc_identities = 0;
    std::vector<BaseReport> bases;
    double seconds = 0.0;
    /// Hard failure: a proved-in-paper base failing soundness, completeness
    /// or spectrum, any corpus lemma failing, or a wrong classification.
    bool ok = true;
};

SoundnessReport verify_soundness(const BaseRecord& b);
CompletenessReport verify_completeness(const BaseRecord& b, const ReplicateOptions& opts = {});
SpectrumReport verify_spectrum(const BaseRecord& b, const ReplicateOptions& opts = {});
IndependenceReport verify_independence(const BaseRecord& b, const ReplicateOptions& opts = {});
BaseReport verify_base(const BaseRecord& b, const ReplicateOptions& opts = {});

ReplicationReport replicate_all(const ReplicateOptions& opts = {});

std::string report_to_json(const ReplicationReport& r);
std::string report_to_text(const ReplicationReport& r);

}  // namespace eqbase
