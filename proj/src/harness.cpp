#include "eqbase/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "eqbase/assoc.hpp"
#include "eqbase/syntax.hpp"

#ifndef EQBASE_DATA_DIR
#define EQBASE_DATA_DIR "."
#endif

namespace eqbase {

namespace {

std::map<std::string, Identity> build_named_table() {
    std::map<std::string, Identity> t;
    auto put = [&](const std::string& name, const char* l, const char* r) {
        t[name] = Identity{name, parse_term(l), parse_term(r)};
    };
    put("J1", "x ^ y", "y ^ x");
    put("J2", "x ^ (y ^ z)", "(x ^ y) ^ z");
    put("J3", "x ^ x", "x");
    put("J4", "x''", "x");
    put("J5", "x'", "(x ^ y)' ^ (x ^ y')'");
    put("J5'", "x", "(x' ^ y)' ^ (x' ^ y')'");
    put("D", "x", "(x' ^ y')' ^ (x' ^ y)'");
    put("c", "x ^ (x ^ y)'", "x ^ y'");
    put("d", "(x ^ y) ^ (z ^ x)", "(x ^ (y ^ z)) ^ x");
    put("idem", "x ^ x", "x");
    for (const auto& rep : assoc_representatives()) t[rep.name] = rep;
    return t;
}

const std::map<std::string, Identity>& named_table() {
    static const std::map<std::string, Identity> t = build_named_table();
    return t;
}

std::vector<Identity> pick(std::initializer_list<const char*> names) {
    std::vector<Identity> out;
    for (const char* n : names) out.push_back(named_identity(n));
    return out;
}

BaseRecord proved(std::string name, std::vector<Identity> axioms, std::string provenance,
                  std::vector<std::string> ladder = {}) {
    BaseRecord b;
    b.name = std::move(name);
    b.axioms = std::move(axioms);
    b.arity = static_cast<int>(b.axioms.size());
    b.status = BaseStatus::ProvedInPaper;
    b.provenance = std::move(provenance);
    b.ladder_corpus = std::move(ladder);
    return b;
}

BaseRecord claimed(std::string name, std::vector<Identity> axioms, std::string provenance) {
    BaseRecord b = proved(std::move(name), std::move(axioms), std::move(provenance));
    b.status = BaseStatus::Claimed;
    return b;
}

std::vector<BaseRecord> build_registry() {
    std::vector<BaseRecord> r;
    // Proved bases.
    r.push_back(proved("{J1, J2, J3, J4, J5}", pick({"J1", "J2", "J3", "J4", "J5"}),
                       "Theorem 2.1 (Johnson's 5-base)"));
    r.push_back(proved("{J1, J2, J4, J5}", pick({"J1", "J2", "J4", "J5"}),
                       "Theorem 2.2 (J3 is redundant)", {"corpus/section2.eqp"}));
    r.push_back(
        proved("{A6, J5'}", pick({"A6", "J5'"}), "Theorem 4.1", {"corpus/section4.eqp"}));
    r.push_back(proved("{A8, J5'}", pick({"A8", "J5'"}), "Theorem 5.1",
                       {"corpus/section5.eqp", "corpus/section4.eqp"}));
    r.push_back(proved("{A5, J5'}", pick({"A5", "J5'"}), "Theorem 6.1",
                       {"corpus/section6.eqp", "corpus/section4.eqp"}));
    r.push_back(proved("{A9, J4, J5}", pick({"A9", "J4", "J5"}), "Section 7 theorem",
                       {"corpus/section7.eqp"}));
    r.push_back(proved("{J1, A1, J5'}", pick({"J1", "A1", "J5'"}), "Section 8 theorem",
                       {"corpus/section8.eqp"}));
    r.push_back(proved("{A13, J5'}", pick({"A13", "J5'"}), "Section 9 theorem",
                       {"corpus/section9.eqp", "corpus/section6.eqp", "corpus/section4.eqp"}));

    // Concluding-section records; proofs deferred to the sequel.
    const std::string s10 = "Section 10, claimed";
    r.push_back(claimed("{A4, D}", pick({"A4", "D"}), s10));
    r.push_back(claimed("{A5, D}", pick({"A5", "D"}), s10));
    r.push_back(claimed("{A6, D}", pick({"A6", "D"}), s10));
    r.push_back(claimed("{A8, D}", pick({"A8", "D"}), s10));
    r.push_back(claimed("{A13, D}", pick({"A13", "D"}), s10));
    const std::string a9_note =
        "Section 10, claimed; the source prints (A10)'s equation under the label (A9) here — "
        "registered with the canonical (A9)";
    r.push_back(claimed("{J5', A1, A7}", pick({"J5'", "A1", "A7"}), s10));
    r.push_back(claimed("{J5', A1, A9}", pick({"J5'", "A1", "A9"}), a9_note));
    r.push_back(claimed("{J5', A1, A10}", pick({"J5'", "A1", "A10"}), s10));
    r.push_back(claimed("{J5', A1, A12}", pick({"J5'", "A1", "A12"}), s10));
    r.push_back(claimed("{J5', A3, A7}", pick({"J5'", "A3", "A7"}), s10));
    r.push_back(claimed("{J5', A3, A9}", pick({"J5'", "A3", "A9"}), a9_note));
    r.push_back(claimed("{J5', A3, A10}", pick({"J5'", "A3", "A10"}), s10));
    r.push_back(claimed("{J5', A3, A12}", pick({"J5'", "A3", "A12"}), s10));
    r.push_back(claimed("{J5', A3, A14}", pick({"J5'", "A3", "A14"}), s10));
    r.push_back(claimed("{J5', A7, A11}", pick({"J5'", "A7", "A11"}), s10));
    r.push_back(claimed("{J5', A7, A14}", pick({"J5'", "A7", "A14"}), s10));
    r.push_back(claimed("{J5', A9, A11}", pick({"J5'", "A9", "A11"}), a9_note));
    r.push_back(claimed("{J5', A10, A11}", pick({"J5'", "A10", "A11"}), s10));
    r.push_back(claimed("{J5', A11, A12}", pick({"J5'", "A11", "A12"}), s10));
    r.push_back(claimed("{J5', A12, c}", pick({"J5'", "A12", "c"}), s10));
    r.push_back(claimed(
        "{J5', A1, A2, idem}", pick({"J5'", "A1", "A2", "idem"}),
        "Section 10, claimed; the source labels idempotence '[A9]' in this theorem — "
        "registered as `idem` since the equation is x ^ x = x, not (A9)"));
    r.push_back(claimed("{J5', A1, A7, d}", pick({"J5'", "A1", "A7", "d"}), s10));
    return r;
}

FiniteModel ba4() { return FiniteModel::product(FiniteModel::ba2(), FiniteModel::ba2()); }

}  // namespace

const Identity& named_identity(const std::string& name) {
    auto it = named_table().find(name);
    if (it == named_table().end()) throw UnknownRuleError("no named identity: " + name);
    return it->second;
}

const std::vector<BaseRecord>& registry() {
    static const std::vector<BaseRecord> r = build_registry();
    return r;
}

const std::vector<Identity>& reference_base() {
    static const std::vector<Identity> base = pick({"J1", "J2", "J4", "J5"});
    return base;
}

std::string data_dir() {
    if (const char* env = std::getenv("EQBASE_DATA_DIR")) return env;
    return EQBASE_DATA_DIR;
}

SoundnessReport verify_soundness(const BaseRecord& b) {
    SoundnessReport rep;
    const FiniteModel two = FiniteModel::ba2();
    const FiniteModel four = ba4();
    for (const auto& ax : b.axioms) {
        if (!satisfies(two, ax) || !satisfies(four, ax)) rep.violated.push_back(ax.name);
    }
    rep.verdict = rep.violated.empty() ? CheckVerdict::Pass : CheckVerdict::Fail;
    return rep;
}

CompletenessReport verify_completeness(const BaseRecord& b, const ReplicateOptions& opts) {
    CompletenessReport rep;
    auto t0 = std::chrono::steady_clock::now();

    std::vector<Identity> goals;
    int n = 0;
    for (const auto& file : b.ladder_corpus) {
        std::string path = data_dir() + "/" + file;
        if (!std::filesystem::exists(path)) continue;
        auto script = parse_proof_script(read_file(path));
        for (const auto* lemma : script.lemmas()) {
            Identity stmt = lemma->statement();
            stmt.name = "ladder" + std::to_string(++n) + "_" + lemma->name;
            goals.push_back(std::move(stmt));
        }
        rep.staged = true;
    }
    std::size_t ladder_size = goals.size();
    for (const auto& ref : reference_base()) {
        Identity g = ref;
        // A distinct name keeps the emitted lemma from clashing with an
        // axiom of the same name when the base contains the reference
        // identity itself.
        g.name = "ref_" + ref.name;
        goals.push_back(std::move(g));
    }

    ProverLimits limits;
    limits.max_seconds = b.status == BaseStatus::ProvedInPaper ? opts.proved_goal_seconds
                                                               : opts.claimed_goal_seconds;
    auto outcomes = prove_staged(b.axioms, goals, limits);

    bool reference_ok = true;
    std::vector<Identity> available = b.axioms;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        StageReport stage;
        stage.goal_name = goals[k].name;
        stage.goal = goals[k];
        stage.status = outcomes[k].status;
        stage.stats = outcomes[k].stats;
        if (outcomes[k].proved()) {
            // The kernel is the single point of trust: replay each script
            // against the rules available at its stage.
            AxiomFile axf;
            axf.identities = available;
            if (!check_script(outcomes[k].script, axf).all_passed) {
                stage.status = ProverStatus::Exhausted;  // treat broken proofs as unproved
                if (k >= ladder_size) reference_ok = false;
            } else {
                available.push_back(goals[k]);
            }
        } else if (k >= ladder_size) {
            reference_ok = false;
        }
        rep.stages.push_back(std::move(stage));
    }
    if (reference_ok) {
        rep.verdict = CheckVerdict::Pass;
    } else {
        rep.verdict = b.status == BaseStatus::ProvedInPaper ? CheckVerdict::Fail
                                                            : CheckVerdict::Inconclusive;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

SpectrumReport verify_spectrum(const BaseRecord& b, const ReplicateOptions& opts) {
    SpectrumReport rep;
    const std::vector<std::uint64_t> expected = {1, 1, 0, 1};
    for (int n = 1; n <= opts.spectrum_max_size; ++n) {
        SearchOptions so;
        so.size = n;
        so.must_satisfy = b.axioms;
        so.up_to_iso = true;
        auto res = search_models(so);
        rep.counts.push_back(res.models.size());
        rep.budget_exhausted = rep.budget_exhausted || res.exhausted_budget;
    }
    bool match = rep.counts.size() == expected.size();
    for (std::size_t k = 0; match && k < expected.size(); ++k) {
        match = rep.counts[k] == expected[k];
    }
    rep.verdict = rep.budget_exhausted ? CheckVerdict::Inconclusive
                  : match              ? CheckVerdict::Pass
                                       : CheckVerdict::Fail;
    return rep;
}

IndependenceReport verify_independence(const BaseRecord& b, const ReplicateOptions& opts) {
    IndependenceReport rep;
    for (std::size_t drop = 0; drop < b.axioms.size(); ++drop) {
        IndependenceWitness w;
        w.axiom = b.axioms[drop].name;
        std::vector<Identity> rest;
        for (std::size_t k = 0; k < b.axioms.size(); ++k) {
            if (k != drop) rest.push_back(b.axioms[k]);
        }
        for (int n = 2; n <= opts.independence_max_size && !w.witness; ++n) {
            SearchOptions so;
            so.size = n;
            so.must_satisfy = rest;
            so.must_violate = b.axioms[drop];
            so.limit = 1;
            auto res = search_models(so);
            if (!res.models.empty()) {
                w.witness = res.models.front();
                w.verdict = CheckVerdict::Pass;
            }
        }
        rep.axioms.push_back(std::move(w));
    }
    return rep;
}

BaseReport verify_base(const BaseRecord& b, const ReplicateOptions& opts) {
    BaseReport rep;
    rep.record = b;
    rep.soundness = verify_soundness(b);
    rep.completeness = verify_completeness(b, opts);
    rep.spectrum = verify_spectrum(b, opts);
    rep.independence = verify_independence(b, opts);
    return rep;
}

ReplicationReport replicate_all(const ReplicateOptions& opts) {
    ReplicationReport rep;
    auto t0 = std::chrono::steady_clock::now();

    // Corpus replay.
    static const std::vector<std::pair<std::string, std::string>> corpus_manifest = {
        {"corpus/section2.eqp", "axioms/johnson-4.eqb"},
        {"corpus/section4.eqp", "axioms/a6-j5p.eqb"},
        {"corpus/section5.eqp", "axioms/a8-j5p.eqb"},
        {"corpus/section6.eqp", "axioms/a5-j5p.eqb"},
        {"corpus/section7.eqp", "axioms/a9-j4-j5.eqb"},
        {"corpus/section8.eqp", "axioms/j1-a1-j5p.eqb"},
        {"corpus/section9.eqp", "axioms/a13-j5p.eqb"},
    };
    for (const auto& [script_rel, axioms_rel] : corpus_manifest) {
        CorpusFileReport cfr;
        cfr.file = script_rel;
        auto script = parse_proof_script(read_file(data_dir() + "/" + script_rel));
        auto axioms = parse_axiom_file(read_file(data_dir() + "/" + axioms_rel));
        cfr.verdict = check_script(script, axioms);
        rep.ok = rep.ok && cfr.verdict.all_passed;
        rep.corpus.push_back(std::move(cfr));
    }

    auto classes = classify_all();
    rep.assoc_classes = static_cast<int>(classes.size());
    for (const auto& c : classes) rep.assoc_identities += static_cast<int>(c.members.size());
    rep.ok = rep.ok && rep.assoc_classes == 14 && rep.assoc_identities == 66;

    for (const auto& b : registry()) {
        BaseReport br = verify_base(b, opts);
        if (br.soundness.verdict == CheckVerdict::Fail) rep.ok = false;
        if (b.status == BaseStatus::ProvedInPaper &&
            (br.completeness.verdict == CheckVerdict::Fail ||
             br.spectrum.verdict != CheckVerdict::Pass)) {
            rep.ok = false;
        }
        rep.bases.push_back(std::move(br));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

const char* verdict_str(CheckVerdict v) {
    switch (v) {
        case CheckVerdict::Pass: return "pass";
        case CheckVerdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

const char* status_str(ProverStatus s) {
    switch (s) {
        case ProverStatus::Proved: return "proved";
        case ProverStatus::Exhausted: return "exhausted";
        default: return "timed-out";
    }
}

nlohmann::json model_json(const FiniteModel& m) {
    return {{"size", m.n}, {"meet", m.meet}, {"comp", m.comp}};
}

}  // namespace

std::string report_to_json(const ReplicationReport& r) {
    nlohmann::json j;
    j["schema"] = "eqbase-report-v1";
    j["ok"] = r.ok;
    j["seconds"] = r.seconds;
    j["corpus"] = nlohmann::json::array();
    for (const auto& c : r.corpus) {
        nlohmann::json lemmas = nlohmann::json::array();
        for (const auto& lv : c.verdict.lemmas) {
            lemmas.push_back({{"name", lv.name},
                              {"status", lv.status == LemmaStatus::Passed   ? "passed"
                                         : lv.status == LemmaStatus::Failed ? "failed"
                                                                            : "skipped"},
                              {"steps", lv.steps_checked}});
        }
        j["corpus"].push_back({{"file", c.file},
                               {"all_passed", c.verdict.all_passed},
                               {"steps_checked", c.verdict.total_steps_checked},
                               {"lemmas", lemmas}});
    }
    j["classification"] = {{"classes", r.assoc_classes}, {"identities", r.assoc_identities}};
    j["bases"] = nlohmann::json::array();
    for (const auto& b : r.bases) {
        nlohmann::json jb;
        jb["name"] = b.record.name;
        jb["arity"] = b.record.arity;
        jb["status"] =
            b.record.status == BaseStatus::ProvedInPaper ? "proved-in-paper" : "claimed";
        jb["provenance"] = b.record.provenance;
        nlohmann::json axs = nlohmann::json::array();
        for (const auto& ax : b.record.axioms) {
            axs.push_back({{"name", ax.name}, {"identity", format_identity(ax)}});
        }
        jb["axioms"] = axs;
        jb["soundness"] = {{"verdict", verdict_str(b.soundness.verdict)},
                           {"violated", b.soundness.violated}};
        nlohmann::json stages = nlohmann::json::array();
        for (const auto& s : b.completeness.stages) {
            stages.push_back({{"goal", s.goal_name},
                              {"identity", format_identity(s.goal)},
                              {"status", status_str(s.status)},
                              {"generated", s.stats.generated},
                              {"kept", s.stats.kept},
                              {"seconds", s.stats.seconds}});
        }
        jb["completeness"] = {{"verdict", verdict_str(b.completeness.verdict)},
                              {"staged", b.completeness.staged},
                              {"seconds", b.completeness.seconds},
                              {"stages", stages}};
        jb["spectrum"] = {{"verdict", verdict_str(b.spectrum.verdict)},
                          {"counts", b.spectrum.counts}};
        nlohmann::json ind = nlohmann::json::array();
        for (const auto& w : b.independence.axioms) {
            nlohmann::json jw = {{"axiom", w.axiom},
                                 {"verdict", w.verdict == CheckVerdict::Pass
                                                 ? "independent-with-witness"
                                                 : "inconclusive-at-bound"}};
            if (w.witness) jw["witness"] = model_json(*w.witness);
            ind.push_back(std::move(jw));
        }
        jb["independence"] = ind;
        j["bases"].push_back(std::move(jb));
    }
    return j.dump(2) + "\n";
}

std::string report_to_text(const ReplicationReport& r) {
    std::ostringstream out;
    out << "Replication report (" << (r.ok ? "OK" : "FAILURES") << ", "
        << static_cast<int>(r.seconds) << "s)\n\n";
    out << "Corpus:\n";
    for (const auto& c : r.corpus) {
        out << "  " << c.file << ": " << (c.verdict.all_passed ? "pass" : "FAIL") << " ("
            << c.verdict.total_steps_checked << " steps)\n";
    }
    out << "\nClassification: " << r.assoc_classes << " classes over " << r.assoc_identities
        << " identities\n\nBases:\n";
    for (const auto& b : r.bases) {
        out << "  " << b.record.name << " ["
            << (b.record.status == BaseStatus::ProvedInPaper ? "proved" : "claimed") << "]\n";
        out << "    soundness:    " << verdict_str(b.soundness.verdict) << "\n";
        out << "    completeness: " << verdict_str(b.completeness.verdict)
            << (b.completeness.staged ? " (staged)" : "") << "\n";
        out << "    spectrum:     " << verdict_str(b.spectrum.verdict) << " (";
        for (std::size_t k = 0; k < b.spectrum.counts.size(); ++k) {
            out << (k ? ", " : "") << b.spectrum.counts[k];
        }
        out << ")\n    independence: ";
        for (std::size_t k = 0; k < b.independence.axioms.size(); ++k) {
            const auto& w = b.independence.axioms[k];
            out << (k ? ", " : "") << w.axiom << "="
                << (w.verdict == CheckVerdict::Pass ? "independent" : "inconclusive");
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace eqbase
