// eqbase: command-line surface over the equational workbench library.
//
// Subcommands: parse, check, prove, models, classify-assoc, verify-base,
// replicate. Exit codes: 0 success, 1 verification failure, 2 usage or
// parse error, 3 resource exhaustion.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eqbase/assoc.hpp"
#include "eqbase/harness.hpp"
#include "eqbase/kernel.hpp"
#include "eqbase/model.hpp"
#include "eqbase/prover.hpp"
#include "eqbase/syntax.hpp"

namespace {

using namespace eqbase;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitExhausted = 3;

Identity parse_goal_text(const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos || text.find('=', eq + 1) != std::string::npos) {
        throw ParseError(1, 1, "goal must be a single identity `lhs = rhs`");
    }
    Identity goal;
    goal.name = "goal";
    goal.lhs = parse_term(text.substr(0, eq));
    goal.rhs = parse_term(text.substr(eq + 1));
    return goal;
}

int cmd_parse(const std::string& path) {
    const std::string ext = std::filesystem::path(path).extension().string();
    const std::string input = read_file(path);
    if (ext == ".eqb") {
        std::cout << format_axiom_file(parse_axiom_file(input));
    } else if (ext == ".eqp") {
        std::cout << format_proof_script(parse_proof_script(input));
    } else if (ext == ".eqm") {
        std::cout << format_model(parse_model(input));
    } else {
        std::cerr << "error: unknown file extension '" << ext
                  << "' (expected .eqb, .eqp or .eqm)\n";
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_check(const std::string& script_path, const std::string& axioms_path) {
    auto script = parse_proof_script(read_file(script_path));
    auto axioms = parse_axiom_file(read_file(axioms_path));
    Verdict v = check_script(script, axioms);
    std::cout << v.render_table();
    return v.all_passed ? kExitOk : kExitVerificationFailed;
}

int cmd_prove(const std::string& axioms_path, const std::string& goal_spec, bool staged,
              double max_seconds, std::size_t max_kept, const std::string& emit_dir) {
    auto axioms = parse_axiom_file(read_file(axioms_path)).identities;

    std::vector<Identity> goals;
    if (!goal_spec.empty() && goal_spec[0] == '@') {
        const std::string path = goal_spec.substr(1);
        if (staged || std::filesystem::path(path).extension() == ".eqp") {
            // A proof script's lemma statements form the goal ladder.
            auto script = parse_proof_script(read_file(path));
            for (const auto* lemma : script.lemmas()) goals.push_back(lemma->statement());
            if (goals.empty()) {
                std::cerr << "error: " << path << " contains no lemmas\n";
                return kExitUsage;
            }
        } else {
            goals.push_back(parse_goal_text(read_file(path)));
        }
    } else {
        goals.push_back(parse_goal_text(goal_spec));
    }
    if (staged && goals.size() < 2) {
        std::cerr << "error: --staged needs --goal @script.eqp with at least two lemmas\n";
        return kExitUsage;
    }

    ProverLimits limits;
    limits.max_seconds = max_seconds;
    limits.max_kept = max_kept;
    auto outcomes = prove_staged(axioms, goals, limits);

    bool all_proved = true;
    ProverStatus last_status = ProverStatus::Proved;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const auto& o = outcomes[k];
        const char* status = o.proved()                                ? "proved"
                             : o.status == ProverStatus::TimedOut      ? "timed out"
                                                                       : "exhausted";
        std::fprintf(stderr, "%s: %s (%.2fs, %llu generated, %llu kept)\n",
                     format_identity(goals[k]).c_str(), status, o.stats.seconds,
                     static_cast<unsigned long long>(o.stats.generated),
                     static_cast<unsigned long long>(o.stats.kept));
        if (!o.proved()) {
            all_proved = false;
            last_status = o.status;
            break;
        }
        if (!emit_dir.empty()) {
            std::filesystem::create_directories(emit_dir);
            std::string name = goals.size() == 1 ? "proof.eqp"
                                                 : "proof-" + std::to_string(k + 1) + ".eqp";
            std::string out = (std::filesystem::path(emit_dir) / name).string();
            write_file(out, format_proof_script(o.script));
            std::cout << out << "\n";
        } else {
            std::cout << format_proof_script(o.script);
        }
    }
    if (all_proved) return kExitOk;

    // Not derivable within the budget: look for a small countermodel that
    // settles the question negatively.
    std::vector<Identity> context = axioms;
    for (std::size_t k = 0; k + 1 < goals.size(); ++k) context.push_back(goals[k]);
    for (int n = 2; n <= 4; ++n) {
        SearchOptions so;
        so.size = n;
        so.must_satisfy = context;
        so.must_violate = goals.back();
        so.limit = 1;
        auto res = search_models(so);
        if (!res.models.empty()) {
            std::cerr << "goal fails in a model of the axioms:\n";
            std::cout << format_model(res.models.front());
            return kExitVerificationFailed;
        }
    }
    return last_status == ProverStatus::TimedOut || last_status == ProverStatus::Exhausted
               ? kExitExhausted
               : kExitVerificationFailed;
}

int cmd_models(const std::string& axioms_path, int size, const std::string& violates,
               bool up_to_iso, std::size_t limit) {
    auto axioms = parse_axiom_file(read_file(axioms_path));
    SearchOptions so;
    so.size = size;
    so.must_satisfy = axioms.identities;
    so.up_to_iso = up_to_iso;
    so.limit = limit;
    if (!violates.empty()) {
        if (const Identity* in_file = axioms.find(violates)) {
            so.must_violate = *in_file;
        } else {
            so.must_violate = named_identity(violates);  // throws if unknown
        }
    }
    auto res = search_models(so);
    for (std::size_t k = 0; k < res.models.size(); ++k) {
        std::cout << "# model " << k + 1 << " of " << res.models.size() << "\n"
                  << format_model(res.models[k]);
        if (k + 1 < res.models.size()) std::cout << "\n";
    }
    std::fprintf(stderr, "%zu model(s) of size %d%s\n", res.models.size(), size,
                 res.exhausted_budget ? " (search budget exhausted)" : "");
    return res.exhausted_budget ? kExitExhausted : kExitOk;
}

int cmd_classify(const std::string& format) {
    auto classes = classify_all();
    if (format == "json") {
        std::cout << "[\n";
        for (std::size_t k = 0; k < classes.size(); ++k) {
            const auto& c = classes[k];
            std::cout << "  {\"label\": \"" << c.label << "\", \"representative\": \""
                      << format_identity(c.representative) << "\", \"size\": "
                      << c.members.size() << "}" << (k + 1 < classes.size() ? "," : "")
                      << "\n";
        }
        std::cout << "]\n";
    } else {
        std::size_t total = 0;
        for (const auto& c : classes) {
            std::printf("%-4s %-28s %2zu identities\n", c.label.c_str(),
                        format_identity(c.representative).c_str(), c.members.size());
            total += c.members.size();
        }
        std::printf("%zu classes over %zu identities\n", classes.size(), total);
    }
    return kExitOk;
}

bool base_report_ok(const BaseReport& br) {
    if (br.soundness.verdict == CheckVerdict::Fail) return false;
    if (br.record.status == BaseStatus::ProvedInPaper) {
        return br.completeness.verdict == CheckVerdict::Pass &&
               br.spectrum.verdict == CheckVerdict::Pass;
    }
    return br.completeness.verdict != CheckVerdict::Fail &&
           br.spectrum.verdict != CheckVerdict::Fail;
}

void print_base_report(const BaseReport& br) {
    ReplicationReport wrapper;
    wrapper.bases.push_back(br);
    // Reuse the replication text renderer's per-base block.
    std::string text = report_to_text(wrapper);
    auto pos = text.find("Bases:\n");
    std::cout << (pos == std::string::npos ? text : text.substr(pos + 7));
    for (const auto& s : br.completeness.stages) {
        std::printf("    goal %-24s %s (%.2fs, %llu kept)\n", s.goal_name.c_str(),
                    s.status == ProverStatus::Proved      ? "proved"
                    : s.status == ProverStatus::TimedOut  ? "timed-out"
                                                          : "exhausted",
                    s.stats.seconds, static_cast<unsigned long long>(s.stats.kept));
    }
}

int cmd_verify_base(const std::string& name, double max_seconds) {
    ReplicateOptions opts;
    if (max_seconds > 0) opts.proved_goal_seconds = opts.claimed_goal_seconds = max_seconds;
    const BaseRecord* found = nullptr;
    for (const auto& b : registry()) {
        if (b.name == name) found = &b;
    }
    if (!found) {
        std::cerr << "error: no base named \"" << name << "\" in the registry; known bases:\n";
        for (const auto& b : registry()) std::cerr << "  " << b.name << "\n";
        return kExitUsage;
    }
    BaseReport br = verify_base(*found, opts);
    print_base_report(br);
    return base_report_ok(br) ? kExitOk : kExitVerificationFailed;
}

int cmd_replicate(const std::string& report_path, const std::string& format, int workers,
                  double max_seconds) {
    ReplicateOptions opts;
    opts.workers = workers;
    if (max_seconds > 0) opts.proved_goal_seconds = max_seconds;
    ReplicationReport rep = replicate_all(opts);
    std::cout << (format == "json" ? report_to_json(rep) : report_to_text(rep));
    if (!report_path.empty()) {
        auto parent = std::filesystem::path(report_path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        write_file(report_path, report_to_json(rep));
    }
    return rep.ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equational workbench for the two-operation Boolean signature (meet, ')"};
    app.require_subcommand(1);

    std::string file, axioms_path, goal_spec, violates, emit_dir, report_path, base_name;
    std::string format = "text";
    bool staged = false, up_to_iso = false;
    int size = 2, workers = 1;
    double max_seconds = 0;
    std::size_t limit = SIZE_MAX, max_kept = 50'000;

    auto* parse = app.add_subcommand("parse", "Parse a .eqb/.eqp/.eqm file and reprint it");
    parse->add_option("file", file)->required();

    auto* check = app.add_subcommand("check", "Replay a proof script through the kernel");
    check->add_option("script", file)->required();
    check->add_option("--axioms", axioms_path)->required();

    auto* prove = app.add_subcommand("prove", "Derive a goal identity from axioms");
    prove->add_option("--axioms", axioms_path)->required();
    prove->add_option("--goal", goal_spec, "identity text, or @path (.eqp gives a ladder)")
        ->required();
    prove->add_flag("--staged", staged, "prove the @script's lemmas in order");
    prove->add_option("--max-seconds", max_seconds)->default_val(60.0);
    prove->add_option("--limit", max_kept, "kept-equation cap")->default_val(50'000);
    prove->add_option("--emit-proofs", emit_dir, "write scripts here instead of stdout");

    auto* models = app.add_subcommand("models", "Search finite models of an axiom file");
    models->add_option("--axioms", axioms_path)->required();
    models->add_option("--size", size)->required();
    models->add_option("--violates", violates, "identity (file or built-in name) to falsify");
    models->add_flag("--up-to-iso", up_to_iso);
    models->add_option("--limit", limit);

    auto* classify =
        app.add_subcommand("classify-assoc", "Classify the 66 associative-type identities");
    classify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* verify = app.add_subcommand("verify-base", "Run the four checks on one base");
    verify->add_option("name", base_name, "registry name, e.g. \"{A6, J5'}\"")->required();
    verify->add_option("--max-seconds", max_seconds, "per-goal prover budget");

    auto* replicate = app.add_subcommand("replicate", "Full replication over the registry");
    replicate->add_option("--report", report_path, "write the JSON report here");
    replicate->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    replicate->add_option("--workers", workers);
    replicate->add_option("--max-seconds", max_seconds, "per-goal prover budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (parse->parsed()) return cmd_parse(file);
        if (check->parsed()) return cmd_check(file, axioms_path);
        if (prove->parsed())
            return cmd_prove(axioms_path, goal_spec, staged, max_seconds, max_kept, emit_dir);
        if (models->parsed()) return cmd_models(axioms_path, size, violates, up_to_iso, limit);
        if (classify->parsed()) return cmd_classify(format);
        if (verify->parsed()) return cmd_verify_base(base_name, max_seconds);
        if (replicate->parsed())
            return cmd_replicate(report_path, format, workers, max_seconds);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
