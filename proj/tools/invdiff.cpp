// invdiff -- behavioral-shift detection for program version pairs.
//
// Pipeline stages are exposed as separate subcommands so that any stage can
// be replaced by external tooling (a real fuzzer, a debugger-based tracer)
// that speaks the same file formats.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

#include "invdiff/depgraph.hpp"
#include "invdiff/errors.hpp"
#include "invdiff/manifest.hpp"
#include "invdiff/miner.hpp"
#include "invdiff/pipeline.hpp"

namespace fs = std::filesystem;
using namespace invdiff;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

void cmd_subjects(const std::string& json_path) {
    const auto& subjects = list_subjects();
    if (!json_path.empty()) {
        std::vector<SubjectManifest> manifests;
        manifests.reserve(subjects.size());
        for (const auto& s : subjects) manifests.push_back(build_manifest(s));
        write_manifest(json_path, manifests);
    }
    for (const auto& s : subjects) {
        std::cout << s.name << "  (" << s.title << ", input: " << s.input_schema
                  << ", breakpoints: " << s.breakpoints.size() << ")\n";
    }
}

void cmd_fuzz(const std::string& subject_name, const std::string& version,
              std::uint64_t budget, std::uint64_t seed, const std::string& out_dir) {
    const SubjectPair& subject = subject_by_name(subject_name);
    Corpus corpus = fuzz_campaign(subject, version, budget, seed);
    write_corpus(out_dir, corpus);
    std::cout << "corpus: " << corpus.entries.size() << " entries, "
              << corpus.crashes_seen << " crashing inputs discarded\n";
}

void cmd_trace(const std::string& subject_name, const std::string& version,
               const std::string& role, const std::string& corpus_dir,
               const std::string& out_file) {
    const SubjectPair& subject = subject_by_name(subject_name);
    Corpus corpus = import_corpus(corpus_dir);
    const Version r = version_from_string(role.empty()
                                              ? (version == kVersionClean ? "clean"
                                                                          : "buggy")
                                              : role);
    auto traces = trace_corpus(subject, version, corpus, r);
    write_trace_file(out_file, traces);
    std::cout << "traces: " << traces.size() << " sets -> " << out_file << "\n";
}

void cmd_mine(const std::string& traces_path, const std::string& out_path,
              std::size_t cap, std::uint64_t seed, double timeout_s) {
    auto traces = parse_trace_file(traces_path);
    auto sets = mine_trace_sets(traces, cap, seed, timeout_s);
    write_invariant_file(out_path, sets);
    std::cout << "invariant sets: " << sets.size() << " -> " << out_path << "\n";
}

void cmd_diff(const std::string& left, const std::string& right,
              const std::string& out_csv) {
    auto lsets = parse_invariant_file(left);
    auto rsets = parse_invariant_file(right);
    auto distances = diff_invariant_sets(lsets, rsets);
    write_distances_csv(out_csv, distances);
    std::cout << "distance vectors: " << distances.size() << " -> " << out_csv << "\n";
}

void cmd_analyze(const std::string& distances_csv, const std::string& out_dir,
                 const FlagConfig& fc, const std::string& edges_csv,
                 const std::string& manifest_path, const std::string& subject_name) {
    auto distances = parse_distances_csv(distances_csv);

    std::vector<std::string> declared;
    const SubjectManifest* manifest = nullptr;
    std::vector<SubjectManifest> manifests;
    if (!manifest_path.empty()) {
        manifests = load_manifest(manifest_path);
        for (const auto& m : manifests) {
            if (subject_name.empty() || m.name == subject_name) {
                manifest = &m;
                break;
            }
        }
        if (!manifest) throw ConfigError("subject not found in manifest");
        for (const auto& bp : manifest->breakpoints) declared.push_back(bp.id);
    }

    auto reports = analyze_distances(distances, fc, declared);
    fs::create_directories(out_dir);
    write_analysis(out_dir, reports);

    int flagged = 0;
    for (const auto& [bp, report] : reports) {
        std::cout << bp << ": " << (report.flagged ? "FLAGGED" : "not flagged")
                  << " (" << to_string(report.status)
                  << ", nonzero metrics: " << report.nonzero_peak_metrics << ")\n";
        if (report.flagged) ++flagged;
    }

    if (manifest) {
        const std::vector<std::pair<std::string, std::string>>* edges_ptr = nullptr;
        std::vector<std::pair<std::string, std::string>> edges_override;
        if (!edges_csv.empty()) {
            edges_override = parse_edges_csv(edges_csv);
            edges_ptr = &edges_override;
        }
        auto verdicts = group_reports(*manifest, reports, edges_ptr);
        std::cout << "groups flagged: " << verdicts.flagged_groups
                  << ", grouped false alarms: " << verdicts.grouped_false_alarms
                  << " (ungrouped: " << verdicts.ungrouped_false_alarms << ")\n";
    }
    std::cout << "flagged breakpoints: " << flagged << "\n";
}

void cmd_evaluate(const std::string& run_dir, const std::string& warnings_csv,
                  const std::string& out_dir) {
    const auto manifests = load_manifest((fs::path(run_dir) / "subjects.json").string());
    if (manifests.empty()) throw ConfigError("run directory has no subjects");
    const SubjectManifest& manifest = manifests.front();

    // Rebuild reports from the flags written by analyze.
    std::map<std::string, BreakpointReport> reports;
    std::ifstream flags_in(fs::path(run_dir) / "flags.json", std::ios::binary);
    if (!flags_in) throw ConfigError("run directory has no flags.json (run analyze first)");
    nlohmann::json flags;
    flags_in >> flags;
    for (const auto& [bp, flagged] : flags.items()) {
        BreakpointReport r;
        r.breakpoint_id = bp;
        r.flagged = flagged.get<bool>();
        reports[bp] = std::move(r);
    }

    std::vector<Warning> warnings;
    if (!warnings_csv.empty()) warnings = parse_warnings_csv(warnings_csv);

    const auto outcomes = evaluate_subject(manifest, reports, warnings);
    const auto rows = summarize(outcomes);
    const std::string csv = summary_csv(rows);

    const fs::path dest = out_dir.empty() ? fs::path(run_dir) : fs::path(out_dir);
    fs::create_directories(dest);
    std::ofstream out(dest / "evaluation_summary.csv", std::ios::binary);
    out << csv;
    std::cout << csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invdiff: flags behavioral shifts between two program versions by "
                 "mining likely invariants from shared non-crashing inputs"};
    app.require_subcommand(1);

    // subjects
    auto* sub_subjects = app.add_subcommand("subjects", "list built-in subject programs");
    std::string subjects_json;
    sub_subjects->add_option("--json", subjects_json, "also write subjects.json manifest");

    // fuzz
    auto* sub_fuzz = app.add_subcommand("fuzz", "generate a non-crashing corpus");
    std::string f_subject, f_version = kVersionBuggy, f_out;
    std::uint64_t f_budget = 5000, f_seed = 1;
    sub_fuzz->add_option("--subject", f_subject, "subject name")->required();
    sub_fuzz->add_option("--version", f_version, "version tag to fuzz");
    sub_fuzz->add_option("--budget", f_budget, "mutation iterations");
    sub_fuzz->add_option("--seed", f_seed, "PRNG seed");
    sub_fuzz->add_option("--out", f_out, "corpus directory")->required();

    // trace
    auto* sub_trace = app.add_subcommand("trace", "run a corpus and record trace sets");
    std::string t_subject, t_version, t_role, t_corpus, t_out;
    sub_trace->add_option("--subject", t_subject)->required();
    sub_trace->add_option("--version", t_version, "version tag to run")->required();
    sub_trace->add_option("--role", t_role, "clean|buggy side in the comparison");
    sub_trace->add_option("--corpus", t_corpus, "corpus directory")->required();
    sub_trace->add_option("--out", t_out, "trace file")->required();

    // mine
    auto* sub_mine = app.add_subcommand("mine", "mine likely invariants from traces");
    std::string m_traces, m_out;
    std::size_t m_cap = 1500;
    std::uint64_t m_seed = 1;
    double m_timeout = 300.0;
    sub_mine->add_option("--traces", m_traces)->required();
    sub_mine->add_option("--out", m_out)->required();
    sub_mine->add_option("--cap", m_cap, "per-breakpoint trace sampling cap");
    sub_mine->add_option("--seed", m_seed, "sampling seed");
    sub_mine->add_option("--timeout", m_timeout, "mining timeout per input (s)");

    // diff
    auto* sub_diff = app.add_subcommand("diff", "distances between invariant dumps");
    std::string d_left, d_right, d_out;
    sub_diff->add_option("--left", d_left, "clean-side invariant dump")->required();
    sub_diff->add_option("--right", d_right, "buggy-side invariant dump")->required();
    sub_diff->add_option("--out", d_out, "distances CSV")->required();

    // analyze
    auto* sub_analyze = app.add_subcommand("analyze", "KDE peak analysis and flagging");
    std::string a_distances, a_out, a_edges, a_manifest, a_subject;
    FlagConfig a_fc;
    sub_analyze->add_option("--distances", a_distances)->required();
    sub_analyze->add_option("--out", a_out)->required();
    sub_analyze->add_option("--bandwidth", a_fc.bandwidth, "fixed KDE bandwidth (default auto)");
    sub_analyze->add_option("--zero-tolerance", a_fc.zero_tolerance);
    sub_analyze->add_option("--threshold", a_fc.flag_threshold, "metrics needed to flag (1-4)");
    sub_analyze->add_option("--min-inputs", a_fc.min_inputs);
    sub_analyze->add_option("--edges", a_edges, "dependency edges CSV");
    sub_analyze->add_option("--manifest", a_manifest, "subjects.json for grouping");
    sub_analyze->add_option("--subject", a_subject, "subject within the manifest");

    // evaluate
    auto* sub_eval = app.add_subcommand("evaluate", "hit rates and false alarms");
    std::string e_run, e_warnings, e_out;
    sub_eval->add_option("--run-dir", e_run, "pipeline output directory")->required();
    sub_eval->add_option("--warnings", e_warnings, "SAST warnings CSV (file,line,tool,rule_id)");
    sub_eval->add_option("--out", e_out, "summary destination (default run dir)");

    // run
    auto* sub_run = app.add_subcommand("run", "full pipeline");
    PipelineConfig config;
    std::string r_config;
    sub_run->add_option("--config", r_config, "JSON config file (flags override it)");
    auto* r_subject = sub_run->add_option("--subject", config.subject, "built-in subject");
    auto* r_left = sub_run->add_option("--left", config.left_version, "left version tag");
    auto* r_right = sub_run->add_option("--right", config.right_version, "right version tag");
    auto* r_tl = sub_run->add_option("--traces-left", config.traces_left, "external clean traces");
    auto* r_tr = sub_run->add_option("--traces-right", config.traces_right, "external buggy traces");
    auto* r_budget = sub_run->add_option("--budget", config.fuzz_budget);
    auto* r_seed = sub_run->add_option("--seed", config.seed);
    auto* r_cap = sub_run->add_option("--cap", config.trace_cap);
    auto* r_timeout = sub_run->add_option("--timeout", config.mining_timeout_s);
    auto* r_bw = sub_run->add_option("--bandwidth", config.bandwidth);
    auto* r_zt = sub_run->add_option("--zero-tolerance", config.zero_tolerance);
    auto* r_thr = sub_run->add_option("--threshold", config.flag_threshold);
    auto* r_mi = sub_run->add_option("--min-inputs", config.min_inputs);
    auto* r_out = sub_run->add_option("--out", config.out_dir, "output directory");
    auto* r_warn = sub_run->add_option("--warnings", config.warnings_csv);
    auto* r_edges = sub_run->add_option("--edges", config.edges_csv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*sub_subjects) {
            cmd_subjects(subjects_json);
        } else if (*sub_fuzz) {
            cmd_fuzz(f_subject, f_version, f_budget, f_seed, f_out);
        } else if (*sub_trace) {
            cmd_trace(t_subject, t_version, t_role, t_corpus, t_out);
        } else if (*sub_mine) {
            cmd_mine(m_traces, m_out, m_cap, m_seed, m_timeout);
        } else if (*sub_diff) {
            cmd_diff(d_left, d_right, d_out);
        } else if (*sub_analyze) {
            cmd_analyze(a_distances, a_out, a_fc, a_edges, a_manifest, a_subject);
        } else if (*sub_eval) {
            cmd_evaluate(e_run, e_warnings, e_out);
        } else if (*sub_run) {
            if (!r_config.empty()) {
                PipelineConfig base = PipelineConfig::from_json_file(r_config);
                // CLI flags win over the config file.
                if (!*r_subject) config.subject = base.subject;
                if (!*r_left) config.left_version = base.left_version;
                if (!*r_right) config.right_version = base.right_version;
                if (!*r_tl) config.traces_left = base.traces_left;
                if (!*r_tr) config.traces_right = base.traces_right;
                if (!*r_budget) config.fuzz_budget = base.fuzz_budget;
                if (!*r_seed) config.seed = base.seed;
                if (!*r_cap) config.trace_cap = base.trace_cap;
                if (!*r_timeout) config.mining_timeout_s = base.mining_timeout_s;
                if (!*r_bw) config.bandwidth = base.bandwidth;
                if (!*r_zt) config.zero_tolerance = base.zero_tolerance;
                if (!*r_thr) config.flag_threshold = base.flag_threshold;
                if (!*r_mi) config.min_inputs = base.min_inputs;
                if (!*r_out) config.out_dir = base.out_dir;
                if (!*r_warn) config.warnings_csv = base.warnings_csv;
                if (!*r_edges) config.edges_csv = base.edges_csv;
            }
            PipelineResult result = run_pipeline(config);
            int flagged = 0;
            for (const auto& [bp, report] : result.reports) {
                std::cout << bp << ": " << (report.flagged ? "FLAGGED" : "not flagged")
                          << " (" << to_string(report.status) << ")\n";
                if (report.flagged) ++flagged;
            }
            std::cout << "run directory: " << result.out_dir << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitStage;
    }
    return kExitOk;
}
