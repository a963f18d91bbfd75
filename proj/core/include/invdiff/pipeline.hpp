#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invdiff/depgraph.hpp"
#include "invdiff/distance.hpp"
#include "invdiff/evaluation.hpp"
#include "invdiff/fuzzer.hpp"
#include "invdiff/kde.hpp"
#include "invdiff/manifest.hpp"

namespace invdiff {

// Environment variable that overrides PipelineConfig::out_dir.
inline const char* kOutDirEnv = "INVDIFF_OUT";

struct PipelineConfig {
    // Subject mode: name of a built-in subject plus two version tags.
    std::string subject;
    std::string left_version = kVersionClean;
    std::string right_version = kVersionBuggy;
    // External mode: pre-generated trace files (replaces fuzz + trace).
    std::string traces_left;
    std::string traces_right;

    std::uint64_t fuzz_budget = 5000;
    std::uint64_t seed = 1;
    std::size_t trace_cap = 1500;      // per-breakpoint sampled rows
    double mining_timeout_s = 300.0;   // per input
    double bandwidth = 0.0;            // <= 0: Silverman
    double zero_tolerance = 0.01;
    int flag_threshold = 2;
    std::size_t min_inputs = 5;
    std::string out_dir;
    std::string warnings_csv;          // optional SAST warnings to evaluate
    std::string edges_csv;             // optional dependency edges override

    void validate() const;
    FlagConfig flag_config() const;
    static PipelineConfig from_json_file(const std::string& path);
};

struct PipelineResult {
    std::string out_dir;
    std::vector<DistanceVector> distances;
    std::map<std::string, BreakpointReport> reports;
    GroupVerdicts verdicts;
    std::vector<SummaryRow> summary;
};

// fuzz -> trace -> (sample+mine) -> diff -> analyze -> group -> evaluate.
// Every stage writes its artifacts under out_dir before the next one runs,
// so any stage can be replayed from files by the CLI.
PipelineResult run_pipeline(PipelineConfig config);

// Stage helpers shared by run_pipeline and the CLI subcommands.

// Runs every corpus entry on one subject version; one TraceSet per declared
// breakpoint per input, stamped with `role`.
std::vector<TraceSet> trace_corpus(const SubjectPair& subject,
                                   const std::string& version_tag,
                                   const Corpus& corpus, Version role);

// Applies the per-breakpoint sampling cap (seeded deterministically per
// set from `seed`) and mines each TraceSet.
std::vector<InvariantSet> mine_trace_sets(const std::vector<TraceSet>& sets,
                                          std::size_t cap, std::uint64_t seed,
                                          double timeout_s);

// Pairs invariant sets by (breakpoint, input) and computes all distances,
// sorted by (breakpoint, input). A pair absent on one side is treated as
// empty there (one-sided).
std::vector<DistanceVector> diff_invariant_sets(
    const std::vector<InvariantSet>& left, const std::vector<InvariantSet>& right);

// Per-breakpoint flagging over a distance table. declared_bps adds
// "unreached" reports for breakpoints with no distance rows.
std::map<std::string, BreakpointReport> analyze_distances(
    const std::vector<DistanceVector>& distances, const FlagConfig& config,
    const std::vector<std::string>& declared_bps = {});

// Report serialization used by the pipeline and the analyze subcommand.
std::string report_json(const BreakpointReport& report);
std::string density_csv(const DensityEstimate& estimate);
void write_analysis(const std::string& out_dir,
                    const std::map<std::string, BreakpointReport>& reports);

// Grouped verdicts + evaluation emission (subject mode).
GroupVerdicts group_reports(const SubjectManifest& manifest,
                            const std::map<std::string, BreakpointReport>& reports,
                            const std::vector<std::pair<std::string, std::string>>*
                              edges_override = nullptr);

struct Warning {
    std::string file;
    int line = 0;
    std::string tool;
    std::string rule_id;
};

// CSV: file,line,tool,rule_id
std::vector<Warning> parse_warnings_csv_text(const std::string& text);
std::vector<Warning> parse_warnings_csv(const std::string& path);

// Hit rates / false alarms at all three levels for the toolkit's flags and,
// when warnings are given, for each SAST tool in the file.
std::vector<BugOutcome> evaluate_subject(
    const SubjectManifest& manifest,
    const std::map<std::string, BreakpointReport>& reports,
    const std::vector<Warning>& warnings);

}  // namespace invdiff
