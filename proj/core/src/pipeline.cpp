#include "invdiff/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "invdiff/errors.hpp"
#include "invdiff/miner.hpp"
#include "invdiff/numeric.hpp"

#include "json.hpp"

namespace fs = std::filesystem;

namespace invdiff {

void PipelineConfig::validate() const {
    const bool subject_mode = !subject.empty();
    const bool external_mode = !traces_left.empty() || !traces_right.empty();
    if (subject_mode == external_mode) {
        throw ConfigError(
            "exactly one of --subject or --traces-left/--traces-right is required");
    }
    if (external_mode && (traces_left.empty() || traces_right.empty())) {
        throw ConfigError("external mode needs both --traces-left and --traces-right");
    }
    if (fuzz_budget < 1) throw ConfigError("fuzz budget must be >= 1");
    if (trace_cap < 1) throw ConfigError("trace cap must be >= 1");
    if (mining_timeout_s <= 0) throw ConfigError("mining timeout must be positive");
    if (zero_tolerance <= 0) throw ConfigError("zero tolerance must be positive");
    if (flag_threshold < 1 || flag_threshold > 4) {
        throw ConfigError("flag threshold must be in 1..4");
    }
    if (min_inputs < 1) throw ConfigError("min inputs must be >= 1");
    if (out_dir.empty()) throw ConfigError("output directory is required");
}

FlagConfig PipelineConfig::flag_config() const {
    FlagConfig fc;
    fc.bandwidth = bandwidth;
    fc.zero_tolerance = zero_tolerance;
    fc.flag_threshold = flag_threshold;
    fc.min_inputs = min_inputs;
    return fc;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    PipelineConfig c;
    c.subject = j.value("subject", "");
    c.left_version = j.value("left_version", kVersionClean);
    c.right_version = j.value("right_version", kVersionBuggy);
    c.traces_left = j.value("traces_left", "");
    c.traces_right = j.value("traces_right", "");
    c.fuzz_budget = j.value("fuzz_budget", std::uint64_t{5000});
    c.seed = j.value("seed", std::uint64_t{1});
    c.trace_cap = j.value("trace_cap", std::size_t{1500});
    c.mining_timeout_s = j.value("mining_timeout_s", 300.0);
    c.bandwidth = j.value("bandwidth", 0.0);
    c.zero_tolerance = j.value("zero_tolerance", 0.01);
    c.flag_threshold = j.value("flag_threshold", 2);
    c.min_inputs = j.value("min_inputs", std::size_t{5});
    c.out_dir = j.value("out_dir", "");
    c.warnings_csv = j.value("warnings_csv", "");
    c.edges_csv = j.value("edges_csv", "");
    return c;
}

std::vector<TraceSet> trace_corpus(const SubjectPair& subject,
                                   const std::string& version_tag,
                                   const Corpus& corpus, Version role) {
    std::vector<TraceSet> out;
    out.reserve(corpus.entries.size() * subject.breakpoints.size());
    for (const auto& entry : corpus.entries) {
        SubjectRun run =
            run_subject(subject, version_tag, entry.bytes, role, entry.input_id);
        for (auto& t : run.traces) out.push_back(std::move(t));
    }
    return out;
}

std::vector<InvariantSet> mine_trace_sets(const std::vector<TraceSet>& sets,
                                          std::size_t cap, std::uint64_t seed,
                                          double timeout_s) {
    std::vector<InvariantSet> out;
    out.reserve(sets.size());
    for (const auto& t : sets) {
        // Stable per-set sampling seed so stage replays reproduce bytes.
        const std::uint64_t set_seed =
            seed ^ fnv1a64(t.breakpoint_id + "/" + t.input_id + "/" + to_string(t.version));
        const TraceSet sampled = sample_traces(t, cap, set_seed);
        out.push_back(
            mine_invariants(sampled, std::chrono::duration<double>(timeout_s)));
    }
    return out;
}

std::vector<DistanceVector> diff_invariant_sets(
    const std::vector<InvariantSet>& left, const std::vector<InvariantSet>& right) {
    std::map<std::pair<std::string, std::string>, std::pair<const InvariantSet*,
                                                            const InvariantSet*>>
        pairs;
    for (const auto& s : left) {
        pairs[{s.breakpoint_id, s.input_id}].first = &s;
    }
    for (const auto& s : right) {
        pairs[{s.breakpoint_id, s.input_id}].second = &s;
    }

    std::vector<DistanceVector> out;
    out.reserve(pairs.size());
    for (const auto& [key, sides] : pairs) {
        InvariantSet empty_side;
        empty_side.breakpoint_id = key.first;
        empty_side.input_id = key.second;
        empty_side.status = MineStatus::kEmptyTrace;
        const InvariantSet& u = sides.first ? *sides.first : empty_side;
        const InvariantSet& v = sides.second ? *sides.second : empty_side;
        out.push_back(distance_vector(u, v));
    }
    return out;
}

std::map<std::string, BreakpointReport> analyze_distances(
    const std::vector<DistanceVector>& distances, const FlagConfig& config,
    const std::vector<std::string>& declared_bps) {
    std::map<std::string, std::vector<DistanceVector>> by_bp;
    for (const auto& d : distances) {
        if (d.no_invariants) continue;  // no behavior observed on either side
        by_bp[d.breakpoint_id].push_back(d);
    }

    std::map<std::string, BreakpointReport> reports;
    for (const auto& [bp, vectors] : by_bp) {
        reports[bp] = flag_breakpoint(vectors, config);
    }
    for (const auto& bp : declared_bps) {
        if (reports.count(bp)) continue;
        BreakpointReport r;
        r.breakpoint_id = bp;
        r.status = ReportStatus::kUnreached;
        reports[bp] = std::move(r);
    }
    return reports;
}

std::string report_json(const BreakpointReport& report) {
    nlohmann::ordered_json j;
    j["breakpoint_id"] = report.breakpoint_id;
    j["status"] = to_string(report.status);
    j["n_inputs"] = report.n_inputs;
    j["flagged"] = report.flagged;
    j["nonzero_peak_metrics"] = report.nonzero_peak_metrics;
    j["metrics"] = nlohmann::ordered_json::object();
    for (const auto& [metric, mr] : report.metrics) {
        nlohmann::ordered_json mj;
        mj["bandwidth"] = mr.bandwidth;
        mj["largest_peak_distance"] = mr.largest_peak_distance;
        mj["has_nonzero_peak"] = mr.has_nonzero_peak;
        mj["peaks"] = nlohmann::ordered_json::array();
        for (const auto& p : mr.peaks) {
            mj["peaks"].push_back(nlohmann::ordered_json{
                {"position", p.position}, {"density", p.density}, {"nonzero", p.nonzero}});
        }
        j["metrics"][to_string(metric)] = std::move(mj);
    }
    return j.dump(2) + "\n";
}

std::string density_csv(const DensityEstimate& estimate) {
    std::ostringstream out;
    out << "position,density\n";
    for (std::size_t k = estimate.pad; k < estimate.pad + kGridPoints; ++k) {
        out << format_double(estimate.positions[k]) << ','
            << format_double(estimate.density[k]) << '\n';
    }
    return out.str();
}

void write_analysis(const std::string& out_dir,
                    const std::map<std::string, BreakpointReport>& reports) {
    fs::create_directories(fs::path(out_dir) / "reports");
    fs::create_directories(fs::path(out_dir) / "density");

    nlohmann::ordered_json flags;
    for (const auto& [bp, report] : reports) {
        std::ofstream out(fs::path(out_dir) / "reports" / (bp + ".json"),
                          std::ios::binary);
        out << report_json(report);
        for (const auto& [metric, est] : report.densities) {
            std::ofstream curve(fs::path(out_dir) / "density" /
                                    (bp + "_" + to_string(metric) + ".csv"),
                                std::ios::binary);
            curve << density_csv(est);
        }
        flags[bp] = report.flagged;
    }
    std::ofstream out(fs::path(out_dir) / "flags.json", std::ios::binary);
    out << flags.dump(2) << '\n';
}

GroupVerdicts group_reports(const SubjectManifest& manifest,
                            const std::map<std::string, BreakpointReport>& reports,
                            const std::vector<std::pair<std::string, std::string>>*
                              edges_override) {
    std::vector<std::string> bps;
    for (const auto& bp : manifest.breakpoints) bps.push_back(bp.id);
    const auto& edges = edges_override ? *edges_override : manifest.dependency_edges;
    auto groups = group_breakpoints(bps, edges);

    std::map<std::string, bool> flagged;
    for (const auto& [bp, report] : reports) flagged[bp] = report.flagged;
    return merge_flags(std::move(groups), flagged, manifest.buggy_breakpoints);
}

std::vector<Warning> parse_warnings_csv_text(const std::string& text) {
    std::vector<Warning> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("file,", 0) == 0) continue;  // header
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        cells.push_back(cur);
        if (cells.size() != 4) {
            throw ParseError("warning row needs 'file,line,tool,rule_id'", line_no);
        }
        Warning w;
        w.file = cells[0];
        try {
            w.line = std::stoi(cells[1]);
        } catch (const std::exception&) {
            throw ParseError("warning line number '" + cells[1] + "' is not a number",
                             line_no);
        }
        w.tool = cells[2];
        w.rule_id = cells[3];
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<Warning> parse_warnings_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open warnings CSV '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_warnings_csv_text(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::vector<BugOutcome> evaluate_subject(
    const SubjectManifest& manifest,
    const std::map<std::string, BreakpointReport>& reports,
    const std::vector<Warning>& warnings) {
    std::vector<BugOutcome> outcomes;

    std::vector<UnitRef> flag_units;
    for (const auto& [bp, report] : reports) {
        if (!report.flagged) continue;
        auto it = manifest.breakpoint_units.find(bp);
        if (it != manifest.breakpoint_units.end()) {
            flag_units.push_back(it->second);
        } else {
            flag_units.push_back({});  // unmapped at every level
        }
    }
    for (Level level : kAllLevels) {
        const HitResult hr = hit_rate(flag_units, manifest.truth, level);
        outcomes.push_back({manifest.name, "invdiff", level, hr.detected,
                            hr.false_alarm, hr.unmapped});
    }

    if (warnings.empty()) return outcomes;

    // Warnings map through the same block tree as the breakpoints.
    const BlockTree tree = parse_blocks(manifest.source_text, manifest.source_name);
    std::map<std::string, std::vector<UnitRef>> by_tool;
    for (const auto& w : warnings) {
        UnitRef unit;
        if (w.file == manifest.source_name) {
            unit.file = w.file;
            unit.function = enclosing_function(tree, w.line);
            const std::string block = enclosing_block(tree, w.line);
            unit.block = block == kFileLevelBlock ? block : w.file + "#" + block;
        }
        by_tool[w.tool].push_back(unit);
    }
    for (const auto& [tool, units] : by_tool) {
        for (Level level : kAllLevels) {
            const HitResult hr = hit_rate(units, manifest.truth, level);
            outcomes.push_back({manifest.name, tool, level, hr.detected,
                                hr.false_alarm, hr.unmapped});
        }
    }
    return outcomes;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

nlohmann::ordered_json config_echo(const PipelineConfig& c) {
    // out_dir is deliberately omitted: report trees from identical seeds
    // must be byte-identical regardless of where they land.
    nlohmann::ordered_json j;
    j["subject"] = c.subject;
    j["left_version"] = c.left_version;
    j["right_version"] = c.right_version;
    j["external_traces"] = !c.traces_left.empty();
    j["fuzz_budget"] = c.fuzz_budget;
    j["seed"] = c.seed;
    j["trace_cap"] = c.trace_cap;
    j["mining_timeout_s"] = c.mining_timeout_s;
    j["bandwidth"] = c.bandwidth <= 0 ? "auto" : nlohmann::ordered_json(c.bandwidth);
    j["zero_tolerance"] = c.zero_tolerance;
    j["flag_threshold"] = c.flag_threshold;
    j["min_inputs"] = c.min_inputs;
    return j;
}

}  // namespace

PipelineResult run_pipeline(PipelineConfig config) {
    if (const char* env = std::getenv(kOutDirEnv); env && *env) {
        config.out_dir = env;
    }
    config.validate();

    const fs::path out(config.out_dir);
    fs::create_directories(out);

    PipelineResult result;
    result.out_dir = config.out_dir;

    nlohmann::ordered_json meta;
    meta["config"] = config_echo(config);
    write_text(out / "run_meta.json", meta.dump(2) + "\n");

    std::vector<TraceSet> left_traces, right_traces;
    const SubjectManifest* manifest = nullptr;
    SubjectManifest manifest_storage;

    if (!config.subject.empty()) {
        const SubjectPair& subject = subject_by_name(config.subject);
        for (const auto& tag : {config.left_version, config.right_version}) {
            if (!subject.versions.count(tag)) {
                throw ConfigError("subject '" + subject.name + "' has no version '" +
                                  tag + "'");
            }
        }
        manifest_storage = build_manifest(subject);
        manifest = &manifest_storage;
        write_manifest((out / "subjects.json").string(), {manifest_storage});
        fs::create_directories(out / "sources");
        write_text(out / "sources" / subject.source_name, subject.source_text);

        // Stage: fuzz the right-hand version, keep non-crashing inputs.
        Corpus corpus =
            fuzz_campaign(subject, config.right_version, config.fuzz_budget, config.seed);
        write_corpus((out / "corpus").string(), corpus);

        // Stage: trace both versions on the shared corpus.
        left_traces = trace_corpus(subject, config.left_version, corpus, Version::kClean);
        right_traces =
            trace_corpus(subject, config.right_version, corpus, Version::kBuggy);
        write_trace_file((out / "traces_clean.txt").string(), left_traces);
        write_trace_file((out / "traces_buggy.txt").string(), right_traces);
    } else {
        left_traces = parse_trace_file(config.traces_left);
        right_traces = parse_trace_file(config.traces_right);
        write_trace_file((out / "traces_clean.txt").string(), left_traces);
        write_trace_file((out / "traces_buggy.txt").string(), right_traces);
    }

    // Stage: sample + mine.
    const auto left_sets = mine_trace_sets(left_traces, config.trace_cap, config.seed,
                                           config.mining_timeout_s);
    const auto right_sets = mine_trace_sets(right_traces, config.trace_cap, config.seed,
                                            config.mining_timeout_s);
    write_invariant_file((out / "invariants_clean.txt").string(), left_sets);
    write_invariant_file((out / "invariants_buggy.txt").string(), right_sets);

    // Stage: diff.
    result.distances = diff_invariant_sets(left_sets, right_sets);
    write_distances_csv((out / "distances.csv").string(), result.distances);

    // Stage: analyze.
    std::vector<std::string> declared;
    if (manifest) {
        for (const auto& bp : manifest->breakpoints) declared.push_back(bp.id);
    }
    result.reports = analyze_distances(result.distances, config.flag_config(), declared);
    write_analysis(config.out_dir, result.reports);

    if (manifest) {
        // Stage: group.
        std::vector<std::pair<std::string, std::string>> edges_override;
        const std::vector<std::pair<std::string, std::string>>* edges_ptr = nullptr;
        if (!config.edges_csv.empty()) {
            edges_override = parse_edges_csv(config.edges_csv);
            edges_ptr = &edges_override;
        }
        result.verdicts = group_reports(*manifest, result.reports, edges_ptr);

        nlohmann::ordered_json gj;
        gj["groups"] = nlohmann::ordered_json::array();
        for (const auto& g : result.verdicts.groups) {
            gj["groups"].push_back(nlohmann::ordered_json{
                {"group_id", g.group_id},
                {"members", g.members},
                {"flagged", g.flagged},
                {"contains_buggy", g.contains_buggy},
                {"false_alarm", g.flagged && !g.contains_buggy}});
        }
        gj["summary"] = nlohmann::ordered_json{
            {"flagged_groups", result.verdicts.flagged_groups},
            {"detected_groups", result.verdicts.detected_groups},
            {"grouped_false_alarms", result.verdicts.grouped_false_alarms},
            {"ungrouped_false_alarms", result.verdicts.ungrouped_false_alarms},
            {"ungrouped_detections", result.verdicts.ungrouped_detections}};
        write_text(out / "groups.json", gj.dump(2) + "\n");

        // Stage: evaluate.
        std::vector<Warning> warnings;
        if (!config.warnings_csv.empty()) {
            warnings = parse_warnings_csv(config.warnings_csv);
        }
        const auto outcomes = evaluate_subject(*manifest, result.reports, warnings);
        result.summary = summarize(outcomes);
        write_text(out / "evaluation_summary.csv", summary_csv(result.summary));

        nlohmann::ordered_json ej;
        ej["outcomes"] = nlohmann::ordered_json::array();
        for (const auto& o : outcomes) {
            ej["outcomes"].push_back(nlohmann::ordered_json{{"bug", o.bug},
                                                            {"tool", o.tool},
                                                            {"level", to_string(o.level)},
                                                            {"detected", o.detected},
                                                            {"false_alarm", o.false_alarm},
                                                            {"unmapped", o.unmapped}});
        }
        ej["summary"] = nlohmann::ordered_json::array();
        for (const auto& row : result.summary) {
            ej["summary"].push_back(nlohmann::ordered_json{
                {"tool", row.tool},
                {"level", to_string(row.level)},
                {"detected_pct", row.detected_pct},
                {"false_alarm_pct", row.false_alarm_pct},
                {"n_bugs", row.n_bugs}});
        }
        write_text(out / "evaluation.json", ej.dump(2) + "\n");
    }

    return result;
}

}  // namespace invdiff
