#include "invdiff/fuzzer.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "invdiff/errors.hpp"
#include "invdiff/numeric.hpp"

#include "json.hpp"

namespace fs = std::filesystem;

namespace invdiff {

std::string to_string(CorpusOrigin o) {
    return o == CorpusOrigin::kGenerated ? "generated" : "imported";
}

int round_count_bucket(std::size_t rounds) {
    if (rounds <= 3) return static_cast<int>(rounds);
    if (rounds <= 7) return 4;
    if (rounds <= 15) return 5;
    if (rounds <= 31) return 6;
    if (rounds <= 63) return 7;
    if (rounds <= 127) return 8;
    return 9;
}

std::string coverage_signature(const SubjectRun& run) {
    std::set<std::string> parts(run.branches.begin(), run.branches.end());
    for (const auto& t : run.traces) {
        parts.insert("bp:" + t.breakpoint_id + ":" +
                     std::to_string(round_count_bucket(t.rows.size())));
    }
    std::string sig;
    for (const auto& p : parts) {
        sig += p;
        sig += '|';
    }
    return sig;
}

namespace {

constexpr std::size_t kMaxInputSize = 256;

std::vector<std::uint8_t> mutate(const std::vector<std::uint8_t>& base, Rng& rng) {
    std::vector<std::uint8_t> out = base;
    if (out.empty()) out.push_back(static_cast<std::uint8_t>(rng.below(256)));

    switch (rng.below(6)) {
        case 0: {  // bit flip
            const std::size_t pos = rng.below(out.size());
            out[pos] ^= static_cast<std::uint8_t>(1u << rng.below(8));
            break;
        }
        case 1: {  // byte substitution
            out[rng.below(out.size())] = static_cast<std::uint8_t>(rng.below(256));
            break;
        }
        case 2: {  // block duplication
            const std::size_t begin = rng.below(out.size());
            const std::size_t len =
                1 + rng.below(std::min<std::size_t>(out.size() - begin, 8));
            std::vector<std::uint8_t> block(out.begin() + begin,
                                            out.begin() + begin + len);
            const std::size_t at = rng.below(out.size() + 1);
            out.insert(out.begin() + at, block.begin(), block.end());
            break;
        }
        case 3: {  // block deletion
            if (out.size() > 1) {
                const std::size_t begin = rng.below(out.size());
                const std::size_t len =
                    1 + rng.below(std::min<std::size_t>(out.size() - begin, 8));
                out.erase(out.begin() + begin, out.begin() + begin + len);
            }
            break;
        }
        case 4: {  // length +1
            const std::size_t at = rng.below(out.size() + 1);
            out.insert(out.begin() + at, static_cast<std::uint8_t>(rng.below(256)));
            break;
        }
        default: {  // length -1
            if (out.size() > 1) out.pop_back();
            break;
        }
    }
    if (out.size() > kMaxInputSize) out.resize(kMaxInputSize);
    return out;
}

std::string gen_id(std::uint64_t k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "gen_%06llu", static_cast<unsigned long long>(k));
    return buf;
}

}  // namespace

Corpus fuzz_campaign(const SubjectPair& subject, const std::string& version_tag,
                     std::uint64_t budget, std::uint64_t seed) {
    if (budget < 1) throw UsageError("fuzz budget must be >= 1");

    Corpus corpus;
    corpus.origin = CorpusOrigin::kGenerated;
    corpus.seed = seed;
    corpus.budget = budget;

    Rng rng(seed);
    std::set<std::string> seen;
    std::vector<std::vector<std::uint8_t>> queue;

    auto consider = [&](const std::vector<std::uint8_t>& bytes,
                        const std::string& id) {
        SubjectRun run = run_subject(subject, version_tag, bytes, Version::kBuggy, "probe");
        if (run.outcome == Outcome::kCrash) {
            ++corpus.crashes_seen;
            return;
        }
        const std::string sig = coverage_signature(run);
        if (!seen.insert(sig).second) return;
        corpus.entries.push_back({id, bytes});
        queue.push_back(bytes);
    };

    std::size_t seed_no = 0;
    for (const auto& bytes : subject.seed_inputs) {
        consider(bytes, "seed_" + std::to_string(seed_no++));
    }

    for (std::uint64_t it = 0; it < budget; ++it) {
        std::vector<std::uint8_t> base;
        if (!queue.empty()) {
            base = queue[rng.below(queue.size())];
        }
        consider(mutate(base, rng), gen_id(it));
    }
    return corpus;
}

Corpus import_corpus(const std::string& dir, bool dedup) {
    Corpus corpus;
    corpus.origin = CorpusOrigin::kImported;
    if (!fs::is_directory(dir)) {
        throw ConfigError("corpus directory '" + dir + "' does not exist");
    }

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name == "corpus.meta.json") continue;
        names.push_back(name);
    }
    std::sort(names.begin(), names.end());

    std::set<std::vector<std::uint8_t>> contents;
    for (const auto& name : names) {
        std::ifstream in(fs::path(dir) / name, std::ios::binary);
        if (!in) {
            std::cerr << "warning: skipping unreadable corpus file '" << name << "'\n";
            continue;
        }
        std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
        if (in.bad()) {
            std::cerr << "warning: skipping unreadable corpus file '" << name << "'\n";
            continue;
        }
        if (dedup && !contents.insert(bytes).second) continue;
        corpus.entries.push_back({name, std::move(bytes)});
    }
    return corpus;
}

Corpus filter_non_crashing(const Corpus& corpus, const SubjectPair& subject,
                           const std::string& version_tag) {
    Corpus out;
    out.origin = corpus.origin;
    out.seed = corpus.seed;
    out.budget = corpus.budget;
    out.crashes_seen = corpus.crashes_seen;
    for (const auto& entry : corpus.entries) {
        SubjectRun run =
            run_subject(subject, version_tag, entry.bytes, Version::kBuggy, "probe");
        if (run.outcome == Outcome::kOk) {
            out.entries.push_back(entry);
        } else {
            ++out.crashes_seen;
        }
    }
    if (!corpus.entries.empty() && out.entries.empty()) {
        std::cerr << "warning: every corpus entry crashes this version\n";
    }
    return out;
}

void write_corpus(const std::string& dir, const Corpus& corpus) {
    fs::create_directories(dir);
    for (const auto& entry : corpus.entries) {
        std::ofstream out(fs::path(dir) / entry.input_id, std::ios::binary);
        if (!out) throw Error("cannot write corpus file '" + entry.input_id + "'");
        out.write(reinterpret_cast<const char*>(entry.bytes.data()),
                  static_cast<std::streamsize>(entry.bytes.size()));
    }
    nlohmann::ordered_json meta;
    meta["origin"] = to_string(corpus.origin);
    meta["seed"] = corpus.seed;
    meta["budget"] = corpus.budget;
    meta["entries"] = corpus.entries.size();
    meta["crashes_seen"] = corpus.crashes_seen;
    std::ofstream out(fs::path(dir) / "corpus.meta.json", std::ios::binary);
    out << meta.dump(2) << '\n';
}

}  // namespace invdiff
