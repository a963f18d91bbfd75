#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invdiff/subjects.hpp"

namespace invdiff {

enum class CorpusOrigin { kGenerated, kImported };

std::string to_string(CorpusOrigin o);

struct CorpusEntry {
    std::string input_id;
    std::vector<std::uint8_t> bytes;
};

// A set of non-crashing inputs for one subject version. Generated corpora
// guarantee the no-crash property on the version they were collected from;
// imported ones only after filter_non_crashing.
struct Corpus {
    std::vector<CorpusEntry> entries;
    CorpusOrigin origin = CorpusOrigin::kGenerated;
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    std::uint64_t crashes_seen = 0;  // discarded along the way, logged only
};

// Minimal coverage-guided mutational loop. The subject's seed inputs are
// ingested first (not counted against the budget); each budget iteration
// mutates a queue entry and keeps the result when it runs without crashing
// and its coverage signature (branch probes plus bucketed round counts per
// breakpoint) has not been seen before. Deterministic given the seed;
// single-threaded by design.
Corpus fuzz_campaign(const SubjectPair& subject, const std::string& version_tag,
                     std::uint64_t budget, std::uint64_t seed);

// One entry per regular file (input_id = filename, sorted). Unreadable
// files are skipped with a warning on stderr. Duplicate contents are kept
// unless dedup is set.
Corpus import_corpus(const std::string& dir, bool dedup = false);

// Re-executes every entry and keeps only outcome=ok.
Corpus filter_non_crashing(const Corpus& corpus, const SubjectPair& subject,
                           const std::string& version_tag);

// Directory layout: one raw file per input plus corpus.meta.json.
void write_corpus(const std::string& dir, const Corpus& corpus);

// Coverage signature helpers (exposed for tests).
int round_count_bucket(std::size_t rounds);
std::string coverage_signature(const SubjectRun& run);

}  // namespace invdiff
