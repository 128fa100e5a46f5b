#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "chronotopics/text.hpp"
#include "chronotopics/timeutil.hpp"

namespace chronotopics {

using WordId = std::uint32_t;

/// Fatal data problem (unreadable input, empty corpus, malformed corpus dir).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RawRecord {
    std::string id;
    std::string text;
    EpochSeconds timestamp = 0;
    std::optional<std::string> cascade_id;
    std::optional<std::string> parent_id;
};

struct IngestConfig {
    std::optional<EpochSeconds> window_begin;  // inclusive
    std::optional<EpochSeconds> window_end;    // exclusive
};

struct IngestResult {
    std::vector<RawRecord> records;
    std::size_t skipped = 0;
    std::vector<std::string> diagnostics;  // one per skipped line
};

/// Reads line-delimited JSON records. Lines that fail validation (bad JSON,
/// missing fields, duplicate id, outside the window) are skipped and counted.
IngestResult ingest(const std::filesystem::path& path, const IngestConfig& config = {});

struct SentenceDraft {
    std::string text;
    EpochSeconds timestamp = 0;
};

/// One cascade's records for one calendar day, in conversation order.
struct PseudoDocument {
    std::string cascade;  // cascade id, or the record id for singletons
    EpochSeconds day = 0; // midnight UTC
    std::string text;     // record texts joined with newlines
    std::vector<SentenceDraft> sentences;
};

/// Groups records by (cascade, UTC day). Records without a cascade id are
/// their own cascade. Within a group records are ordered by (timestamp, id);
/// groups are returned ordered by (day, cascade).
std::vector<PseudoDocument> aggregate_cascades(std::vector<RawRecord> records);

struct TokenizedSentence {
    std::string text;
    EpochSeconds timestamp = 0;
    std::vector<std::string> tokens;
};

struct TokenizedDocument {
    EpochSeconds timestamp = 0;
    std::vector<TokenizedSentence> sentences;
};

/// Half-open time slices [origin + k*width, origin + (k+1)*width).
struct TimeGrid {
    EpochSeconds origin = 0;
    EpochSeconds width = 14 * kSecondsPerDay;
    std::size_t slices = 1;

    /// Grid anchored at the earliest instant's UTC midnight that covers
    /// every instant in [earliest, latest].
    static TimeGrid covering(EpochSeconds earliest, EpochSeconds latest, EpochSeconds width);

    bool contains(EpochSeconds t) const {
        return t >= origin && t < origin + static_cast<EpochSeconds>(slices) * width;
    }
    /// Category of t; throws std::out_of_range when t is not covered.
    std::size_t category(EpochSeconds t) const;

    bool operator==(const TimeGrid&) const = default;
};

class Vocabulary {
public:
    /// Id of `term`, inserting it when new.
    WordId intern(const std::string& term);
    std::optional<WordId> find(const std::string& term) const;
    const std::string& term(WordId id) const { return terms_.at(id); }
    std::size_t size() const { return terms_.size(); }
    const std::vector<std::string>& terms() const { return terms_; }

    std::vector<std::size_t> doc_frequency;  // indexed by WordId

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, WordId> ids_;
};

struct Sentence {
    std::string text;
    EpochSeconds timestamp = 0;
    std::size_t begin = 0;  // token range [begin, end) in the document
    std::size_t end = 0;
};

struct Document {
    std::size_t id = 0;
    EpochSeconds timestamp = 0;  // day resolution
    std::size_t time_category = 0;
    std::vector<WordId> tokens;
    std::vector<Sentence> sentences;
};

/// Immutable once built: documents, vocabulary and time grid.
struct Corpus {
    Vocabulary vocab;
    std::vector<Document> docs;
    TimeGrid grid;

    std::size_t num_docs() const { return docs.size(); }
    std::size_t vocab_size() const { return vocab.size(); }
    std::size_t num_slices() const { return grid.slices; }
    std::size_t total_tokens() const;
    /// Token count per time category.
    std::vector<std::size_t> tokens_per_slice() const;
    /// Doc ids per time category.
    std::vector<std::vector<std::size_t>> docs_per_slice() const;
    /// Recomputes vocab.doc_frequency from the documents.
    void recount_doc_frequency();
};

/// Drops documents with fewer than `min_tokens` tokens, interns terms in
/// first-occurrence order over the retained documents, and assigns time
/// categories. Throws DataError("empty corpus") when nothing survives and
/// std::out_of_range when `grid` misses a document.
Corpus build_corpus(const std::vector<TokenizedDocument>& docs, const TimeGrid& grid,
                    std::size_t min_tokens = 3);

struct PipelineConfig {
    IngestConfig ingest;
    CleanConfig clean;
    EntityFilterConfig entities;
    bool language_filter = false;
    double min_function_word_ratio = 0.2;
    EpochSeconds slice_width = 14 * kSecondsPerDay;
    std::size_t min_doc_tokens = 3;
};

struct PipelineStats {
    std::size_t records_read = 0;
    std::size_t records_skipped = 0;
    std::size_t records_non_english = 0;
    std::size_t pseudo_docs = 0;
    std::size_t dropped_no_entity = 0;
    std::size_t dropped_short = 0;
    std::size_t docs_kept = 0;
};

/// Records -> language filter -> cascades -> entity filter -> tokens -> corpus.
Corpus corpus_from_records(std::vector<RawRecord> records, const PipelineConfig& config,
                           PipelineStats* stats = nullptr);

/// Writes vocab.txt, docs.txt, sentences.txt and grid.meta into `dir`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus read_corpus(const std::filesystem::path& dir);

}  // namespace chronotopics
