#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronotopics/corpus.hpp"
#include "chronotopics/sampler.hpp"

namespace chronotopics {

struct SummaryConfig {
    std::size_t docs_per_topic = 200;
    std::size_t sentences_per_topic = 8;
    double similarity_threshold = 0.70;
    bool length_normalize = false;
    std::uint64_t seed = 1;
    std::size_t keywords = 10;

    void validate() const;
};

/// Jaro similarity with the Winkler prefix boost (scale 0.1, prefix up to 4),
/// over Unicode code points.
double jaro_winkler(std::u32string_view a, std::u32string_view b);
double jaro_winkler(std::string_view a, std::string_view b);

/// Draws `config.docs_per_topic` documents with replacement: a time category
/// with probability psi[z][k], then a document of that category with
/// probability theta[d][z]. Categories without documents are redrawn. Without
/// psi the documents are drawn from theta[., z] directly.
std::vector<std::size_t> sample_documents(const Posterior& posterior, const Corpus& corpus, std::size_t topic,
                                          const SummaryConfig& config);

/// Sum of phi[z][w] over the in-vocabulary tokens, optionally divided by the
/// token count.
double score_sentence(std::span<const WordId> tokens, std::span<const double> phi_row, bool length_normalize);

struct SentenceRef {
    std::size_t doc = 0;
    std::size_t index = 0;  // sentence index within the document
};

struct CandidateSentence {
    SentenceRef ref;
    std::string text;
    EpochSeconds timestamp = 0;
};

/// Greedy near-duplicate removal over time-ordered sentences. A sentence
/// whose similarity to one or more retained sentences exceeds `threshold`
/// replaces them when it is strictly longer than all of them and is dropped
/// otherwise. Similarity is computed on lowercased, whitespace-collapsed text.
/// Returns retained positions into `sentences`, in input order.
std::vector<std::size_t> dedup(std::span<const CandidateSentence> sentences, double threshold);

struct SummaryEntry {
    std::string text;
    EpochSeconds timestamp = 0;
    double score = 0.0;
    SentenceRef ref;
};

struct NarrativeSummary {
    std::size_t topic = 0;
    std::vector<std::string> keywords;
    std::vector<SummaryEntry> entries;  // ascending timestamp
    std::size_t requested = 0;
    bool short_of_request = false;
};

NarrativeSummary summarize_topic(const Posterior& posterior, const Corpus& corpus, std::size_t topic,
                                 const SummaryConfig& config);

std::vector<NarrativeSummary> summarize(const Posterior& posterior, const Corpus& corpus, const SummaryConfig& config);

}  // namespace chronotopics
