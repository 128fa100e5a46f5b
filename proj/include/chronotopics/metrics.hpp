#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chronotopics/corpus.hpp"
#include "chronotopics/matrix.hpp"

namespace chronotopics {

/// Sorted document postings per word, for document (co-)occurrence counts.
class DocumentIndex {
public:
    explicit DocumentIndex(const Corpus& corpus);

    std::size_t num_docs() const { return num_docs_; }
    std::size_t doc_count(WordId w) const { return postings_[w].size(); }
    std::size_t co_doc_count(WordId a, WordId b) const;

private:
    std::size_t num_docs_ = 0;
    std::vector<std::vector<std::uint32_t>> postings_;
};

/// Indices of the `k` largest entries, descending; ties go to the lower index.
std::vector<WordId> top_words(std::span<const double> phi_row, std::size_t k);

struct CoherenceOptions {
    std::size_t k_words = 500;
    bool add_one = true;  // add-one smoothing on joint document counts
};

/// Mean pairwise PMI (natural log) over the topic's top words:
///   2 / (K (K - 1)) * sum_{j<k} ln[ p(w_j, w_k) / (p(w_j) p(w_k)) ]
/// with document-level probabilities. A pair whose joint count is zero with
/// smoothing off, or whose word never occurs, contributes 0.
/// Throws std::invalid_argument when k_words < 2 or k_words > V.
double coherence(std::span<const double> phi_row, const DocumentIndex& index, const CoherenceOptions& options = {});

/// Same, for an explicit word list.
double coherence_of_words(std::span<const WordId> words, const DocumentIndex& index, bool add_one = true);

struct CoherenceReport {
    std::vector<double> per_topic;
    std::size_t k_words = 0;
    double mean = 0.0;
};

CoherenceReport coherence_report(const Matrix& phi, const DocumentIndex& index, const CoherenceOptions& options = {});

/// Shannon entropy in bits with 0 log 0 = 0. Throws std::invalid_argument for
/// negative entries or a sum further than 1e-9 from one.
double entropy(std::span<const double> dist);

/// H^gamma (H_max - H)^(1 - gamma) with 0^0 = 1. Throws std::invalid_argument
/// when H is outside [0, H_max] or gamma outside [0, 1].
double sdt(double h, double h_max, double gamma);

struct SdtReport {
    std::vector<double> gammas;
    std::vector<double> entropy;             // per topic, bits
    double h_max = 0.0;                      // log2 K
    std::vector<std::vector<double>> score;  // score[topic][gamma index]
    std::vector<std::vector<std::size_t>> best;  // per gamma: all topics tied at the max
};

inline const std::vector<double> kDefaultGammas{0.0, 0.4, 0.7, 1.0};

SdtReport sdt_report(const Matrix& psi, std::span<const double> gammas = kDefaultGammas);

}  // namespace chronotopics
