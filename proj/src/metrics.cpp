#include "chronotopics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chronotopics {

DocumentIndex::DocumentIndex(const Corpus& corpus) : num_docs_(corpus.num_docs()), postings_(corpus.vocab_size()) {
    for (const Document& d : corpus.docs)
        for (WordId w : d.tokens) {
            auto& p = postings_[w];
            if (p.empty() || p.back() != d.id) p.push_back(static_cast<std::uint32_t>(d.id));
        }
}

std::size_t DocumentIndex::co_doc_count(WordId a, WordId b) const {
    const auto& pa = postings_[a];
    const auto& pb = postings_[b];
    std::size_t i = 0, j = 0, n = 0;
    while (i < pa.size() && j < pb.size()) {
        if (pa[i] < pb[j]) ++i;
        else if (pb[j] < pa[i]) ++j;
        else ++n, ++i, ++j;
    }
    return n;
}

std::vector<WordId> top_words(std::span<const double> phi_row, std::size_t k) {
    std::vector<WordId> ids(phi_row.size());
    std::iota(ids.begin(), ids.end(), WordId{0});
    k = std::min(k, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(), [&](WordId a, WordId b) {
        return phi_row[a] != phi_row[b] ? phi_row[a] > phi_row[b] : a < b;
    });
    ids.resize(k);
    return ids;
}

double coherence_of_words(std::span<const WordId> words, const DocumentIndex& index, bool add_one) {
    const std::size_t K = words.size();
    if (K < 2) throw std::invalid_argument("coherence needs at least two words");
    const double D = static_cast<double>(index.num_docs());
    double total = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
        const double dj = static_cast<double>(index.doc_count(words[j]));
        if (dj == 0.0) continue;
        for (std::size_t k = j + 1; k < K; ++k) {
            const double dk = static_cast<double>(index.doc_count(words[k]));
            if (dk == 0.0) continue;
            double joint = static_cast<double>(index.co_doc_count(words[j], words[k]));
            if (add_one) joint += 1.0;
            if (joint == 0.0) continue;
            // ln[(joint/D) / ((dj/D)(dk/D))]
            total += std::log(joint * D / (dj * dk));
        }
    }
    return 2.0 * total / (static_cast<double>(K) * static_cast<double>(K - 1));
}

double coherence(std::span<const double> phi_row, const DocumentIndex& index, const CoherenceOptions& options) {
    if (options.k_words < 2) throw std::invalid_argument("k_words must be at least 2");
    if (options.k_words > phi_row.size()) throw std::invalid_argument("k_words exceeds vocabulary size");
    const auto words = top_words(phi_row, options.k_words);
    return coherence_of_words(words, index, options.add_one);
}

CoherenceReport coherence_report(const Matrix& phi, const DocumentIndex& index, const CoherenceOptions& options) {
    CoherenceReport report;
    report.k_words = options.k_words;
    for (std::size_t t = 0; t < phi.rows(); ++t) report.per_topic.push_back(coherence(phi.row(t), index, options));
    if (!report.per_topic.empty())
        report.mean = std::accumulate(report.per_topic.begin(), report.per_topic.end(), 0.0) /
                      static_cast<double>(report.per_topic.size());
    return report;
}

double entropy(std::span<const double> dist) {
    double sum = 0.0, h = 0.0;
    for (double p : dist) {
        if (p < 0.0 || !std::isfinite(p)) throw std::invalid_argument("distribution has a negative or non-finite entry");
        sum += p;
        if (p > 0.0) h -= p * std::log2(p);
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("distribution does not sum to one");
    return std::max(0.0, h);
}

double sdt(double h, double h_max, double gamma) {
    constexpr double tol = 1e-9;
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
    if (!(h >= -tol && h <= h_max + tol)) throw std::invalid_argument("entropy outside [0, H_max]");
    h = std::clamp(h, 0.0, h_max);
    // std::pow(0, 0) == 1, which is the convention wanted at the boundaries.
    return std::pow(h, gamma) * std::pow(h_max - h, 1.0 - gamma);
}

SdtReport sdt_report(const Matrix& psi, std::span<const double> gammas) {
    SdtReport r;
    r.gammas.assign(gammas.begin(), gammas.end());
    r.h_max = std::log2(static_cast<double>(psi.cols()));
    for (std::size_t t = 0; t < psi.rows(); ++t) {
        const double h = std::min(entropy(psi.row(t)), r.h_max);
        r.entropy.push_back(h);
        std::vector<double> row;
        for (double g : gammas) row.push_back(sdt(h, r.h_max, g));
        r.score.push_back(std::move(row));
    }
    for (std::size_t g = 0; g < gammas.size(); ++g) {
        double top = -1.0;
        for (std::size_t t = 0; t < r.score.size(); ++t) top = std::max(top, r.score[t][g]);
        std::vector<std::size_t> best;
        for (std::size_t t = 0; t < r.score.size(); ++t)
            if (std::abs(r.score[t][g] - top) <= 1e-12 * std::max(1.0, top)) best.push_back(t);
        r.best.push_back(std::move(best));
    }
    return r;
}

}  // namespace chronotopics
