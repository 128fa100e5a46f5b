#include "chronotopics/summarizer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "chronotopics/metrics.hpp"
#include "chronotopics/text.hpp"

namespace chronotopics {

void SummaryConfig::validate() const {
    if (docs_per_topic < 1) throw std::invalid_argument("docs per topic must be at least 1");
    if (sentences_per_topic < 1) throw std::invalid_argument("sentences per topic must be at least 1");
    if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0))
        throw std::invalid_argument("similarity threshold must lie in (0, 1]");
}

double jaro_winkler(std::u32string_view a, std::u32string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    if (a == b) return 1.0;

    const std::size_t la = a.size(), lb = b.size();
    const std::size_t window = std::max(la, lb) / 2 > 0 ? std::max(la, lb) / 2 - 1 : 0;
    std::vector<char> used_a(la, 0), used_b(lb, 0);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < la; ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(lb, i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (used_b[j] || a[i] != b[j]) continue;
            used_a[i] = used_b[j] = 1;
            ++matches;
            break;
        }
    }
    if (matches == 0) return 0.0;

    std::size_t half_transpositions = 0;
    for (std::size_t i = 0, j = 0; i < la; ++i) {
        if (!used_a[i]) continue;
        while (!used_b[j]) ++j;
        if (a[i] != b[j]) ++half_transpositions;
        ++j;
    }
    const double m = static_cast<double>(matches);
    const double t = static_cast<double>(half_transpositions / 2);
    const double jaro = (m / static_cast<double>(la) + m / static_cast<double>(lb) + (m - t) / m) / 3.0;

    std::size_t prefix = 0;
    while (prefix < 4 && prefix < la && prefix < lb && a[prefix] == b[prefix]) ++prefix;
    return jaro + static_cast<double>(prefix) * 0.1 * (1.0 - jaro);
}

double jaro_winkler(std::string_view a, std::string_view b) { return jaro_winkler(decode_utf8(a), decode_utf8(b)); }

std::vector<std::size_t> sample_documents(const Posterior& posterior, const Corpus& corpus, std::size_t topic,
                                          const SummaryConfig& config) {
    Rng rng(config.seed ^ (0x9E3779B97F4A7C15ULL * (topic + 1)));
    std::vector<std::size_t> out;
    out.reserve(config.docs_per_topic);

    auto theta_weights = [&](const std::vector<std::size_t>& docs) {
        std::vector<double> w(docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) w[i] = posterior.theta(docs[i], topic);
        return w;
    };

    if (!posterior.psi) {
        std::vector<std::size_t> all(corpus.num_docs());
        for (std::size_t d = 0; d < all.size(); ++d) all[d] = d;
        const auto w = theta_weights(all);
        for (std::size_t n = 0; n < config.docs_per_topic; ++n) out.push_back(all[rng.categorical(w)]);
        return out;
    }

    const auto by_slice = corpus.docs_per_slice();
    const auto psi_row = posterior.psi->row(topic);
    std::vector<double> slice_weight(psi_row.begin(), psi_row.end());
    std::vector<std::vector<double>> doc_weight(by_slice.size());
    double reachable = 0.0;
    for (std::size_t k = 0; k < by_slice.size(); ++k) {
        doc_weight[k] = theta_weights(by_slice[k]);
        if (!by_slice[k].empty()) reachable += slice_weight[k];
    }
    if (!(reachable > 0.0)) throw std::runtime_error("no time category with documents has positive psi mass");

    for (std::size_t n = 0; n < config.docs_per_topic; ++n) {
        std::size_t k;
        do {
            k = rng.categorical(slice_weight);
        } while (by_slice[k].empty());
        out.push_back(by_slice[k][rng.categorical(doc_weight[k])]);
    }
    return out;
}

double score_sentence(std::span<const WordId> tokens, std::span<const double> phi_row, bool length_normalize) {
    double score = 0.0;
    std::size_t counted = 0;
    for (WordId w : tokens) {
        if (w >= phi_row.size()) continue;
        score += phi_row[w];
        ++counted;
    }
    if (length_normalize && counted > 0) score /= static_cast<double>(counted);
    return score;
}

std::vector<std::size_t> dedup(std::span<const CandidateSentence> sentences, double threshold) {
    std::vector<std::u32string> norm(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i)
        norm[i] = decode_utf8(normalize_for_similarity(sentences[i].text));

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        std::vector<std::size_t> similar;  // positions within `kept`
        bool longest = true;
        for (std::size_t r = 0; r < kept.size(); ++r) {
            if (jaro_winkler(norm[i], norm[kept[r]]) > threshold) {
                similar.push_back(r);
                if (norm[kept[r]].size() >= norm[i].size()) longest = false;
            }
        }
        if (similar.empty()) {
            kept.push_back(i);
        } else if (longest) {
            for (auto it = similar.rbegin(); it != similar.rend(); ++it)
                kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(*it));
            kept.push_back(i);
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

NarrativeSummary summarize_topic(const Posterior& posterior, const Corpus& corpus, std::size_t topic,
                                 const SummaryConfig& config) {
    config.validate();
    NarrativeSummary summary;
    summary.topic = topic;
    summary.requested = config.sentences_per_topic;
    const auto phi_row = posterior.phi.row(topic);
    for (WordId w : top_words(phi_row, config.keywords)) summary.keywords.push_back(corpus.vocab.term(w));

    const auto sampled = sample_documents(posterior, corpus, topic, config);
    const std::set<std::size_t> docs(sampled.begin(), sampled.end());

    std::vector<CandidateSentence> pool;
    for (std::size_t d : docs)
        for (std::size_t j = 0; j < corpus.docs[d].sentences.size(); ++j) {
            const Sentence& s = corpus.docs[d].sentences[j];
            if (s.end > s.begin) pool.push_back({{d, j}, s.text, s.timestamp});
        }
    auto chronological = [](const auto& a, const auto& b) {
        return std::tie(a.timestamp, a.ref.doc, a.ref.index) < std::tie(b.timestamp, b.ref.doc, b.ref.index);
    };
    std::sort(pool.begin(), pool.end(), chronological);

    std::vector<SummaryEntry> ranked;
    for (std::size_t i : dedup(pool, config.similarity_threshold)) {
        const CandidateSentence& c = pool[i];
        const Sentence& s = corpus.docs[c.ref.doc].sentences[c.ref.index];
        const std::span<const WordId> tokens(corpus.docs[c.ref.doc].tokens.data() + s.begin, s.end - s.begin);
        ranked.push_back({c.text, c.timestamp, score_sentence(tokens, phi_row, config.length_normalize), c.ref});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [&](const SummaryEntry& a, const SummaryEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return chronological(a, b);
    });
    if (ranked.size() > config.sentences_per_topic) ranked.resize(config.sentences_per_topic);
    std::sort(ranked.begin(), ranked.end(), chronological);

    summary.short_of_request = ranked.size() < config.sentences_per_topic;
    summary.entries = std::move(ranked);
    return summary;
}

std::vector<NarrativeSummary> summarize(const Posterior& posterior, const Corpus& corpus, const SummaryConfig& config) {
    std::vector<NarrativeSummary> out;
    for (std::size_t t = 0; t < posterior.phi.rows(); ++t) out.push_back(summarize_topic(posterior, corpus, t, config));
    return out;
}

}  // namespace chronotopics
