#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chronotopics/corpus.hpp"
#include "chronotopics/matrix.hpp"
#include "chronotopics/random.hpp"

namespace chronotopics {

enum class PsiInit { random, activity };
enum class Estimate { last_sweep, average };

struct NocConfig {
    std::size_t topics = 5;
    double alpha = 1.0;
    double beta = 0.5;
    std::size_t sweeps = 500;
    std::size_t burn_in = 300;
    std::uint64_t seed = 1;
    PsiInit psi_init = PsiInit::random;
    std::optional<double> psi_smoothing;  // unset: 1e-3 / K
    Estimate estimate = Estimate::last_sweep;
    bool time_factor = true;  // multiply the conditional by psi[z][k(d)]
    bool update_psi = true;   // re-estimate psi from the counts after every sweep

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
    double smoothing(std::size_t slices) const {
        return psi_smoothing ? *psi_smoothing : 1e-3 / static_cast<double>(slices);
    }
};

/// Topic assignments and the count tables derived from them. All counts are
/// kept exactly consistent with `z` at sweep boundaries.
struct ModelState {
    std::size_t topics = 0, vocab = 0, docs = 0, slices = 0;

    std::vector<std::vector<std::uint32_t>> z;  // z[d][i]
    std::vector<std::int32_t> word_topic;       // V x T, word-major
    std::vector<std::int32_t> doc_topic;        // D x T
    std::vector<std::int32_t> topic_total;      // T
    std::vector<std::int32_t> topic_time;       // T x K
    Matrix psi;                                 // T x K time factor in use
    Rng rng;

    std::int32_t n_zv(std::size_t topic, std::size_t word) const { return word_topic[word * topics + topic]; }
    std::int32_t m_dz(std::size_t doc, std::size_t topic) const { return doc_topic[doc * topics + topic]; }
    std::int32_t n_z(std::size_t topic) const { return topic_total[topic]; }
    std::int32_t tau_zk(std::size_t topic, std::size_t slice) const { return topic_time[topic * slices + slice]; }

    /// Sizes the tables for `corpus` and fills them from `assignments`.
    void rebuild(const Corpus& corpus, std::size_t num_topics, std::vector<std::vector<std::uint32_t>> assignments);

    /// Empty string when every count identity holds, otherwise the first
    /// violation.
    std::string check_invariants(const Corpus& corpus) const;
};

struct Posterior {
    Matrix theta;               // D x T
    Matrix phi;                 // T x V
    std::optional<Matrix> psi;  // T x K; absent for LDA
};

/// Uniform-random topic per token from a generator seeded with config.seed,
/// then psi per config.psi_init.
ModelState init_state(const Corpus& corpus, const NocConfig& config);

/// Normalized corpus token histogram over time categories.
std::vector<double> activity_histogram(const Corpus& corpus);

/// Unnormalized conditional weights for one token whose own counts have
/// already been excluded. `word_topic` is that token's word row (length T).
inline void conditional_weights(std::span<const std::int32_t> doc_topic, std::span<const std::int32_t> word_topic,
                                std::span<const std::int32_t> topic_total, std::span<const double> time_weight,
                                double alpha, double beta, double vocab_beta, std::span<double> out) {
    for (std::size_t t = 0; t < out.size(); ++t)
        out[t] = (doc_topic[t] + alpha) * (word_topic[t] + beta) / (topic_total[t] + vocab_beta) * time_weight[t];
}

/// Normalized full conditional of token (d, i), evaluated with that token's
/// own assignment excluded from every count. Does not mutate the state.
std::vector<double> full_conditional(const ModelState& state, const Corpus& corpus, const NocConfig& config,
                                     std::size_t d, std::size_t i);

/// psi[z][k] = (tau[z][k] + s) / (n_z + K s); rows of empty topics (or rows
/// with a zero denominator) are uniform.
Matrix psi_from_counts(const ModelState& state, double smoothing);
void update_psi(ModelState& state, double smoothing);

/// Resamples every token once, documents and positions in index order, and
/// then re-estimates psi when config.update_psi is set.
void gibbs_sweep(ModelState& state, const Corpus& corpus, const NocConfig& config);

/// Smoothed point estimates from the current counts.
Posterior estimate_posterior(const ModelState& state, const Corpus& corpus, const NocConfig& config);

/// log P(w, z | alpha, beta) in collapsed form, without the time term.
double log_joint_words(const ModelState& state, const Corpus& corpus, double alpha, double beta);

/// log P(w, t, z | alpha, beta, psi): the word part plus sum of log psi[z][k(d)].
double log_joint(const ModelState& state, const Corpus& corpus, const NocConfig& config);

struct SweepRecord {
    std::size_t sweep = 0;  // 1-based
    double log_joint = 0.0;
    double elapsed_ms = 0.0;
};

using SweepObserver = std::function<void(const SweepRecord&)>;

struct FitDiagnostics {
    std::vector<double> log_joint;   // per sweep
    std::vector<double> elapsed_ms;  // per sweep, wall clock
};

struct FitResult {
    Posterior posterior;
    FitDiagnostics diagnostics;
    ModelState state;
};

/// init, sweeps, estimate. Deterministic in (corpus, config).
FitResult fit(const Corpus& corpus, const NocConfig& config, const SweepObserver& observer = {});

namespace detail {

/// The shared collapsed Gibbs pass. `fill_time_weights(d, out)` writes the
/// per-topic time factor for document d; it is constant within a document
/// because all tokens of a document share one timestamp.
template <class TimeWeights>
void resample_tokens(ModelState& s, const Corpus& corpus, double alpha, double beta, TimeWeights&& fill_time_weights) {
    const std::size_t T = s.topics;
    const double vocab_beta = static_cast<double>(s.vocab) * beta;
    std::vector<double> weights(T, 1.0), cumulative(T);
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
        const Document& doc = corpus.docs[d];
        const std::size_t k = doc.time_category;
        fill_time_weights(d, std::span<double>(weights));
        std::int32_t* dt = s.doc_topic.data() + d * T;
        auto& zd = s.z[d];
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            const std::size_t w = doc.tokens[i];
            std::int32_t* wt = s.word_topic.data() + w * T;
            const std::uint32_t old_topic = zd[i];
            --dt[old_topic];
            --wt[old_topic];
            --s.topic_total[old_topic];
            --s.topic_time[old_topic * s.slices + k];

            double total = 0.0;
            for (std::size_t t = 0; t < T; ++t) {
                total += (dt[t] + alpha) * (wt[t] + beta) / (s.topic_total[t] + vocab_beta) * weights[t];
                cumulative[t] = total;
            }
            const double target = s.rng.uniform() * total;
            std::uint32_t topic = 0;
            while (topic + 1 < T && cumulative[topic] <= target) ++topic;

            zd[i] = topic;
            ++dt[topic];
            ++wt[topic];
            ++s.topic_total[topic];
            ++s.topic_time[topic * s.slices + k];
        }
    }
}

/// theta and phi from the counts (shared by every model).
void estimate_theta_phi(const ModelState& s, const Corpus& corpus, double alpha, double beta, Posterior& out);

/// Element-wise running mean accumulator used by Estimate::average.
struct PosteriorAverager {
    std::size_t count = 0;
    Posterior sum;
    void add(const Posterior& p);
    Posterior mean() const;
};

}  // namespace detail

}  // namespace chronotopics
