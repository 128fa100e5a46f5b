#include "chronotopics/sampler.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace chronotopics {

void NocConfig::validate() const {
    if (topics < 2) throw std::invalid_argument("number of topics must be at least 2");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
    if (sweeps == 0) throw std::invalid_argument("sweeps must be positive");
    if (burn_in >= sweeps) throw std::invalid_argument("burn-in must be smaller than the number of sweeps");
    if (psi_smoothing && !(*psi_smoothing > 0.0)) throw std::invalid_argument("psi smoothing must be positive");
}

void ModelState::rebuild(const Corpus& corpus, std::size_t num_topics,
                         std::vector<std::vector<std::uint32_t>> assignments) {
    topics = num_topics;
    vocab = corpus.vocab_size();
    docs = corpus.num_docs();
    slices = corpus.num_slices();
    z = std::move(assignments);
    word_topic.assign(vocab * topics, 0);
    doc_topic.assign(docs * topics, 0);
    topic_total.assign(topics, 0);
    topic_time.assign(topics * slices, 0);
    if (z.size() != docs) throw std::invalid_argument("assignment table does not match corpus");
    for (std::size_t d = 0; d < docs; ++d) {
        const Document& doc = corpus.docs[d];
        if (z[d].size() != doc.tokens.size()) throw std::invalid_argument("assignment row does not match document");
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            const std::uint32_t t = z[d][i];
            if (t >= topics) throw std::invalid_argument("topic id out of range");
            ++word_topic[doc.tokens[i] * topics + t];
            ++doc_topic[d * topics + t];
            ++topic_total[t];
            ++topic_time[t * slices + doc.time_category];
        }
    }
    if (psi.rows() != topics || psi.cols() != slices) psi = Matrix(topics, slices, 1.0 / static_cast<double>(slices));
}

std::string ModelState::check_invariants(const Corpus& corpus) const {
    std::vector<std::int64_t> by_word(topics, 0), by_doc(topics, 0), by_time(topics, 0);
    for (std::size_t v = 0; v < vocab; ++v)
        for (std::size_t t = 0; t < topics; ++t) {
            if (n_zv(t, v) < 0) return "negative word-topic count";
            by_word[t] += n_zv(t, v);
        }
    for (std::size_t d = 0; d < docs; ++d) {
        std::int64_t row = 0;
        for (std::size_t t = 0; t < topics; ++t) {
            if (m_dz(d, t) < 0) return "negative doc-topic count";
            by_doc[t] += m_dz(d, t);
            row += m_dz(d, t);
        }
        if (row != static_cast<std::int64_t>(corpus.docs[d].tokens.size()))
            return "doc-topic row " + std::to_string(d) + " does not sum to N_d";
    }
    for (std::size_t t = 0; t < topics; ++t)
        for (std::size_t k = 0; k < slices; ++k) {
            if (tau_zk(t, k) < 0) return "negative topic-time count";
            by_time[t] += tau_zk(t, k);
        }
    for (std::size_t t = 0; t < topics; ++t) {
        if (n_z(t) < 0) return "negative topic total";
        if (by_word[t] != n_z(t) || by_doc[t] != n_z(t) || by_time[t] != n_z(t))
            return "count identity broken for topic " + std::to_string(t);
    }
    // The tables must also agree with z itself, not only with each other.
    ModelState fresh;
    fresh.psi = psi;
    fresh.rebuild(corpus, topics, z);
    if (fresh.word_topic != word_topic || fresh.doc_topic != doc_topic || fresh.topic_time != topic_time)
        return "count tables disagree with assignments";
    return {};
}

std::vector<double> activity_histogram(const Corpus& corpus) {
    const auto counts = corpus.tokens_per_slice();
    const double total = static_cast<double>(corpus.total_tokens());
    std::vector<double> hist(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) hist[k] = static_cast<double>(counts[k]) / total;
    return hist;
}

ModelState init_state(const Corpus& corpus, const NocConfig& config) {
    if (corpus.docs.empty()) throw std::invalid_argument("empty corpus");
    if (config.topics == 0) throw std::invalid_argument("number of topics must be positive");
    ModelState state;
    state.rng = Rng(config.seed);
    std::vector<std::vector<std::uint32_t>> z(corpus.num_docs());
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
        z[d].resize(corpus.docs[d].tokens.size());
        for (auto& t : z[d]) t = static_cast<std::uint32_t>(state.rng.below(config.topics));
    }
    state.rebuild(corpus, config.topics, std::move(z));

    const std::size_t K = corpus.num_slices();
    state.psi = Matrix(config.topics, K);
    if (config.psi_init == PsiInit::activity) {
        const auto hist = activity_histogram(corpus);
        for (std::size_t t = 0; t < config.topics; ++t)
            for (std::size_t k = 0; k < K; ++k) state.psi(t, k) = hist[k];
    } else {
        for (std::size_t t = 0; t < config.topics; ++t) {
            auto row = state.psi.row(t);
            for (double& x : row) x = state.rng.uniform_open();
            normalize_row(row);
        }
    }
    return state;
}

std::vector<double> full_conditional(const ModelState& s, const Corpus& corpus, const NocConfig& config,
                                     std::size_t d, std::size_t i) {
    const std::size_t T = s.topics;
    const std::size_t w = corpus.docs[d].tokens.at(i);
    const std::size_t k = corpus.docs[d].time_category;
    const std::uint32_t own = s.z.at(d).at(i);

    std::vector<std::int32_t> dt(T), wt(T), tot(T);
    std::vector<double> time(T, 1.0), out(T);
    for (std::size_t t = 0; t < T; ++t) {
        const std::int32_t self = t == own ? 1 : 0;
        dt[t] = s.m_dz(d, t) - self;
        wt[t] = s.n_zv(t, w) - self;
        tot[t] = s.n_z(t) - self;
        if (config.time_factor) time[t] = s.psi(t, k);
    }
    conditional_weights(dt, wt, tot, time, config.alpha, config.beta, static_cast<double>(s.vocab) * config.beta, out);
    if (!normalize_row(out)) throw std::domain_error("full conditional has zero mass");
    return out;
}

Matrix psi_from_counts(const ModelState& s, double smoothing) {
    const std::size_t K = s.slices;
    Matrix psi(s.topics, K);
    for (std::size_t t = 0; t < s.topics; ++t) {
        const double denom = s.n_z(t) + static_cast<double>(K) * smoothing;
        for (std::size_t k = 0; k < K; ++k)
            psi(t, k) = denom > 0.0 ? (s.tau_zk(t, k) + smoothing) / denom : 1.0 / static_cast<double>(K);
    }
    return psi;
}

void update_psi(ModelState& state, double smoothing) { state.psi = psi_from_counts(state, smoothing); }

void gibbs_sweep(ModelState& state, const Corpus& corpus, const NocConfig& config) {
    if (config.time_factor) {
        detail::resample_tokens(state, corpus, config.alpha, config.beta, [&](std::size_t d, std::span<double> out) {
            const std::size_t k = corpus.docs[d].time_category;
            for (std::size_t t = 0; t < out.size(); ++t) out[t] = state.psi(t, k);
        });
    } else {
        detail::resample_tokens(state, corpus, config.alpha, config.beta, [](std::size_t, std::span<double>) {});
    }
    if (config.update_psi) update_psi(state, config.smoothing(corpus.num_slices()));
}

namespace detail {

void estimate_theta_phi(const ModelState& s, const Corpus& corpus, double alpha, double beta, Posterior& out) {
    const std::size_t T = s.topics, V = s.vocab, D = s.docs;
    out.theta = Matrix(D, T);
    for (std::size_t d = 0; d < D; ++d) {
        const double denom = static_cast<double>(corpus.docs[d].tokens.size()) + static_cast<double>(T) * alpha;
        for (std::size_t t = 0; t < T; ++t) out.theta(d, t) = (s.m_dz(d, t) + alpha) / denom;
    }
    out.phi = Matrix(T, V);
    for (std::size_t t = 0; t < T; ++t) {
        const double denom = s.n_z(t) + static_cast<double>(V) * beta;
        for (std::size_t v = 0; v < V; ++v) out.phi(t, v) = (s.n_zv(t, v) + beta) / denom;
    }
}

namespace {
void accumulate(Matrix& into, const Matrix& m) {
    if (into.empty()) {
        into = m;
        return;
    }
    auto dst = into.flat();
    auto src = m.flat();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}
Matrix scaled(const Matrix& m, double f) {
    Matrix out = m;
    for (double& x : out.flat()) x *= f;
    return out;
}
}  // namespace

void PosteriorAverager::add(const Posterior& p) {
    ++count;
    accumulate(sum.theta, p.theta);
    accumulate(sum.phi, p.phi);
    if (p.psi) {
        if (!sum.psi) sum.psi = Matrix();
        accumulate(*sum.psi, *p.psi);
    }
}

Posterior PosteriorAverager::mean() const {
    const double f = 1.0 / static_cast<double>(count);
    Posterior out;
    out.theta = scaled(sum.theta, f);
    out.phi = scaled(sum.phi, f);
    if (sum.psi) out.psi = scaled(*sum.psi, f);
    return out;
}

}  // namespace detail

Posterior estimate_posterior(const ModelState& state, const Corpus& corpus, const NocConfig& config) {
    Posterior out;
    detail::estimate_theta_phi(state, corpus, config.alpha, config.beta, out);
    out.psi = psi_from_counts(state, config.smoothing(corpus.num_slices()));
    return out;
}

double log_joint_words(const ModelState& s, const Corpus& corpus, double alpha, double beta) {
    const std::size_t T = s.topics, V = s.vocab, D = s.docs;
    const double Td = static_cast<double>(T), Vd = static_cast<double>(V);
    double lp = Td * (std::lgamma(Vd * beta) - Vd * std::lgamma(beta)) +
                static_cast<double>(D) * (std::lgamma(Td * alpha) - Td * std::lgamma(alpha));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t v = 0; v < V; ++v) lp += std::lgamma(s.n_zv(t, v) + beta);
        lp -= std::lgamma(s.n_z(t) + Vd * beta);
    }
    for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t t = 0; t < T; ++t) lp += std::lgamma(s.m_dz(d, t) + alpha);
        lp -= std::lgamma(static_cast<double>(corpus.docs[d].tokens.size()) + Td * alpha);
    }
    return lp;
}

double log_joint(const ModelState& s, const Corpus& corpus, const NocConfig& config) {
    double lp = log_joint_words(s, corpus, config.alpha, config.beta);
    if (config.time_factor)
        for (std::size_t t = 0; t < s.topics; ++t)
            for (std::size_t k = 0; k < s.slices; ++k)
                if (s.tau_zk(t, k) > 0) lp += s.tau_zk(t, k) * std::log(s.psi(t, k));
    return lp;
}

FitResult fit(const Corpus& corpus, const NocConfig& config, const SweepObserver& observer) {
    config.validate();
    FitResult result{{}, {}, init_state(corpus, config)};
    detail::PosteriorAverager averager;
    for (std::size_t sweep = 1; sweep <= config.sweeps; ++sweep) {
        const auto start = std::chrono::steady_clock::now();
        gibbs_sweep(result.state, corpus, config);
        const double lj = log_joint(result.state, corpus, config);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        result.diagnostics.log_joint.push_back(lj);
        result.diagnostics.elapsed_ms.push_back(ms);
        if (config.estimate == Estimate::average && sweep > config.burn_in)
            averager.add(estimate_posterior(result.state, corpus, config));
        if (observer) observer({sweep, lj, ms});
    }
    result.posterior = config.estimate == Estimate::average ? averager.mean()
                                                            : estimate_posterior(result.state, corpus, config);
    return result;
}

}  // namespace chronotopics
