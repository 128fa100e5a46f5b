#include "chronotopics/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

namespace chronotopics {

namespace {

NocConfig untimed(NocConfig config) {
    config.time_factor = false;
    config.update_psi = false;
    return config;
}

double elapsed_ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void lda_sweep(ModelState& state, const Corpus& corpus, const NocConfig& config) {
    gibbs_sweep(state, corpus, untimed(config));
}

FitResult lda_fit(const Corpus& corpus, const NocConfig& config, const SweepObserver& observer) {
    FitResult result = fit(corpus, untimed(config), observer);
    result.posterior.psi.reset();
    return result;
}

std::vector<double> normalized_doc_times(const Corpus& corpus) {
    EpochSeconds lo = std::numeric_limits<EpochSeconds>::max(), hi = std::numeric_limits<EpochSeconds>::min();
    for (const auto& d : corpus.docs) {
        lo = std::min(lo, d.timestamp);
        hi = std::max(hi, d.timestamp);
    }
    std::vector<double> out(corpus.num_docs(), 0.5);
    if (hi <= lo) return out;
    const double span = static_cast<double>(hi - lo);
    for (std::size_t d = 0; d < out.size(); ++d) {
        const double x = static_cast<double>(corpus.docs[d].timestamp - lo) / span;
        out[d] = std::clamp(x, kTimeClamp, 1.0 - kTimeClamp);
    }
    return out;
}

BetaParams beta_from_moments(double mean, double variance) {
    if (!(variance > 1e-12) || !(mean > 0.0) || !(mean < 1.0)) return {};
    const double common = mean * (1.0 - mean) / variance - 1.0;
    const BetaParams p{mean * common, (1.0 - mean) * common};
    if (!(p.a > 0.0) || !(p.b > 0.0) || !std::isfinite(p.a) || !std::isfinite(p.b)) return {};
    return p;
}

BetaParams fit_beta(std::span<const double> samples) {
    if (samples.size() < 2) return {};
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double x : samples) var += (x - mean) * (x - mean);
    var /= static_cast<double>(samples.size());
    return beta_from_moments(mean, var);
}

double beta_log_density(double x, const BetaParams& p) {
    const double log_norm = std::lgamma(p.a + p.b) - std::lgamma(p.a) - std::lgamma(p.b);
    return log_norm + (p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x);
}

Matrix discretize_beta(std::span<const BetaParams> params, const Corpus& corpus) {
    const std::size_t K = corpus.num_slices();
    Matrix out(params.size(), K, 0.0);
    EpochSeconds lo = std::numeric_limits<EpochSeconds>::max(), hi = std::numeric_limits<EpochSeconds>::min();
    for (const auto& d : corpus.docs) {
        lo = std::min(lo, d.timestamp);
        hi = std::max(hi, d.timestamp);
    }
    for (std::size_t t = 0; t < params.size(); ++t) {
        auto row = out.row(t);
        if (hi <= lo) {
            row[corpus.grid.category(lo)] = 1.0;
            continue;
        }
        const double span = static_cast<double>(hi - lo);
        double prev = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const EpochSeconds edge = corpus.grid.origin + static_cast<EpochSeconds>(k + 1) * corpus.grid.width;
            const double x = std::clamp(static_cast<double>(edge - lo) / span, 0.0, 1.0);
            const double cdf = k + 1 == K ? 1.0 : boost::math::ibeta(params[t].a, params[t].b, x);
            row[k] = std::max(0.0, cdf - prev);
            prev = std::max(prev, cdf);
        }
        if (!normalize_row(row))
            for (double& v : row) v = 1.0 / static_cast<double>(K);
    }
    return out;
}

TotState tot_init(const Corpus& corpus, const NocConfig& config) {
    NocConfig c = untimed(config);
    TotState state{init_state(corpus, c), std::vector<BetaParams>(config.topics), normalized_doc_times(corpus)};
    return state;
}

void tot_refit_beta(TotState& s) {
    const std::size_t T = s.counts.topics;
    std::vector<double> sum(T, 0.0), sum_sq(T, 0.0);
    for (std::size_t d = 0; d < s.counts.docs; ++d) {
        const double x = s.doc_time[d];
        for (std::size_t t = 0; t < T; ++t) {
            const double m = s.counts.m_dz(d, t);
            sum[t] += m * x;
            sum_sq[t] += m * x * x;
        }
    }
    for (std::size_t t = 0; t < T; ++t) {
        const double n = s.counts.n_z(t);
        if (n < 2) {
            s.beta[t] = {};
            continue;
        }
        const double mean = sum[t] / n;
        const double var = std::max(0.0, sum_sq[t] / n - mean * mean);
        s.beta[t] = beta_from_moments(mean, var);
    }
}

void tot_sweep(TotState& s, const Corpus& corpus, const NocConfig& config) {
    const std::size_t T = s.counts.topics;
    std::vector<double> log_density(T);
    detail::resample_tokens(s.counts, corpus, config.alpha, config.beta, [&](std::size_t d, std::span<double> out) {
        // Shift by the max log density: a per-document constant cancels in
        // the normalized conditional and keeps exp() in range.
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < T; ++t) {
            log_density[t] = beta_log_density(s.doc_time[d], s.beta[t]);
            top = std::max(top, log_density[t]);
        }
        for (std::size_t t = 0; t < T; ++t) out[t] = std::exp(log_density[t] - top);
    });
    tot_refit_beta(s);
}

double tot_log_joint(const TotState& s, const Corpus& corpus, const NocConfig& config) {
    double lp = log_joint_words(s.counts, corpus, config.alpha, config.beta);
    for (std::size_t d = 0; d < s.counts.docs; ++d)
        for (std::size_t t = 0; t < s.counts.topics; ++t)
            if (s.counts.m_dz(d, t) > 0) lp += s.counts.m_dz(d, t) * beta_log_density(s.doc_time[d], s.beta[t]);
    return lp;
}

TotFitResult tot_fit(const Corpus& corpus, const NocConfig& config, const SweepObserver& observer) {
    config.validate();
    TotFitResult result{{}, {}, {}, tot_init(corpus, config)};
    detail::PosteriorAverager averager;
    auto estimate = [&] {
        Posterior p;
        detail::estimate_theta_phi(result.state.counts, corpus, config.alpha, config.beta, p);
        p.psi = discretize_beta(result.state.beta, corpus);
        return p;
    };
    for (std::size_t sweep = 1; sweep <= config.sweeps; ++sweep) {
        const auto start = std::chrono::steady_clock::now();
        tot_sweep(result.state, corpus, config);
        const double lj = tot_log_joint(result.state, corpus, config);
        const double ms = elapsed_ms_since(start);
        result.diagnostics.log_joint.push_back(lj);
        result.diagnostics.elapsed_ms.push_back(ms);
        if (config.estimate == Estimate::average && sweep > config.burn_in) averager.add(estimate());
        if (observer) observer({sweep, lj, ms});
    }
    result.posterior = config.estimate == Estimate::average ? averager.mean() : estimate();
    result.beta = result.state.beta;
    return result;
}

}  // namespace chronotopics
