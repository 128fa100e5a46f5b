#pragma once

#include <span>
#include <vector>

#include "chronotopics/sampler.hpp"

namespace chronotopics {

/// LDA: NOC with the time factor removed. psi is left empty in the result.
FitResult lda_fit(const Corpus& corpus, const NocConfig& config, const SweepObserver& observer = {});

/// One LDA sweep (no time factor, no psi update).
void lda_sweep(ModelState& state, const Corpus& corpus, const NocConfig& config);

struct BetaParams {
    double a = 1.0;
    double b = 1.0;
    bool operator==(const BetaParams&) const = default;
};

inline constexpr double kTimeClamp = 1e-4;

/// Document times min-max normalized over the corpus and clamped to
/// [kTimeClamp, 1 - kTimeClamp]. A corpus with a single timestamp maps to 0.5.
std::vector<double> normalized_doc_times(const Corpus& corpus);

/// Method-of-moments Beta fit. Falls back to (1, 1) when the variance is
/// degenerate or the fit is not finite and positive.
BetaParams beta_from_moments(double mean, double variance);
BetaParams fit_beta(std::span<const double> samples);

double beta_log_density(double x, const BetaParams& p);

/// Per-slice mass of each topic's Beta over the corpus time grid, T x K.
Matrix discretize_beta(std::span<const BetaParams> params, const Corpus& corpus);

struct TotState {
    ModelState counts;
    std::vector<BetaParams> beta;   // per topic
    std::vector<double> doc_time;   // normalized, per document
};

TotState tot_init(const Corpus& corpus, const NocConfig& config);

/// Resamples every token with the Beta density at the document's time as the
/// time factor, then refits each topic's Beta by moment matching.
void tot_sweep(TotState& state, const Corpus& corpus, const NocConfig& config);

/// Refits (a_z, b_z) from the token-weighted times currently assigned to z.
void tot_refit_beta(TotState& state);

double tot_log_joint(const TotState& state, const Corpus& corpus, const NocConfig& config);

struct TotFitResult {
    Posterior posterior;  // psi holds the discretized Beta fit
    std::vector<BetaParams> beta;
    FitDiagnostics diagnostics;
    TotState state;
};

TotFitResult tot_fit(const Corpus& corpus, const NocConfig& config, const SweepObserver& observer = {});

}  // namespace chronotopics
