#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "chronotopics/corpus.hpp"
#include "chronotopics/matrix.hpp"

namespace chronotopics {

/// Time structure for synthetic topics: each topic gets `modes_per_topic`
/// Gaussian bumps of width `mode_width` (in slices) over `slices`
/// categories. Mode centers are interleaved so topics never share a mode.
struct ModeStructure {
    std::size_t slices = 12;
    std::size_t modes_per_topic = 1;
    double mode_width = 0.3;
};

struct SynthSpec {
    std::size_t topics = 3;
    std::size_t vocab = 300;
    std::size_t docs = 600;
    std::size_t min_tokens = 40;
    std::size_t max_tokens = 40;
    double alpha = 0.1;  // Dirichlet for theta
    double beta = 0.1;   // Dirichlet for phi
    std::optional<Matrix> psi;  // explicit rows; otherwise built from `modes`
    ModeStructure modes;
    double marker_fraction = 0.0;  // exclusive words per topic, as a share of V
    double marker_mass = 0.5;      // phi mass placed on a topic's own markers
    std::size_t sentence_length = 8;
    EpochSeconds origin = 1522540800;  // 2018-04-01T00:00:00Z
    EpochSeconds slice_width = 14 * kSecondsPerDay;
    std::uint64_t seed = 1;
};

struct GroundTruth {
    Matrix theta;  // D x T
    Matrix phi;    // T x V
    Matrix psi;    // T x K
    std::vector<std::vector<std::uint32_t>> z;
    std::vector<std::vector<WordId>> markers;  // per topic, empty without markers
};

struct SynthCorpus {
    Corpus corpus;
    GroundTruth truth;
};

/// Psi rows produced by `modes` for `topics` topics.
Matrix mode_psi(std::size_t topics, const ModeStructure& modes);

/// Forward-samples the generative process. phi ~ Dir(beta), theta ~ Dir(alpha);
/// each document draws one topic from theta and one category from that
/// topic's psi for its single timestamp, then topic and word per token.
/// Every term of the synthetic vocabulary is kept, including ones that were
/// never drawn, so ids line up with the truth.
SynthCorpus generate(const SynthSpec& spec);

struct TopicMatch {
    std::vector<std::size_t> fitted_for_truth;  // truth topic -> fitted topic
    std::vector<double> cosine;                 // per truth topic
    double mean_cosine = 0.0;
};

/// Greedy maximum-cosine assignment of fitted rows to truth rows.
TopicMatch match_topics(const Matrix& truth_phi, const Matrix& fitted_phi);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Mean over truth topics of TV(psi_truth[z], psi_fitted[match[z]]).
double mean_psi_tv(const Matrix& truth_psi, const Matrix& fitted_psi, const TopicMatch& match);

/// Writes `truth/` with theta.csv, phi.csv, psi.csv and assignments.txt.
void write_truth(const GroundTruth& truth, const std::filesystem::path& dir);

}  // namespace chronotopics
