#include "chronotopics/synth.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "chronotopics/model_io.hpp"
#include "chronotopics/random.hpp"

namespace chronotopics {

namespace {

/// Pronounceable, unique term for an id: base-(consonant x vowel) digits,
/// always three syllables. Low ids are scrambled by an affine bijection so
/// neighbouring terms do not share long suffixes.
std::string synthetic_term(std::size_t id) {
    static constexpr char consonants[] = "bdfgklmnprstvz";
    static constexpr char vowels[] = "aeiou";
    constexpr std::size_t nc = sizeof consonants - 1, nv = sizeof vowels - 1, base = nc * nv;
    constexpr std::size_t span = base * base * base;
    id = (id / span) * span + (id % span * 7919 + 12345) % span;
    std::string out;
    for (int s = 0; s < 3; ++s) {
        const std::size_t digit = id % base;
        id /= base;
        out += consonants[digit / nv];
        out += vowels[digit % nv];
    }
    if (id > 0) out += std::to_string(id);
    return out;
}

}  // namespace

Matrix mode_psi(std::size_t topics, const ModeStructure& modes) {
    if (modes.slices == 0 || modes.modes_per_topic == 0) throw std::invalid_argument("empty mode structure");
    const std::size_t K = modes.slices;
    const double slots = static_cast<double>(topics * modes.modes_per_topic);
    Matrix psi(topics, K, 0.0);
    for (std::size_t z = 0; z < topics; ++z) {
        for (std::size_t m = 0; m < modes.modes_per_topic; ++m) {
            const double slot = static_cast<double>(z + m * topics);
            // Slot midpoints rounded down to a category, so narrow modes sit on one slice.
            const double center = std::floor((slot + 0.5) * static_cast<double>(K) / slots);
            for (std::size_t k = 0; k < K; ++k) {
                const double dx = (static_cast<double>(k) - center) / modes.mode_width;
                psi(z, k) += std::exp(-0.5 * dx * dx);
            }
        }
        for (std::size_t k = 0; k < K; ++k) psi(z, k) += 1e-9;
        normalize_row(psi.row(z));
    }
    return psi;
}

SynthCorpus generate(const SynthSpec& spec) {
    const std::size_t T = spec.topics, V = spec.vocab, D = spec.docs;
    if (T == 0 || V == 0 || D == 0) throw std::invalid_argument("synthetic spec needs T, V, D > 0");
    if (spec.min_tokens > spec.max_tokens || spec.min_tokens == 0)
        throw std::invalid_argument("invalid tokens-per-document range");
    Rng rng(spec.seed);
    SynthCorpus out;
    GroundTruth& truth = out.truth;

    truth.psi = spec.psi ? *spec.psi : mode_psi(T, spec.modes);
    if (truth.psi.rows() != T) throw std::invalid_argument("psi must have one row per topic");
    for (std::size_t z = 0; z < T; ++z) {
        double s = 0.0;
        for (double x : truth.psi.row(z)) {
            if (x < 0.0) throw std::invalid_argument("psi rows must be non-negative");
            s += x;
        }
        if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("psi rows must be normalized");
    }
    const std::size_t K = truth.psi.cols();

    // Markers: the first T * per_topic ids, topic z owning a contiguous block.
    const std::size_t per_topic =
        spec.marker_fraction > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(spec.marker_fraction * V)) : 0;
    if (per_topic * T > V) throw std::invalid_argument("marker words need V >= T * markers per topic");
    truth.markers.assign(T, {});
    for (std::size_t z = 0; z < T; ++z)
        for (std::size_t j = 0; j < per_topic; ++j) truth.markers[z].push_back(static_cast<WordId>(z * per_topic + j));

    truth.phi = Matrix(T, V, 0.0);
    const std::size_t shared_begin = per_topic * T;
    for (std::size_t z = 0; z < T; ++z) {
        auto row = truth.phi.row(z);
        std::vector<double> shared(V - shared_begin);
        if (!shared.empty()) rng.dirichlet(spec.beta, shared);
        const double shared_mass = per_topic > 0 ? (shared.empty() ? 0.0 : 1.0 - spec.marker_mass) : 1.0;
        for (std::size_t v = shared_begin; v < V; ++v) row[v] = shared_mass * shared[v - shared_begin];
        if (per_topic > 0) {
            std::vector<double> own(per_topic);
            rng.dirichlet(1.0, own);
            const double mass = 1.0 - shared_mass;
            for (std::size_t j = 0; j < per_topic; ++j) row[truth.markers[z][j]] = mass * own[j];
        }
        normalize_row(row);
    }

    Corpus& corpus = out.corpus;
    for (std::size_t v = 0; v < V; ++v) corpus.vocab.intern(synthetic_term(v));
    corpus.grid = TimeGrid{spec.origin, spec.slice_width, K};

    truth.theta = Matrix(D, T);
    truth.z.resize(D);
    const std::size_t days_per_slice = std::max<EpochSeconds>(1, spec.slice_width / kSecondsPerDay);
    for (std::size_t d = 0; d < D; ++d) {
        auto theta = truth.theta.row(d);
        rng.dirichlet(spec.alpha, theta);

        const std::size_t time_topic = rng.categorical(theta);
        const std::size_t k = rng.categorical(truth.psi.row(time_topic));
        Document doc;
        doc.id = d;
        doc.time_category = k;
        doc.timestamp = spec.origin + static_cast<EpochSeconds>(k) * spec.slice_width +
                        static_cast<EpochSeconds>(rng.below(days_per_slice)) * kSecondsPerDay;

        const std::size_t n = spec.min_tokens + rng.below(spec.max_tokens - spec.min_tokens + 1);
        truth.z[d].resize(n);
        doc.tokens.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto z = static_cast<std::uint32_t>(rng.categorical(theta));
            truth.z[d][i] = z;
            doc.tokens[i] = static_cast<WordId>(rng.categorical(truth.phi.row(z)));
        }

        const std::size_t len = std::max<std::size_t>(1, spec.sentence_length);
        for (std::size_t b = 0, j = 0; b < n; b += len, ++j) {
            Sentence s;
            s.begin = b;
            s.end = std::min(n, b + len);
            s.timestamp = doc.timestamp + static_cast<EpochSeconds>(j);
            for (std::size_t i = s.begin; i < s.end; ++i) {
                if (i > s.begin) s.text += ' ';
                s.text += corpus.vocab.term(doc.tokens[i]);
            }
            doc.sentences.push_back(std::move(s));
        }
        corpus.docs.push_back(std::move(doc));
    }
    corpus.recount_doc_frequency();
    return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

TopicMatch match_topics(const Matrix& truth_phi, const Matrix& fitted_phi) {
    const std::size_t T = truth_phi.rows();
    if (fitted_phi.rows() != T || fitted_phi.cols() != truth_phi.cols())
        throw std::invalid_argument("topic matrices differ in shape");
    Matrix sim(T, T);
    for (std::size_t a = 0; a < T; ++a)
        for (std::size_t b = 0; b < T; ++b) sim(a, b) = cosine_similarity(truth_phi.row(a), fitted_phi.row(b));

    TopicMatch m;
    m.fitted_for_truth.assign(T, 0);
    m.cosine.assign(T, 0.0);
    std::vector<char> truth_used(T, 0), fitted_used(T, 0);
    for (std::size_t round = 0; round < T; ++round) {
        double best = -2.0;
        std::size_t ba = 0, bb = 0;
        for (std::size_t a = 0; a < T; ++a) {
            if (truth_used[a]) continue;
            for (std::size_t b = 0; b < T; ++b)
                if (!fitted_used[b] && sim(a, b) > best) best = sim(a, b), ba = a, bb = b;
        }
        truth_used[ba] = fitted_used[bb] = 1;
        m.fitted_for_truth[ba] = bb;
        m.cosine[ba] = best;
    }
    for (double c : m.cosine) m.mean_cosine += c;
    m.mean_cosine /= static_cast<double>(T);
    return m;
}

double mean_psi_tv(const Matrix& truth_psi, const Matrix& fitted_psi, const TopicMatch& match) {
    double acc = 0.0;
    for (std::size_t z = 0; z < truth_psi.rows(); ++z)
        acc += total_variation(truth_psi.row(z), fitted_psi.row(match.fitted_for_truth[z]));
    return acc / static_cast<double>(truth_psi.rows());
}

void write_truth(const GroundTruth& truth, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_matrix_csv(truth.theta, dir / "theta.csv");
    write_matrix_csv(truth.phi, dir / "phi.csv");
    write_matrix_csv(truth.psi, dir / "psi.csv");
    write_assignments(truth.z, dir / "assignments.txt");
}

}  // namespace chronotopics
