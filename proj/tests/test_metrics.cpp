#include <doctest.h>

#include <cmath>
#include <set>

#include "chronotopics/metrics.hpp"
#include "chronotopics/random.hpp"
#include "support.hpp"

using namespace chronotopics;
using testing::DocSpec;

TEST_CASE("document index") {
    const Corpus c = testing::make_corpus({{0, {"a", "b", "a"}}, {1, {"b", "c"}}, {2, {"a", "c"}}});
    const DocumentIndex idx(c);
    const WordId a = *c.vocab.find("a"), b = *c.vocab.find("b"), cc = *c.vocab.find("c");
    CHECK(idx.num_docs() == 3);
    CHECK(idx.doc_count(a) == 2);
    CHECK(idx.co_doc_count(a, b) == 1);
    CHECK(idx.co_doc_count(b, cc) == 1);
    CHECK(idx.co_doc_count(a, a) == 2);
}

TEST_CASE("top words") {
    const std::vector<double> row{0.1, 0.4, 0.1, 0.4};
    CHECK(top_words(row, 3) == std::vector<WordId>{1, 3, 0});
}

TEST_CASE("coherence") {
    SUBCASE("always together, each in half the documents") {
        const Corpus c = testing::make_corpus({{0, {"a", "b", "x"}}, {1, {"a", "b", "y"}}, {2, {"x", "y"}}, {3, {"y"}}});
        const DocumentIndex idx(c);
        const std::vector<WordId> words{*c.vocab.find("a"), *c.vocab.find("b")};
        CHECK(coherence_of_words(words, idx, false) == doctest::Approx(std::log(2.0)));
        // Add-one on the joint count: ln((2 + 1)/4 / 0.25).
        CHECK(coherence_of_words(words, idx, true) == doctest::Approx(std::log(3.0)));
    }
    SUBCASE("independent words without smoothing") {
        const Corpus c = testing::make_corpus({{0, {"a", "b"}}, {1, {"a", "z"}}, {2, {"b", "z"}}, {3, {"z"}}});
        const DocumentIndex idx(c);
        CHECK(coherence_of_words(std::vector<WordId>{*c.vocab.find("a"), *c.vocab.find("b")}, idx, false) ==
              doctest::Approx(0.0));
    }
    SUBCASE("argument checks") {
        const Corpus c = testing::make_corpus({{0, {"a", "b"}}});
        const DocumentIndex idx(c);
        const std::vector<double> row{0.5, 0.5};
        CHECK_THROWS_AS(coherence(row, idx, {1, true}), std::invalid_argument);
        CHECK_THROWS_AS(coherence(row, idx, {3, true}), std::invalid_argument);
        CHECK_NOTHROW(coherence(row, idx, {2, true}));
    }
    SUBCASE("matches a brute-force document scan") {
        Rng rng(5);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<DocSpec> specs;
            for (int d = 0; d < 15; ++d) {
                DocSpec s{d, {}};
                for (int i = 0; i < 6; ++i) s.tokens.push_back("w" + std::to_string(rng.below(12)));
                specs.push_back(s);
            }
            const Corpus c = testing::make_corpus(specs);
            const DocumentIndex idx(c);
            std::vector<double> row(c.vocab_size());
            for (double& x : row) x = rng.uniform();
            const std::size_t k = std::min<std::size_t>(5, c.vocab_size());
            const auto words = top_words(row, k);
            double total = 0.0;
            const double D = static_cast<double>(c.num_docs());
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t l = j + 1; l < k; ++l) {
                    double nj = 0, nl = 0, njl = 0;
                    for (const auto& doc : c.docs) {
                        const std::set<WordId> s(doc.tokens.begin(), doc.tokens.end());
                        const bool hj = s.count(words[j]) > 0, hl = s.count(words[l]) > 0;
                        nj += hj;
                        nl += hl;
                        njl += hj && hl;
                    }
                    total += std::log(((njl + 1) / D) / ((nj / D) * (nl / D)));
                }
            const double expected = 2.0 * total / static_cast<double>(k * (k - 1));
            CHECK(coherence(row, idx, {k, true}) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    SUBCASE("report averages topics") {
        const Corpus c = testing::make_corpus({{0, {"a", "b", "x"}}, {1, {"a", "b", "y"}}, {2, {"x", "y"}}, {3, {"y"}}});
        const DocumentIndex idx(c);
        Matrix phi(2, c.vocab_size(), 0.1);
        const auto report = coherence_report(phi, idx, {2, true});
        CHECK(report.per_topic.size() == 2);
        CHECK(report.k_words == 2);
        CHECK(report.mean == doctest::Approx((report.per_topic[0] + report.per_topic[1]) / 2));
    }
}

TEST_CASE("entropy") {
    CHECK(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0));
    CHECK(entropy(std::vector<double>{0, 1, 0}) == 0.0);
    CHECK(entropy(std::vector<double>{0.5, 0.5, 0, 0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(entropy(std::vector<double>{1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("sdt") {
    CHECK(sdt(3.11, 3.11 + 1.59, 0.4) == doctest::Approx(2.08).epsilon(0.005));
    CHECK(std::abs(sdt(3.11, 3.11 + 1.59, 0.7) - 2.54) <= 0.01);
    CHECK(sdt(2.0, 4.0, 0.5) == doctest::Approx(2.0));
    CHECK(sdt(0.0, 4.0, 0.5) == 0.0);
    CHECK(sdt(4.0, 4.0, 0.5) == 0.0);
    CHECK(sdt(1.5, 4.0, 0.0) == doctest::Approx(2.5));
    CHECK(sdt(1.5, 4.0, 1.0) == doctest::Approx(1.5));
    CHECK(sdt(0.0, 4.0, 0.0) == doctest::Approx(4.0));
    CHECK(sdt(4.0, 4.0, 1.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(sdt(4.5, 4.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sdt(-0.5, 4.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sdt(1.0, 4.0, 1.5), std::invalid_argument);
}

TEST_CASE("sdt report") {
    SUBCASE("identical rows tie everywhere") {
        Matrix psi(3, 4, 0.25);
        const auto r = sdt_report(psi);
        CHECK(r.h_max == doctest::Approx(2.0));
        for (const auto& best : r.best) CHECK(best.size() == 3);
    }
    SUBCASE("delta against uniform") {
        Matrix psi(2, 4, 0.25);
        psi(0, 0) = 1.0, psi(0, 1) = psi(0, 2) = psi(0, 3) = 0.0;
        const auto r = sdt_report(psi, std::vector<double>{0.0, 1.0});
        CHECK(r.score[0][0] == doctest::Approx(2.0));
        CHECK(r.score[1][0] == doctest::Approx(0.0));
        CHECK(r.best[0] == std::vector<std::size_t>{0});
        // The most dispersed topic wins at gamma = 1.
        CHECK(r.best[1] == std::vector<std::size_t>{1});
        CHECK(r.entropy[1] == doctest::Approx(2.0));
    }
    SUBCASE("gamma extremes are H_max - H and H") {
        Matrix psi(1, 3);
        psi(0, 0) = 0.2, psi(0, 1) = 0.3, psi(0, 2) = 0.5;
        const auto r = sdt_report(psi);
        CHECK(r.score[0][0] == doctest::Approx(r.h_max - r.entropy[0]));
        CHECK(r.score[0][3] == doctest::Approx(r.entropy[0]));
    }
}
