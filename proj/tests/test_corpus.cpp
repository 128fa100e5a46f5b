#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "chronotopics/corpus.hpp"
#include "support.hpp"
#include "temp_dir.hpp"

using namespace chronotopics;
namespace fs = std::filesystem;

namespace {

using testing::TempDir;

fs::path write_lines(const fs::path& dir, const std::vector<std::string>& lines) {
    const fs::path p = dir / "in.jsonl";
    std::ofstream out(p);
    for (const auto& l : lines) out << l << '\n';
    return p;
}

RawRecord record(std::string id, std::string text, EpochSeconds t, std::optional<std::string> cascade = {}) {
    RawRecord r;
    r.id = std::move(id);
    r.text = std::move(text);
    r.timestamp = t;
    r.cascade_id = std::move(cascade);
    return r;
}

}  // namespace

TEST_CASE("ingest validates each line") {
    TempDir tmp("ingest");
    SUBCASE("empty file") {
        const auto r = ingest(write_lines(tmp.path, {}));
        CHECK(r.records.empty());
        CHECK(r.skipped == 0);
    }
    SUBCASE("missing timestamp is skipped") {
        const auto r = ingest(write_lines(tmp.path, {
                                                        R"({"id":"a","text":"x","timestamp":1})",
                                                        R"({"id":"b","text":"y","timestamp":"2"})",
                                                        R"({"id":"c","text":"z","timestamp":"2018-04-01"})",
                                                        R"({"id":"d","text":"w"})",
                                                    }));
        CHECK(r.records.size() == 3);
        CHECK(r.skipped == 1);
        CHECK(r.diagnostics.size() == 1);
    }
    SUBCASE("identity parse") {
        const auto r = ingest(write_lines(
            tmp.path, {R"({"id":"a","text":"hello world syria","timestamp":"2018-04-01T00:00:00Z"})"}));
        REQUIRE(r.records.size() == 1);
        CHECK(r.records[0].id == "a");
        CHECK(r.records[0].text == "hello world syria");
        CHECK(r.records[0].timestamp == 1522540800);
        CHECK_FALSE(r.records[0].cascade_id.has_value());
    }
    SUBCASE("bad json, bad time, duplicates and window") {
        IngestConfig config;
        config.window_begin = 100;
        config.window_end = 200;
        const auto r = ingest(write_lines(tmp.path, {
                                                        "{not json",
                                                        R"({"id":"a","text":"x","timestamp":"soon"})",
                                                        R"({"id":"b","text":"x","timestamp":150,"cascade_id":"c1"})",
                                                        R"({"id":"b","text":"x","timestamp":160})",
                                                        R"({"id":"c","text":"x","timestamp":200})",
                                                        R"({"id":"","text":"x","timestamp":150})",
                                                        "",
                                                    }),
                              config);
        REQUIRE(r.records.size() == 1);
        CHECK(r.records[0].cascade_id == "c1");
        CHECK(r.skipped == 5);
    }
    SUBCASE("unreadable file") { CHECK_THROWS_AS(ingest(tmp.path / "missing.jsonl"), DataError); }
}

TEST_CASE("cascade aggregation") {
    const EpochSeconds day = testing::kOrigin;
    SUBCASE("same cascade, same day, ordered by time") {
        const auto docs = aggregate_cascades({record("2", "Second post.", day + 50, "c"),
                                              record("1", "First post. With two sentences", day + 10, "c")});
        REQUIRE(docs.size() == 1);
        CHECK(docs[0].text == "First post. With two sentences\nSecond post.");
        REQUIRE(docs[0].sentences.size() == 3);
        CHECK(docs[0].sentences[0].timestamp == day + 10);
        CHECK(docs[0].sentences[1].text == "With two sentences");
        CHECK(docs[0].sentences[2].timestamp == day + 50);
        CHECK(docs[0].day == day);
    }
    SUBCASE("different days split") {
        const auto docs = aggregate_cascades({record("1", "a", day, "c"), record("2", "b", day + kSecondsPerDay, "c")});
        CHECK(docs.size() == 2);
    }
    SUBCASE("singleton") {
        const auto docs = aggregate_cascades({record("1", "a", day)});
        REQUIRE(docs.size() == 1);
        CHECK(docs[0].sentences.size() == 1);
    }
    SUBCASE("order stable under permutation") {
        std::vector<RawRecord> recs{record("b", "beta", day + 5, "c"), record("a", "alpha", day + 5, "c"),
                                    record("c", "gamma", day + 1, "c"), record("d", "delta", day + 2)};
        const auto first = aggregate_cascades(recs);
        std::reverse(recs.begin(), recs.end());
        const auto second = aggregate_cascades(recs);
        REQUIRE(first.size() == second.size());
        for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i].text == second[i].text);
        CHECK(first[1].text == "gamma\nalpha\nbeta");
    }
}

TEST_CASE("time grid") {
    const EpochSeconds w = 14 * kSecondsPerDay;
    SUBCASE("28-day corpus with 14-day slices has two categories") {
        const auto g = TimeGrid::covering(testing::kOrigin, testing::kOrigin + 28 * kSecondsPerDay - 1, w);
        CHECK(g.slices == 2);
    }
    SUBCASE("half-open boundaries") {
        const auto g = TimeGrid::covering(testing::kOrigin + 3600, testing::kOrigin + w, w);
        CHECK(g.origin == testing::kOrigin);
        CHECK(g.slices == 2);
        CHECK(g.category(testing::kOrigin + w - 1) == 0);
        CHECK(g.category(testing::kOrigin + w) == 1);
        CHECK_THROWS_AS(g.category(testing::kOrigin - 1), std::out_of_range);
        CHECK_FALSE(g.contains(testing::kOrigin + 2 * w));
    }
}

TEST_CASE("build corpus") {
    using testing::DocSpec;
    SUBCASE("short documents dropped and vocabulary in first-occurrence order") {
        const Corpus c = testing::make_corpus({{0, {"a", "b"}}, {1, {"c", "a", "d"}}, {15, {"d", "d", "e"}}},
                                              14 * kSecondsPerDay, 3);
        REQUIRE(c.num_docs() == 2);
        CHECK(c.vocab.terms() == std::vector<std::string>{"c", "a", "d", "e"});
        CHECK(c.vocab.doc_frequency == std::vector<std::size_t>{1, 1, 2, 1});
        CHECK(c.docs[0].time_category == 0);
        CHECK(c.docs[1].time_category == 1);
        CHECK(c.docs[1].id == 1);
        CHECK(c.total_tokens() == 6);
        CHECK(c.tokens_per_slice() == std::vector<std::size_t>{3, 3});
        for (WordId v = 0; v < c.vocab_size(); ++v) CHECK(c.vocab.find(c.vocab.term(v)) == v);
    }
    SUBCASE("everything filtered") {
        CHECK_THROWS_AS(testing::make_corpus({{0, {"a"}}}, 14 * kSecondsPerDay, 3), DataError);
    }
}

TEST_CASE("pipeline from records") {
    const EpochSeconds day = testing::kOrigin;
    std::vector<RawRecord> recs{
        record("1", "Rescue workers arrived in Aleppo today", day + 100, "c1"),
        record("2", "More rescue footage from the scene", day + 200, "c1"),
        record("3", "nothing happened here today at all", day + 300),
        record("4", "Big convoy reached Idlib overnight", day + 20 * kSecondsPerDay),
    };
    PipelineConfig config;
    PipelineStats stats;
    const Corpus c = corpus_from_records(recs, config, &stats);
    CHECK(stats.records_read == 4);
    CHECK(stats.pseudo_docs == 3);
    CHECK(stats.dropped_no_entity == 1);
    CHECK(stats.docs_kept == 2);
    CHECK(c.num_slices() == 2);
    CHECK(c.docs[0].sentences.size() == 2);
    CHECK(c.docs[0].sentences[1].timestamp == day + 200);
    CHECK(c.docs[0].timestamp == day);

    SUBCASE("language filter") {
        config.language_filter = true;
        config.entities.enabled = false;
        std::vector<RawRecord> mixed{record("1", "Der Konvoi ist angekommen heute", day),
                                     record("2", "The convoy is in the city and it is late", day)};
        PipelineStats s2;
        const Corpus m = corpus_from_records(mixed, config, &s2);
        CHECK(s2.records_non_english == 1);
        CHECK(m.num_docs() == 1);
    }
}

TEST_CASE("corpus directory round trip") {
    TempDir tmp("corpus_io");
    const Corpus c = testing::make_corpus({{0, {"a", "b", "c"}}, {30, {"c", "c", "d"}}});
    write_corpus(c, tmp.path);
    for (const char* f : {"vocab.txt", "docs.txt", "sentences.txt", "grid.meta"}) CHECK(fs::exists(tmp.path / f));
    const Corpus back = read_corpus(tmp.path);
    CHECK(back.vocab.terms() == c.vocab.terms());
    CHECK(back.vocab.doc_frequency == c.vocab.doc_frequency);
    CHECK(back.grid == c.grid);
    REQUIRE(back.num_docs() == c.num_docs());
    for (std::size_t d = 0; d < c.num_docs(); ++d) {
        CHECK(back.docs[d].tokens == c.docs[d].tokens);
        CHECK(back.docs[d].timestamp == c.docs[d].timestamp);
        CHECK(back.docs[d].time_category == c.docs[d].time_category);
        REQUIRE(back.docs[d].sentences.size() == c.docs[d].sentences.size());
        CHECK(back.docs[d].sentences[0].text == c.docs[d].sentences[0].text);
    }
    CHECK_THROWS_AS(read_corpus(tmp.path / "nope"), DataError);
}
