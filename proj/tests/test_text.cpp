#include <doctest.h>

#include "chronotopics/text.hpp"
#include "chronotopics/timeutil.hpp"

using namespace chronotopics;

TEST_CASE("preprocess drops urls, mentions and stopwords") {
    const CleanConfig config;
    CHECK(preprocess("Check https://t.co/x @user NOW!!", config) == std::vector<std::string>{"check", "now"});
    CHECK(preprocess("", config).empty());
    CHECK(preprocess("the of and", config).empty());
    CHECK(preprocess("www.example.com rescue", config) == std::vector<std::string>{"rescue"});
}

TEST_CASE("preprocess strips hashtags and emoji") {
    const CleanConfig config;
    CHECK(preprocess("#WhiteHelmets \xF0\x9F\x98\x80 video", config) == std::vector<std::string>{"whitehelmets", "video"});
}

TEST_CASE("preprocess keeps stopwords when asked") {
    CleanConfig config;
    config.remove_stopwords = false;
    CHECK(preprocess("The report", config) == std::vector<std::string>{"the", "report"});
}

TEST_CASE("entity filter") {
    EntityFilterConfig config;
    CHECK(entity_filter("they met in Aleppo yesterday", config));
    CHECK_FALSE(entity_filter("nothing happened today", config));
    // Sentence-initial capitals are not evidence.
    CHECK_FALSE(entity_filter("Nothing happened. Today too.", config));
    config.gazetteer = {"idlib"};
    CHECK(entity_filter("news from idlib", config));
    config.enabled = false;
    CHECK(entity_filter("nothing happened today", config));
}

TEST_CASE("function word ratio") {
    const auto& words = default_stopwords();
    CHECK(function_word_ratio("", words) == 0.0);
    CHECK(function_word_ratio("the cat and the dog", words) == doctest::Approx(0.6));
}

TEST_CASE("sentence splitting") {
    CHECK(split_sentences("One. Two! Three? four") == std::vector<std::string>{"One.", "Two!", "Three?", "four"});
    CHECK(split_sentences("v1.2 stays whole\nnext line") == std::vector<std::string>{"v1.2 stays whole", "next line"});
    CHECK(split_sentences("  ").empty());
}

TEST_CASE("similarity normalization and utf8") {
    CHECK(normalize_for_similarity("  Hello   WORLD\t!") == "hello world !");
    CHECK(decode_utf8("a\xC3\xA9") == std::u32string{U'a', U'é'});
    CHECK(decode_utf8("\xFF") == std::u32string{U'�'});
}

TEST_CASE("iso8601 parsing") {
    CHECK(parse_iso8601("2018-04-01T00:00:00Z") == 1522540800);
    CHECK(parse_iso8601("2018-04-01") == 1522540800);
    CHECK(parse_iso8601("2018-04-01 02:30") == 1522540800 + 9000);
    CHECK(parse_iso8601("2018-04-01T02:00:00+02:00") == 1522540800);
    CHECK(parse_iso8601("2018-04-01T00:00:00.750Z") == 1522540800);
    CHECK_FALSE(parse_iso8601("2018-02-30").has_value());
    CHECK_FALSE(parse_iso8601("yesterday").has_value());
    CHECK(format_iso8601(1522540800 + 3661) == "2018-04-01T01:01:01Z");
    static_assert(day_floor(-1) == -kSecondsPerDay);
    CHECK(day_floor(1522540800 + 5) == 1522540800);
}
