#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chronotopics/cli.hpp"
#include "chronotopics/model_io.hpp"
#include "temp_dir.hpp"

using namespace chronotopics;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    return lines;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// One small synthetic corpus shared by the command tests.
struct Fixture {
    testing::TempDir tmp{"cli"};
    std::string corpus = (tmp.path / "corpus").string();
    Fixture() {
        const Run r = run({"synth", "--out", corpus, "--topics", "3", "--vocab", "90", "--docs", "240", "--seed", "2",
                           "--modes", "1", "--slices", "6"});
        REQUIRE(r.code == cli::kExitOk);
    }
    std::string path(const std::string& name) const { return (tmp.path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"train"}).code == cli::kExitUsage);
    const Run help = run({"--help"});
    CHECK(help.code == cli::kExitOk);
    CHECK(help.out.find("summarize") != std::string::npos);
}

TEST_CASE("ingest command") {
    testing::TempDir tmp("cli_ingest");
    SUBCASE("missing file") {
        const Run r = run({"ingest", "--input", (tmp.path / "none.jsonl").string(), "--out", (tmp.path / "c").string()});
        CHECK(r.code == cli::kExitFailure);
        CHECK(r.err.find("not found") != std::string::npos);
    }
    SUBCASE("everything filtered") {
        write_file(tmp.path / "in.jsonl", R"({"id":"a","text":"nothing much happened here","timestamp":1522540800})"
                                          "\n");
        const Run r = run({"ingest", "--input", (tmp.path / "in.jsonl").string(), "--out", (tmp.path / "c").string()});
        CHECK(r.code == cli::kExitFailure);
        CHECK(r.err.find("empty corpus") != std::string::npos);
    }
    SUBCASE("valid input") {
        write_file(tmp.path / "in.jsonl",
                   R"({"id":"a","text":"Convoy reached Aleppo this morning","timestamp":"2018-04-01T08:00:00Z"})"
                   "\n"
                   R"({"id":"b","text":"Volunteers from Idlib report heavy damage","timestamp":"2018-04-20T08:00:00Z"})"
                   "\n"
                   R"({"id":"c","text":"broken line)"
                   "\n");
        const Run r = run({"ingest", "--input", (tmp.path / "in.jsonl").string(), "--out", (tmp.path / "c").string()});
        CHECK(r.code == cli::kExitOk);
        CHECK(r.out.find("docs=2") != std::string::npos);
        CHECK(r.out.find("skipped=1") != std::string::npos);
        CHECK(r.out.find("K=2") != std::string::npos);
        CHECK(fs::exists(tmp.path / "c" / "vocab.txt"));
    }
    SUBCASE("bad window bound") {
        write_file(tmp.path / "in.jsonl", "");
        const Run r = run({"ingest", "--input", (tmp.path / "in.jsonl").string(), "--out", (tmp.path / "c").string(),
                           "--window-start", "someday"});
        CHECK(r.code == cli::kExitUsage);
    }
}

TEST_CASE_FIXTURE(Fixture, "train command") {
    SUBCASE("noc writes every file and logs each sweep") {
        const Run r = run({"train", "--corpus", corpus, "--out", path("noc"), "--topics", "3", "--sweeps", "12",
                           "--burn-in", "4", "--psi-init", "activity"});
        REQUIRE(r.code == cli::kExitOk);
        for (const char* f : {"phi.csv", "theta.csv", "psi.csv", "assignments.txt", "fit.meta"})
            CHECK(fs::exists(fs::path(path("noc")) / f));
        std::istringstream log(r.err);
        std::size_t n = 0;
        for (std::string line; std::getline(log, line); ++n) {
            const auto j = nlohmann::json::parse(line);
            CHECK(j.at("iteration").get<std::size_t>() == n + 1);
            CHECK(j.contains("log_joint"));
            CHECK(j.contains("elapsed_ms"));
        }
        CHECK(n == 12);
    }
    SUBCASE("lda writes no psi") {
        const Run r = run({"train", "--corpus", corpus, "--out", path("lda"), "--model", "lda", "--topics", "3",
                           "--sweeps", "10", "--burn-in", "2", "--quiet"});
        REQUIRE(r.code == cli::kExitOk);
        CHECK(r.err.empty());
        CHECK_FALSE(fs::exists(fs::path(path("lda")) / "psi.csv"));
    }
    SUBCASE("invalid hyperparameters are usage errors") {
        CHECK(run({"train", "--corpus", corpus, "--out", path("x"), "--topics", "1"}).code == cli::kExitUsage);
        CHECK(run({"train", "--corpus", corpus, "--out", path("x"), "--alpha", "-1"}).code == cli::kExitUsage);
        CHECK(run({"train", "--corpus", corpus, "--out", path("x"), "--sweeps", "10", "--burn-in", "10"}).code ==
              cli::kExitUsage);
        CHECK(run({"train", "--corpus", corpus, "--out", path("x"), "--estimate", "best"}).code == cli::kExitUsage);
        CHECK(run({"train", "--corpus", corpus, "--out", path("x"), "--topics", "three"}).code == cli::kExitUsage);
    }
    SUBCASE("missing corpus is a data error") {
        CHECK(run({"train", "--corpus", path("nowhere"), "--out", path("x")}).code == cli::kExitFailure);
    }
    SUBCASE("config file with flag override") {
        write_file(path("train.conf"), "# shared settings\nmodel = lda\ntopics = 4\nsweeps = 8\nburn_in = 3\nquiet = true\n");
        const Run r = run({"train", "--config", path("train.conf"), "--corpus", corpus, "--out", path("conf"),
                           "--topics", "2"});
        REQUIRE(r.code == cli::kExitOk);
        const LoadedModel m = read_model(path("conf"));
        CHECK(m.kind == ModelKind::lda);
        CHECK(m.meta.at("topics") == "2");
        CHECK(m.meta.at("sweeps") == "8");
        CHECK(m.meta.at("burn_in") == "3");
    }
    SUBCASE("unknown config keys are rejected") {
        write_file(path("bad.conf"), "topics = 3\ncolour = blue\n");
        CHECK(run({"train", "--config", path("bad.conf"), "--corpus", corpus, "--out", path("x")}).code ==
              cli::kExitUsage);
        write_file(path("worse.conf"), "just words\n");
        CHECK(run({"train", "--config", path("worse.conf"), "--corpus", corpus, "--out", path("x")}).code ==
              cli::kExitUsage);
    }
}

TEST_CASE("config file parsing") {
    testing::TempDir tmp("cli_conf");
    write_file(tmp.path / "a.conf", "k_words = 20   # trailing comment\n\nout_dir=\"x y\"\n");
    CHECK(cli::config_file_arguments((tmp.path / "a.conf").string()) ==
          std::vector<std::string>{"--k-words=20", "--out-dir=x y"});
    CHECK_THROWS(cli::config_file_arguments((tmp.path / "missing.conf").string()));
}

TEST_CASE_FIXTURE(Fixture, "sweep command") {
    SUBCASE("one row per topic count, selection marked") {
        const Run r = run({"sweep", "--corpus", corpus, "--min-topics", "4", "--max-topics", "6", "--sweeps", "15",
                           "--burn-in", "5", "--k-words", "10", "--out", path("sweep.csv"), "--quiet"});
        REQUIRE(r.code == cli::kExitOk);
        const auto lines = lines_of(path("sweep.csv"));
        REQUIRE(lines.size() == 4);
        CHECK(lines[0] == "topics,mean_coherence,selected");
        std::size_t selected = 0;
        for (std::size_t i = 1; i < lines.size(); ++i) selected += lines[i].back() == '1';
        CHECK(selected == 1);
        CHECK(r.out.find("selected_topics=") != std::string::npos);
    }
    SUBCASE("three planted topics select a nearby count") {
        // A 90-term vocabulary is too small for three well separated topics; use a wider one.
        const std::string wide = path("wide");
        REQUIRE(run({"synth", "--out", wide, "--topics", "3", "--docs", "300", "--vocab", "300", "--seed", "3"}).code ==
                cli::kExitOk);
        const Run r = run({"sweep", "--corpus", wide, "--min-topics", "2", "--max-topics", "7", "--sweeps", "200",
                           "--burn-in", "100", "--k-words", "10", "--quiet"});
        REQUIRE(r.code == cli::kExitOk);
        const auto pos = r.out.find("selected_topics=");
        REQUIRE(pos != std::string::npos);
        const int chosen = std::stoi(r.out.substr(pos + 16));
        CHECK(chosen >= 2);
        CHECK(chosen <= 4);
    }
    SUBCASE("empty range") {
        CHECK(run({"sweep", "--corpus", corpus, "--min-topics", "6", "--max-topics", "5"}).code == cli::kExitUsage);
    }
}

TEST_CASE_FIXTURE(Fixture, "eval and summarize commands") {
    REQUIRE(run({"train", "--corpus", corpus, "--out", path("m"), "--topics", "3", "--sweeps", "30", "--burn-in", "10",
                 "--quiet"})
                .code == cli::kExitOk);
    SUBCASE("eval writes coherence and sdt tables") {
        const Run r = run({"eval", "--corpus", corpus, "--model-dir", path("m"), "--k-words", "10", "--gammas",
                           "0,0.4,0.7,1"});
        REQUIRE(r.code == cli::kExitOk);
        const auto coh = lines_of(fs::path(path("m")) / "coherence.csv");
        CHECK(coh.size() == 4);
        const auto sdt = lines_of(fs::path(path("m")) / "sdt.csv");
        REQUIRE(sdt.size() == 4);
        CHECK(sdt[0] == "topic,H,H_max,gamma=0,gamma=0.4,gamma=0.7,gamma=1");
        CHECK(r.out.find('*') != std::string::npos);
    }
    SUBCASE("eval rejects gammas outside [0,1]") {
        CHECK(run({"eval", "--corpus", corpus, "--model-dir", path("m"), "--gammas", "0,2"}).code == cli::kExitUsage);
    }
    SUBCASE("summarize writes per-topic files") {
        const Run r = run({"summarize", "--corpus", corpus, "--model-dir", path("m"), "--out", path("s"),
                           "--sentences-per-topic", "4"});
        REQUIRE(r.code == cli::kExitOk);
        for (int t = 0; t < 3; ++t) {
            const auto lines = lines_of(fs::path(path("s")) / ("summary_" + std::to_string(t) + ".txt"));
            REQUIRE_FALSE(lines.empty());
            CHECK(lines[0].rfind("keywords:", 0) == 0);
        }
        for (const auto& line : lines_of(fs::path(path("s")) / "summaries.jsonl")) {
            const auto j = nlohmann::json::parse(line);
            for (const char* key : {"topic", "score", "timestamp", "doc_id", "text"}) CHECK(j.contains(key));
        }
    }
    SUBCASE("mismatched corpus is a data error") {
        const std::string other = path("other");
        REQUIRE(run({"synth", "--out", other, "--docs", "50", "--vocab", "40"}).code == cli::kExitOk);
        CHECK(run({"eval", "--corpus", other, "--model-dir", path("m")}).code == cli::kExitFailure);
    }
}
