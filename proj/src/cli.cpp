#include "chronotopics/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "chronotopics/baselines.hpp"
#include "chronotopics/corpus.hpp"
#include "chronotopics/metrics.hpp"
#include "chronotopics/model_io.hpp"
#include "chronotopics/sampler.hpp"
#include "chronotopics/summarizer.hpp"
#include "chronotopics/synth.hpp"

namespace chronotopics::cli {

namespace fs = std::filesystem;

namespace {

/// Bad flag values or combinations, reported with exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    return s.substr(b);
}

void require_file(const std::string& path, const char* what) {
    if (!fs::is_regular_file(path)) throw DataError(std::string(what) + " not found: " + path);
}

void require_dir(const std::string& path, const char* what) {
    if (!fs::is_directory(path)) throw DataError(std::string(what) + " not found: " + path);
}

std::size_t thread_budget() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CHRONOTOPICS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) n = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return n;
}

struct SamplerFlags {
    std::string model = "noc";
    std::size_t topics = 5;
    double alpha = 1.0;
    double beta = 0.5;
    std::size_t sweeps = 500;
    std::size_t burn_in = 300;
    std::uint64_t seed = 1;
    std::string psi_init = "random";
    double psi_smoothing = 0.0;  // 0: default 1e-3 / K
    std::string estimate = "final";
    bool quiet = false;

    void add_to(CLI::App& app, bool with_topics) {
        app.add_option("--model", model, "noc, lda or tot")->capture_default_str();
        if (with_topics) app.add_option("--topics", topics, "Number of topics T")->capture_default_str();
        app.add_option("--alpha", alpha, "Symmetric Dirichlet prior on theta")->capture_default_str();
        app.add_option("--beta", beta, "Symmetric Dirichlet prior on phi")->capture_default_str();
        app.add_option("--sweeps", sweeps, "Gibbs sweeps")->capture_default_str();
        app.add_option("--burn-in", burn_in, "Sweeps discarded before averaging")->capture_default_str();
        app.add_option("--seed", seed, "Random seed")->capture_default_str();
        app.add_option("--psi-init", psi_init, "random or activity")->capture_default_str();
        app.add_option("--psi-smoothing", psi_smoothing, "Pseudo-count on topic-time counts (default 1e-3/K)");
        app.add_option("--estimate", estimate, "final or average")->capture_default_str();
        app.add_flag("--quiet", quiet, "Suppress per-sweep log lines");
    }

    NocConfig config() const {
        NocConfig c;
        c.topics = topics;
        c.alpha = alpha;
        c.beta = beta;
        c.sweeps = sweeps;
        c.burn_in = burn_in;
        c.seed = seed;
        if (psi_init == "random") c.psi_init = PsiInit::random;
        else if (psi_init == "activity") c.psi_init = PsiInit::activity;
        else throw UsageError("--psi-init must be random or activity");
        if (psi_smoothing < 0.0) throw UsageError("--psi-smoothing must be positive");
        if (psi_smoothing > 0.0) c.psi_smoothing = psi_smoothing;
        if (estimate == "final") c.estimate = Estimate::last_sweep;
        else if (estimate == "average") c.estimate = Estimate::average;
        else throw UsageError("--estimate must be final or average");
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return c;
    }

    ModelKind kind() const {
        try {
            return parse_model_kind(model);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
};

struct TrainedModel {
    ModelOutput output;
    FitDiagnostics diagnostics;
    std::vector<std::vector<std::uint32_t>> assignments;
};

/// Fits one model. The returned object owns what output's pointers refer to,
/// so it must not be copied after the pointers are wired.
std::unique_ptr<TrainedModel> train_model(const Corpus& corpus, ModelKind kind, const NocConfig& config,
                                          const SweepObserver& observer) {
    auto trained = std::make_unique<TrainedModel>();
    trained->output.kind = kind;
    trained->output.config = config;
    switch (kind) {
        case ModelKind::noc: {
            FitResult r = fit(corpus, config, observer);
            trained->output.posterior = std::move(r.posterior);
            trained->diagnostics = std::move(r.diagnostics);
            trained->assignments = std::move(r.state.z);
            break;
        }
        case ModelKind::lda: {
            FitResult r = lda_fit(corpus, config, observer);
            trained->output.posterior = std::move(r.posterior);
            trained->diagnostics = std::move(r.diagnostics);
            trained->assignments = std::move(r.state.z);
            break;
        }
        case ModelKind::tot: {
            TotFitResult r = tot_fit(corpus, config, observer);
            trained->output.posterior = std::move(r.posterior);
            trained->output.beta = std::move(r.beta);
            trained->diagnostics = std::move(r.diagnostics);
            trained->assignments = std::move(r.state.counts.z);
            break;
        }
    }
    trained->output.assignments = &trained->assignments;
    trained->output.diagnostics = &trained->diagnostics;
    return trained;
}

SweepObserver sweep_logger(std::ostream& err, const std::string& model, std::size_t topics, bool quiet,
                           std::mutex* lock = nullptr) {
    if (quiet) return {};
    return [&err, model, topics, lock](const SweepRecord& r) {
        nlohmann::json line{{"event", "sweep"},     {"model", model},           {"topics", topics},
                            {"iteration", r.sweep}, {"log_joint", r.log_joint}, {"elapsed_ms", r.elapsed_ms}};
        if (lock) {
            std::lock_guard<std::mutex> guard(*lock);
            err << line.dump() << '\n';
        } else {
            err << line.dump() << '\n';
        }
    };
}

std::size_t clamp_k_words(std::size_t k_words, const Corpus& corpus, std::ostream& err) {
    if (k_words < 2) throw UsageError("--k-words must be at least 2");
    if (k_words > corpus.vocab_size()) {
        err << "note: --k-words " << k_words << " exceeds the vocabulary; using " << corpus.vocab_size() << '\n';
        k_words = corpus.vocab_size();
    }
    if (k_words < 2) throw DataError("vocabulary too small for coherence");
    return k_words;
}

void check_model_matches(const LoadedModel& model, const Corpus& corpus) {
    if (model.posterior.theta.rows() != corpus.num_docs() || model.posterior.phi.cols() != corpus.vocab_size())
        throw DataError("model directory does not match the corpus (document or vocabulary count differs)");
    if (model.posterior.psi && model.posterior.psi->cols() != corpus.num_slices())
        throw DataError("model directory does not match the corpus time grid");
}

// ---------------------------------------------------------------------------

struct IngestFlags {
    std::string input, out, stopwords, gazetteer, window_start, window_end;
    long slice_width_days = 14;
    std::size_t min_doc_tokens = 3;
    bool entity_filter = true;
    bool language_filter = false;
};

int cmd_ingest(const IngestFlags& f, std::ostream& out) {
    if (f.slice_width_days <= 0) throw UsageError("--slice-width-days must be positive");
    require_file(f.input, "input file");
    if (!f.stopwords.empty()) require_file(f.stopwords, "stopword list");
    if (!f.gazetteer.empty()) require_file(f.gazetteer, "gazetteer");

    PipelineConfig config;
    auto parse_bound = [](const std::string& s, const char* flag) -> std::optional<EpochSeconds> {
        if (s.empty()) return std::nullopt;
        const auto t = parse_iso8601(s);
        if (!t) throw UsageError(std::string(flag) + " is not an ISO-8601 instant");
        return t;
    };
    config.ingest.window_begin = parse_bound(f.window_start, "--window-start");
    config.ingest.window_end = parse_bound(f.window_end, "--window-end");
    if (!f.stopwords.empty()) config.clean.stopwords = load_word_list(f.stopwords);
    config.entities.enabled = f.entity_filter;
    if (!f.gazetteer.empty()) config.entities.gazetteer = load_word_list(f.gazetteer);
    config.language_filter = f.language_filter;
    config.slice_width = f.slice_width_days * kSecondsPerDay;
    config.min_doc_tokens = f.min_doc_tokens;

    IngestResult ingested = ingest(f.input, config.ingest);
    PipelineStats stats;
    const Corpus corpus = corpus_from_records(std::move(ingested.records), config, &stats);
    write_corpus(corpus, f.out);
    out << "records=" << stats.records_read << " skipped=" << ingested.skipped
        << " non_english=" << stats.records_non_english << " pseudo_docs=" << stats.pseudo_docs
        << " dropped_no_entity=" << stats.dropped_no_entity << " dropped_short=" << stats.dropped_short
        << " docs=" << stats.docs_kept << " V=" << corpus.vocab_size() << " K=" << corpus.num_slices()
        << " tokens=" << corpus.total_tokens() << '\n';
    return kExitOk;
}

struct SynthFlags {
    std::string out;
    SynthSpec spec;
    long slice_width_days = 14;
};

int cmd_synth(SynthFlags f, std::ostream& out) {
    if (f.slice_width_days <= 0) throw UsageError("--slice-width-days must be positive");
    if (f.spec.topics == 0 || f.spec.vocab == 0 || f.spec.docs == 0) throw UsageError("--topics, --vocab, --docs must be positive");
    if (f.spec.min_tokens == 0 || f.spec.min_tokens > f.spec.max_tokens) throw UsageError("invalid token range");
    if (!(f.spec.alpha > 0.0) || !(f.spec.beta > 0.0)) throw UsageError("--alpha and --beta must be positive");
    if (f.spec.modes.mode_width <= 0.0) throw UsageError("--mode-width must be positive");
    if (f.spec.marker_fraction * static_cast<double>(f.spec.topics) > 1.0) throw UsageError("--marker-fraction too large");
    f.spec.slice_width = f.slice_width_days * kSecondsPerDay;
    const SynthCorpus synth = generate(f.spec);
    write_corpus(synth.corpus, f.out);
    write_truth(synth.truth, fs::path(f.out) / "truth");
    out << "docs=" << synth.corpus.num_docs() << " V=" << synth.corpus.vocab_size()
        << " K=" << synth.corpus.num_slices() << " tokens=" << synth.corpus.total_tokens() << '\n';
    return kExitOk;
}

struct TrainFlags {
    std::string corpus, out;
    SamplerFlags sampler;
};

int cmd_train(const TrainFlags& f, std::ostream& out, std::ostream& err) {
    const ModelKind kind = f.sampler.kind();
    const NocConfig config = f.sampler.config();
    require_dir(f.corpus, "corpus directory");
    const Corpus corpus = read_corpus(f.corpus);
    const auto trained = train_model(corpus, kind, config, sweep_logger(err, f.sampler.model, config.topics, f.sampler.quiet));
    write_model(trained->output, f.out);
    out << "model=" << to_string(kind) << " topics=" << config.topics << " sweeps=" << config.sweeps
        << " final_log_joint=" << format_exact(trained->diagnostics.log_joint.back()) << '\n';
    return kExitOk;
}

struct SweepFlags {
    std::string corpus, out;
    SamplerFlags sampler;
    std::size_t min_topics = 4, max_topics = 20;
    std::size_t k_words = 500;
};

int cmd_sweep(SweepFlags f, std::ostream& out, std::ostream& err) {
    if (f.min_topics > f.max_topics) throw UsageError("empty topic range");
    if (f.min_topics < 2) throw UsageError("--min-topics must be at least 2");
    const ModelKind kind = f.sampler.kind();
    f.sampler.topics = f.min_topics;
    const NocConfig base = f.sampler.config();
    require_dir(f.corpus, "corpus directory");
    const Corpus corpus = read_corpus(f.corpus);
    const std::size_t k_words = clamp_k_words(f.k_words, corpus, err);
    const DocumentIndex index(corpus);

    const std::size_t n = f.max_topics - f.min_topics + 1;
    std::vector<double> mean(n, 0.0);
    std::vector<std::string> failures(n);
    std::atomic<std::size_t> next{0};
    std::mutex log_lock;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                NocConfig c = base;
                c.topics = f.min_topics + i;
                const auto trained =
                    train_model(corpus, kind, c, sweep_logger(err, f.sampler.model, c.topics, f.sampler.quiet, &log_lock));
                mean[i] = coherence_report(trained->output.posterior.phi, index, {k_words, true}).mean;
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    const std::size_t threads = std::min(n, thread_budget());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& msg : failures)
        if (!msg.empty()) throw std::runtime_error(msg);

    const std::size_t best = static_cast<std::size_t>(std::max_element(mean.begin(), mean.end()) - mean.begin());
    std::string table = "topics,mean_coherence,selected\n";
    for (std::size_t i = 0; i < n; ++i)
        table += std::to_string(f.min_topics + i) + "," + format_probability(mean[i]) + "," + (i == best ? "1" : "0") + "\n";
    if (!f.out.empty()) {
        std::ofstream file(f.out, std::ios::binary | std::ios::trunc);
        if (!file) throw DataError("cannot write " + f.out);
        file << table;
    }
    for (std::size_t i = 0; i < n; ++i)
        out << "T=" << (f.min_topics + i) << " mean_coherence=" << format_probability(mean[i]) << (i == best ? " *" : "")
            << '\n';
    out << "selected_topics=" << (f.min_topics + best) << '\n';
    return kExitOk;
}

struct EvalFlags {
    std::string corpus, model_dir, out;
    std::size_t k_words = 500;
    std::vector<double> gammas{0.0, 0.4, 0.7, 1.0};
    bool no_smoothing = false;
};

int cmd_eval(const EvalFlags& f, std::ostream& out, std::ostream& err) {
    for (double g : f.gammas)
        if (!(g >= 0.0 && g <= 1.0)) throw UsageError("--gammas values must lie in [0, 1]");
    if (f.gammas.empty()) throw UsageError("--gammas must not be empty");
    require_dir(f.corpus, "corpus directory");
    require_dir(f.model_dir, "model directory");
    const Corpus corpus = read_corpus(f.corpus);
    const LoadedModel model = read_model(f.model_dir);
    check_model_matches(model, corpus);
    const std::size_t k_words = clamp_k_words(f.k_words, corpus, err);
    const fs::path dest = f.out.empty() ? fs::path(f.model_dir) : fs::path(f.out);
    fs::create_directories(dest);

    const DocumentIndex index(corpus);
    const CoherenceReport coh = coherence_report(model.posterior.phi, index, {k_words, !f.no_smoothing});
    {
        std::ofstream file(dest / "coherence.csv", std::ios::binary | std::ios::trunc);
        if (!file) throw DataError("cannot write coherence.csv");
        file << "topic,coherence\n";
        for (std::size_t t = 0; t < coh.per_topic.size(); ++t) file << t << ',' << format_probability(coh.per_topic[t]) << '\n';
    }
    out << "coherence k_words=" << k_words << " mean=" << format_probability(coh.mean) << '\n';
    for (std::size_t t = 0; t < coh.per_topic.size(); ++t)
        out << "  topic " << t << ": " << format_probability(coh.per_topic[t]) << '\n';

    if (!model.posterior.psi) {
        fs::remove(dest / "sdt.csv");
        out << "sdt: model has no time distribution; skipped\n";
        return kExitOk;
    }
    const SdtReport sdt = sdt_report(*model.posterior.psi, f.gammas);
    {
        std::ofstream file(dest / "sdt.csv", std::ios::binary | std::ios::trunc);
        if (!file) throw DataError("cannot write sdt.csv");
        file << "topic,H,H_max";
        for (double g : sdt.gammas) file << ",gamma=" << format_probability(g);
        file << '\n';
        for (std::size_t t = 0; t < sdt.entropy.size(); ++t) {
            file << t << ',' << format_probability(sdt.entropy[t]) << ',' << format_probability(sdt.h_max);
            for (double s : sdt.score[t]) file << ',' << format_probability(s);
            file << '\n';
        }
    }
    out << "sdt H_max=" << format_probability(sdt.h_max) << '\n';
    for (std::size_t g = 0; g < sdt.gammas.size(); ++g) {
        out << "  gamma=" << format_probability(sdt.gammas[g]) << ':';
        for (std::size_t t = 0; t < sdt.entropy.size(); ++t) {
            const bool best = std::find(sdt.best[g].begin(), sdt.best[g].end(), t) != sdt.best[g].end();
            out << ' ' << "T" << t << '=' << format_probability(sdt.score[t][g]) << (best ? "*" : "");
        }
        out << '\n';
    }
    return kExitOk;
}

struct SummarizeFlags {
    std::string corpus, model_dir, out;
    SummaryConfig config;
};

int cmd_summarize(const SummarizeFlags& f, std::ostream& out) {
    try {
        f.config.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    require_dir(f.corpus, "corpus directory");
    require_dir(f.model_dir, "model directory");
    const Corpus corpus = read_corpus(f.corpus);
    const LoadedModel model = read_model(f.model_dir);
    check_model_matches(model, corpus);
    const fs::path dest = f.out.empty() ? fs::path(f.model_dir) : fs::path(f.out);
    fs::create_directories(dest);

    const auto summaries = summarize(model.posterior, corpus, f.config);
    std::ofstream lines(dest / "summaries.jsonl", std::ios::binary | std::ios::trunc);
    if (!lines) throw DataError("cannot write summaries.jsonl");
    for (const NarrativeSummary& s : summaries) {
        std::ofstream file(dest / ("summary_" + std::to_string(s.topic) + ".txt"), std::ios::binary | std::ios::trunc);
        if (!file) throw DataError("cannot write summary file");
        file << "keywords:";
        for (const auto& k : s.keywords) file << ' ' << k;
        file << '\n';
        for (const SummaryEntry& e : s.entries) {
            file << format_iso8601(e.timestamp) << '\t' << e.text << '\n';
            nlohmann::json rec{{"topic", s.topic},         {"score", e.score},       {"timestamp", format_iso8601(e.timestamp)},
                               {"doc_id", e.ref.doc},      {"sentence", e.ref.index}, {"text", e.text}};
            lines << rec.dump() << '\n';
        }
        out << "topic " << s.topic << ": " << s.entries.size() << " sentences"
            << (s.short_of_request ? " (fewer than requested)" : "") << '\n';
    }
    return kExitOk;
}

}  // namespace

std::vector<std::string> config_file_arguments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read config file: " + path);
    std::vector<std::string> args;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
        std::replace(key.begin(), key.end(), '_', '-');
        args.push_back("--" + key + "=" + value);
    }
    return args;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topic models over categorical time: ingest, fit, evaluate and summarize timestamped corpora",
                 "chronotopics"};
    app.require_subcommand(1);
    app.fallthrough(false);

    auto subcommand = [&](const char* name, const char* help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--config", "Flat key = value file; flags given on the command line win");
        return sub;
    };

    IngestFlags ingest_flags;
    CLI::App* ingest_cmd = subcommand("ingest", "Build a corpus directory from line-delimited JSON records");
    ingest_cmd->add_option("--input", ingest_flags.input, "Input records (.jsonl)")->required();
    ingest_cmd->add_option("--out", ingest_flags.out, "Corpus directory to write")->required();
    ingest_cmd->add_option("--slice-width-days", ingest_flags.slice_width_days)->capture_default_str();
    ingest_cmd->add_option("--min-doc-tokens", ingest_flags.min_doc_tokens)->capture_default_str();
    ingest_cmd->add_option("--entity-filter", ingest_flags.entity_filter, "true/false")->capture_default_str();
    ingest_cmd->add_option("--language-filter", ingest_flags.language_filter, "true/false")->capture_default_str();
    ingest_cmd->add_option("--stopword-list", ingest_flags.stopwords, "Replace the built-in stopword list");
    ingest_cmd->add_option("--gazetteer", ingest_flags.gazetteer, "Known entity names, one per line");
    ingest_cmd->add_option("--window-start", ingest_flags.window_start, "Drop records before this instant");
    ingest_cmd->add_option("--window-end", ingest_flags.window_end, "Drop records at or after this instant");

    SynthFlags synth_flags;
    CLI::App* synth_cmd = subcommand("synth", "Sample a synthetic corpus with known topics and time structure");
    SynthSpec& spec = synth_flags.spec;
    synth_cmd->add_option("--out", synth_flags.out, "Corpus directory to write")->required();
    synth_cmd->add_option("--topics", spec.topics)->capture_default_str();
    synth_cmd->add_option("--vocab", spec.vocab)->capture_default_str();
    synth_cmd->add_option("--docs", spec.docs)->capture_default_str();
    synth_cmd->add_option("--min-tokens", spec.min_tokens)->capture_default_str();
    synth_cmd->add_option("--max-tokens", spec.max_tokens)->capture_default_str();
    synth_cmd->add_option("--alpha", spec.alpha)->capture_default_str();
    synth_cmd->add_option("--beta", spec.beta)->capture_default_str();
    synth_cmd->add_option("--slices", spec.modes.slices)->capture_default_str();
    synth_cmd->add_option("--modes", spec.modes.modes_per_topic, "Time modes per topic")->capture_default_str();
    synth_cmd->add_option("--mode-width", spec.modes.mode_width, "Mode width in slices")->capture_default_str();
    synth_cmd->add_option("--marker-fraction", spec.marker_fraction)->capture_default_str();
    synth_cmd->add_option("--marker-mass", spec.marker_mass)->capture_default_str();
    synth_cmd->add_option("--sentence-length", spec.sentence_length)->capture_default_str();
    synth_cmd->add_option("--slice-width-days", synth_flags.slice_width_days)->capture_default_str();
    synth_cmd->add_option("--seed", spec.seed)->capture_default_str();

    TrainFlags train_flags;
    CLI::App* train_cmd = subcommand("train", "Fit NOC, LDA or TOT to a corpus directory");
    train_cmd->add_option("--corpus", train_flags.corpus)->required();
    train_cmd->add_option("--out", train_flags.out, "Model directory to write")->required();
    train_flags.sampler.add_to(*train_cmd, true);

    SweepFlags sweep_flags;
    sweep_flags.sampler.model = "lda";
    CLI::App* sweep_cmd = subcommand("sweep", "Mean coherence over a range of topic counts");
    sweep_cmd->add_option("--corpus", sweep_flags.corpus)->required();
    sweep_cmd->add_option("--out", sweep_flags.out, "CSV file for the table");
    sweep_cmd->add_option("--min-topics", sweep_flags.min_topics)->capture_default_str();
    sweep_cmd->add_option("--max-topics", sweep_flags.max_topics)->capture_default_str();
    sweep_cmd->add_option("--k-words", sweep_flags.k_words)->capture_default_str();
    sweep_flags.sampler.add_to(*sweep_cmd, false);

    EvalFlags eval_flags;
    CLI::App* eval_cmd = subcommand("eval", "Coherence and SDT scores for a model directory");
    eval_cmd->add_option("--corpus", eval_flags.corpus)->required();
    eval_cmd->add_option("--model-dir", eval_flags.model_dir)->required();
    eval_cmd->add_option("--out", eval_flags.out, "Defaults to the model directory");
    eval_cmd->add_option("--k-words", eval_flags.k_words)->capture_default_str();
    eval_cmd->add_option("--gammas", eval_flags.gammas)->delimiter(',')->capture_default_str();
    eval_cmd->add_flag("--no-smoothing", eval_flags.no_smoothing, "Disable add-one smoothing of joint counts");

    SummarizeFlags sum_flags;
    CLI::App* sum_cmd = subcommand("summarize", "Time-ordered extractive summaries per topic");
    sum_cmd->add_option("--corpus", sum_flags.corpus)->required();
    sum_cmd->add_option("--model-dir", sum_flags.model_dir)->required();
    sum_cmd->add_option("--out", sum_flags.out, "Defaults to the model directory");
    sum_cmd->add_option("--docs-per-topic", sum_flags.config.docs_per_topic)->capture_default_str();
    sum_cmd->add_option("--sentences-per-topic", sum_flags.config.sentences_per_topic)->capture_default_str();
    sum_cmd->add_option("--threshold", sum_flags.config.similarity_threshold)->capture_default_str();
    sum_cmd->add_flag("--length-normalize", sum_flags.config.length_normalize);
    sum_cmd->add_option("--keywords", sum_flags.config.keywords)->capture_default_str();
    sum_cmd->add_option("--seed", sum_flags.config.seed)->capture_default_str();

    try {
        // Splice config-file arguments in right after the subcommand name so
        // explicit flags, which come later, take precedence.
        std::vector<std::string> args;
        std::vector<std::string> from_config;
        for (std::size_t i = 0; i < raw_args.size(); ++i) {
            const std::string& a = raw_args[i];
            if (a == "--config" && i + 1 < raw_args.size()) {
                from_config = config_file_arguments(raw_args[++i]);
            } else if (a.rfind("--config=", 0) == 0) {
                from_config = config_file_arguments(a.substr(9));
            } else {
                args.push_back(a);
            }
        }
        if (!from_config.empty() && !args.empty()) args.insert(args.begin() + 1, from_config.begin(), from_config.end());
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }

    try {
        if (*ingest_cmd) return cmd_ingest(ingest_flags, out);
        if (*synth_cmd) return cmd_synth(synth_flags, out);
        if (*train_cmd) return cmd_train(train_flags, out, err);
        if (*sweep_cmd) return cmd_sweep(sweep_flags, out, err);
        if (*eval_cmd) return cmd_eval(eval_flags, out, err);
        if (*sum_cmd) return cmd_summarize(sum_flags, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace chronotopics::cli
