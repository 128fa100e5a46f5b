#include "chronotopics/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace chronotopics {

namespace {

std::optional<EpochSeconds> parse_timestamp(const nlohmann::json& value) {
    if (value.is_number_integer()) return value.get<EpochSeconds>();
    if (value.is_number_float()) return static_cast<EpochSeconds>(value.get<double>());
    if (value.is_string()) {
        const auto& s = value.get_ref<const std::string&>();
        if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return static_cast<EpochSeconds>(std::stoll(s));
        return parse_iso8601(s);
    }
    return std::nullopt;
}

std::optional<std::string> optional_string(const nlohmann::json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
    return std::nullopt;
}

std::string one_line(std::string_view text) {
    std::string out(text);
    for (char& c : out)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return out;
}

}  // namespace

IngestResult ingest(const std::filesystem::path& path, const IngestConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read input file: " + path.string());

    IngestResult result;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    auto skip = [&](const std::string& why) {
        ++result.skipped;
        result.diagnostics.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            skip("not a JSON object");
            continue;
        }
        const auto id = optional_string(obj, "id");
        if (!id || id->empty()) {
            skip("missing id");
            continue;
        }
        const auto text = obj.find("text");
        if (text == obj.end() || !text->is_string()) {
            skip("missing text");
            continue;
        }
        const auto ts_field = obj.find("timestamp");
        if (ts_field == obj.end()) {
            skip("missing timestamp");
            continue;
        }
        const auto ts = parse_timestamp(*ts_field);
        if (!ts) {
            skip("unparseable timestamp");
            continue;
        }
        if ((config.window_begin && *ts < *config.window_begin) || (config.window_end && *ts >= *config.window_end)) {
            skip("timestamp outside corpus window");
            continue;
        }
        if (!seen.insert(*id).second) {
            skip("duplicate id " + *id);
            continue;
        }
        RawRecord rec;
        rec.id = *id;
        rec.text = text->get<std::string>();
        rec.timestamp = *ts;
        rec.cascade_id = optional_string(obj, "cascade_id");
        rec.parent_id = optional_string(obj, "parent_id");
        result.records.push_back(std::move(rec));
    }
    return result;
}

std::vector<PseudoDocument> aggregate_cascades(std::vector<RawRecord> records) {
    std::sort(records.begin(), records.end(), [](const RawRecord& a, const RawRecord& b) {
        return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id);
    });

    // Singleton cascades are keyed by "\x01" + record id so they never collide
    // with a real cascade id.
    std::map<std::pair<EpochSeconds, std::string>, PseudoDocument> groups;
    for (const RawRecord& rec : records) {
        const std::string key = rec.cascade_id ? *rec.cascade_id : "\x01" + rec.id;
        const EpochSeconds day = day_floor(rec.timestamp);
        auto [it, inserted] = groups.try_emplace({day, key});
        PseudoDocument& doc = it->second;
        if (inserted) {
            doc.cascade = rec.cascade_id ? *rec.cascade_id : rec.id;
            doc.day = day;
        }
        if (!doc.text.empty()) doc.text += '\n';
        doc.text += rec.text;
        for (std::string& piece : split_sentences(rec.text))
            doc.sentences.push_back({std::move(piece), rec.timestamp});
    }

    std::vector<PseudoDocument> out;
    out.reserve(groups.size());
    for (auto& [key, doc] : groups) out.push_back(std::move(doc));
    return out;
}

TimeGrid TimeGrid::covering(EpochSeconds earliest, EpochSeconds latest, EpochSeconds width) {
    if (width <= 0) throw std::invalid_argument("slice width must be positive");
    if (latest < earliest) std::swap(latest, earliest);
    TimeGrid grid;
    grid.origin = day_floor(earliest);
    grid.width = width;
    grid.slices = static_cast<std::size_t>((latest - grid.origin) / width) + 1;
    return grid;
}

std::size_t TimeGrid::category(EpochSeconds t) const {
    if (!contains(t)) throw std::out_of_range("timestamp " + format_iso8601(t) + " outside the time grid");
    return static_cast<std::size_t>((t - origin) / width);
}

WordId Vocabulary::intern(const std::string& term) {
    auto [it, inserted] = ids_.try_emplace(term, static_cast<WordId>(terms_.size()));
    if (inserted) {
        terms_.push_back(term);
        doc_frequency.push_back(0);
    }
    return it->second;
}

std::optional<WordId> Vocabulary::find(const std::string& term) const {
    const auto it = ids_.find(term);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::size_t Corpus::total_tokens() const {
    std::size_t n = 0;
    for (const auto& d : docs) n += d.tokens.size();
    return n;
}

std::vector<std::size_t> Corpus::tokens_per_slice() const {
    std::vector<std::size_t> counts(grid.slices, 0);
    for (const auto& d : docs) counts[d.time_category] += d.tokens.size();
    return counts;
}

std::vector<std::vector<std::size_t>> Corpus::docs_per_slice() const {
    std::vector<std::vector<std::size_t>> out(grid.slices);
    for (const auto& d : docs) out[d.time_category].push_back(d.id);
    return out;
}

void Corpus::recount_doc_frequency() {
    vocab.doc_frequency.assign(vocab.size(), 0);
    std::vector<std::size_t> last_seen(vocab.size(), static_cast<std::size_t>(-1));
    for (const auto& d : docs)
        for (WordId w : d.tokens)
            if (last_seen[w] != d.id) {
                last_seen[w] = d.id;
                ++vocab.doc_frequency[w];
            }
}

Corpus build_corpus(const std::vector<TokenizedDocument>& docs, const TimeGrid& grid, std::size_t min_tokens) {
    Corpus corpus;
    corpus.grid = grid;
    for (const TokenizedDocument& src : docs) {
        std::size_t n = 0;
        for (const auto& s : src.sentences) n += s.tokens.size();
        if (n < min_tokens) continue;

        Document doc;
        doc.id = corpus.docs.size();
        doc.timestamp = src.timestamp;
        doc.time_category = grid.category(src.timestamp);
        doc.tokens.reserve(n);
        for (const auto& s : src.sentences) {
            Sentence sentence{s.text, s.timestamp, doc.tokens.size(), 0};
            for (const auto& t : s.tokens) doc.tokens.push_back(corpus.vocab.intern(t));
            sentence.end = doc.tokens.size();
            doc.sentences.push_back(std::move(sentence));
        }
        corpus.docs.push_back(std::move(doc));
    }
    if (corpus.docs.empty()) throw DataError("empty corpus");
    corpus.recount_doc_frequency();
    return corpus;
}

Corpus corpus_from_records(std::vector<RawRecord> records, const PipelineConfig& config, PipelineStats* stats) {
    PipelineStats local;
    local.records_read = records.size();
    if (config.language_filter) {
        const WordSet& function_words = default_stopwords();
        std::erase_if(records, [&](const RawRecord& r) {
            const bool drop = function_word_ratio(r.text, function_words) < config.min_function_word_ratio;
            local.records_non_english += drop;
            return drop;
        });
    }

    const auto pseudo = aggregate_cascades(std::move(records));
    local.pseudo_docs = pseudo.size();

    std::vector<TokenizedDocument> tokenized;
    for (const PseudoDocument& p : pseudo) {
        if (!entity_filter(p.text, config.entities)) {
            ++local.dropped_no_entity;
            continue;
        }
        TokenizedDocument doc;
        doc.timestamp = p.day;
        for (const SentenceDraft& s : p.sentences) doc.sentences.push_back({s.text, s.timestamp, preprocess(s.text, config.clean)});
        tokenized.push_back(std::move(doc));
    }
    if (tokenized.empty()) {
        if (stats) *stats = local;
        throw DataError("empty corpus");
    }

    EpochSeconds first = tokenized.front().timestamp, last = first;
    for (const auto& d : tokenized) {
        first = std::min(first, d.timestamp);
        last = std::max(last, d.timestamp);
    }
    const TimeGrid grid = TimeGrid::covering(first, last, config.slice_width);

    try {
        Corpus corpus = build_corpus(tokenized, grid, config.min_doc_tokens);
        local.docs_kept = corpus.num_docs();
        local.dropped_short = tokenized.size() - corpus.num_docs();
        if (stats) *stats = local;
        return corpus;
    } catch (const DataError&) {
        local.dropped_short = tokenized.size();
        if (stats) *stats = local;
        throw;
    }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + (dir / name).string());
        return out;
    };
    {
        auto out = open("vocab.txt");
        for (const auto& t : corpus.vocab.terms()) out << t << '\n';
    }
    {
        // doc_id time_category timestamp n_tokens token...
        auto out = open("docs.txt");
        for (const auto& d : corpus.docs) {
            out << d.id << ' ' << d.time_category << ' ' << d.timestamp << ' ' << d.tokens.size();
            for (WordId w : d.tokens) out << ' ' << w;
            out << '\n';
        }
    }
    {
        // doc_id \t sentence_index \t timestamp \t token_begin \t token_end \t text
        auto out = open("sentences.txt");
        for (const auto& d : corpus.docs)
            for (std::size_t j = 0; j < d.sentences.size(); ++j) {
                const auto& s = d.sentences[j];
                out << d.id << '\t' << j << '\t' << s.timestamp << '\t' << s.begin << '\t' << s.end << '\t'
                    << one_line(s.text) << '\n';
            }
    }
    {
        auto out = open("grid.meta");
        out << "origin=" << corpus.grid.origin << '\n'
            << "origin_iso=" << format_iso8601(corpus.grid.origin) << '\n'
            << "width_seconds=" << corpus.grid.width << '\n'
            << "K=" << corpus.grid.slices << '\n';
    }
}

Corpus read_corpus(const std::filesystem::path& dir) {
    auto open = [&](const char* name) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) throw DataError("cannot read " + (dir / name).string());
        return in;
    };
    Corpus corpus;
    {
        auto in = open("grid.meta");
        std::string line;
        bool have_origin = false, have_width = false, have_k = false;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
            if (key == "origin") corpus.grid.origin = std::stoll(value), have_origin = true;
            else if (key == "width_seconds") corpus.grid.width = std::stoll(value), have_width = true;
            else if (key == "K") corpus.grid.slices = std::stoull(value), have_k = true;
        }
        if (!have_origin || !have_width || !have_k || corpus.grid.slices == 0 || corpus.grid.width <= 0)
            throw DataError("malformed grid.meta in " + dir.string());
    }
    {
        auto in = open("vocab.txt");
        std::string line;
        while (std::getline(in, line)) {
            const WordId id = corpus.vocab.intern(line);
            if (id + 1 != corpus.vocab.size()) throw DataError("duplicate term in vocab.txt: " + line);
        }
    }
    {
        auto in = open("docs.txt");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            Document d;
            std::size_t n = 0;
            if (!(row >> d.id >> d.time_category >> d.timestamp >> n) || d.id != corpus.docs.size())
                throw DataError("malformed docs.txt line: " + line);
            d.tokens.resize(n);
            for (auto& w : d.tokens)
                if (!(row >> w) || w >= corpus.vocab.size()) throw DataError("bad token id in docs.txt");
            if (d.time_category >= corpus.grid.slices) throw DataError("time category out of range in docs.txt");
            corpus.docs.push_back(std::move(d));
        }
    }
    {
        auto in = open("sentences.txt");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::array<std::string, 6> fields;
            std::size_t start = 0;
            for (std::size_t f = 0; f < 5; ++f) {
                const auto tab = line.find('\t', start);
                if (tab == std::string::npos) throw DataError("malformed sentences.txt line");
                fields[f] = line.substr(start, tab - start);
                start = tab + 1;
            }
            fields[5] = line.substr(start);
            const std::size_t doc = std::stoull(fields[0]);
            if (doc >= corpus.docs.size()) throw DataError("sentence references unknown document");
            Sentence s{fields[5], std::stoll(fields[2]), std::stoull(fields[3]), std::stoull(fields[4])};
            if (s.begin > s.end || s.end > corpus.docs[doc].tokens.size())
                throw DataError("sentence token range out of bounds");
            corpus.docs[doc].sentences.push_back(std::move(s));
        }
    }
    if (corpus.docs.empty()) throw DataError("empty corpus");
    corpus.recount_doc_frequency();
    return corpus;
}

}  // namespace chronotopics
