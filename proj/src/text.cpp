#include "chronotopics/text.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace chronotopics {

namespace {

constexpr const char* kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",
    "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
    "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",
    "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don", "should",
    "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn", "hadn",
    "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn", "weren",
    "won", "wouldn", "rt", "amp", "via",
};

bool is_emoji(char32_t c) {
    return (c >= 0x1F000 && c <= 0x1FAFF) || (c >= 0x2600 && c <= 0x27BF) || (c >= 0x2300 && c <= 0x23FF) ||
           (c >= 0x2B00 && c <= 0x2BFF) || (c >= 0xFE00 && c <= 0xFE0F) || c == 0x200D || c == 0x20E3 ||
           (c >= 0xE0000 && c <= 0xE007F);
}

bool is_word_char(char32_t c) {
    if (c < 0x80) return std::isalnum(static_cast<unsigned char>(c)) != 0;
    if (is_emoji(c)) return false;
    if (c >= 0x2000 && c <= 0x206F) return false;  // general punctuation
    if (c >= 0x3000 && c <= 0x303F) return false;  // CJK punctuation
    if (c == 0xFFFD || c == 0x00A0 || (c >= 0x00A1 && c <= 0x00BF) || c == 0x00D7 || c == 0x00F7) return false;
    return true;
}

void append_utf8(std::string& out, char32_t c) {
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

bool is_space(char32_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool starts_with_ci(std::u32string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char32_t c = s[i];
        if (c < 0x80) c = static_cast<char32_t>(std::tolower(static_cast<int>(c)));
        if (c != static_cast<char32_t>(prefix[i])) return false;
    }
    return true;
}

bool is_discarded_chunk(std::u32string_view chunk) {
    return chunk.front() == U'@' || starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") ||
           starts_with_ci(chunk, "www.");
}

/// Whitespace chunks minus URLs and mentions, split into words.
template <class Emit>
void for_each_word(std::string_view text, bool lowercase, Emit&& emit) {
    const std::u32string decoded = decode_utf8(text);
    std::u32string_view rest{decoded};
    while (!rest.empty()) {
        std::size_t start = 0;
        while (start < rest.size() && is_space(rest[start])) ++start;
        std::size_t stop = start;
        while (stop < rest.size() && !is_space(rest[stop])) ++stop;
        const std::u32string_view chunk = rest.substr(start, stop - start);
        rest.remove_prefix(stop);
        if (chunk.empty() || is_discarded_chunk(chunk)) continue;

        std::string word;
        for (char32_t c : chunk) {
            if (is_word_char(c)) {
                if (lowercase && c < 0x80) c = static_cast<char32_t>(std::tolower(static_cast<int>(c)));
                append_utf8(word, c);
            } else if (!word.empty()) {
                emit(std::move(word));
                word.clear();
            }
        }
        if (!word.empty()) emit(std::move(word));
    }
}

}  // namespace

const WordSet& default_stopwords() {
    static const WordSet words(std::begin(kStopwords), std::end(kStopwords));
    return words;
}

WordSet load_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read word list: " + path);
    WordSet out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        std::size_t b = 0;
        while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        line.erase(0, b);
        if (line.empty() || line.front() == '#') continue;
        for (char& c : line) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.insert(line);
    }
    return out;
}

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto b0 = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        }
        bool valid = len > 0 && i + len <= text.size();
        for (std::size_t k = 1; valid && k < len; ++k) {
            const auto b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80) valid = false;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!valid) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::vector<std::string> preprocess(std::string_view text, const CleanConfig& config) {
    std::vector<std::string> tokens;
    for_each_word(text, true, [&](std::string&& w) {
        if (config.remove_stopwords && config.stopwords.count(w)) return;
        tokens.push_back(std::move(w));
    });
    return tokens;
}

std::vector<std::string> raw_words(std::string_view text) {
    std::vector<std::string> words;
    for_each_word(text, false, [&](std::string&& w) { words.push_back(std::move(w)); });
    return words;
}

bool entity_filter(std::string_view raw_text, const EntityFilterConfig& config) {
    if (!config.enabled) return true;
    for (const std::string& sentence : split_sentences(raw_text)) {
        const auto words = raw_words(sentence);
        for (std::size_t i = 0; i < words.size(); ++i) {
            const std::string& w = words[i];
            if (i > 0 && std::isupper(static_cast<unsigned char>(w.front()))) return true;
            if (!config.gazetteer.empty()) {
                std::string lower = w;
                for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                if (config.gazetteer.count(lower)) return true;
            }
        }
    }
    return false;
}

double function_word_ratio(std::string_view raw_text, const WordSet& function_words) {
    std::size_t total = 0, hits = 0;
    for_each_word(raw_text, true, [&](std::string&& w) {
        ++total;
        if (function_words.count(w)) ++hits;
    });
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    auto flush = [&](std::size_t b, std::size_t e) {
        while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
        if (e > b) out.emplace_back(text.substr(b, e - b));
    };
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            flush(begin, i);
            begin = i + 1;
        } else if ((c == '.' || c == '!' || c == '?') && i + 1 < text.size() &&
                   std::isspace(static_cast<unsigned char>(text[i + 1]))) {
            flush(begin, i + 1);
            begin = i + 1;
        }
    }
    flush(begin, text.size());
    return out;
}

std::string normalize_for_similarity(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace chronotopics
