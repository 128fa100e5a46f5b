#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace chronotopics {

using WordSet = std::unordered_set<std::string>;

/// Built-in English stopword list. Doubles as the function-word list used by
/// the language heuristic.
const WordSet& default_stopwords();

/// Reads one lowercased term per line; blank lines and '#' comments ignored.
WordSet load_word_list(const std::string& path);

struct CleanConfig {
    WordSet stopwords = default_stopwords();
    bool remove_stopwords = true;
};

/// Lowercases and tokenizes a tweet-like string. URLs, @-mentions and emoji
/// are dropped, '#' is stripped from hashtags, and stopwords are removed.
std::vector<std::string> preprocess(std::string_view text, const CleanConfig& config);

/// Raw alphanumeric word tokens with case preserved. Shared by the entity
/// and language heuristics.
std::vector<std::string> raw_words(std::string_view text);

struct EntityFilterConfig {
    bool enabled = true;
    WordSet gazetteer;  // lowercased entries
};

/// True iff the text has an entity candidate: a capitalized token that does
/// not start a sentence, or any token found in the gazetteer.
bool entity_filter(std::string_view raw_text, const EntityFilterConfig& config);

/// Share of raw word tokens found in `function_words`; 0 for empty text.
double function_word_ratio(std::string_view raw_text, const WordSet& function_words);

/// Splits on '.', '!' or '?' followed by whitespace. Pieces are trimmed and
/// empty pieces dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Lowercase ASCII and collapse whitespace runs to one space, trimmed.
std::string normalize_for_similarity(std::string_view text);

/// Decodes UTF-8; invalid bytes map to U+FFFD.
std::u32string decode_utf8(std::string_view text);

}  // namespace chronotopics
