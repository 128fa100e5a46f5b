#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chronotopics/corpus.hpp"

namespace chronotopics::testing {

struct DocSpec {
    EpochSeconds day_offset = 0;  // days after the origin
    std::vector<std::string> tokens;
};

inline constexpr EpochSeconds kOrigin = 1522540800;  // 2018-04-01

/// Corpus with one sentence per document, tokens used as given.
inline Corpus make_corpus(const std::vector<DocSpec>& specs, EpochSeconds width = 14 * kSecondsPerDay,
                          std::size_t min_tokens = 1) {
    std::vector<TokenizedDocument> docs;
    EpochSeconds lo = 0, hi = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const EpochSeconds t = kOrigin + specs[i].day_offset * kSecondsPerDay;
        lo = i == 0 ? t : std::min(lo, t);
        hi = i == 0 ? t : std::max(hi, t);
        TokenizedSentence s;
        s.timestamp = t;
        s.tokens = specs[i].tokens;
        for (const auto& tok : s.tokens) s.text += (s.text.empty() ? "" : " ") + tok;
        docs.push_back({t, {std::move(s)}});
    }
    return build_corpus(docs, TimeGrid::covering(lo, hi, width), min_tokens);
}

}  // namespace chronotopics::testing
