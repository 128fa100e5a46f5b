#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace chronotopics {

/// Seconds since the Unix epoch, UTC.
using EpochSeconds = std::int64_t;

inline constexpr EpochSeconds kSecondsPerDay = 86400;

/// Parses "YYYY-MM-DD", "YYYY-MM-DDThh:mm[:ss[.fff]]" with an optional "Z"
/// or "+hh:mm" / "-hh:mm" offset. Returns nullopt on anything else.
std::optional<EpochSeconds> parse_iso8601(std::string_view text);

/// "YYYY-MM-DDThh:mm:ssZ".
std::string format_iso8601(EpochSeconds t);

/// Midnight UTC of the day containing t.
constexpr EpochSeconds day_floor(EpochSeconds t) {
    EpochSeconds q = t / kSecondsPerDay;
    if (t % kSecondsPerDay < 0) --q;
    return q * kSecondsPerDay;
}

}  // namespace chronotopics
