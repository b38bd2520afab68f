// Copyright 2026 The coa-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "coakit/errors.hpp"

namespace coakit {

using TimeInstant = std::chrono::sys_time<std::chrono::microseconds>;

/// A STIX timestamp: `YYYY-MM-DDTHH:MM:SS[.s{1,6}]Z`, UTC only.
///
/// The exact source text is kept alongside the decoded instant so that
/// round-tripping an object reproduces its timestamps byte for byte.
struct StixTimestamp {
    TimeInstant instant{};
    std::string text;

    const std::string& serialize() const { return text; }

    friend bool operator==(const StixTimestamp& a, const StixTimestamp& b) {
        return a.instant == b.instant && a.text == b.text;
    }
};

namespace detail {

inline bool read_digits(std::string_view s, std::size_t pos, std::size_t n, long& out) {
    long v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

} // namespace detail

/// Parses a STIX timestamp string. Throws MalformedTimestamp on anything
/// that is not `YYYY-MM-DDTHH:MM:SS[.s{1,6}]Z` with a real calendar date.
inline StixTimestamp parse_timestamp(std::string_view text) {
    auto fail = [&](const char* why) -> StixTimestamp {
        throw MalformedTimestamp(std::string(why) + ": \"" + std::string(text) + "\"");
    };

    if (text.size() < 20 || text.size() > 27) return fail("bad length");
    if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' || text[16] != ':')
        return fail("bad separators");
    if (text.back() != 'Z') return fail("missing Z suffix");

    long year, month, day, hour, minute, second;
    if (!detail::read_digits(text, 0, 4, year) || !detail::read_digits(text, 5, 2, month) ||
        !detail::read_digits(text, 8, 2, day) || !detail::read_digits(text, 11, 2, hour) ||
        !detail::read_digits(text, 14, 2, minute) || !detail::read_digits(text, 17, 2, second))
        return fail("non-digit field");

    long micros = 0;
    if (text.size() > 20) {
        if (text[19] != '.') return fail("bad fraction separator");
        const std::size_t ndigits = text.size() - 21; // between '.' and 'Z'
        if (ndigits < 1 || ndigits > 6) return fail("fraction must have 1-6 digits");
        if (!detail::read_digits(text, 20, ndigits, micros)) return fail("non-digit fraction");
        for (std::size_t i = ndigits; i < 6; ++i) micros *= 10;
    }

    if (hour > 23 || minute > 59 || second > 59) return fail("time field out of range");
    const std::chrono::year_month_day ymd{std::chrono::year(static_cast<int>(year)),
                                          std::chrono::month(static_cast<unsigned>(month)),
                                          std::chrono::day(static_cast<unsigned>(day))};
    if (!ymd.ok()) return fail("invalid calendar date");

    TimeInstant instant = std::chrono::sys_days(ymd);
    instant += std::chrono::hours(hour) + std::chrono::minutes(minute) +
               std::chrono::seconds(second) + std::chrono::microseconds(micros);
    return StixTimestamp{instant, std::string(text)};
}

/// Renders an instant in the canonical 6-fractional-digit form.
inline StixTimestamp make_timestamp(TimeInstant instant) {
    const auto days = std::chrono::floor<std::chrono::days>(instant);
    const std::chrono::year_month_day ymd{days};
    auto rest = instant - days;
    const auto h = std::chrono::duration_cast<std::chrono::hours>(rest);
    rest -= h;
    const auto m = std::chrono::duration_cast<std::chrono::minutes>(rest);
    rest -= m;
    const auto s = std::chrono::duration_cast<std::chrono::seconds>(rest);
    rest -= s;

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long long>(h.count()),
                  static_cast<long long>(m.count()), static_cast<long long>(s.count()),
                  static_cast<long long>(rest.count()));
    return StixTimestamp{instant, buf};
}

/// Current wall-clock time, microsecond precision.
inline StixTimestamp now_timestamp() {
    return make_timestamp(std::chrono::time_point_cast<std::chrono::microseconds>(
        std::chrono::system_clock::now()));
}

} // namespace coakit
