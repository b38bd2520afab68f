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

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "coakit/errors.hpp"

namespace coakit {

namespace detail {

inline bool is_lower_hex(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
}

inline bool is_type_token(std::string_view s) {
    if (s.empty() || s.front() < 'a' || s.front() > 'z') return false;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
        if (!ok) return false;
    }
    return true;
}

// Canonical 8-4-4-4-12 form. Uppercase hex is folded to lowercase in place.
inline bool normalize_uuid(std::string& u) {
    if (u.size() != 36) return false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i == 8 || i == 13 || i == 18 || i == 23) {
            if (u[i] != '-') return false;
            continue;
        }
        char c = u[i];
        if (c >= 'A' && c <= 'F') c = static_cast<char>(c - 'A' + 'a');
        if (!is_lower_hex(c)) return false;
        u[i] = c;
    }
    return true;
}

} // namespace detail

/// A STIX identifier: `{object-type}--{uuid}`. Held in canonical lowercase
/// form; the UUID version is not restricted.
struct StixIdentifier {
    std::string object_type;
    std::string uuid;

    std::string serialize() const { return object_type + "--" + uuid; }

    friend bool operator==(const StixIdentifier&, const StixIdentifier&) = default;
    friend auto operator<=>(const StixIdentifier&, const StixIdentifier&) = default;
};

/// Parses `object-type--uuid`. The UUID part accepts uppercase hex and is
/// folded to lowercase, so serialize(parse(x)) == lowercase(x) for accepted x.
/// Throws MalformedIdentifier.
inline StixIdentifier parse_identifier(std::string_view text) {
    // 36-char UUID + "--" + at least one type character.
    if (text.size() < 39)
        throw MalformedIdentifier("identifier too short: \"" + std::string(text) + "\"");
    const std::size_t sep = text.size() - 38;
    if (text.substr(sep, 2) != "--")
        throw MalformedIdentifier("identifier missing \"--\" separator: \"" + std::string(text) + "\"");

    StixIdentifier id;
    id.object_type = std::string(text.substr(0, sep));
    id.uuid = std::string(text.substr(sep + 2));
    if (!detail::is_type_token(id.object_type))
        throw MalformedIdentifier("bad object-type token: \"" + id.object_type + "\"");
    if (!detail::normalize_uuid(id.uuid))
        throw MalformedIdentifier("bad UUID: \"" + id.uuid + "\"");
    return id;
}

/// Mints a fresh identifier with a random version-4 UUID.
inline StixIdentifier random_identifier(std::string_view object_type) {
    if (!detail::is_type_token(object_type))
        throw MalformedIdentifier("bad object-type token: \"" + std::string(object_type) + "\"");

    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::uint64_t hi = rng(), lo = rng();
    hi = (hi & ~0xF000ULL) | 0x4000ULL;                          // version 4
    lo = (lo & ~(0xC0ULL << 56)) | (0x80ULL << 56);              // RFC 4122 variant

    static const char* hex = "0123456789abcdef";
    std::string u(36, '-');
    auto put = [&](std::uint64_t v, int byte, std::size_t pos) {
        const auto b = static_cast<unsigned>((v >> (byte * 8)) & 0xFF);
        u[pos] = hex[b >> 4];
        u[pos + 1] = hex[b & 0xF];
    };
    std::size_t pos = 0;
    for (int byte = 7; byte >= 0; --byte) {
        if (pos == 8 || pos == 13 || pos == 18) ++pos;
        put(hi, byte, pos);
        pos += 2;
    }
    for (int byte = 7; byte >= 0; --byte) {
        if (pos == 18 || pos == 23) ++pos;
        put(lo, byte, pos);
        pos += 2;
    }
    return StixIdentifier{std::string(object_type), std::move(u)};
}

} // namespace coakit
