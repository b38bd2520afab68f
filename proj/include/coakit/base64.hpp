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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coakit/errors.hpp"

namespace coakit {

// Standard alphabet, '=' padding, no line wrapping. Decode is strict: the
// alphabet, length and padding must be canonical, including zero trailing bits.

inline std::string base64_encode(std::span<const std::uint8_t> bytes) {
    static const char* tab = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back(tab[v & 63]);
    }
    const std::size_t rem = bytes.size() - i;
    if (rem == 1) {
        const std::uint32_t v = bytes[i] << 16;
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out += "==";
    } else if (rem == 2) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

inline std::string base64_encode(std::string_view text) {
    return base64_encode(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// Throws BadBase64 on any deviation from canonical padded base64.
inline std::vector<std::uint8_t> base64_decode(std::string_view text) {
    auto fail = [&](const char* why) -> std::vector<std::uint8_t> {
        throw BadBase64(std::string("invalid base64 (") + why + ")");
    };
    if (text.empty()) return {};
    if (text.size() % 4 != 0) return fail("length not a multiple of 4");

    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };

    std::size_t pad = 0;
    if (text.back() == '=') {
        pad = (text[text.size() - 2] == '=') ? 2 : 1;
    }
    const std::size_t data_chars = text.size() - pad;
    for (std::size_t i = 0; i < data_chars; ++i)
        if (value_of(text[i]) < 0) return fail("character outside alphabet");
    for (std::size_t i = data_chars; i < text.size(); ++i)
        if (text[i] != '=') return fail("padding not at end");

    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i + 4 <= text.size(); i += 4) {
        const bool last = i + 4 == text.size();
        const int a = value_of(text[i]);
        const int b = value_of(text[i + 1]);
        const int c = last && pad >= 2 ? 0 : value_of(text[i + 2]);
        const int d = last && pad >= 1 ? 0 : value_of(text[i + 3]);
        const std::uint32_t v = (a << 18) | (b << 12) | (c << 6) | d;
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        if (!(last && pad >= 2)) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
        if (!(last && pad >= 1)) out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        if (last && pad == 2 && (value_of(text[i + 1]) & 0x0F) != 0)
            return fail("non-zero trailing bits");
        if (last && pad == 1 && (value_of(text[i + 2]) & 0x03) != 0)
            return fail("non-zero trailing bits");
    }
    return out;
}

inline bool is_valid_base64(std::string_view text) {
    try {
        base64_decode(text);
        return true;
    } catch (const BadBase64&) {
        return false;
    }
}

} // namespace coakit
