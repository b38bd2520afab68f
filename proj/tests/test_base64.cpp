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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "coakit/base64.hpp"

using coakit::BadBase64;
using coakit::base64_decode;
using coakit::base64_encode;
using coakit::is_valid_base64;

static std::string decode_to_string(std::string_view text) {
    const auto bytes = base64_decode(text);
    return std::string(bytes.begin(), bytes.end());
}

// RFC 4648 test vectors, frozen from an independent encoder run before the
// implementation existed.
TEST_CASE("base64 matches the RFC 4648 vectors") {
    CHECK(base64_encode("") == "");
    CHECK(base64_encode("f") == "Zg==");
    CHECK(base64_encode("fo") == "Zm8=");
    CHECK(base64_encode("foo") == "Zm9v");
    CHECK(base64_encode("foob") == "Zm9vYg==");
    CHECK(base64_encode("fooba") == "Zm9vYmE=");
    CHECK(base64_encode("foobar") == "Zm9vYmFy");

    CHECK(decode_to_string("") == "");
    CHECK(decode_to_string("Zg==") == "f");
    CHECK(decode_to_string("Zm8=") == "fo");
    CHECK(decode_to_string("Zm9v") == "foo");
    CHECK(decode_to_string("Zm9vYg==") == "foob");
    CHECK(decode_to_string("Zm9vYmE=") == "fooba");
    CHECK(decode_to_string("Zm9vYmFy") == "foobar");
}

TEST_CASE("the playbook payload literal round-trips") {
    // Independent oracle: base64("Security Playbook") computed before the
    // build; 17 bytes of text.
    CHECK(base64_encode("Security Playbook") == "U2VjdXJpdHkgUGxheWJvb2s=");
    CHECK(decode_to_string("U2VjdXJpdHkgUGxheWJvb2s=") == "Security Playbook");
    CHECK(base64_decode("U2VjdXJpdHkgUGxheWJvb2s=").size() == 17);
}

TEST_CASE("binary bytes encode to the frozen vector") {
    std::vector<std::uint8_t> bytes;
    for (std::uint8_t b = 0; b < 12; ++b) bytes.push_back(b);
    CHECK(base64_encode(bytes) == "AAECAwQFBgcICQoL");
}

TEST_CASE("decode rejects garbage") {
    CHECK_THROWS_AS(base64_decode("!!!"), BadBase64);
    CHECK_THROWS_AS(base64_decode("Zg"), BadBase64);    // length not a multiple of 4
    CHECK_THROWS_AS(base64_decode("Zg="), BadBase64);   // ditto
    CHECK_THROWS_AS(base64_decode("Z==="), BadBase64);  // too much padding
    CHECK_THROWS_AS(base64_decode("Zg=v"), BadBase64);  // padding not at the end
    CHECK_THROWS_AS(base64_decode("Zm 9v"), BadBase64); // whitespace is not accepted
    CHECK_FALSE(is_valid_base64("!!!"));
    CHECK(is_valid_base64("Zm9v"));
    CHECK(is_valid_base64(""));
}

TEST_CASE("decode rejects non-canonical trailing bits") {
    // "Zh==" carries one byte plus non-zero leftover bits; a strict decoder
    // refuses it because re-encoding would not reproduce the input.
    CHECK_THROWS_AS(base64_decode("Zh=="), BadBase64);
    CHECK_THROWS_AS(base64_decode("Zm9="), BadBase64);
    CHECK_NOTHROW(base64_decode("Zm8="));
}

TEST_CASE("encode/decode round-trips arbitrary bytes") {
    std::mt19937_64 rng(20260821u);
    for (int round = 0; round < 200; ++round) {
        const std::size_t len = static_cast<std::size_t>(rng() % 257);
        std::vector<std::uint8_t> bytes(len);
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
        const std::string encoded = base64_encode(bytes);
        CHECK(is_valid_base64(encoded));
        CHECK(base64_decode(encoded) == bytes);
        CHECK(encoded.size() == ((len + 2) / 3) * 4);
    }
}
