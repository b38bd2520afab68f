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

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coakit/base64.hpp"
#include "coakit/model.hpp"
#include "coakit/validate.hpp"

// Embedding and extraction of playbook payloads, plus shallow CACAO-aware
// metadata derivation. The playbook itself is treated as an opaque byte
// string: base64 in, base64 out. Only derive_metadata_from_cacao looks
// inside, and then only at the top-level descriptive fields.

namespace coakit {

/// A playbook as carried by the extension: raw bytes plus the standard the
/// producer says they follow (e.g. "cacao", "bpmn").
struct PlaybookPayload {
    std::vector<std::uint8_t> bytes;
    std::optional<std::string> declared_standard;
};

/// Embeds `payload` into `coa` under the extension keyed by `ext_def_id`.
///
/// `meta` seeds the descriptive properties of the new extension body (for
/// example the output of derive_metadata_from_cacao). The operation stamps
/// created/modified: a pre-existing extension keeps its created, the new
/// modified is the same instant written to the parent's modified — so the
/// "update the parent too" rule holds by construction. Pass `now` to pin the
/// stamp (tests); the default is the current time.
inline CourseOfAction embed_playbook(CourseOfAction coa, const PlaybookPayload& payload,
                                     const StixIdentifier& ext_def_id,
                                     PlaybookExtension meta = PlaybookExtension(),
                                     std::optional<StixTimestamp> now = std::nullopt) {
    if (ext_def_id.object_type != kExtensionDefinitionType)
        throw InvalidExtensionDefinitionId("extensions are keyed by extension-definition ids, got " +
                                           ext_def_id.serialize());
    const StixTimestamp stamp = now ? *now : now_timestamp();
    const std::string key = ext_def_id.serialize();

    if (const PlaybookExtension* existing = coa.find_playbook_extension(key);
        existing && existing->created)
        meta.created = existing->created;
    if (!meta.created) meta.created = stamp;
    meta.modified = stamp;
    meta.playbook_base64 = base64_encode(payload.bytes);
    if (payload.declared_standard) meta.playbook_standard = payload.declared_standard;
    meta.from_bin_alias = false;

    coa.modified = stamp;
    for (auto& [k, body] : coa.extensions)
        if (k == key) {
            body = std::move(meta);
            return coa;
        }
    coa.extensions.emplace_back(key, std::move(meta));
    return coa;
}

/// Pulls the embedded playbook back out of the extension under `ext_def_id`.
inline PlaybookPayload extract_playbook(const CourseOfAction& coa,
                                        const StixIdentifier& ext_def_id) {
    const std::string key = ext_def_id.serialize();
    const PlaybookExtension* ext = coa.find_playbook_extension(key);
    if (!ext) throw NoSuchExtension("no playbook extension under " + key);
    if (!ext->playbook_base64)
        throw NoEmbeddedPlaybook("extension " + key + " carries no playbook_base64");
    PlaybookPayload payload;
    payload.bytes = base64_decode(*ext->playbook_base64);
    payload.declared_standard = ext->playbook_standard;
    return payload;
}

/// Convenience: extracts from the first playbook extension the object holds.
inline PlaybookPayload extract_playbook(const CourseOfAction& coa) {
    for (const auto& [key, body] : coa.extensions)
        if (std::holds_alternative<PlaybookExtension>(body))
            return extract_playbook(coa, parse_identifier(key));
    throw NoSuchExtension("object " + coa.id.serialize() + " carries no playbook extension");
}

/// Shallow metadata derivation from a CACAO JSON document. Only top-level
/// descriptive fields are read; the workflow is never interpreted. Values are
/// copied verbatim (playbook_types is lowercased to the vocabulary casing);
/// unusable values are simply omitted.
inline PlaybookExtension derive_metadata_from_cacao(const PlaybookPayload& payload) {
    Json doc;
    try {
        doc = Json::parse(payload.bytes.begin(), payload.bytes.end());
    } catch (const Json::parse_error&) {
        throw NotJsonObject("playbook bytes are not JSON");
    }
    if (!doc.is_object()) throw NotJsonObject("playbook JSON is not an object");

    PlaybookExtension frag;
    const auto str_field = [&doc](const char* key) -> std::optional<std::string> {
        const auto it = doc.find(key);
        if (it == doc.end() || !it->is_string()) return std::nullopt;
        return it->get<std::string>();
    };
    frag.playbook_id = str_field("id");
    frag.description = str_field("description");
    if (const auto created = str_field("created")) {
        try {
            frag.playbook_creation_time = parse_timestamp(*created);
        } catch (const MalformedTimestamp&) {
        }
    }
    if (const auto modified = str_field("modified")) {
        try {
            frag.playbook_modification_time = parse_timestamp(*modified);
        } catch (const MalformedTimestamp&) {
        }
    }
    const auto string_entries = [&doc](const char* key) -> std::optional<std::vector<std::string>> {
        const auto it = doc.find(key);
        if (it == doc.end() || !it->is_array()) return std::nullopt;
        std::vector<std::string> out;
        for (const auto& entry : *it)
            if (entry.is_string()) out.push_back(entry.get<std::string>());
        return out;
    };
    frag.labels = string_entries("labels");
    if (auto types = string_entries("playbook_types")) {
        for (auto& t : *types)
            std::transform(t.begin(), t.end(), t.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        frag.playbook_type = std::move(types);
    }
    return frag;
}

/// Checks the correlation rule: when the extension names a playbook_id and
/// the embedded payload is a JSON document carrying its own id, the two
/// should agree. Anything short of a demonstrable mismatch is clean.
inline ValidationReport correlate_playbook_id(const CourseOfAction& coa,
                                              const StixIdentifier& ext_def_id) {
    const std::string key = ext_def_id.serialize();
    const PlaybookExtension* ext = coa.find_playbook_extension(key);
    if (!ext) throw NoSuchExtension("no playbook extension under " + key);

    ValidationReport report;
    if (!ext->playbook_id || !ext->playbook_base64) return report;
    std::vector<std::uint8_t> bytes;
    try {
        bytes = base64_decode(*ext->playbook_base64);
    } catch (const BadBase64&) {
        return report; // undecodable payload is T4-base64 territory, not correlation
    }
    Json doc;
    try {
        doc = Json::parse(bytes.begin(), bytes.end());
    } catch (const Json::parse_error&) {
        return report; // nothing to correlate
    }
    if (!doc.is_object()) return report;
    const auto it = doc.find("id");
    if (it == doc.end() || !it->is_string()) return report;
    const std::string embedded = it->get<std::string>();
    if (embedded != *ext->playbook_id)
        report.add("T4-id-correlation", coa.id.serialize() + "/extensions/" + key + "/playbook_id",
                   "playbook_id \"" + *ext->playbook_id + "\" differs from the id \"" + embedded +
                       "\" inside the embedded playbook");
    return report;
}

} // namespace coakit
