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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "coakit/identifier.hpp"
#include "coakit/timestamp.hpp"

namespace coakit {

using Json = nlohmann::ordered_json;

/// Unrecognized properties of a known object type, preserved verbatim and in
/// source order so serialization loses nothing.
using Passthrough = std::vector<std::pair<std::string, Json>>;

/// A note recorded while parsing (duplicate JSON keys and similar evidence).
/// Surfaced by validation; never fatal on its own.
struct ParseNote {
    std::string kind; // e.g. "duplicate-key"
    std::string path;

    friend bool operator==(const ParseNote&, const ParseNote&) = default;
};

inline constexpr std::string_view kCourseOfActionType = "course-of-action";
inline constexpr std::string_view kExtensionDefinitionType = "extension-definition";
inline constexpr std::string_view kIdentityType = "identity";
inline constexpr std::string_view kRelationshipType = "relationship";
inline constexpr std::string_view kBundleType = "bundle";
inline constexpr std::string_view kPropertyExtension = "property-extension";

/// The nested property extension carrying a security playbook and its
/// descriptive metadata. `extension_type` is implicitly `property-extension`;
/// a body with any other extension_type stays opaque (see codec).
///
/// Fields the wire marks required (created/modified) are optional here so a
/// broken instance can be parsed and then flagged by validation instead of
/// being rejected outright.
struct PlaybookExtension {
    std::optional<std::string> playbook_id;
    std::optional<StixTimestamp> created;
    std::optional<StixTimestamp> modified;
    std::optional<bool> revoked;
    std::optional<StixIdentifier> playbook_creator;
    std::optional<StixTimestamp> playbook_creation_time;
    std::optional<StixTimestamp> playbook_modification_time;
    std::optional<StixTimestamp> playbook_valid_from;
    std::optional<StixTimestamp> playbook_valid_until;
    std::optional<std::string> description;
    std::optional<std::vector<std::string>> labels;
    std::optional<std::int64_t> playbook_impact;
    std::optional<std::int64_t> playbook_severity;
    std::optional<std::int64_t> playbook_priority;
    std::optional<std::vector<std::string>> organization_type;
    std::optional<std::vector<std::string>> playbook_type;
    std::optional<std::string> playbook_standard;
    std::optional<std::string> playbook_abstraction;
    std::optional<std::string> playbook_base64;

    /// True when the input spelled the payload property `playbook_bin`.
    /// Output always writes `playbook_base64`.
    bool from_bin_alias = false;

    /// Unknown properties of the extension body, preserved in source order.
    Passthrough extra;
};

/// An extension body we do not interpret (wrong or missing extension_type,
/// or not an object at all). Kept verbatim.
struct OpaqueExtension {
    Json raw;
};

using ExtensionBody = std::variant<PlaybookExtension, OpaqueExtension>;

/// Entries of an object's `extensions` map, in source order. Keys are kept as
/// strings; validation checks they are extension-definition identifiers.
using ExtensionMap = std::vector<std::pair<std::string, ExtensionBody>>;

struct CourseOfAction {
    std::optional<std::string> spec_version;
    StixIdentifier id;
    std::optional<StixIdentifier> created_by_ref;
    StixTimestamp created;
    StixTimestamp modified;
    std::optional<std::string> name;
    std::optional<std::string> description;
    ExtensionMap extensions;
    Passthrough passthrough;

    const PlaybookExtension* find_playbook_extension(std::string_view key) const {
        for (const auto& [k, body] : extensions)
            if (k == key)
                return std::get_if<PlaybookExtension>(&body);
        return nullptr;
    }

    /// First playbook property extension, if any. Convenience for tooling
    /// that does not care which extension definition the producer used.
    std::pair<const std::string*, const PlaybookExtension*> first_playbook_extension() const {
        for (const auto& [k, body] : extensions)
            if (const auto* ext = std::get_if<PlaybookExtension>(&body))
                return {&k, ext};
        return {nullptr, nullptr};
    }
};

struct ExtensionDefinition {
    std::optional<std::string> spec_version;
    StixIdentifier id;
    std::optional<StixIdentifier> created_by_ref;
    StixTimestamp created;
    StixTimestamp modified;
    std::optional<std::string> name;
    std::optional<std::string> description;
    std::optional<std::string> schema;
    std::optional<std::string> version;
    std::optional<std::vector<std::string>> extension_types;
    std::optional<std::vector<std::string>> extension_properties;
    std::optional<std::vector<Json>> external_references; // entries kept verbatim
    Passthrough passthrough;
};

struct Identity {
    std::optional<std::string> spec_version;
    StixIdentifier id;
    std::optional<StixIdentifier> created_by_ref;
    StixTimestamp created;
    StixTimestamp modified;
    std::optional<std::string> name;
    std::optional<std::string> identity_class;
    std::optional<std::string> contact_information;
    Passthrough passthrough;
};

struct Relationship {
    std::optional<std::string> spec_version;
    StixIdentifier id;
    std::optional<StixIdentifier> created_by_ref;
    StixTimestamp created;
    StixTimestamp modified;
    std::string relationship_type;
    StixIdentifier source_ref;
    StixIdentifier target_ref;
    Passthrough passthrough;
};

/// Any object whose `type` the toolkit does not model. The complete source
/// object is preserved with its key order.
struct OpaqueObject {
    std::string type;
    Json raw;
};

using StixObject =
    std::variant<CourseOfAction, ExtensionDefinition, Identity, Relationship, OpaqueObject>;

struct Bundle {
    StixIdentifier id;
    std::vector<StixObject> objects;
    Passthrough passthrough;
    std::vector<ParseNote> notes;
};

/// (id, modified) — the STIX notion of one version of one object.
struct VersionKey {
    StixIdentifier id;
    StixTimestamp modified;

    friend bool operator==(const VersionKey& a, const VersionKey& b) {
        return a.id == b.id && a.modified.instant == b.modified.instant;
    }
};

// ---------------------------------------------------------------------------
// Accessors over the StixObject variant.

inline std::string object_type_of(const StixObject& obj) {
    return std::visit(
        [](const auto& o) -> std::string {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, CourseOfAction>) return std::string(kCourseOfActionType);
            else if constexpr (std::is_same_v<T, ExtensionDefinition>) return std::string(kExtensionDefinitionType);
            else if constexpr (std::is_same_v<T, Identity>) return std::string(kIdentityType);
            else if constexpr (std::is_same_v<T, Relationship>) return std::string(kRelationshipType);
            else return o.type;
        },
        obj);
}

inline std::optional<StixIdentifier> object_id(const StixObject& obj) {
    return std::visit(
        [](const auto& o) -> std::optional<StixIdentifier> {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, OpaqueObject>) {
                const auto it = o.raw.find("id");
                if (it == o.raw.end() || !it->is_string()) return std::nullopt;
                try {
                    return parse_identifier(it->template get<std::string>());
                } catch (const MalformedIdentifier&) {
                    return std::nullopt;
                }
            } else {
                return o.id;
            }
        },
        obj);
}

inline std::optional<StixTimestamp> object_modified(const StixObject& obj) {
    return std::visit(
        [](const auto& o) -> std::optional<StixTimestamp> {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, OpaqueObject>) {
                const auto it = o.raw.find("modified");
                if (it == o.raw.end() || !it->is_string()) return std::nullopt;
                try {
                    return parse_timestamp(it->template get<std::string>());
                } catch (const MalformedTimestamp&) {
                    return std::nullopt;
                }
            } else {
                return o.modified;
            }
        },
        obj);
}

/// Versioning key, when the object carries enough to have one.
inline std::optional<VersionKey> version_key(const StixObject& obj) {
    auto id = object_id(obj);
    auto modified = object_modified(obj);
    if (!id || !modified) return std::nullopt;
    return VersionKey{std::move(*id), std::move(*modified)};
}

} // namespace coakit
