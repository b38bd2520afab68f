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
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coakit/model.hpp"

// Lossless conversion between the JSON wire format and the domain types.
//
// Parsing is deliberately two-phase: structural problems (bad JSON, missing
// ids, malformed timestamps) throw SyntaxError/StructureError, while content
// problems (empty name, out-of-range integers, vocabulary misses) parse fine
// and are left for the validator. Unknown properties of known types land in
// `passthrough` in source order; unknown object types stay OpaqueObject.

namespace coakit {
namespace detail {

// SAX handler that builds an ordered DOM and records duplicate keys.
// Last occurrence wins, matching common JSON processors; the note keeps the
// evidence for validation.
class DomBuilder {
public:
    using number_integer_t = Json::number_integer_t;
    using number_unsigned_t = Json::number_unsigned_t;
    using number_float_t = Json::number_float_t;
    using string_t = Json::string_t;
    using binary_t = Json::binary_t;

    Json root;
    std::vector<ParseNote> notes;
    std::string error;

    bool null() { return place(Json(nullptr)), true; }
    bool boolean(bool v) { return place(Json(v)), true; }
    bool number_integer(number_integer_t v) { return place(Json(v)), true; }
    bool number_unsigned(number_unsigned_t v) { return place(Json(v)), true; }
    bool number_float(number_float_t v, const string_t&) { return place(Json(v)), true; }
    bool string(string_t& v) { return place(Json(v)), true; }
    bool binary(binary_t& v) { return place(Json(v)), true; }

    bool start_object(std::size_t) {
        frames.push_back(Frame{place(Json::object()), last_path, {}});
        return true;
    }
    bool key(string_t& k) {
        frames.back().key = k;
        return true;
    }
    bool end_object() { return frames.pop_back(), true; }
    bool start_array(std::size_t) {
        frames.push_back(Frame{place(Json::array()), last_path, {}});
        return true;
    }
    bool end_array() { return frames.pop_back(), true; }

    bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) {
        error = std::string(ex.what()) + " (at byte " + std::to_string(position) + ")";
        return false;
    }

private:
    struct Frame {
        Json* node;
        std::string path;
        std::string key;
    };
    std::vector<Frame> frames;
    std::string last_path;

    Json* place(Json&& v) {
        if (frames.empty()) {
            last_path.clear();
            root = std::move(v);
            return &root;
        }
        Frame& f = frames.back();
        if (f.node->is_array()) {
            last_path = f.path + "/" + std::to_string(f.node->size());
            f.node->push_back(std::move(v));
            return &f.node->back();
        }
        last_path = f.path.empty() ? f.key : f.path + "/" + f.key;
        if (f.node->contains(f.key)) notes.push_back({"duplicate-key", last_path});
        Json& slot = (*f.node)[f.key];
        slot = std::move(v);
        return &slot;
    }
};

inline Json parse_json(std::string_view text, std::vector<ParseNote>* notes) {
    DomBuilder builder;
    if (!Json::sax_parse(text, &builder))
        throw SyntaxError(builder.error.empty() ? "malformed JSON" : builder.error);
    if (notes)
        notes->insert(notes->end(), builder.notes.begin(), builder.notes.end());
    return std::move(builder.root);
}

// --- field readers -----------------------------------------------------------
// Every reader marks the key consumed so leftovers can be swept into
// passthrough. A present member with the wrong JSON type is a StructureError.

using KeySet = std::set<std::string, std::less<>>;

inline const Json* member(const Json& o, const char* key, KeySet& used) {
    const auto it = o.find(key);
    if (it == o.end()) return nullptr;
    used.insert(key);
    return &*it;
}

[[noreturn]] inline void bad_member(const std::string& path, const char* key, const char* why) {
    throw StructureError(path.empty() ? std::string(key) + ": " + why
                                      : path + "/" + key + ": " + why);
}

inline std::optional<std::string> opt_string(const Json& o, const char* key,
                                             const std::string& path, KeySet& used) {
    const Json* v = member(o, key, used);
    if (!v) return std::nullopt;
    if (!v->is_string()) bad_member(path, key, "must be a string");
    return v->get<std::string>();
}

inline std::string require_string(const Json& o, const char* key, const std::string& path,
                                  KeySet& used) {
    auto v = opt_string(o, key, path, used);
    if (!v) bad_member(path, key, "is required");
    return std::move(*v);
}

inline std::optional<StixIdentifier> opt_identifier(const Json& o, const char* key,
                                                    const std::string& path, KeySet& used) {
    auto v = opt_string(o, key, path, used);
    if (!v) return std::nullopt;
    try {
        return parse_identifier(*v);
    } catch (const MalformedIdentifier& e) {
        bad_member(path, key, e.what());
    }
}

inline StixIdentifier require_identifier(const Json& o, const char* key, const std::string& path,
                                         KeySet& used) {
    auto v = opt_identifier(o, key, path, used);
    if (!v) bad_member(path, key, "is required");
    return std::move(*v);
}

inline std::optional<StixTimestamp> opt_timestamp(const Json& o, const char* key,
                                                  const std::string& path, KeySet& used) {
    auto v = opt_string(o, key, path, used);
    if (!v) return std::nullopt;
    try {
        return parse_timestamp(*v);
    } catch (const MalformedTimestamp& e) {
        bad_member(path, key, e.what());
    }
}

inline StixTimestamp require_timestamp(const Json& o, const char* key, const std::string& path,
                                       KeySet& used) {
    auto v = opt_timestamp(o, key, path, used);
    if (!v) bad_member(path, key, "is required");
    return std::move(*v);
}

inline std::optional<bool> opt_bool(const Json& o, const char* key, const std::string& path,
                                    KeySet& used) {
    const Json* v = member(o, key, used);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) bad_member(path, key, "must be a boolean");
    return v->get<bool>();
}

// Integers are taken exactly; a non-integer numeric here is a structural
// problem, never truncated (the validator must see what was sent).
inline std::optional<std::int64_t> opt_integer(const Json& o, const char* key,
                                               const std::string& path, KeySet& used) {
    const Json* v = member(o, key, used);
    if (!v) return std::nullopt;
    if (v->is_number_float()) bad_member(path, key, "must be an integer, not a real number");
    if (!v->is_number_integer()) bad_member(path, key, "must be an integer");
    if (v->is_number_unsigned() &&
        v->get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        bad_member(path, key, "integer out of range");
    return v->get<std::int64_t>();
}

inline std::optional<std::vector<std::string>> opt_string_list(const Json& o, const char* key,
                                                               const std::string& path,
                                                               KeySet& used) {
    const Json* v = member(o, key, used);
    if (!v) return std::nullopt;
    if (!v->is_array()) bad_member(path, key, "must be a list of strings");
    std::vector<std::string> out;
    out.reserve(v->size());
    for (const auto& item : *v) {
        if (!item.is_string()) bad_member(path, key, "must contain only strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

inline Passthrough sweep_passthrough(const Json& o, const KeySet& used) {
    Passthrough rest;
    for (const auto& [k, v] : o.items())
        if (!used.contains(k)) rest.emplace_back(k, v);
    return rest;
}

// --- typed object parsers ----------------------------------------------------

inline PlaybookExtension playbook_extension_from_json(const Json& o, const std::string& path) {
    KeySet used{"extension_type"};
    PlaybookExtension ext;
    ext.playbook_id = opt_string(o, "playbook_id", path, used);
    ext.created = opt_timestamp(o, "created", path, used);
    ext.modified = opt_timestamp(o, "modified", path, used);
    ext.revoked = opt_bool(o, "revoked", path, used);
    ext.playbook_creator = opt_identifier(o, "playbook_creator", path, used);
    ext.playbook_creation_time = opt_timestamp(o, "playbook_creation_time", path, used);
    ext.playbook_modification_time = opt_timestamp(o, "playbook_modification_time", path, used);
    ext.playbook_valid_from = opt_timestamp(o, "playbook_valid_from", path, used);
    ext.playbook_valid_until = opt_timestamp(o, "playbook_valid_until", path, used);
    ext.description = opt_string(o, "description", path, used);
    ext.labels = opt_string_list(o, "labels", path, used);
    ext.playbook_impact = opt_integer(o, "playbook_impact", path, used);
    ext.playbook_severity = opt_integer(o, "playbook_severity", path, used);
    ext.playbook_priority = opt_integer(o, "playbook_priority", path, used);
    ext.organization_type = opt_string_list(o, "organization_type", path, used);
    ext.playbook_type = opt_string_list(o, "playbook_type", path, used);
    ext.playbook_standard = opt_string(o, "playbook_standard", path, used);
    ext.playbook_abstraction = opt_string(o, "playbook_abstraction", path, used);
    ext.playbook_base64 = opt_string(o, "playbook_base64", path, used);

    // Accepted input alias for the payload property; output always writes
    // playbook_base64. The validator surfaces the alias as a warning.
    auto bin = opt_string(o, "playbook_bin", path, used);
    if (bin) {
        ext.from_bin_alias = true;
        if (!ext.playbook_base64) ext.playbook_base64 = std::move(bin);
    }

    ext.extra = sweep_passthrough(o, used);
    return ext;
}

inline ExtensionBody extension_body_from_json(const Json& v, const std::string& path) {
    if (v.is_object()) {
        const auto it = v.find("extension_type");
        if (it != v.end() && it->is_string() && it->get<std::string>() == kPropertyExtension)
            return playbook_extension_from_json(v, path);
    }
    // Unknown shape or a non-property extension mechanism: keep it verbatim,
    // the validator reports it.
    return OpaqueExtension{v};
}

inline ExtensionMap extensions_from_json(const Json& o, const std::string& path, KeySet& used) {
    const Json* v = member(o, "extensions", used);
    if (!v) return {};
    if (!v->is_object()) bad_member(path, "extensions", "must be an object");
    ExtensionMap map;
    for (const auto& [k, body] : v->items())
        map.emplace_back(k, extension_body_from_json(body, path + "/extensions/" + k));
    return map;
}

inline CourseOfAction coa_from_json(const Json& o, const std::string& path) {
    KeySet used{"type"};
    CourseOfAction coa;
    coa.spec_version = opt_string(o, "spec_version", path, used);
    coa.id = require_identifier(o, "id", path, used);
    coa.created_by_ref = opt_identifier(o, "created_by_ref", path, used);
    coa.created = require_timestamp(o, "created", path, used);
    coa.modified = require_timestamp(o, "modified", path, used);
    coa.name = opt_string(o, "name", path, used);
    coa.description = opt_string(o, "description", path, used);
    coa.extensions = extensions_from_json(o, path, used);
    coa.passthrough = sweep_passthrough(o, used);
    return coa;
}

inline ExtensionDefinition ed_from_json(const Json& o, const std::string& path) {
    KeySet used{"type"};
    ExtensionDefinition ed;
    ed.spec_version = opt_string(o, "spec_version", path, used);
    ed.id = require_identifier(o, "id", path, used);
    ed.created_by_ref = opt_identifier(o, "created_by_ref", path, used);
    ed.created = require_timestamp(o, "created", path, used);
    ed.modified = require_timestamp(o, "modified", path, used);
    ed.name = opt_string(o, "name", path, used);
    ed.description = opt_string(o, "description", path, used);
    ed.schema = opt_string(o, "schema", path, used);
    ed.version = opt_string(o, "version", path, used);
    ed.extension_types = opt_string_list(o, "extension_types", path, used);
    ed.extension_properties = opt_string_list(o, "extension_properties", path, used);
    if (const Json* refs = member(o, "external_references", used)) {
        if (!refs->is_array()) bad_member(path, "external_references", "must be a list");
        ed.external_references.emplace();
        for (const auto& r : *refs) ed.external_references->push_back(r);
    }
    ed.passthrough = sweep_passthrough(o, used);
    return ed;
}

inline Identity identity_from_json(const Json& o, const std::string& path) {
    KeySet used{"type"};
    Identity idn;
    idn.spec_version = opt_string(o, "spec_version", path, used);
    idn.id = require_identifier(o, "id", path, used);
    idn.created_by_ref = opt_identifier(o, "created_by_ref", path, used);
    idn.created = require_timestamp(o, "created", path, used);
    idn.modified = require_timestamp(o, "modified", path, used);
    idn.name = opt_string(o, "name", path, used);
    idn.identity_class = opt_string(o, "identity_class", path, used);
    idn.contact_information = opt_string(o, "contact_information", path, used);
    idn.passthrough = sweep_passthrough(o, used);
    return idn;
}

inline Relationship relationship_from_json(const Json& o, const std::string& path) {
    KeySet used{"type"};
    Relationship rel;
    rel.spec_version = opt_string(o, "spec_version", path, used);
    rel.id = require_identifier(o, "id", path, used);
    rel.created_by_ref = opt_identifier(o, "created_by_ref", path, used);
    rel.created = require_timestamp(o, "created", path, used);
    rel.modified = require_timestamp(o, "modified", path, used);
    rel.relationship_type = require_string(o, "relationship_type", path, used);
    rel.source_ref = require_identifier(o, "source_ref", path, used);
    rel.target_ref = require_identifier(o, "target_ref", path, used);
    rel.passthrough = sweep_passthrough(o, used);
    return rel;
}

inline StixObject object_from_json(const Json& o, const std::string& path) {
    if (!o.is_object())
        throw StructureError((path.empty() ? "object" : path) + ": expected a JSON object");
    const auto it = o.find("type");
    if (it == o.end() || !it->is_string())
        throw StructureError((path.empty() ? "object" : path) + ": missing string property \"type\"");
    const std::string type = it->get<std::string>();
    if (type == kCourseOfActionType) return coa_from_json(o, path);
    if (type == kExtensionDefinitionType) return ed_from_json(o, path);
    if (type == kIdentityType) return identity_from_json(o, path);
    if (type == kRelationshipType) return relationship_from_json(o, path);
    return OpaqueObject{type, o};
}

} // namespace detail

// --- parse entry points ------------------------------------------------------

/// Parses a bundle from UTF-8 JSON text.
/// Throws SyntaxError for malformed JSON, StructureError for a well-formed
/// document that is not a bundle shape.
inline Bundle parse_bundle(std::string_view text) {
    Bundle bundle;
    const Json root = detail::parse_json(text, &bundle.notes);
    if (!root.is_object()) throw StructureError("top level: expected a JSON object");

    detail::KeySet used;
    const auto type = detail::opt_string(root, "type", "", used);
    if (!type) throw StructureError("bundle: missing required property \"type\"");
    if (*type != kBundleType)
        throw StructureError("bundle: \"type\" must be \"bundle\", got \"" + *type + "\"");
    bundle.id = detail::require_identifier(root, "id", "", used);

    const Json* objects = detail::member(root, "objects", used);
    if (!objects) throw StructureError("bundle: missing required property \"objects\"");
    if (!objects->is_array()) throw StructureError("bundle: \"objects\" must be a list");
    bundle.objects.reserve(objects->size());
    for (std::size_t i = 0; i < objects->size(); ++i)
        bundle.objects.push_back(
            detail::object_from_json((*objects)[i], "objects/" + std::to_string(i)));

    bundle.passthrough = detail::sweep_passthrough(root, used);
    return bundle;
}

/// Parses a single object. Dispatch is total: any JSON object with a string
/// `type` becomes either a typed object or an OpaqueObject.
inline StixObject parse_object(std::string_view text, std::vector<ParseNote>* notes = nullptr) {
    const Json root = detail::parse_json(text, notes);
    return detail::object_from_json(root, "");
}

// --- serialization -----------------------------------------------------------
// One canonical property order per type (the wire order of real instances),
// then passthrough in source order. Serialization is deterministic, so
// serialize(parse(serialize(b))) is byte-identical to serialize(b).

inline Json to_wire(const PlaybookExtension& ext) {
    Json o = Json::object();
    o["extension_type"] = std::string(kPropertyExtension);
    if (ext.playbook_id) o["playbook_id"] = *ext.playbook_id;
    if (ext.created) o["created"] = ext.created->text;
    if (ext.modified) o["modified"] = ext.modified->text;
    if (ext.playbook_creator) o["playbook_creator"] = ext.playbook_creator->serialize();
    if (ext.revoked) o["revoked"] = *ext.revoked;
    if (ext.labels) o["labels"] = *ext.labels;
    if (ext.description) o["description"] = *ext.description;
    if (ext.playbook_valid_from) o["playbook_valid_from"] = ext.playbook_valid_from->text;
    if (ext.playbook_valid_until) o["playbook_valid_until"] = ext.playbook_valid_until->text;
    if (ext.playbook_creation_time) o["playbook_creation_time"] = ext.playbook_creation_time->text;
    if (ext.playbook_modification_time)
        o["playbook_modification_time"] = ext.playbook_modification_time->text;
    if (ext.playbook_impact) o["playbook_impact"] = *ext.playbook_impact;
    if (ext.playbook_severity) o["playbook_severity"] = *ext.playbook_severity;
    if (ext.playbook_priority) o["playbook_priority"] = *ext.playbook_priority;
    if (ext.organization_type) o["organization_type"] = *ext.organization_type;
    if (ext.playbook_type) o["playbook_type"] = *ext.playbook_type;
    if (ext.playbook_standard) o["playbook_standard"] = *ext.playbook_standard;
    if (ext.playbook_abstraction) o["playbook_abstraction"] = *ext.playbook_abstraction;
    if (ext.playbook_base64) o["playbook_base64"] = *ext.playbook_base64;
    for (const auto& [k, v] : ext.extra) o[k] = v;
    return o;
}

namespace detail {

inline void write_common_head(Json& o, std::string_view type,
                              const std::optional<std::string>& spec_version,
                              const StixIdentifier& id,
                              const std::optional<StixIdentifier>& created_by_ref,
                              const StixTimestamp& created, const StixTimestamp& modified) {
    o["type"] = std::string(type);
    if (spec_version) o["spec_version"] = *spec_version;
    o["id"] = id.serialize();
    if (created_by_ref) o["created_by_ref"] = created_by_ref->serialize();
    o["created"] = created.text;
    o["modified"] = modified.text;
}

inline void write_passthrough(Json& o, const Passthrough& rest) {
    for (const auto& [k, v] : rest) o[k] = v;
}

} // namespace detail

inline Json to_wire(const CourseOfAction& coa) {
    Json o = Json::object();
    detail::write_common_head(o, kCourseOfActionType, coa.spec_version, coa.id, coa.created_by_ref,
                              coa.created, coa.modified);
    if (coa.name) o["name"] = *coa.name;
    if (coa.description) o["description"] = *coa.description;
    if (!coa.extensions.empty()) {
        Json exts = Json::object();
        for (const auto& [key, body] : coa.extensions) {
            if (const auto* ext = std::get_if<PlaybookExtension>(&body))
                exts[key] = to_wire(*ext);
            else
                exts[key] = std::get<OpaqueExtension>(body).raw;
        }
        o["extensions"] = std::move(exts);
    }
    detail::write_passthrough(o, coa.passthrough);
    return o;
}

inline Json to_wire(const ExtensionDefinition& ed) {
    Json o = Json::object();
    detail::write_common_head(o, kExtensionDefinitionType, ed.spec_version, ed.id, ed.created_by_ref,
                              ed.created, ed.modified);
    if (ed.name) o["name"] = *ed.name;
    if (ed.description) o["description"] = *ed.description;
    if (ed.schema) o["schema"] = *ed.schema;
    if (ed.version) o["version"] = *ed.version;
    if (ed.extension_types) o["extension_types"] = *ed.extension_types;
    if (ed.extension_properties) o["extension_properties"] = *ed.extension_properties;
    if (ed.external_references) {
        Json refs = Json::array();
        for (const auto& r : *ed.external_references) refs.push_back(r);
        o["external_references"] = std::move(refs);
    }
    detail::write_passthrough(o, ed.passthrough);
    return o;
}

inline Json to_wire(const Identity& idn) {
    Json o = Json::object();
    detail::write_common_head(o, kIdentityType, idn.spec_version, idn.id, idn.created_by_ref,
                              idn.created, idn.modified);
    if (idn.name) o["name"] = *idn.name;
    if (idn.identity_class) o["identity_class"] = *idn.identity_class;
    if (idn.contact_information) o["contact_information"] = *idn.contact_information;
    detail::write_passthrough(o, idn.passthrough);
    return o;
}

inline Json to_wire(const Relationship& rel) {
    Json o = Json::object();
    detail::write_common_head(o, kRelationshipType, rel.spec_version, rel.id, rel.created_by_ref,
                              rel.created, rel.modified);
    o["relationship_type"] = rel.relationship_type;
    o["source_ref"] = rel.source_ref.serialize();
    o["target_ref"] = rel.target_ref.serialize();
    detail::write_passthrough(o, rel.passthrough);
    return o;
}

inline Json to_wire(const StixObject& obj) {
    return std::visit(
        [](const auto& o) -> Json {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, OpaqueObject>) return o.raw;
            else return to_wire(o);
        },
        obj);
}

inline Json to_wire(const Bundle& bundle) {
    Json o = Json::object();
    o["type"] = std::string(kBundleType);
    o["id"] = bundle.id.serialize();
    Json objects = Json::array();
    for (const auto& obj : bundle.objects) objects.push_back(to_wire(obj));
    o["objects"] = std::move(objects);
    detail::write_passthrough(o, bundle.passthrough);
    return o;
}

inline std::string serialize_bundle(const Bundle& bundle) { return to_wire(bundle).dump(2); }

inline std::string serialize_object(const StixObject& obj) { return to_wire(obj).dump(2); }

/// Key-order-insensitive equality of the wire forms. Timestamp texts take
/// part as plain strings, so they must match byte for byte.
inline bool semantically_equal(const Json& a, const Json& b) {
    return nlohmann::json::parse(a.dump()) == nlohmann::json::parse(b.dump());
}

inline bool semantically_equal(const StixObject& a, const StixObject& b) {
    return semantically_equal(to_wire(a), to_wire(b));
}

inline bool semantically_equal(const Bundle& a, const Bundle& b) {
    return semantically_equal(to_wire(a), to_wire(b));
}

} // namespace coakit
