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
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coakit/base64.hpp"
#include "coakit/model.hpp"
#include "coakit/rules.hpp"
#include "coakit/vocab.hpp"

// The rule engine. Validators never throw for content problems: everything
// that parsed becomes findings. Findings carry an object path so that bundle
// reports stay attributable: per-object findings are anchored at the object's
// own id, linkage findings at the bundle's id. Because of that split, adding
// an object to a bundle can only add findings or retire bundle-level ones —
// it never removes a finding attributed to another object.

namespace coakit {

struct ValidationFinding {
    Severity severity;
    std::string rule_id;
    std::string object_path;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;

    void add(std::string_view rule_id, std::string object_path, std::string message) {
        const RuleInfo* rule = find_rule(rule_id);
        // Every emitter uses a catalog id; an unknown id is a programming
        // error, surfaced loudly rather than silently dropped.
        if (!rule) throw Error("unknown rule id: " + std::string(rule_id));
        findings.push_back({rule->severity, std::string(rule_id), std::move(object_path),
                            std::move(message)});
    }

    void merge(ValidationReport other) {
        findings.insert(findings.end(), std::make_move_iterator(other.findings.begin()),
                        std::make_move_iterator(other.findings.end()));
    }

    std::size_t count(Severity s) const {
        return static_cast<std::size_t>(std::count_if(
            findings.begin(), findings.end(),
            [s](const ValidationFinding& f) { return f.severity == s; }));
    }
    std::size_t errors() const { return count(Severity::error); }
    std::size_t warnings() const { return count(Severity::warning); }
    std::size_t infos() const { return count(Severity::info); }

    /// Clean means no errors; warnings and infos are allowed.
    bool is_clean() const { return errors() == 0; }
    /// Pristine means no errors and no warnings (infos allowed).
    bool is_pristine() const { return errors() == 0 && warnings() == 0; }

    Json to_json() const {
        Json j = Json::object();
        Json list = Json::array();
        for (const auto& f : findings) {
            Json row = Json::object();
            row["severity"] = std::string(severity_name(f.severity));
            row["rule_id"] = f.rule_id;
            row["object_path"] = f.object_path;
            row["message"] = f.message;
            list.push_back(std::move(row));
        }
        j["findings"] = std::move(list);
        Json counts = Json::object();
        counts["errors"] = errors();
        counts["warnings"] = warnings();
        counts["infos"] = infos();
        j["counts"] = std::move(counts);
        j["clean"] = is_clean();
        return j;
    }
};

/// Extra id knowledge for linkage checks: objects known to exist outside the
/// bundle under validation (other bundles, a store, a catalog). Lookup is by
/// serialized id; the mapped value is the object type.
struct ResolveContext {
    std::map<std::string, std::string, std::less<>> types_by_id;

    void add(const StixIdentifier& id) { types_by_id[id.serialize()] = id.object_type; }
    void add(const StixIdentifier& id, std::string object_type) {
        types_by_id[id.serialize()] = std::move(object_type);
    }
    void add_bundle(const Bundle& bundle) {
        for (const auto& obj : bundle.objects)
            if (auto id = object_id(obj)) add(*id, std::string(object_type_of(obj)));
    }
    bool knows(std::string_view id) const { return types_by_id.find(id) != types_by_id.end(); }
    std::optional<std::string> resolve(std::string_view id) const {
        const auto it = types_by_id.find(id);
        if (it == types_by_id.end()) return std::nullopt;
        return it->second;
    }
};

namespace detail {

// Checks shared by all typed objects. `T` provides id, spec_version,
// created, modified, created_by_ref.
template <typename T>
void common_object_checks(ValidationReport& report, std::string_view expected_type, const T& obj) {
    const std::string id = obj.id.serialize();
    if (obj.id.object_type != expected_type)
        report.add("C-type-id", id + "/id",
                   "id prefix \"" + obj.id.object_type + "\" does not match object type \"" +
                       std::string(expected_type) + "\"");
    if (!obj.spec_version)
        report.add("C-spec-version", id + "/spec_version", "spec_version is absent");
    else if (*obj.spec_version != "2.1")
        report.add("C-spec-version", id + "/spec_version",
                   "spec_version is \"" + *obj.spec_version + "\", expected \"2.1\"");
    if (obj.modified.instant < obj.created.instant)
        report.add("C-modified-order", id + "/modified",
                   "modified " + obj.modified.text + " is earlier than created " +
                       obj.created.text);
    if (obj.created_by_ref && obj.created_by_ref->object_type != kIdentityType)
        report.add("C-created-by-type", id + "/created_by_ref",
                   "created_by_ref points at a \"" + obj.created_by_ref->object_type +
                       "\", not an identity");
}

inline bool is_semver(std::string_view v) {
    // MAJOR.MINOR.PATCH, plain digits.
    std::size_t part = 0, digits = 0;
    for (const char c : v) {
        if (c >= '0' && c <= '9') {
            ++digits;
        } else if (c == '.') {
            if (digits == 0) return false;
            ++part;
            digits = 0;
        } else {
            return false;
        }
    }
    return part == 2 && digits > 0;
}

inline bool is_relationship_type_token(std::string_view v) {
    if (v.empty()) return false;
    return std::all_of(v.begin(), v.end(), [](const char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
}

inline constexpr std::string_view kExtensionTypeEnum[] = {
    "new-sdo", "new-sco", "new-sro", "property-extension", "toplevel-property-extension"};

inline bool is_extension_type(std::string_view v) {
    return std::find(std::begin(kExtensionTypeEnum), std::end(kExtensionTypeEnum), v) !=
           std::end(kExtensionTypeEnum);
}

} // namespace detail

/// Validates one playbook property-extension body against its parent object.
/// `key` is the extensions-map key the body sits under (used for the path).
inline ValidationReport validate_extension(
    const PlaybookExtension& ext, const CourseOfAction& parent,
    const PlaybookVocabularies& vocab = PlaybookVocabularies::defaults(),
    const std::string& key = std::string()) {
    ValidationReport report;
    const std::string base =
        parent.id.serialize() + "/extensions/" + (key.empty() ? "playbook" : key);

    if (!ext.created)
        report.add("T4-created-required", base + "/created",
                   "the extension body must carry its own created timestamp");
    if (!ext.modified)
        report.add("T4-modified-required", base + "/modified",
                   "the extension body must carry its own modified timestamp");
    if (ext.created && ext.modified && ext.modified->instant < ext.created->instant)
        report.add("T4-modified-order", base + "/modified",
                   "extension modified " + ext.modified->text + " is earlier than created " +
                       ext.created->text);
    if (ext.modified && ext.modified->instant > parent.modified.instant)
        report.add("T4-parent-modified", base + "/modified",
                   "extension modified " + ext.modified->text +
                       " is later than the parent's modified " + parent.modified.text +
                       "; an extension change updates the parent too");

    const auto range_check = [&](const char* rule, const char* prop,
                                 const std::optional<std::int64_t>& v) {
        if (v && (*v < 0 || *v > 100))
            report.add(rule, base + "/" + prop,
                       std::string(prop) + " is " + std::to_string(*v) +
                           ", outside the allowed 0..100");
    };
    range_check("T4-impact-range", "playbook_impact", ext.playbook_impact);
    range_check("T4-severity-range", "playbook_severity", ext.playbook_severity);
    range_check("T4-priority-range", "playbook_priority", ext.playbook_priority);

    if (ext.playbook_base64 && !is_valid_base64(*ext.playbook_base64))
        report.add("T4-base64", base + "/playbook_base64",
                   "playbook_base64 is not valid base64");

    if (ext.labels)
        for (std::size_t i = 0; i < ext.labels->size(); ++i)
            if ((*ext.labels)[i].empty())
                report.add("T4-labels-entry", base + "/labels/" + std::to_string(i),
                           "labels entries must be non-empty");

    if (ext.playbook_type)
        for (const auto& term : *ext.playbook_type)
            if (!vocab.is_playbook_type(term))
                report.add("T4-type-vocab", base + "/playbook_type",
                           "\"" + term + "\" is not in the playbook-type vocabulary");
    if (ext.playbook_abstraction && !vocab.is_abstraction(*ext.playbook_abstraction))
        report.add("T4-abstraction-vocab", base + "/playbook_abstraction",
                   "\"" + *ext.playbook_abstraction +
                       "\" is not in the playbook-abstraction vocabulary");
    if (ext.organization_type)
        for (const auto& term : *ext.organization_type)
            if (!vocab.is_industry_sector(term))
                report.add("T4-org-type-vocab", base + "/organization_type",
                           "\"" + term + "\" is not in the industry-sector vocabulary");

    if (ext.from_bin_alias)
        report.add("T4-bin-alias", base + "/playbook_bin",
                   "playbook_bin was read as an alias for playbook_base64");
    if (!ext.playbook_base64 && !ext.playbook_id)
        report.add("T4-no-payload", base,
                   "extension carries neither playbook_base64 nor playbook_id");

    for (const auto& [prop, value] : ext.extra)
        report.add("T4-ext-unknown-prop", base + "/" + prop,
                   "\"" + prop + "\" is not a defined playbook extension property");

    return report;
}

/// Validates an arbitrary extension body when the caller asserts it is meant
/// to be the playbook extension; a body using another mechanism is an error
/// here (unlike the lenient whole-object walk).
inline ValidationReport validate_extension(
    const ExtensionBody& body, const CourseOfAction& parent,
    const PlaybookVocabularies& vocab = PlaybookVocabularies::defaults(),
    const std::string& key = std::string()) {
    if (const auto* ext = std::get_if<PlaybookExtension>(&body))
        return validate_extension(*ext, parent, vocab, key);
    ValidationReport report;
    const std::string base =
        parent.id.serialize() + "/extensions/" + (key.empty() ? "playbook" : key);
    const Json& raw = std::get<OpaqueExtension>(body).raw;
    std::string found = "absent";
    if (raw.is_object()) {
        const auto it = raw.find("extension_type");
        if (it != raw.end())
            found = it->is_string() ? "\"" + it->get<std::string>() + "\"" : "not a string";
    } else {
        found = "body is not a JSON object";
    }
    report.add("T4-exttype", base + "/extension_type",
               "extension_type must be \"property-extension\" (" + found + ")");
    return report;
}

/// Validates a Course of Action together with every extension it carries.
inline ValidationReport validate_coa(
    const CourseOfAction& coa,
    const PlaybookVocabularies& vocab = PlaybookVocabularies::defaults()) {
    ValidationReport report;
    const std::string id = coa.id.serialize();
    detail::common_object_checks(report, kCourseOfActionType, coa);

    if (!coa.name || coa.name->empty())
        report.add("T1-name-required", id + "/name", "course-of-action requires a non-empty name");
    for (const auto& [prop, value] : coa.passthrough)
        if (prop == "action")
            report.add("T1-action-reserved", id + "/action",
                       "the reserved action property must not be present");

    for (const auto& [key, body] : coa.extensions) {
        bool key_ok = false;
        try {
            key_ok = parse_identifier(key).object_type == kExtensionDefinitionType;
        } catch (const MalformedIdentifier&) {
        }
        if (!key_ok)
            report.add("X-ext-key-format", id + "/extensions/" + key,
                       "extensions key \"" + key + "\" is not an extension-definition id");

        if (std::holds_alternative<PlaybookExtension>(body)) {
            report.merge(
                validate_extension(std::get<PlaybookExtension>(body), coa, vocab, key));
            continue;
        }
        const Json& raw = std::get<OpaqueExtension>(body).raw;
        if (raw.is_object()) {
            const auto it = raw.find("extension_type");
            if (it != raw.end() && it->is_string())
                report.add("X-ext-unsupported", id + "/extensions/" + key,
                           "extension mechanism \"" + it->get<std::string>() +
                               "\" is not interpreted; the body is preserved verbatim");
            else
                report.add("X-ext-shape", id + "/extensions/" + key,
                           "extension body does not declare a string extension_type");
        } else {
            report.add("X-ext-shape", id + "/extensions/" + key,
                       "extension body must be a JSON object");
        }
    }
    return report;
}

/// Validates an Extension Definition object.
inline ValidationReport validate_extension_definition(const ExtensionDefinition& ed) {
    ValidationReport report;
    const std::string id = ed.id.serialize();
    detail::common_object_checks(report, kExtensionDefinitionType, ed);

    if (!ed.name || ed.name->empty())
        report.add("T3-name-required", id + "/name", "extension-definition requires a name");
    if (!ed.schema || ed.schema->empty())
        report.add("T3-schema-required", id + "/schema", "extension-definition requires a schema");
    if (!ed.version || ed.version->empty())
        report.add("T3-version-required", id + "/version",
                   "extension-definition requires a version");
    else if (!detail::is_semver(*ed.version))
        report.add("T3-semver", id + "/version",
                   "version \"" + *ed.version + "\" does not follow MAJOR.MINOR.PATCH");
    if (!ed.description)
        report.add("T3-description", id + "/description", "a description should be provided");

    const bool has_types = ed.extension_types && !ed.extension_types->empty();
    if (!has_types) {
        report.add("T3-exttypes-required", id + "/extension_types",
                   "extension_types must be present and non-empty");
    } else {
        for (const auto& t : *ed.extension_types)
            if (!detail::is_extension_type(t))
                report.add("T3-exttype-enum", id + "/extension_types",
                           "\"" + t + "\" is not a defined extension type");
    }
    const bool toplevel =
        has_types && std::find(ed.extension_types->begin(), ed.extension_types->end(),
                               "toplevel-property-extension") != ed.extension_types->end();
    const bool has_props = ed.extension_properties && !ed.extension_properties->empty();
    if (has_props && !toplevel)
        report.add("T3-props-toplevel", id + "/extension_properties",
                   "extension_properties is listed without toplevel-property-extension");
    if (toplevel && !has_props)
        report.add("T3-toplevel-props", id + "/extension_properties",
                   "toplevel-property-extension is declared but extension_properties is empty");
    return report;
}

/// Validates a relationship. Endpoint types come from the resolve context
/// when it knows the id, otherwise from the id's own type prefix.
inline ValidationReport validate_relationship(const Relationship& rel,
                                              const ResolveContext& ctx = ResolveContext()) {
    ValidationReport report;
    const std::string id = rel.id.serialize();
    detail::common_object_checks(report, kRelationshipType, rel);

    if (!detail::is_relationship_type_token(rel.relationship_type))
        report.add("C-rel-type-format", id + "/relationship_type",
                   "relationship_type \"" + rel.relationship_type +
                       "\" must use only lowercase letters, digits, and hyphens");

    const auto type_of = [&ctx](const StixIdentifier& ref) {
        if (auto t = ctx.resolve(ref.serialize())) return *t;
        return ref.object_type;
    };
    const std::string source_type = type_of(rel.source_ref);
    if (source_type == kCourseOfActionType) {
        const std::string target_type = type_of(rel.target_ref);
        const auto one_of = [&target_type](std::initializer_list<std::string_view> allowed) {
            return std::find(allowed.begin(), allowed.end(), target_type) != allowed.end();
        };
        if (rel.relationship_type == "investigates" && !one_of({"indicator"}))
            report.add("T2-investigates-target", id + "/target_ref",
                       "investigates conventionally targets an indicator, not a " + target_type);
        else if (rel.relationship_type == "mitigates" &&
                 !one_of({"attack-pattern", "indicator", "malware", "tool", "vulnerability"}))
            report.add("T2-mitigates-target", id + "/target_ref",
                       "mitigates conventionally targets an attack-pattern, indicator, malware, "
                       "tool, or vulnerability, not a " +
                           target_type);
        else if (rel.relationship_type == "remediates" && !one_of({"malware", "vulnerability"}))
            report.add("T2-remediates-target", id + "/target_ref",
                       "remediates conventionally targets a malware or vulnerability, not a " +
                           target_type);
    }
    return report;
}

/// Validates a single object of whatever type it turns out to be. Opaque
/// objects pass unjudged; this toolkit does not pretend to know their rules.
inline ValidationReport validate_object(
    const StixObject& obj, const PlaybookVocabularies& vocab = PlaybookVocabularies::defaults(),
    const ResolveContext& ctx = ResolveContext()) {
    ValidationReport report;
    if (const auto* coa = std::get_if<CourseOfAction>(&obj))
        report = validate_coa(*coa, vocab);
    else if (const auto* ed = std::get_if<ExtensionDefinition>(&obj))
        report = validate_extension_definition(*ed);
    else if (const auto* rel = std::get_if<Relationship>(&obj))
        report = validate_relationship(*rel, ctx);
    else if (const auto* idn = std::get_if<Identity>(&obj))
        detail::common_object_checks(report, kIdentityType, *idn);
    return report;
}

/// Surfaces parse notes (currently duplicate-key evidence) as findings.
inline void apply_parse_notes(ValidationReport& report, const std::vector<ParseNote>& notes,
                              const std::string& path_prefix) {
    for (const auto& note : notes)
        if (note.kind == "duplicate-key")
            report.add("C-duplicate-key",
                       path_prefix.empty() ? note.path : path_prefix + "/" + note.path,
                       "duplicate JSON key; the last occurrence was kept");
}

/// Validates a whole bundle: the union of per-object reports plus linkage
/// checks. Linkage findings are attributed to the bundle id, so adding
/// objects never removes findings attributed to other objects.
inline ValidationReport validate_bundle(
    const Bundle& bundle, const PlaybookVocabularies& vocab = PlaybookVocabularies::defaults(),
    const ResolveContext& ctx = ResolveContext()) {
    ValidationReport report;
    const std::string bundle_id = bundle.id.serialize();

    ResolveContext resolve = ctx;
    resolve.add_bundle(bundle);

    apply_parse_notes(report, bundle.notes, bundle_id);

    for (const auto& obj : bundle.objects) report.merge(validate_object(obj, vocab, resolve));

    // Linkage: extensions keys should resolve to an extension-definition.
    for (const auto& obj : bundle.objects) {
        const auto* coa = std::get_if<CourseOfAction>(&obj);
        if (!coa) continue;
        for (const auto& [key, body] : coa->extensions) {
            bool is_ext_def_key = false;
            try {
                is_ext_def_key = parse_identifier(key).object_type == kExtensionDefinitionType;
            } catch (const MalformedIdentifier&) {
            }
            if (is_ext_def_key && !resolve.knows(key))
                report.add("B-ext-def-unresolved",
                           bundle_id + "/" + coa->id.serialize() + "/extensions/" + key,
                           "extension definition " + key + " is not part of this bundle or the "
                           "supplied context");
        }
    }

    // Linkage: created_by_ref should resolve to an identity.
    const auto check_creator = [&](const StixIdentifier& obj_id,
                                   const std::optional<StixIdentifier>& creator) {
        if (creator && !resolve.knows(creator->serialize()))
            report.add("B-created-by-unresolved",
                       bundle_id + "/" + obj_id.serialize() + "/created_by_ref",
                       creator->serialize() + " is not part of this bundle or the supplied "
                       "context");
    };
    for (const auto& obj : bundle.objects)
        std::visit(
            [&](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (!std::is_same_v<T, OpaqueObject>)
                    check_creator(o.id, o.created_by_ref);
            },
            obj);

    // Linkage: relationship endpoints.
    for (const auto& obj : bundle.objects) {
        const auto* rel = std::get_if<Relationship>(&obj);
        if (!rel) continue;
        for (const auto* endpoint : {&rel->source_ref, &rel->target_ref})
            if (!resolve.knows(endpoint->serialize()))
                report.add("B-ref-unresolved",
                           bundle_id + "/" + rel->id.serialize(),
                           rel->id.serialize() + " references " + endpoint->serialize() +
                               ", which is not part of this bundle or the supplied context");
    }

    // Duplicate (id, modified) pairs.
    std::vector<std::pair<VersionKey, bool>> seen;
    for (const auto& obj : bundle.objects) {
        auto key = version_key(obj);
        if (!key) continue;
        bool duplicate = false;
        for (auto& [prior, flagged] : seen)
            if (prior == *key) {
                duplicate = true;
                if (!flagged) flagged = true;
            }
        if (duplicate)
            report.add("B-duplicate-version", bundle_id + "/" + key->id.serialize(),
                       "bundle contains more than one object with id " + key->id.serialize() +
                           " and modified " + key->modified.text);
        seen.emplace_back(*key, false);
    }
    return report;
}

} // namespace coakit
