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

#include <array>
#include <optional>
#include <string_view>

#include "coakit/model.hpp"

// The published rule catalog. Every finding a validator can emit carries one
// of these rule ids; the severity is fixed per rule, not per occurrence.
//
// Severity policy: hard requirements of the object definitions ("MUST"-grade
// rules on course-of-action, extension-definition, and the playbook
// extension) are errors; recommendations and open-vocabulary checks are
// warnings; relationship target conventions are warnings because custom
// relationships are explicitly allowed; purely informational observations are
// info.

namespace coakit {

enum class Severity { error, warning, info };

inline constexpr std::string_view severity_name(Severity s) {
    switch (s) {
        case Severity::error: return "error";
        case Severity::warning: return "warning";
        default: return "info";
    }
}

inline std::optional<Severity> severity_from_name(std::string_view name) {
    if (name == "error") return Severity::error;
    if (name == "warning") return Severity::warning;
    if (name == "info") return Severity::info;
    return std::nullopt;
}

/// One catalog row: stable id, fixed severity, and the requirement the rule
/// enforces, quoted against its defining document.
struct RuleInfo {
    std::string_view id;
    Severity severity;
    std::string_view source;
};

inline constexpr std::array kRuleCatalog{
    // Common object rules (STIX 2.1 common properties and versioning).
    RuleInfo{"C-type-id", Severity::error,
             "STIX 2.1 identifiers: the type prefix of `id` must equal the object's `type`"},
    RuleInfo{"C-spec-version", Severity::info,
             "STIX 2.1 common properties: `spec_version` should be present with the value \"2.1\""},
    RuleInfo{"C-modified-order", Severity::error,
             "STIX 2.1 versioning: `modified` must not be earlier than `created`"},
    RuleInfo{"C-created-by-type", Severity::warning,
             "STIX 2.1 common properties: `created_by_ref` identifies the creating identity"},
    RuleInfo{"C-duplicate-key", Severity::warning,
             "RFC 8259 leaves duplicate member names unspecified; the last occurrence was kept"},
    RuleInfo{"C-rel-type-format", Severity::error,
             "STIX 2.1 relationship: `relationship_type` uses only lowercase letters, digits, "
             "and hyphens"},

    // Course of Action object rules.
    RuleInfo{"T1-name-required", Severity::error,
             "STIX 2.1 course-of-action: `name` is required and non-empty"},
    RuleInfo{"T1-action-reserved", Severity::error,
             "STIX 2.1 course-of-action: the `action` property is reserved and must not be used"},

    // Extension plumbing on a Course of Action.
    RuleInfo{"X-ext-key-format", Severity::warning,
             "STIX 2.1 property extensions: keys of `extensions` are extension-definition ids"},
    RuleInfo{"X-ext-unsupported", Severity::warning,
             "extension uses a mechanism other than property-extension; its body is not "
             "interpreted by this toolkit"},
    RuleInfo{"X-ext-shape", Severity::warning,
             "STIX 2.1 property extensions: an extension body is a JSON object declaring "
             "`extension_type`"},

    // Course-of-action relationship target conventions (advisory: custom
    // relationship types and targets are explicitly allowed).
    RuleInfo{"T2-investigates-target", Severity::warning,
             "course-of-action `investigates` conventionally targets an indicator"},
    RuleInfo{"T2-mitigates-target", Severity::warning,
             "course-of-action `mitigates` conventionally targets an attack-pattern, indicator, "
             "malware, tool, or vulnerability"},
    RuleInfo{"T2-remediates-target", Severity::warning,
             "course-of-action `remediates` conventionally targets a malware or vulnerability"},

    // Extension Definition object rules.
    RuleInfo{"T3-name-required", Severity::error,
             "STIX 2.1 extension-definition: `name` is required and non-empty"},
    RuleInfo{"T3-schema-required", Severity::error,
             "STIX 2.1 extension-definition: `schema` is required and non-empty"},
    RuleInfo{"T3-version-required", Severity::error,
             "STIX 2.1 extension-definition: `version` is required and non-empty"},
    RuleInfo{"T3-exttypes-required", Severity::error,
             "STIX 2.1 extension-definition: `extension_types` is required and non-empty"},
    RuleInfo{"T3-exttype-enum", Severity::error,
             "STIX 2.1 extension-definition: `extension_types` entries come from the extension "
             "type enumeration"},
    RuleInfo{"T3-description", Severity::warning,
             "STIX 2.1 extension-definition: a `description` should be provided"},
    RuleInfo{"T3-semver", Severity::warning,
             "STIX 2.1 extension-definition: `version` should follow MAJOR.MINOR.PATCH"},
    RuleInfo{"T3-props-toplevel", Severity::warning,
             "STIX 2.1 extension-definition: `extension_properties` is only meaningful together "
             "with `toplevel-property-extension`"},
    RuleInfo{"T3-toplevel-props", Severity::warning,
             "STIX 2.1 extension-definition: `toplevel-property-extension` expects the promoted "
             "properties to be listed in `extension_properties`"},

    // Playbook property-extension body rules.
    RuleInfo{"T4-exttype", Severity::error,
             "playbook extension: `extension_type` must be \"property-extension\""},
    RuleInfo{"T4-created-required", Severity::error,
             "playbook extension: `created` is required inside the extension body"},
    RuleInfo{"T4-modified-required", Severity::error,
             "playbook extension: `modified` is required inside the extension body"},
    RuleInfo{"T4-modified-order", Severity::error,
             "playbook extension: the extension's `modified` must not be earlier than its "
             "`created`"},
    RuleInfo{"T4-parent-modified", Severity::warning,
             "playbook extension: updating the extension requires updating the parent object's "
             "`modified` as well"},
    RuleInfo{"T4-impact-range", Severity::error,
             "playbook extension: `playbook_impact` is an integer from 0 to 100"},
    RuleInfo{"T4-severity-range", Severity::error,
             "playbook extension: `playbook_severity` is an integer from 0 to 100"},
    RuleInfo{"T4-priority-range", Severity::error,
             "playbook extension: `playbook_priority` is an integer from 0 to 100"},
    RuleInfo{"T4-base64", Severity::error,
             "playbook extension: `playbook_base64` holds the base64 encoding of the playbook"},
    RuleInfo{"T4-labels-entry", Severity::error,
             "playbook extension: `labels` entries are non-empty strings"},
    RuleInfo{"T4-type-vocab", Severity::warning,
             "playbook extension: `playbook_type` values should come from the playbook-type "
             "vocabulary"},
    RuleInfo{"T4-abstraction-vocab", Severity::warning,
             "playbook extension: `playbook_abstraction` should be \"template\" or "
             "\"executable\""},
    RuleInfo{"T4-org-type-vocab", Severity::warning,
             "playbook extension: `organization_type` values should come from the STIX 2.1 "
             "industry-sector vocabulary"},
    RuleInfo{"T4-bin-alias", Severity::warning,
             "playbook extension: the `playbook_bin` spelling was accepted as an input alias; "
             "canonical output writes `playbook_base64`"},
    RuleInfo{"T4-no-payload", Severity::warning,
             "playbook extension: the extension should embed a playbook (`playbook_base64`) or "
             "reference one (`playbook_id`)"},
    RuleInfo{"T4-id-correlation", Severity::warning,
             "playbook extension: `playbook_id` should equal the id carried inside the embedded "
             "playbook"},
    RuleInfo{"T4-ext-unknown-prop", Severity::info,
             "property not defined by the playbook extension; it parsed fine and is preserved"},

    // Bundle linkage rules.
    RuleInfo{"B-ext-def-unresolved", Severity::warning,
             "an `extensions` key does not resolve to an extension-definition in this bundle or "
             "the supplied context; cross-bundle references are legal but unverifiable here"},
    RuleInfo{"B-created-by-unresolved", Severity::info,
             "`created_by_ref` does not resolve within this bundle or the supplied context"},
    RuleInfo{"B-ref-unresolved", Severity::info,
             "a relationship endpoint does not resolve within this bundle or the supplied "
             "context"},
    RuleInfo{"B-duplicate-version", Severity::error,
             "STIX 2.1 versioning: two objects in one bundle share the same `id` and `modified` "
             "timestamp"},
};

inline const RuleInfo* find_rule(std::string_view rule_id) {
    for (const auto& rule : kRuleCatalog)
        if (rule.id == rule_id) return &rule;
    return nullptr;
}

/// Machine-readable catalog, used by `--list-rules` and the service.
inline Json rule_catalog_json() {
    Json rows = Json::array();
    for (const auto& rule : kRuleCatalog) {
        Json row = Json::object();
        row["rule_id"] = std::string(rule.id);
        row["severity"] = std::string(severity_name(rule.severity));
        row["source"] = std::string(rule.source);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace coakit
