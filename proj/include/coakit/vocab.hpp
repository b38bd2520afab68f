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
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "coakit/errors.hpp"

namespace coakit {

/// Open vocabularies used when validating a playbook extension. Matching is
/// case-sensitive on the lowercase canonical terms; values outside a
/// vocabulary are legal but draw a warning.
struct PlaybookVocabularies {
    /// The 11 operational roles a playbook can address.
    std::vector<std::string> playbook_type_ov;
    /// Levels of abstraction with regard to consumption.
    std::vector<std::string> playbook_abstraction_ov;
    /// industry-sector-ov; configurable, defaults to the STIX 2.1 list.
    std::vector<std::string> industry_sector_ov;

    bool is_playbook_type(std::string_view v) const { return contains(playbook_type_ov, v); }
    bool is_abstraction(std::string_view v) const { return contains(playbook_abstraction_ov, v); }
    bool is_industry_sector(std::string_view v) const { return contains(industry_sector_ov, v); }

    static const PlaybookVocabularies& defaults();

    /// Defaults with industry-sector-ov replaced by the terms in `path`
    /// (one per line, '#' comments). Throws IoFailure if unreadable.
    static PlaybookVocabularies with_sector_file(const std::string& path);

private:
    static bool contains(const std::vector<std::string>& set, std::string_view v) {
        return std::find(set.begin(), set.end(), v) != set.end();
    }
};

inline const PlaybookVocabularies& PlaybookVocabularies::defaults() {
    static const PlaybookVocabularies vocab{
        {"notification", "detection", "investigation", "prevention", "mitigation", "remediation",
         "analysis", "containment", "eradication", "recovery", "attack"},
        {"template", "executable"},
        // STIX 2.1 industry-sector-ov (section 10.15).
        {"agriculture", "aerospace", "automotive", "chemical", "commercial", "communications",
         "construction", "defense", "education", "energy", "entertainment", "financial-services",
         "government", "emergency-services", "government-local", "government-national",
         "government-public-services", "government-regional", "healthcare", "hospitality-leisure",
         "infrastructure", "dams", "nuclear", "water", "insurance", "manufacturing", "mining",
         "non-profit", "pharmaceuticals", "retail", "technology", "telecommunications",
         "transportation", "utilities"},
    };
    return vocab;
}

inline PlaybookVocabularies PlaybookVocabularies::with_sector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot read sector vocabulary file: " + path);

    std::vector<std::string> sectors;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t");
        line = line.substr(begin, end - begin + 1);
        if (line.empty() || line.front() == '#') continue;
        sectors.push_back(line);
    }

    PlaybookVocabularies vocab = defaults();
    vocab.industry_sector_ov = std::move(sectors);
    return vocab;
}

} // namespace coakit
