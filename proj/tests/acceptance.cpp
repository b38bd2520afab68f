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

// Acceptance harness: eight end-to-end criteria, one pass/fail line each.
// Everything here is deliberately exact — value sets, warning counts, and
// runtime ceilings are pinned as constants rather than loose expectations.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coakit/coakit.hpp"
#include "coakit/service.hpp"

using namespace coakit;

namespace {

// Pinned tolerances.
constexpr int kCorpusBudgetMs = 1000;
constexpr int kRoundTripBudgetMs = 30000;
constexpr int kServiceBudgetMs = 5000;
constexpr int kRoundTripCount = 1000;
constexpr std::size_t kMaxPayloadBytes = 64 * 1024;

constexpr const char* kExtKey = "extension-definition--1e1c1bd7-c527-4215-8e18-e199e74da57c";

int failures = 0;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

std::string corpus(const std::string& name) {
    return read_file(std::string(COA_KIT_DATA_DIR) + "/corpus/" + name);
}

/// Runs one criterion, timing it and catching anything it throws. The body
/// returns an empty string on success or a failure explanation.
void criterion(int number, const std::string& label,
               const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    try {
        detail = body();
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (detail.empty()) {
        std::cout << "[PASS] " << number << ". " << label << " (" << ms << " ms)\n";
    } else {
        std::cout << "[FAIL] " << number << ". " << label << " (" << ms << " ms) — " << detail
                  << "\n";
        ++failures;
    }
}

/// Base64 decoder written against RFC 4648 directly, sharing nothing with the
/// library implementation; the payload oracle check goes through this.
std::vector<std::uint8_t> oracle_base64_decode(const std::string& text) {
    static const std::string alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::vector<std::uint8_t> out;
    std::uint32_t acc = 0;
    int bits = 0;
    for (const char c : text) {
        if (c == '=') break;
        const auto idx = alphabet.find(c);
        if (idx == std::string::npos) throw std::runtime_error("oracle: bad base64 character");
        acc = (acc << 6) | static_cast<std::uint32_t>(idx);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
        }
    }
    return out;
}

PlaybookExtension valid_base_extension() {
    PlaybookExtension ext;
    ext.created = parse_timestamp("2022-01-18T23:22:03.934698Z");
    ext.modified = parse_timestamp("2022-08-25T19:14:15.437976Z");
    ext.playbook_base64 = "U2VjdXJpdHkgUGxheWJvb2s=";
    return ext;
}

CourseOfAction valid_parent() {
    CourseOfAction coa;
    coa.spec_version = "2.1";
    coa.id = parse_identifier("course-of-action--e06259ad-a154-4e23-bc0a-e229ccb3456f");
    coa.created = parse_timestamp("2022-01-18T23:22:03.934698Z");
    coa.modified = parse_timestamp("2022-08-25T19:14:15.437976Z");
    coa.name = "playbook";
    return coa;
}

std::size_t count_rule(const ValidationReport& report, std::string_view rule_id) {
    std::size_t n = 0;
    for (const auto& f : report.findings)
        if (f.rule_id == rule_id) ++n;
    return n;
}

// ---------------------------------------------------------------------------

std::string check_corpus_fidelity() {
    const char* files[] = {"coa-bundle.json", "extension-definition-bundle.json",
                           "combined-bundle.json"};
    // The three instances describe one exchange, so resolution context spans
    // all of them: the COA bundle's extension definition lives in a sibling
    // file by design, not by accident.
    ResolveContext ctx;
    for (const char* name : files) ctx.add_bundle(parse_bundle(corpus(name)));

    for (const char* name : files) {
        const std::string text = corpus(name);
        const Bundle bundle = parse_bundle(text);
        const std::string wire = serialize_bundle(bundle);
        if (nlohmann::json::parse(wire) != nlohmann::json::parse(text))
            return std::string(name) + ": re-serialization is not semantically equal";
        // Timestamp texts ride through byte-for-byte.
        for (const char* stamp :
             {"\"2022-08-25T19:14:15.437976Z\"", "\"2022-01-18T23:22:03.934698Z\""}) {
            if (text.find(stamp) != std::string::npos && wire.find(stamp) == std::string::npos)
                return std::string(name) + ": timestamp text " + stamp + " was rewritten";
        }
        const ValidationReport report = validate_bundle(bundle, PlaybookVocabularies::defaults(),
                                                        ctx);
        if (report.errors() != 0 || report.warnings() != 0)
            return std::string(name) + ": expected 0 errors and 0 warnings, got " +
                   std::to_string(report.errors()) + "/" + std::to_string(report.warnings());
    }
    return "";
}

std::string check_payload_oracle() {
    const Bundle bundle = parse_bundle(corpus("coa-bundle.json"));
    const CourseOfAction* coa = nullptr;
    for (const auto& obj : bundle.objects)
        if ((coa = std::get_if<CourseOfAction>(&obj))) break;
    if (!coa) return "corpus bundle lacks a course-of-action";

    const PlaybookPayload payload = extract_playbook(*coa, parse_identifier(kExtKey));
    const std::string expected_text = "Security Playbook"; // frozen before the build
    const std::vector<std::uint8_t> oracle = oracle_base64_decode("U2VjdXJpdHkgUGxheWJvb2s=");

    if (payload.bytes.size() != 17)
        return "expected 17 bytes, got " + std::to_string(payload.bytes.size());
    if (std::string(payload.bytes.begin(), payload.bytes.end()) != expected_text)
        return "decoded text differs from the frozen oracle";
    if (payload.bytes != oracle) return "library decode disagrees with the independent decoder";
    return "";
}

std::string check_range_rules() {
    const struct {
        const char* rule;
        std::optional<std::int64_t> PlaybookExtension::* field;
    } props[] = {
        {"T4-impact-range", &PlaybookExtension::playbook_impact},
        {"T4-severity-range", &PlaybookExtension::playbook_severity},
        {"T4-priority-range", &PlaybookExtension::playbook_priority},
    };
    const std::set<std::int64_t> accepted = {0, 1, 50, 100};
    for (const auto& prop : props) {
        for (const std::int64_t v : {-1, 0, 1, 50, 100, 101}) {
            PlaybookExtension ext = valid_base_extension();
            ext.*prop.field = v;
            const ValidationReport report = validate_extension(ext, valid_parent());
            const bool want_accept = accepted.contains(v);
            const std::size_t hits = count_rule(report, prop.rule);
            if (want_accept && (hits != 0 || !report.findings.empty()))
                return std::string(prop.rule) + ": value " + std::to_string(v) +
                       " should be accepted cleanly";
            if (!want_accept && (hits != 1 || report.errors() != 1))
                return std::string(prop.rule) + ": value " + std::to_string(v) +
                       " should be rejected with exactly one error";
        }
    }
    return "";
}

std::string check_vocabulary_rules() {
    const auto& vocab = PlaybookVocabularies::defaults();
    if (vocab.playbook_type_ov.size() != 11)
        return "expected 11 playbook_type terms, found " +
               std::to_string(vocab.playbook_type_ov.size());
    for (const auto& term : vocab.playbook_type_ov) {
        PlaybookExtension ext = valid_base_extension();
        ext.playbook_type = std::vector<std::string>{term};
        if (!validate_extension(ext, valid_parent()).findings.empty())
            return "playbook_type \"" + term + "\" should be accepted cleanly";
    }
    for (const char* outsider : {"exfiltration", "Detection", "hunting"}) {
        PlaybookExtension ext = valid_base_extension();
        ext.playbook_type = std::vector<std::string>{outsider};
        const ValidationReport report = validate_extension(ext, valid_parent());
        if (report.warnings() != 1 || count_rule(report, "T4-type-vocab") != 1)
            return std::string("playbook_type \"") + outsider +
                   "\" should yield exactly one warning";
    }

    if (vocab.playbook_abstraction_ov.size() != 2)
        return "expected 2 playbook_abstraction terms";
    for (const auto& term : vocab.playbook_abstraction_ov) {
        PlaybookExtension ext = valid_base_extension();
        ext.playbook_abstraction = term;
        if (!validate_extension(ext, valid_parent()).findings.empty())
            return "playbook_abstraction \"" + term + "\" should be accepted cleanly";
    }
    for (const char* outsider : {"compiled", "Template"}) {
        PlaybookExtension ext = valid_base_extension();
        ext.playbook_abstraction = outsider;
        const ValidationReport report = validate_extension(ext, valid_parent());
        if (report.warnings() != 1 || count_rule(report, "T4-abstraction-vocab") != 1)
            return std::string("playbook_abstraction \"") + outsider +
                   "\" should yield exactly one warning";
    }
    return "";
}

std::string check_relationship_table() {
    const struct {
        const char* relationship_type;
        std::set<std::string> clean_targets;
        bool always_clean;
    } table[] = {
        {"investigates", {"indicator"}, false},
        {"mitigates", {"attack-pattern", "indicator", "malware", "tool", "vulnerability"}, false},
        {"remediates", {"malware", "vulnerability"}, false},
        {"related-to", {}, true},
    };
    const char* targets[] = {"attack-pattern", "indicator", "malware",
                             "tool",           "vulnerability", "identity"};
    int cases = 0;
    for (const auto& row : table) {
        for (const char* target : targets) {
            ++cases;
            Relationship rel;
            rel.spec_version = "2.1";
            rel.id = parse_identifier("relationship--44298a74-ba52-4f0c-87a3-1824e67d7fad");
            rel.created = parse_timestamp("2022-01-18T23:22:03.934698Z");
            rel.modified = rel.created;
            rel.relationship_type = row.relationship_type;
            rel.source_ref =
                parse_identifier("course-of-action--e06259ad-a154-4e23-bc0a-e229ccb3456f");
            rel.target_ref =
                parse_identifier(std::string(target) + "--9c9a712c-1b6b-4163-b7a6-b8e3a1fb4667");

            const ValidationReport report = validate_relationship(rel);
            const bool expect_clean = row.always_clean || row.clean_targets.contains(target);
            if (expect_clean && !report.findings.empty())
                return std::string(row.relationship_type) + " -> " + target + " should be clean";
            if (!expect_clean && report.warnings() != 1)
                return std::string(row.relationship_type) + " -> " + target +
                       " should warn exactly once";
        }
    }
    if (cases != 24) return "expected 24 cases, ran " + std::to_string(cases);
    return "";
}

std::string check_round_trip_properties() {
    std::mt19937 rng(20260821);
    const auto& vocab = PlaybookVocabularies::defaults();
    const auto coin = [&rng] { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; };
    const auto pick = [&rng](const std::vector<std::string>& pool) {
        return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    };
    const StixIdentifier ext_def_id = parse_identifier(kExtKey);

    for (int i = 0; i < kRoundTripCount; ++i) {
        // A random valid extension: optional fields flip on independently,
        // values drawn from the legal sets.
        PlaybookExtension ext = valid_base_extension();
        if (coin()) ext.description = "generated case " + std::to_string(i);
        if (coin()) ext.playbook_id = random_identifier("identity").uuid;
        if (coin()) ext.playbook_creator = random_identifier("identity");
        if (coin()) ext.revoked = coin();
        if (coin()) ext.labels = std::vector<std::string>{"label-a", "label-b"};
        if (coin()) ext.playbook_valid_from = parse_timestamp("2022-03-18T00:00:00.000000Z");
        if (coin()) ext.playbook_valid_until = parse_timestamp("2024-03-18T00:00:00.000000Z");
        if (coin()) ext.playbook_creation_time = parse_timestamp("2022-01-09T08:00:33.432637Z");
        if (coin()) ext.playbook_modification_time = parse_timestamp("2022-01-09T08:00:33.432637Z");
        std::uniform_int_distribution<std::int64_t> range(0, 100);
        if (coin()) ext.playbook_impact = range(rng);
        if (coin()) ext.playbook_severity = range(rng);
        if (coin()) ext.playbook_priority = range(rng);
        if (coin()) ext.organization_type = std::vector<std::string>{pick(vocab.industry_sector_ov)};
        if (coin()) ext.playbook_type = std::vector<std::string>{pick(vocab.playbook_type_ov)};
        if (coin()) ext.playbook_standard = pick({"cacao", "bpmn", "openc2"});
        if (coin()) ext.playbook_abstraction = pick(vocab.playbook_abstraction_ov);

        std::uniform_int_distribution<std::size_t> len(0, kMaxPayloadBytes);
        PlaybookPayload payload;
        payload.bytes.resize(len(rng));
        std::uniform_int_distribution<int> byte(0, 255);
        for (auto& b : payload.bytes) b = static_cast<std::uint8_t>(byte(rng));
        ext.playbook_base64 = base64_encode(payload.bytes);

        CourseOfAction coa = valid_parent();
        coa.extensions.emplace_back(kExtKey, ext);

        const ValidationReport report = validate_coa(coa);
        if (!report.findings.empty())
            return "case " + std::to_string(i) + ": generated extension should validate cleanly (" +
                   report.findings.front().rule_id + ")";

        const std::string once = serialize_object(StixObject(coa));
        const std::string twice = serialize_object(parse_object(once));
        if (once != twice) return "case " + std::to_string(i) + ": serialization is not byte-stable";

        const CourseOfAction embedded =
            embed_playbook(valid_parent(), payload, ext_def_id, PlaybookExtension(),
                           parse_timestamp("2024-05-05T12:00:00.000000Z"));
        if (extract_playbook(embedded, ext_def_id).bytes != payload.bytes)
            return "case " + std::to_string(i) + ": embed/extract changed the payload";
    }
    return "";
}

std::string check_alias_handling() {
    const std::string text = R"({
        "type": "course-of-action",
        "spec_version": "2.1",
        "id": "course-of-action--e06259ad-a154-4e23-bc0a-e229ccb3456f",
        "created": "2022-01-18T23:22:03.934698Z",
        "modified": "2022-08-25T19:14:15.437976Z",
        "name": "playbook",
        "extensions": {
            "extension-definition--1e1c1bd7-c527-4215-8e18-e199e74da57c": {
                "extension_type": "property-extension",
                "created": "2022-01-18T23:22:03.934698Z",
                "modified": "2022-08-25T19:14:15.437976Z",
                "playbook_bin": "U2VjdXJpdHkgUGxheWJvb2s="
            }
        }
    })";
    const StixObject obj = parse_object(text);
    const auto* coa = std::get_if<CourseOfAction>(&obj);
    if (!coa) return "alias input did not parse as a course-of-action";

    const ValidationReport report = validate_coa(*coa);
    if (report.errors() != 0) return "alias input should not produce errors";
    if (report.warnings() != 1 || count_rule(report, "T4-bin-alias") != 1)
        return "alias input should validate with exactly one warning, got " +
               std::to_string(report.warnings());

    const std::string wire = serialize_object(obj);
    if (wire.find("playbook_base64") == std::string::npos)
        return "re-serialization should use playbook_base64";
    if (wire.find("playbook_bin") != std::string::npos)
        return "re-serialization must not keep playbook_bin";
    if (wire.find("U2VjdXJpdHkgUGxheWJvb2s=") == std::string::npos)
        return "payload was lost in the alias rewrite";
    return "";
}

std::string check_service_loop() {
    namespace fs = std::filesystem;
    struct Scratch {
        fs::path path;
        Scratch() {
            std::random_device rd;
            path = fs::temp_directory_path() /
                   ("coa-kit-acceptance-" + std::to_string(rd()) + "-" + std::to_string(rd()));
            fs::create_directories(path);
        }
        ~Scratch() {
            std::error_code ec;
            fs::remove_all(path, ec);
        }
    } scratch;

    ServiceConfig cfg;
    cfg.host = "127.0.0.1";
    cfg.port = 0;
    cfg.store_root = scratch.path;
    cfg.policy = IngestPolicy::reject_on_error;
    PlaybookService service(cfg);
    if (!service.start()) return "service failed to bind";

    httplib::Client client("127.0.0.1", service.port());
    const std::string text = corpus("combined-bundle.json");
    const auto post = client.Post("/objects", text, "application/json");
    if (!post || post->status != 200) return "POST of the corpus bundle did not return 200";
    const Json reply = Json::parse(post->body);
    if (reply["stored"] != 3) return "expected 3 stored objects";

    for (const auto& obj : parse_bundle(text).objects) {
        const auto id = object_id(obj);
        if (!id) return "corpus object lacks an id";
        const auto got = client.Get("/objects/" + id->serialize());
        if (!got || got->status != 200) return "GET " + id->serialize() + " failed";
        if (!semantically_equal(obj, parse_object(got->body)))
            return "GET " + id->serialize() + " is not semantically equal to the ingested object";
    }

    // Corrupt the COA (impact out of range) and watch the gate close.
    Bundle corrupted = parse_bundle(text);
    bool tampered = false;
    for (auto& obj : corrupted.objects) {
        auto* coa = std::get_if<CourseOfAction>(&obj);
        if (!coa) continue;
        coa->modified = parse_timestamp("2030-01-01T00:00:00.000000Z");
        for (auto& [key, body] : coa->extensions)
            if (auto* ext = std::get_if<PlaybookExtension>(&body)) {
                ext->playbook_impact = 101;
                ext->modified = coa->modified;
                tampered = true;
            }
    }
    if (!tampered) return "could not corrupt the corpus COA";
    const auto rejected =
        client.Post("/objects", serialize_bundle(corrupted), "application/json");
    if (!rejected || rejected->status != 200) return "POST of the corrupted bundle failed outright";
    const Json verdict = Json::parse(rejected->body);
    bool saw_rejection = false;
    for (const auto& row : verdict["results"]) {
        if (row["status"] != "rejected") continue;
        for (const auto& f : row["findings"])
            if (f["rule_id"] == "T4-impact-range") saw_rejection = true;
    }
    if (!saw_rejection) return "the corrupted COA was not rejected with T4-impact-range";
    service.stop();
    return "";
}

} // namespace

int main() {
    const auto timed = [](std::string detail, long long ms, int budget) {
        if (detail.empty() && ms > budget)
            detail = "exceeded the " + std::to_string(budget) + " ms budget (" +
                     std::to_string(ms) + " ms)";
        return detail;
    };

    // Criteria with runtime ceilings time their own bodies so the budget
    // check is part of the verdict, not just the label.
    criterion(1, "golden-corpus fidelity", [&] {
        const auto start = std::chrono::steady_clock::now();
        std::string detail = check_corpus_fidelity();
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        return timed(std::move(detail), ms, kCorpusBudgetMs);
    });
    criterion(2, "payload matches the pre-build base64 oracle", check_payload_oracle);
    criterion(3, "impact/severity/priority range rules are exact", check_range_rules);
    criterion(4, "vocabulary rules are exact", check_vocabulary_rules);
    criterion(5, "relationship table matches the hand-transcribed oracle",
              check_relationship_table);
    criterion(6, "1000 random extensions round-trip byte-stable", [&] {
        const auto start = std::chrono::steady_clock::now();
        std::string detail = check_round_trip_properties();
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        return timed(std::move(detail), ms, kRoundTripBudgetMs);
    });
    criterion(7, "playbook_bin alias parses, warns once, re-serializes canonically",
              check_alias_handling);
    criterion(8, "service ingest/fetch loop with reject-on-error", [&] {
        const auto start = std::chrono::steady_clock::now();
        std::string detail = check_service_loop();
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        return timed(std::move(detail), ms, kServiceBudgetMs);
    });

    std::cout << "acceptance: " << (8 - failures) << "/8 criteria passed\n";
    return failures == 0 ? 0 : 1;
}
