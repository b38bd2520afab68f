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

// coa-kit: command-line front end. Every subcommand is a thin composition of
// library operations; no validation logic lives here.
//
// Exit codes: 0 clean; 1 warnings only (with --strict); 2 errors (validation
// findings, rejected results, version conflicts); 3 usage or IO failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coakit/coakit.hpp"
#include "coakit/service.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitWarnings = 1;
constexpr int kExitErrors = 2;
constexpr int kExitUsage = 3;

// The extension definition id of the published playbook extension; the
// default key new embeddings go under.
constexpr const char* kDefaultExtDefId =
    "extension-definition--1e1c1bd7-c527-4215-8e18-e199e74da57c";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw coakit::IoFailure("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw coakit::IoFailure("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw coakit::IoFailure("short write to " + path);
}

void write_output(const std::optional<std::string>& out_path, std::string_view content) {
    if (out_path && *out_path != "-")
        write_file(*out_path, content);
    else
        std::cout.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// A parsed input file: either a bundle or one bare object.
struct LoadedDocument {
    std::optional<coakit::Bundle> bundle;
    std::optional<coakit::StixObject> object;
    std::vector<coakit::ParseNote> notes; // bare-object parses only
};

LoadedDocument load_document(const std::string& path) {
    const std::string text = read_file(path);
    const auto probe = nlohmann::json::parse(text, nullptr, false);
    LoadedDocument doc;
    if (probe.is_object() && probe.value("type", "") == "bundle") {
        doc.bundle = coakit::parse_bundle(text);
    } else {
        doc.object = coakit::parse_object(text, &doc.notes);
    }
    return doc;
}

std::string serialize_document(const LoadedDocument& doc) {
    return (doc.bundle ? coakit::serialize_bundle(*doc.bundle)
                       : coakit::serialize_object(*doc.object)) +
           "\n";
}

coakit::CourseOfAction* find_course_of_action(LoadedDocument& doc) {
    if (doc.bundle) {
        for (auto& obj : doc.bundle->objects)
            if (auto* coa = std::get_if<coakit::CourseOfAction>(&obj)) return coa;
        return nullptr;
    }
    return std::get_if<coakit::CourseOfAction>(&*doc.object);
}

coakit::PlaybookVocabularies load_vocab(const std::optional<std::string>& sectors) {
    return sectors ? coakit::PlaybookVocabularies::with_sector_file(*sectors)
                   : coakit::PlaybookVocabularies::defaults();
}

void print_text_report(const coakit::ValidationReport& report) {
    for (const auto& f : report.findings)
        std::cout << coakit::severity_name(f.severity) << "  " << f.rule_id << "  "
                  << f.object_path << "\n    " << f.message << "\n";
    if (report.findings.empty())
        std::cout << "clean: no findings\n";
    else
        std::cout << report.errors() << " error(s), " << report.warnings() << " warning(s), "
                  << report.infos() << " info(s)\n";
}

int exit_code_for(const coakit::ValidationReport& report, bool strict) {
    if (report.errors() > 0) return kExitErrors;
    if (strict && report.warnings() > 0) return kExitWarnings;
    return kExitClean;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateOptions {
    std::string path;
    bool strict = false;
    bool list_rules = false;
    std::string format = "text";
    std::optional<std::string> sectors;
};

int cmd_validate(const ValidateOptions& opt) {
    if (opt.list_rules) {
        std::cout << coakit::rule_catalog_json().dump(2) << "\n";
        return kExitClean;
    }
    if (opt.path.empty()) {
        std::cerr << "validate: a file path is required (or --list-rules)\n";
        return kExitUsage;
    }
    const auto vocab = load_vocab(opt.sectors);
    LoadedDocument doc = load_document(opt.path);
    coakit::ValidationReport report;
    if (doc.bundle) {
        report = coakit::validate_bundle(*doc.bundle, vocab);
    } else {
        report = coakit::validate_object(*doc.object, vocab);
        const auto id = coakit::object_id(*doc.object);
        coakit::apply_parse_notes(report, doc.notes, id ? id->serialize() : "object");
    }
    if (opt.format == "json")
        std::cout << report.to_json().dump(2) << "\n";
    else
        print_text_report(report);
    return exit_code_for(report, opt.strict);
}

// ---------------------------------------------------------------------------
// embed / extract / derive-cacao-meta

struct EmbedOptions {
    std::string coa_path;
    std::string playbook_path;
    std::optional<std::string> standard;
    std::string ext_def = kDefaultExtDefId;
    std::optional<std::string> out;
    bool derive_cacao = false;
};

int cmd_embed(const EmbedOptions& opt) {
    const coakit::StixIdentifier ext_def_id = coakit::parse_identifier(opt.ext_def);

    LoadedDocument doc = load_document(opt.coa_path);
    coakit::CourseOfAction* coa = find_course_of_action(doc);
    if (!coa) throw coakit::StructureError(opt.coa_path + " contains no course-of-action");

    coakit::PlaybookPayload payload;
    const std::string bytes = read_file(opt.playbook_path);
    payload.bytes.assign(bytes.begin(), bytes.end());
    payload.declared_standard = opt.standard;

    coakit::PlaybookExtension meta;
    if (opt.derive_cacao) meta = coakit::derive_metadata_from_cacao(payload);
    *coa = coakit::embed_playbook(*coa, payload, ext_def_id, std::move(meta));

    write_output(opt.out, serialize_document(doc));

    const coakit::ValidationReport report = coakit::validate_coa(*coa);
    if (!report.is_clean()) {
        std::cerr << "embed: result does not validate clean:\n";
        for (const auto& f : report.findings)
            if (f.severity == coakit::Severity::error)
                std::cerr << "  " << f.rule_id << "  " << f.message << "\n";
        return kExitErrors;
    }
    return kExitClean;
}

struct ExtractOptions {
    std::string coa_path;
    std::optional<std::string> ext_def;
    std::optional<std::string> out;
};

int cmd_extract(const ExtractOptions& opt) {
    LoadedDocument doc = load_document(opt.coa_path);
    coakit::CourseOfAction* coa = find_course_of_action(doc);
    if (!coa) throw coakit::StructureError(opt.coa_path + " contains no course-of-action");
    const coakit::PlaybookPayload payload =
        opt.ext_def ? coakit::extract_playbook(*coa, coakit::parse_identifier(*opt.ext_def))
                    : coakit::extract_playbook(*coa);
    write_output(opt.out, std::string_view(reinterpret_cast<const char*>(payload.bytes.data()),
                                           payload.bytes.size()));
    return kExitClean;
}

struct DeriveOptions {
    std::string playbook_path;
};

int cmd_derive_cacao_meta(const DeriveOptions& opt) {
    coakit::PlaybookPayload payload;
    const std::string bytes = read_file(opt.playbook_path);
    payload.bytes.assign(bytes.begin(), bytes.end());
    const coakit::PlaybookExtension fragment = coakit::derive_metadata_from_cacao(payload);
    std::cout << coakit::to_wire(fragment).dump(2) << "\n";
    return kExitClean;
}

// ---------------------------------------------------------------------------
// init-extension-definition

struct InitOptions {
    std::string name = "Course of Action extension for Security Playbooks";
    std::string schema_url;
    std::string version = "1.0.0";
    std::optional<std::string> creator_id;
    std::optional<std::string> description;
    std::optional<std::string> out;
};

int cmd_init_extension_definition(const InitOptions& opt) {
    coakit::ExtensionDefinition ed;
    ed.spec_version = "2.1";
    ed.id = coakit::random_identifier("extension-definition");
    ed.created = coakit::now_timestamp();
    ed.modified = ed.created;
    ed.name = opt.name;
    ed.description = opt.description
                         ? *opt.description
                         : "Extends the Course of Action object with properties for sharing "
                           "machine-readable security playbooks.";
    ed.schema = opt.schema_url;
    ed.version = opt.version;
    ed.extension_types = std::vector<std::string>{"property-extension"};
    if (opt.creator_id) ed.created_by_ref = coakit::parse_identifier(*opt.creator_id);

    coakit::Bundle bundle;
    bundle.id = coakit::random_identifier("bundle");
    bundle.objects.emplace_back(std::move(ed));
    write_output(opt.out, coakit::serialize_bundle(bundle) + "\n");
    return kExitClean;
}

// ---------------------------------------------------------------------------
// inspect

struct InspectOptions {
    std::string path;
};

void inspect_coa(const coakit::CourseOfAction& coa) {
    const auto [key, ext] = coa.first_playbook_extension();
    if (!ext) return;
    std::cout << coa.id.serialize() << "\n";
    if (coa.name) std::cout << "  name: " << *coa.name << "\n";
    if (ext->playbook_standard) std::cout << "  standard: " << *ext->playbook_standard << "\n";
    if (ext->playbook_abstraction)
        std::cout << "  abstraction: " << *ext->playbook_abstraction << "\n";
    if (ext->playbook_type) {
        std::cout << "  types: ";
        for (std::size_t i = 0; i < ext->playbook_type->size(); ++i)
            std::cout << (i ? ", " : "") << (*ext->playbook_type)[i];
        std::cout << "\n";
    }
    std::vector<std::string> numbers;
    if (ext->playbook_impact) numbers.push_back("impact: " + std::to_string(*ext->playbook_impact));
    if (ext->playbook_severity)
        numbers.push_back("severity: " + std::to_string(*ext->playbook_severity));
    if (ext->playbook_priority)
        numbers.push_back("priority: " + std::to_string(*ext->playbook_priority));
    if (!numbers.empty()) {
        std::cout << "  ";
        for (std::size_t i = 0; i < numbers.size(); ++i)
            std::cout << (i ? ", " : "") << numbers[i];
        std::cout << "\n";
    }
    if (ext->playbook_base64) {
        try {
            const auto bytes = coakit::base64_decode(*ext->playbook_base64);
            std::cout << "  payload: " << bytes.size() << " bytes";
            if (ext->playbook_standard) std::cout << ", standard: " << *ext->playbook_standard;
            std::cout << "\n";
        } catch (const coakit::BadBase64&) {
            std::cout << "  payload: (undecodable base64)\n";
        }
    }
}

int cmd_inspect(const InspectOptions& opt) {
    LoadedDocument doc = load_document(opt.path);
    std::vector<coakit::StixObject>* objects = nullptr;
    std::vector<coakit::StixObject> single;
    if (doc.bundle) {
        objects = &doc.bundle->objects;
    } else {
        single.push_back(std::move(*doc.object));
        objects = &single;
    }

    // Counts by type, in first-seen order.
    std::vector<std::pair<std::string, int>> counts;
    for (const auto& obj : *objects) {
        const std::string type = coakit::object_type_of(obj);
        auto it = std::find_if(counts.begin(), counts.end(),
                               [&type](const auto& entry) { return entry.first == type; });
        if (it == counts.end())
            counts.emplace_back(type, 1);
        else
            ++it->second;
    }
    std::cout << "objects: ";
    if (counts.empty()) {
        std::cout << "(none)";
    } else {
        for (std::size_t i = 0; i < counts.size(); ++i)
            std::cout << (i ? ", " : "") << counts[i].first << ": " << counts[i].second;
    }
    std::cout << "\n";

    for (const auto& obj : *objects)
        if (const auto* coa = std::get_if<coakit::CourseOfAction>(&obj)) inspect_coa(*coa);
    return kExitClean;
}

// ---------------------------------------------------------------------------
// store put | get | list

struct StoreOptions {
    std::string root = coakit::Store::default_root().string();
    std::string path;                    // put
    std::string id;                      // get
    std::optional<std::string> modified; // get
    std::optional<std::string> out;      // get
    std::optional<std::string> type;     // list
};

int cmd_store_put(const StoreOptions& opt) {
    coakit::Store store{opt.root};
    LoadedDocument doc = load_document(opt.path);
    std::vector<coakit::StixObject> single;
    const auto& objects = doc.bundle ? doc.bundle->objects
                                     : (single.push_back(std::move(*doc.object)), single);
    bool conflict = false;
    for (const auto& obj : objects) {
        try {
            const coakit::VersionKey key = store.put(obj);
            std::cout << "stored " << key.id.serialize() << " " << key.modified.text << "\n";
        } catch (const coakit::VersionConflict& e) {
            std::cerr << "conflict: " << e.what() << "\n";
            conflict = true;
        }
    }
    return conflict ? kExitErrors : kExitClean;
}

int cmd_store_get(const StoreOptions& opt) {
    coakit::Store store{opt.root};
    const coakit::StixIdentifier id = coakit::parse_identifier(opt.id);
    std::optional<coakit::StixTimestamp> modified;
    if (opt.modified) modified = coakit::parse_timestamp(*opt.modified);
    const coakit::StixObject obj = store.get(id, modified);
    write_output(opt.out, coakit::serialize_object(obj) + "\n");
    return kExitClean;
}

int cmd_store_list(const StoreOptions& opt) {
    coakit::Store store{opt.root};
    for (const auto& key : store.list(opt.type))
        std::cout << key.id.serialize() << " " << key.modified.text << "\n";
    return kExitClean;
}

// ---------------------------------------------------------------------------
// serve

struct ServeOptions {
    std::optional<std::string> config;
    std::optional<std::string> host;
    std::optional<int> port;
    std::optional<std::string> store_root;
    std::optional<std::string> policy;
    std::optional<std::string> token;
    std::optional<std::string> sectors;
};

int cmd_serve(const ServeOptions& opt) {
    coakit::ServiceConfig cfg;
    if (opt.config) cfg = coakit::ServiceConfig::from_json(coakit::Json::parse(read_file(*opt.config)));
    if (opt.host) cfg.host = *opt.host;
    if (opt.port) cfg.port = *opt.port;
    if (opt.store_root) cfg.store_root = *opt.store_root;
    if (opt.policy) {
        if (*opt.policy == "accept-all")
            cfg.policy = coakit::IngestPolicy::accept_all;
        else if (*opt.policy == "reject-on-error")
            cfg.policy = coakit::IngestPolicy::reject_on_error;
        else
            throw coakit::StructureError("unknown ingestion policy \"" + *opt.policy + "\"");
    }
    if (opt.token) cfg.token = *opt.token;
    if (opt.sectors) cfg.sectors = *opt.sectors;

    coakit::PlaybookService service{cfg};
    if (!service.start()) {
        std::cerr << "serve: cannot bind " << cfg.host << ":" << cfg.port << "\n";
        return kExitUsage;
    }
    std::cout << "serving on http://" << cfg.host << ":" << service.port() << " (store: "
              << cfg.store_root.string() << ")\n"
              << std::flush;
    service.wait();
    return kExitClean;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"STIX 2.1 Course of Action playbook toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "coa-kit 1.0.0");

    int rc = kExitClean;

    ValidateOptions validate_opt;
    auto* validate = app.add_subcommand("validate", "Validate a bundle or object file");
    validate->add_option("path", validate_opt.path, "JSON file to validate");
    validate->add_flag("--strict", validate_opt.strict, "exit 1 when only warnings are present");
    validate->add_flag("--list-rules", validate_opt.list_rules,
                       "print the machine-readable rule catalog and exit");
    validate->add_option("--format", validate_opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->default_val("text");
    validate->add_option("--sectors", validate_opt.sectors,
                         "file with industry-sector terms, one per line");
    validate->callback([&] { rc = cmd_validate(validate_opt); });

    EmbedOptions embed_opt;
    auto* embed = app.add_subcommand("embed", "Embed a playbook file into a Course of Action");
    embed->add_option("coa", embed_opt.coa_path, "COA (or bundle) JSON file")->required();
    embed->add_option("playbook", embed_opt.playbook_path, "playbook file (raw bytes)")->required();
    embed->add_option("--standard", embed_opt.standard, "playbook standard, e.g. cacao");
    embed->add_option("--ext-def", embed_opt.ext_def, "extension-definition id to key the extension")
        ->default_val(kDefaultExtDefId);
    embed->add_flag("--derive-cacao", embed_opt.derive_cacao,
                    "derive descriptive metadata from the (CACAO JSON) playbook");
    embed->add_option("--out", embed_opt.out, "output path (default: stdout)");
    embed->callback([&] { rc = cmd_embed(embed_opt); });

    ExtractOptions extract_opt;
    auto* extract = app.add_subcommand("extract", "Extract the embedded playbook bytes");
    extract->add_option("coa", extract_opt.coa_path, "COA (or bundle) JSON file")->required();
    extract->add_option("--ext-def", extract_opt.ext_def,
                        "extension-definition id (default: first playbook extension)");
    extract->add_option("--out", extract_opt.out, "output path (default: stdout)");
    extract->callback([&] { rc = cmd_extract(extract_opt); });

    DeriveOptions derive_opt;
    auto* derive = app.add_subcommand("derive-cacao-meta",
                                      "Derive extension metadata from a CACAO playbook");
    derive->add_option("playbook", derive_opt.playbook_path, "CACAO JSON file")->required();
    derive->callback([&] { rc = cmd_derive_cacao_meta(derive_opt); });

    InitOptions init_opt;
    auto* init = app.add_subcommand("init-extension-definition",
                                    "Write a fresh Extension Definition bundle");
    init->add_option("--name", init_opt.name, "display name")->default_val(init_opt.name);
    init->add_option("--schema-url", init_opt.schema_url, "URL of the governing JSON schema")
        ->required();
    init->add_option("--version", init_opt.version, "definition version")->default_val("1.0.0");
    init->add_option("--creator-id", init_opt.creator_id, "identity id for created_by_ref");
    init->add_option("--description", init_opt.description, "description text");
    init->add_option("--out", init_opt.out, "output path (default: stdout)");
    init->callback([&] { rc = cmd_init_extension_definition(init_opt); });

    InspectOptions inspect_opt;
    auto* inspect = app.add_subcommand("inspect", "Summarize a bundle or object file");
    inspect->add_option("path", inspect_opt.path, "JSON file")->required();
    inspect->callback([&] { rc = cmd_inspect(inspect_opt); });

    StoreOptions store_opt;
    auto* store_cmd = app.add_subcommand("store", "Filesystem object store");
    store_cmd->require_subcommand(1);
    auto add_root = [&](CLI::App* cmd) {
        cmd->add_option("--store", store_opt.root, "store root directory")
            ->default_val(store_opt.root);
    };
    auto* put = store_cmd->add_subcommand("put", "Store every object in a file");
    put->add_option("path", store_opt.path, "bundle or object JSON file")->required();
    add_root(put);
    put->callback([&] { rc = cmd_store_put(store_opt); });
    auto* get = store_cmd->add_subcommand("get", "Fetch one stored object");
    get->add_option("id", store_opt.id, "object id")->required();
    get->add_option("--modified", store_opt.modified, "exact version (default: latest)");
    get->add_option("--out", store_opt.out, "output path (default: stdout)");
    add_root(get);
    get->callback([&] { rc = cmd_store_get(store_opt); });
    auto* list = store_cmd->add_subcommand("list", "List stored version keys");
    list->add_option("--type", store_opt.type, "filter by object type");
    add_root(list);
    list->callback([&] { rc = cmd_store_list(store_opt); });

    ServeOptions serve_opt;
    auto* serve = app.add_subcommand("serve", "Serve objects over HTTP");
    serve->add_option("--config", serve_opt.config, "JSON config file");
    serve->add_option("--host", serve_opt.host, "bind address");
    serve->add_option("--port", serve_opt.port, "bind port (0 picks a free one)");
    serve->add_option("--store", serve_opt.store_root, "store root directory");
    serve->add_option("--policy", serve_opt.policy, "reject-on-error | accept-all");
    serve->add_option("--token", serve_opt.token, "bearer token required for POST");
    serve->add_option("--sectors", serve_opt.sectors, "industry-sector terms file");
    serve->callback([&] { rc = cmd_serve(serve_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitClean : kExitUsage;
    } catch (const coakit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return rc;
}
