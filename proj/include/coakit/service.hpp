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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include <httplib.h>

#include "coakit/codec.hpp"
#include "coakit/store.hpp"
#include "coakit/validate.hpp"
#include "coakit/vocab.hpp"

// Minimal HTTP endpoints for sharing playbook-bearing objects out of a
// store. This is deliberately NOT TAXII — no collections, envelopes, or
// pagination — just the three routes a desk-scale exchange needs:
//
//     POST /objects                 ingest a bundle, per-object results
//     GET  /objects/{id}[?modified] fetch one stored version (latest default)
//     GET  /objects[?type]          list stored version keys
//
// Ingestion policy `reject_on_error` refuses any object whose validation
// report contains errors, so nothing in the store ever validates dirty.

namespace coakit {

enum class IngestPolicy { reject_on_error, accept_all };

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 0; // 0 = pick a free port at bind time
    std::filesystem::path store_root = Store::default_root();
    IngestPolicy policy = IngestPolicy::reject_on_error;
    std::optional<std::string> token;           // when set, POST requires Bearer token
    std::optional<std::filesystem::path> sectors; // alternate industry-sector list

    static ServiceConfig from_json(const Json& j) {
        ServiceConfig cfg;
        if (j.contains("host")) cfg.host = j.at("host").get<std::string>();
        if (j.contains("port")) cfg.port = j.at("port").get<int>();
        if (j.contains("store")) cfg.store_root = j.at("store").get<std::string>();
        if (j.contains("policy")) {
            const auto policy = j.at("policy").get<std::string>();
            if (policy == "accept-all")
                cfg.policy = IngestPolicy::accept_all;
            else if (policy == "reject-on-error")
                cfg.policy = IngestPolicy::reject_on_error;
            else
                throw StructureError("unknown ingestion policy \"" + policy + "\"");
        }
        if (j.contains("token")) cfg.token = j.at("token").get<std::string>();
        if (j.contains("sectors")) cfg.sectors = j.at("sectors").get<std::string>();
        return cfg;
    }
};

class PlaybookService {
public:
    explicit PlaybookService(ServiceConfig cfg)
        : cfg_(std::move(cfg)),
          store_(cfg_.store_root),
          vocab_(cfg_.sectors ? PlaybookVocabularies::with_sector_file(*cfg_.sectors)
                              : PlaybookVocabularies::defaults()) {
        wire_routes();
    }

    /// Binds and serves on a background thread; returns once the server is
    /// accepting connections. The bound port is then available via port().
    bool start() {
        if (cfg_.port == 0) {
            port_ = server_.bind_to_any_port(cfg_.host);
            if (port_ < 0) return false;
        } else {
            if (!server_.bind_to_port(cfg_.host, cfg_.port)) return false;
            port_ = cfg_.port;
        }
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return true;
    }

    /// Binds and serves on the calling thread (the CLI `serve` path).
    bool run() {
        if (cfg_.port == 0) {
            port_ = server_.bind_to_any_port(cfg_.host);
            if (port_ < 0) return false;
        } else {
            if (!server_.bind_to_port(cfg_.host, cfg_.port)) return false;
            port_ = cfg_.port;
        }
        return server_.listen_after_bind();
    }

    /// Blocks until the server is stopped (CLI `serve` after start()).
    void wait() {
        if (thread_.joinable()) thread_.join();
    }

    void stop() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    ~PlaybookService() { stop(); }

    int port() const { return port_; }
    const ServiceConfig& config() const { return cfg_; }

private:
    ServiceConfig cfg_;
    Store store_;
    PlaybookVocabularies vocab_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = -1;

    static void reply_json(httplib::Response& res, int status, const Json& body) {
        res.status = status;
        res.set_content(body.dump(2) + "\n", "application/json");
    }

    static Json error_body(const std::string& message) {
        Json j = Json::object();
        j["error"] = message;
        return j;
    }

    bool authorized(const httplib::Request& req) const {
        if (!cfg_.token) return true;
        return req.get_header_value("Authorization") == "Bearer " + *cfg_.token;
    }

    void wire_routes() {
        server_.Post("/objects", [this](const httplib::Request& req, httplib::Response& res) {
            handle_ingest(req, res);
        });
        server_.Get("/objects", [this](const httplib::Request& req, httplib::Response& res) {
            handle_list(req, res);
        });
        server_.Get(R"(/objects/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            handle_fetch(req, res);
        });
    }

    void handle_ingest(const httplib::Request& req, httplib::Response& res) {
        if (!authorized(req)) {
            reply_json(res, 401, error_body("missing or wrong bearer token"));
            return;
        }
        Bundle bundle;
        try {
            bundle = parse_bundle(req.body);
        } catch (const Error& e) {
            reply_json(res, 400, error_body(e.what()));
            return;
        }

        Json results = Json::array();
        int stored = 0, rejected = 0;
        bool conflict = false;
        for (const auto& obj : bundle.objects) {
            Json row = Json::object();
            const auto id = object_id(obj);
            row["id"] = id ? id->serialize() : "unknown";

            const ValidationReport report = validate_object(obj, vocab_);
            if (cfg_.policy == IngestPolicy::reject_on_error && !report.is_clean()) {
                row["status"] = "rejected";
                row["findings"] = report.to_json()["findings"];
                ++rejected;
                results.push_back(std::move(row));
                continue;
            }
            try {
                store_.put(obj);
                row["status"] = "stored";
                ++stored;
            } catch (const VersionConflict& e) {
                row["status"] = "rejected";
                row["reason"] = std::string(e.what());
                conflict = true;
                ++rejected;
            } catch (const Error& e) {
                row["status"] = "rejected";
                row["reason"] = std::string(e.what());
                ++rejected;
            }
            row["findings"] = report.to_json()["findings"];
            results.push_back(std::move(row));
        }
        Json body = Json::object();
        body["stored"] = stored;
        body["rejected"] = rejected;
        body["results"] = std::move(results);
        reply_json(res, conflict ? 409 : 200, body);
    }

    void handle_fetch(const httplib::Request& req, httplib::Response& res) {
        StixIdentifier id;
        try {
            id = parse_identifier(req.matches[1].str());
        } catch (const MalformedIdentifier& e) {
            reply_json(res, 400, error_body(e.what()));
            return;
        }
        std::optional<StixTimestamp> modified;
        if (req.has_param("modified")) {
            try {
                modified = parse_timestamp(req.get_param_value("modified"));
            } catch (const MalformedTimestamp& e) {
                reply_json(res, 400, error_body(e.what()));
                return;
            }
        }
        try {
            const StixObject obj = store_.get(id, modified);
            res.status = 200;
            res.set_content(serialize_object(obj) + "\n", "application/json");
        } catch (const NotFound& e) {
            reply_json(res, 404, error_body(e.what()));
        } catch (const Error& e) {
            reply_json(res, 500, error_body(e.what()));
        }
    }

    void handle_list(const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> type;
        if (req.has_param("type")) type = req.get_param_value("type");
        try {
            Json rows = Json::array();
            for (const auto& key : store_.list(type)) {
                Json row = Json::object();
                row["id"] = key.id.serialize();
                row["modified"] = key.modified.text;
                rows.push_back(std::move(row));
            }
            reply_json(res, 200, rows);
        } catch (const Error& e) {
            reply_json(res, 500, error_body(e.what()));
        }
    }
};

} // namespace coakit
