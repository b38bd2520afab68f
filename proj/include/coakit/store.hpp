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
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coakit/codec.hpp"
#include "coakit/model.hpp"

// Filesystem-backed object repository, versioned by (id, modified). One file
// per version:
//
//     {root}/{object_type}/{uuid}/{modified-text}.json
//
// with `:` replaced by `_` in the filename for filesystem portability. There
// is no delete: revocation is modeled by storing a new version with
// `revoked: true`, per STIX versioning convention. Writes go through a
// temp-file-then-rename so readers never observe a partial file.

namespace coakit {
namespace detail {

inline std::string timestamp_to_filename(const std::string& text) {
    std::string name = text;
    std::replace(name.begin(), name.end(), ':', '_');
    return name + ".json";
}

inline std::optional<StixTimestamp> timestamp_from_filename(const std::string& filename) {
    if (filename.size() < 6 || !filename.ends_with(".json")) return std::nullopt;
    std::string text = filename.substr(0, filename.size() - 5);
    std::replace(text.begin(), text.end(), '_', ':');
    try {
        return parse_timestamp(text);
    } catch (const MalformedTimestamp&) {
        return std::nullopt;
    }
}

} // namespace detail

class Store {
public:
    explicit Store(std::filesystem::path root) : root_(std::move(root)) {}

    /// Default root: $COA_KIT_STORE, falling back to ./coa-store.
    static std::filesystem::path default_root() {
        if (const char* env = std::getenv("COA_KIT_STORE"); env && *env)
            return std::filesystem::path(env);
        return std::filesystem::path("coa-store");
    }

    const std::filesystem::path& root() const { return root_; }

    /// Persists one version. Re-putting the identical version is a no-op;
    /// a different body under an existing (id, modified) is a conflict.
    VersionKey put(const StixObject& obj) {
        const auto key = version_key(obj);
        if (!key)
            throw StructureError("object lacks a parseable id or modified; it cannot be stored");
        const std::string payload = serialize_object(obj) + "\n";
        const std::filesystem::path dir = root_ / key->id.object_type / key->id.uuid;
        const std::filesystem::path file = dir / detail::timestamp_to_filename(key->modified.text);

        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());

        if (std::filesystem::exists(file)) {
            if (read_file(file) == payload) return *key; // idempotent re-put
            throw VersionConflict("a different object is already stored for " +
                                  key->id.serialize() + " at " + key->modified.text);
        }

        static std::atomic<unsigned> counter{0};
        const std::filesystem::path tmp =
            dir / (".put-" + std::to_string(counter.fetch_add(1)) + "-" +
                   std::to_string(static_cast<unsigned>(
                       std::hash<std::string>{}(file.string()) & 0xffffu)) +
                   ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoFailure("cannot write " + tmp.string());
            out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
            if (!out) throw IoFailure("short write to " + tmp.string());
        }
        std::filesystem::rename(tmp, file, ec);
        if (ec) {
            std::filesystem::remove(tmp);
            throw IoFailure("cannot move " + tmp.string() + " into place: " + ec.message());
        }
        return *key;
    }

    /// Returns the named version, or the latest one when `modified` is
    /// omitted. Latest means the maximum modified instant.
    StixObject get(const StixIdentifier& id,
                   const std::optional<StixTimestamp>& modified = std::nullopt) const {
        const std::filesystem::path dir = root_ / id.object_type / id.uuid;
        std::error_code ec;
        if (!std::filesystem::is_directory(dir, ec))
            throw NotFound("no stored versions of " + id.serialize());

        std::optional<std::filesystem::path> best;
        std::optional<StixTimestamp> best_time;
        for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
            if (!entry.is_regular_file()) continue;
            const auto time = detail::timestamp_from_filename(entry.path().filename().string());
            if (!time) continue;
            if (modified) {
                if (time->instant == modified->instant) {
                    best = entry.path();
                    break;
                }
            } else if (!best_time || best_time->instant < time->instant) {
                best = entry.path();
                best_time = *time;
            }
        }
        if (ec) throw IoFailure("cannot list " + dir.string() + ": " + ec.message());
        if (!best) {
            throw NotFound(modified ? "no version of " + id.serialize() + " at " + modified->text
                                    : "no stored versions of " + id.serialize());
        }
        return parse_object(read_file(*best));
    }

    /// All stored version keys, optionally filtered by object type, ordered
    /// by (object_type, uuid, modified) ascending.
    std::vector<VersionKey> list(
        const std::optional<std::string>& object_type = std::nullopt) const {
        std::vector<VersionKey> keys;
        std::error_code ec;
        if (!std::filesystem::is_directory(root_, ec)) return keys;
        for (const auto& type_dir : std::filesystem::directory_iterator(root_, ec)) {
            if (!type_dir.is_directory()) continue;
            const std::string type = type_dir.path().filename().string();
            if (object_type && type != *object_type) continue;
            for (const auto& id_dir : std::filesystem::directory_iterator(type_dir.path(), ec)) {
                if (!id_dir.is_directory()) continue;
                StixIdentifier id;
                try {
                    id = parse_identifier(type + "--" + id_dir.path().filename().string());
                } catch (const MalformedIdentifier&) {
                    continue; // not one of ours
                }
                for (const auto& file : std::filesystem::directory_iterator(id_dir.path(), ec)) {
                    if (!file.is_regular_file()) continue;
                    const auto time =
                        detail::timestamp_from_filename(file.path().filename().string());
                    if (time) keys.push_back(VersionKey{id, *time});
                }
            }
        }
        if (ec) throw IoFailure("cannot list " + root_.string() + ": " + ec.message());
        std::sort(keys.begin(), keys.end(), [](const VersionKey& a, const VersionKey& b) {
            if (a.id.object_type != b.id.object_type) return a.id.object_type < b.id.object_type;
            if (a.id.uuid != b.id.uuid) return a.id.uuid < b.id.uuid;
            return a.modified.instant < b.modified.instant;
        });
        return keys;
    }

private:
    std::filesystem::path root_;

    static std::string read_file(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoFailure("cannot read " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return std::move(buf).str();
    }
};

} // namespace coakit
