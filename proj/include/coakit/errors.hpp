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

#include <stdexcept>
#include <string>

namespace coakit {

/// Base class for everything this library throws on its own behalf.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Model-level parse failures.
class MalformedIdentifier : public Error {
public:
    using Error::Error;
};
class MalformedTimestamp : public Error {
public:
    using Error::Error;
};

// Codec failures. SyntaxError covers JSON that does not parse at all;
// StructureError covers JSON that parses but does not have the required shape.
class SyntaxError : public Error {
public:
    using Error::Error;
};
class StructureError : public Error {
public:
    using Error::Error;
};

// Playbook payload handling.
class BadBase64 : public Error {
public:
    using Error::Error;
};
class NoSuchExtension : public Error {
public:
    using Error::Error;
};
class NoEmbeddedPlaybook : public Error {
public:
    using Error::Error;
};
class NotJsonObject : public Error {
public:
    using Error::Error;
};
class InvalidExtensionDefinitionId : public Error {
public:
    using Error::Error;
};

// Object store.
class VersionConflict : public Error {
public:
    using Error::Error;
};
class NotFound : public Error {
public:
    using Error::Error;
};
class IoFailure : public Error {
public:
    using Error::Error;
};

} // namespace coakit
