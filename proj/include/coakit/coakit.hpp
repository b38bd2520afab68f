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

// Umbrella header: the whole toolkit except the HTTP service, which pulls in
// a web server and is included explicitly via coakit/service.hpp.

#include "coakit/base64.hpp"
#include "coakit/codec.hpp"
#include "coakit/errors.hpp"
#include "coakit/identifier.hpp"
#include "coakit/model.hpp"
#include "coakit/playbook.hpp"
#include "coakit/rules.hpp"
#include "coakit/store.hpp"
#include "coakit/timestamp.hpp"
#include "coakit/validate.hpp"
#include "coakit/vocab.hpp"
