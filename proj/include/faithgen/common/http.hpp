// Copyright 2026 The faithgen Authors
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

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace faithgen {

struct HttpEndpoint {
  std::string url;  // scheme://host[:port]/path; http and https are supported
  std::chrono::milliseconds timeout{30000};
  std::vector<std::pair<std::string, std::string>> headers;
};

/// POSTs a JSON body and parses a JSON response. Throws ServiceError on
/// transport failure, non-2xx status, or an unparseable body; the message
/// carries the status code when one was received.
nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body);

/// Status code carried by a ServiceError from post_json, or 0 for transport
/// failures. Parsed from the message prefix "HTTP <code>".
int http_status_of(const std::string& message);

}  // namespace faithgen
