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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace faithgen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Dataset schema violation or unreadable data. Maps to CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A pipeline stage was invoked before the stage it depends on. Exit code 4.
class UpstreamMissingError : public Error {
 public:
  using Error::Error;
};

/// Malformed linearized graph; carries the character offset of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Failure talking to, or understanding, an external service (judge,
/// paraphraser, scorer).
class ServiceError : public Error {
 public:
  using Error::Error;
};

}  // namespace faithgen
