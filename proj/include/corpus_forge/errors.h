// Copyright 2026 The Corpus Forge Authors.
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

#ifndef CORPUS_FORGE_ERRORS_H_
#define CORPUS_FORGE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace corpus_forge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or missing resources, detected before any data is
// processed. The CLI maps this to exit status 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad input data (unreadable file, malformed record, inconsistent shapes).
class DataError : public Error {
 public:
  using Error::Error;
};

// Operation requested for a script it cannot handle.
class UnsupportedScriptError : public Error {
 public:
  using Error::Error;
};

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_ERRORS_H_
