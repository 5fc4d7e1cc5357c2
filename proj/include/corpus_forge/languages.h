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

#ifndef CORPUS_FORGE_LANGUAGES_H_
#define CORPUS_FORGE_LANGUAGES_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_forge/scripts.h"

namespace corpus_forge {

struct Language {
  std::string code;
  std::string name;
  Script script;
  std::string family;
  int taxonomy_class;  // resource class 0 (left behind) .. 5 (winners)
};

// The supported languages with their primary script. Codes are unique and
// every language has exactly one script.
class LanguageTable {
 public:
  // The 24 corpus languages.
  static const LanguageTable& Default();

  // Throws std::invalid_argument on duplicate or empty codes.
  explicit LanguageTable(std::vector<Language> languages);

  const Language* Find(std::string_view code) const;
  // Throws DataError for unknown codes.
  const Language& Get(std::string_view code) const;
  bool Contains(std::string_view code) const { return Find(code) != nullptr; }

  // Returns a copy with `code` mapped to `script`.
  LanguageTable WithScript(std::string_view code, Script script) const;

  // Languages whose script no other language in the table uses.
  std::vector<std::string> UniqueScriptLanguages() const;

  std::span<const Language> languages() const { return languages_; }
  size_t size() const { return languages_.size(); }

 private:
  std::vector<Language> languages_;
};

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_LANGUAGES_H_
