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

#include "corpus_forge/languages.h"

#include <map>
#include <set>
#include <stdexcept>

#include "corpus_forge/errors.h"

namespace corpus_forge {

const LanguageTable& LanguageTable::Default() {
  static const LanguageTable* table = new LanguageTable({
      {"as", "Assamese", Script::kBengali, "Indo-European", 2},
      {"brx", "Bodo", Script::kDevanagari, "Sino-Tibetan", 1},
      {"bn", "Bengali", Script::kBengali, "Indo-European", 5},
      {"doi", "Dogri", Script::kDevanagari, "Indo-European", 1},
      {"en", "English", Script::kLatin, "Germanic", 5},
      {"gom", "Konkani", Script::kDevanagari, "Indo-European", 1},
      {"gu", "Gujarati", Script::kGujarati, "Indo-European", 4},
      {"hi", "Hindi", Script::kDevanagari, "Indo-European", 5},
      {"kha", "Khasi", Script::kLatin, "Austroasiatic", 1},
      {"kn", "Kannada", Script::kKannada, "Dravidian", 4},
      {"ks", "Kashmiri", Script::kArabic, "Indo-European", 1},
      {"mai", "Maithili", Script::kDevanagari, "Indo-European", 1},
      {"ml", "Malayalam", Script::kMalayalam, "Dravidian", 4},
      {"mni", "Manipuri", Script::kMeitei, "Sino-Tibetan", 1},
      {"mr", "Marathi", Script::kDevanagari, "Indo-European", 4},
      {"ne", "Nepali", Script::kDevanagari, "Indo-European", 2},
      {"or", "Odia", Script::kOdia, "Indo-European", 3},
      {"pa", "Punjabi", Script::kGurmukhi, "Indo-European", 3},
      {"sa", "Sanskrit", Script::kDevanagari, "Indo-European", 2},
      {"sat", "Santali", Script::kOlChiki, "Austroasiatic", 1},
      {"sd", "Sindhi", Script::kArabic, "Indo-European", 1},
      {"ta", "Tamil", Script::kTamil, "Dravidian", 4},
      {"te", "Telugu", Script::kTelugu, "Dravidian", 4},
      {"ur", "Urdu", Script::kArabic, "Indo-European", 5},
  });
  return *table;
}

LanguageTable::LanguageTable(std::vector<Language> languages) : languages_(std::move(languages)) {
  std::set<std::string> seen;
  for (const Language& lang : languages_) {
    if (lang.code.empty()) throw std::invalid_argument("language with empty code");
    if (!seen.insert(lang.code).second) {
      throw std::invalid_argument("duplicate language code: " + lang.code);
    }
  }
}

const Language* LanguageTable::Find(std::string_view code) const {
  for (const Language& lang : languages_) {
    if (lang.code == code) return &lang;
  }
  return nullptr;
}

const Language& LanguageTable::Get(std::string_view code) const {
  const Language* lang = Find(code);
  if (lang == nullptr) throw DataError("unknown language code: " + std::string(code));
  return *lang;
}

LanguageTable LanguageTable::WithScript(std::string_view code, Script script) const {
  std::vector<Language> copy = languages_;
  bool found = false;
  for (Language& lang : copy) {
    if (lang.code == code) {
      lang.script = script;
      found = true;
    }
  }
  if (!found) throw ConfigError("language override for unknown code: " + std::string(code));
  return LanguageTable(std::move(copy));
}

std::vector<std::string> LanguageTable::UniqueScriptLanguages() const {
  std::map<Script, int> users;
  for (const Language& lang : languages_) ++users[lang.script];
  std::vector<std::string> out;
  for (const Language& lang : languages_) {
    if (users[lang.script] == 1) out.push_back(lang.code);
  }
  return out;
}

}  // namespace corpus_forge
