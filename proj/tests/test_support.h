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

// Helpers shared by the unit and acceptance tests.

#ifndef CORPUS_FORGE_TESTS_TEST_SUPPORT_H_
#define CORPUS_FORGE_TESTS_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_forge/corpus.h"
#include "corpus_forge/languages.h"
#include "corpus_forge/rng.h"
#include "corpus_forge/scripts.h"

namespace corpus_forge {

// Readable gtest failure output.
void PrintTo(const CleanDocument& doc, std::ostream* os);

}  // namespace corpus_forge

namespace corpus_forge::testing {

// Base letters (general category L) and combining marks of a script,
// restricted to a plain inventory for Latin and Arabic.
std::vector<char32_t> ScriptLetters(Script script);
std::vector<char32_t> ScriptMarks(Script script);

// Pseudo-language over a script: a seeded lexicon of syllabic words drawn
// with Zipfian frequencies. Distinct seeds give distinct lexicons even on a
// shared script.
class SyntheticLanguage {
 public:
  SyntheticLanguage(std::string code, Script script, uint64_t seed, size_t lexicon_size = 400);

  const std::string& code() const { return code_; }
  std::string Word(Rng& rng) const;
  // Words separated by spaces, ending in a danda (Latin: a period).
  std::string Sentence(Rng& rng, size_t min_words = 5, size_t max_words = 14) const;
  std::string Paragraph(Rng& rng, size_t sentences) const;
  const std::vector<std::string>& lexicon() const { return lexicon_; }

 private:
  std::string code_;
  Script script_;
  std::vector<std::string> lexicon_;
  std::vector<double> cumulative_;  // Zipf CDF
};

// One synthetic language per table entry, seeded by position.
std::vector<SyntheticLanguage> SyntheticLanguages(
    const LanguageTable& table = LanguageTable::Default(), uint64_t seed = 7);

// Documents of `paragraphs` paragraphs cycling through `languages`.
std::vector<CleanDocument> SyntheticCorpus(const std::vector<SyntheticLanguage>& languages,
                                           size_t num_docs, uint64_t seed, size_t paragraphs = 2,
                                           size_t sentences_per_paragraph = 3);

// A document in one of `languages` salted with foreign sentences, digits,
// punctuation, mixed-script sentences (when "en" is present) and stray
// newlines.
CleanDocument RandomDirtyDocument(const std::vector<SyntheticLanguage>& languages, Rng& rng,
                                  size_t index);

// UTF-8 code points of a word, each as its own string.
std::vector<std::string> Codepoints(std::string_view word);

// Fresh empty directory under the system temp directory.
std::filesystem::path FreshTempDir(const std::string& name);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& content);

// Directory holding the checked-in test data.
std::filesystem::path TestDataDir();

}  // namespace corpus_forge::testing

#endif  // CORPUS_FORGE_TESTS_TEST_SUPPORT_H_
