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

// Document model, corpus I/O, sentence segmentation and corpus statistics.

#ifndef CORPUS_FORGE_CORPUS_H_
#define CORPUS_FORGE_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpus_forge/languages.h"

namespace corpus_forge {

struct RawDocument {
  std::string id;
  std::string source_url;
  std::optional<std::string> lang_hint;
  std::string text;
  // Explicit paragraph structure from a jsonl "paragraphs" array. When empty,
  // paragraphs are recovered from blank lines in `text`.
  std::vector<std::string> paragraphs;
};

struct CleanDocument {
  std::string id;
  std::string lang;
  std::vector<std::string> paragraphs;
  std::vector<std::string> provenance;

  // Paragraphs joined by blank lines.
  std::string Text() const;
  size_t TokenCount() const;
  bool empty() const { return paragraphs.empty(); }

  friend bool operator==(const CleanDocument&, const CleanDocument&) = default;
};

// Splits on blank lines; paragraphs are trimmed and empty ones dropped.
std::vector<std::string> SplitParagraphs(std::string_view text);

// Resolves the language (hint, else `default_lang`) and paragraph structure.
// Throws DataError when no language is available or it is not in `table`.
CleanDocument ToCleanDocument(const RawDocument& raw, std::string_view default_lang,
                              const LanguageTable& table = LanguageTable::Default());

enum class CorpusFormat { kJsonl, kTextPerLine };

// Throws std::invalid_argument for names other than "jsonl" and "text".
CorpusFormat ParseCorpusFormat(std::string_view name);

struct RecordError {
  size_t line;  // 1-based
  std::string message;
};

// Streaming reader. Malformed records are skipped and logged in errors();
// an unreadable file throws DataError from the constructor.
class CorpusReader {
 public:
  CorpusReader(const std::filesystem::path& path, CorpusFormat format);

  // Next well-formed document in file order, or nullopt at end of file.
  std::optional<RawDocument> Next();

  const std::vector<RecordError>& errors() const { return errors_; }
  size_t lines_read() const { return line_; }

 private:
  std::optional<RawDocument> ParseJsonl(const std::string& line);

  std::ifstream in_;
  std::string file_name_;
  CorpusFormat format_;
  size_t line_ = 0;
  std::vector<RecordError> errors_;
  std::unordered_set<std::string> ids_;
};

// Reads a whole file. Record errors are appended to `errors` when non-null.
std::vector<RawDocument> ReadCorpus(const std::filesystem::path& path, CorpusFormat format,
                                    std::vector<RecordError>* errors = nullptr);

// One JSON object per line: {"id","lang","text"[,"paragraphs"][,"provenance"]}.
// "paragraphs" is written only when blank-line splitting of "text" would not
// recover them exactly.
void WriteJsonl(const CleanDocument& doc, std::ostream& out);

// Byte range [begin, end) of one sentence inside the segmented text.
struct SentenceSpan {
  size_t begin;
  size_t end;
  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

bool IsSentenceDelimiter(char32_t c);

// Splits at danda, double danda, '.', '!', '?' and newline. A run of
// delimiters stays attached to the sentence before it. Spans are trimmed of
// whitespace, non-overlapping, in order, and cover all non-whitespace text.
std::vector<SentenceSpan> SegmentSentences(std::string_view text);

std::vector<std::string_view> SentenceTexts(std::string_view text);

struct LanguageStats {
  uint64_t tokens = 0;
  uint64_t sentences = 0;
  uint64_t documents = 0;

  LanguageStats& operator+=(const LanguageStats& other);
  friend bool operator==(const LanguageStats&, const LanguageStats&) = default;
};

inline constexpr std::string_view kOtherLanguage = "other";

struct CorpusStats {
  std::map<std::string, LanguageStats> per_language;
  LanguageStats total;
  // Codes seen on documents that are not in the language table; their counts
  // are accumulated under "other".
  std::set<std::string> unknown_languages;

  // Associative and commutative merge of partial statistics.
  CorpusStats& Merge(const CorpusStats& other);
  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

void AddToStats(const CleanDocument& doc, CorpusStats* stats,
                const LanguageTable& table = LanguageTable::Default());

CorpusStats ComputeStats(std::span<const CleanDocument> corpus,
                         const LanguageTable& table = LanguageTable::Default());

// {"<lang>": {"tokens","sentences","documents"}, ..., "total": {...},
//  "unknown_languages": [...]}
std::string StatsToJson(const CorpusStats& stats);

struct SearchQueries {
  std::vector<std::string> words;
  bool short_list = false;  // fewer than k distinct tokens were available
};

// The k most frequent lowercased whitespace tokens among documents of `lang`,
// ties broken lexicographically. Throws std::invalid_argument if k == 0 and
// DataError if no document of `lang` has any token.
SearchQueries GenerateSearchQueries(std::span<const CleanDocument> corpus, std::string_view lang,
                                    size_t k);

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_CORPUS_H_
