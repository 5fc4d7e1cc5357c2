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

#include "corpus_forge/corpus.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "corpus_forge/errors.h"
#include "corpus_forge/unicode.h"
#include "json.hpp"

namespace corpus_forge {

using nlohmann::json;

std::string CleanDocument::Text() const {
  std::string out;
  for (const std::string& p : paragraphs) {
    if (!out.empty()) out += "\n\n";
    out += p;
  }
  return out;
}

size_t CleanDocument::TokenCount() const {
  size_t n = 0;
  for (const std::string& p : paragraphs) n += CountWhitespaceTokens(p);
  return n;
}

std::vector<std::string> SplitParagraphs(std::string_view text) {
  std::vector<std::string> paragraphs;
  std::string current;
  auto flush = [&] {
    std::string_view trimmed = TrimWhitespace(current);
    if (!trimmed.empty()) paragraphs.emplace_back(trimmed);
    current.clear();
  };
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (TrimWhitespace(line).empty()) {
      flush();
    } else {
      if (!current.empty()) current.push_back('\n');
      current.append(line);
    }
    start = end + 1;
  }
  flush();
  return paragraphs;
}

CleanDocument ToCleanDocument(const RawDocument& raw, std::string_view default_lang,
                              const LanguageTable& table) {
  CleanDocument doc;
  doc.id = raw.id;
  doc.lang = raw.lang_hint.value_or(std::string(default_lang));
  if (doc.lang.empty()) throw DataError("document " + raw.id + " has no language");
  if (!table.Contains(doc.lang)) {
    throw DataError("document " + raw.id + " has unknown language " + doc.lang);
  }
  if (raw.paragraphs.empty()) {
    doc.paragraphs = SplitParagraphs(raw.text);
  } else {
    for (const std::string& p : raw.paragraphs) {
      std::string_view trimmed = TrimWhitespace(p);
      if (!trimmed.empty()) doc.paragraphs.emplace_back(trimmed);
    }
  }
  return doc;
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "text" || name == "text-per-line") return CorpusFormat::kTextPerLine;
  throw std::invalid_argument("unknown corpus format: " + std::string(name));
}

CorpusReader::CorpusReader(const std::filesystem::path& path, CorpusFormat format)
    : in_(path, std::ios::binary), file_name_(path.filename().string()), format_(format) {
  if (!in_) throw DataError("cannot open corpus file " + path.string());
}

std::optional<RawDocument> CorpusReader::ParseJsonl(const std::string& line) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    errors_.push_back({line_, std::string("invalid JSON: ") + e.what()});
    return std::nullopt;
  }
  auto fail = [&](std::string message) -> std::optional<RawDocument> {
    errors_.push_back({line_, std::move(message)});
    return std::nullopt;
  };
  if (!record.is_object()) return fail("record is not a JSON object");
  RawDocument doc;
  auto id = record.find("id");
  if (id == record.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
    return fail("missing or empty string field 'id'");
  }
  doc.id = id->get<std::string>();
  auto text = record.find("text");
  auto paragraphs = record.find("paragraphs");
  if (text != record.end()) {
    if (!text->is_string()) return fail("field 'text' is not a string");
    doc.text = text->get<std::string>();
  }
  if (paragraphs != record.end()) {
    if (!paragraphs->is_array()) return fail("field 'paragraphs' is not an array");
    for (const json& p : *paragraphs) {
      if (!p.is_string()) return fail("field 'paragraphs' holds a non-string");
      doc.paragraphs.push_back(p.get<std::string>());
    }
  } else if (text == record.end()) {
    return fail("missing field 'text'");
  }
  if (auto url = record.find("url"); url != record.end() && !url->is_null()) {
    if (!url->is_string()) return fail("field 'url' is not a string");
    doc.source_url = url->get<std::string>();
  }
  if (auto lang = record.find("lang"); lang != record.end() && !lang->is_null()) {
    if (!lang->is_string()) return fail("field 'lang' is not a string");
    doc.lang_hint = lang->get<std::string>();
  }
  if (!ids_.insert(doc.id).second) return fail("duplicate id '" + doc.id + "'");
  return doc;
}

std::optional<RawDocument> CorpusReader::Next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (TrimWhitespace(line).empty()) continue;
    if (format_ == CorpusFormat::kJsonl) {
      if (auto doc = ParseJsonl(line)) return doc;
      continue;
    }
    if (!IsValidUtf8(line)) {
      errors_.push_back({line_, "ill-formed UTF-8"});
      continue;
    }
    RawDocument doc;
    doc.id = file_name_ + ":" + std::to_string(line_);
    doc.text = std::move(line);
    return doc;
  }
  return std::nullopt;
}

std::vector<RawDocument> ReadCorpus(const std::filesystem::path& path, CorpusFormat format,
                                    std::vector<RecordError>* errors) {
  CorpusReader reader(path, format);
  std::vector<RawDocument> docs;
  while (auto doc = reader.Next()) docs.push_back(std::move(*doc));
  if (errors != nullptr) {
    errors->insert(errors->end(), reader.errors().begin(), reader.errors().end());
  }
  return docs;
}

void WriteJsonl(const CleanDocument& doc, std::ostream& out) {
  json record;
  record["id"] = doc.id;
  record["lang"] = doc.lang;
  const std::string text = doc.Text();
  record["text"] = text;
  if (SplitParagraphs(text) != doc.paragraphs) record["paragraphs"] = doc.paragraphs;
  if (!doc.provenance.empty()) record["provenance"] = doc.provenance;
  out << record.dump() << '\n';
}

bool IsSentenceDelimiter(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == U'।' || c == U'॥';
}

std::vector<SentenceSpan> SegmentSentences(std::string_view text) {
  constexpr size_t kNone = std::string_view::npos;
  std::vector<SentenceSpan> spans;
  size_t start = kNone;
  size_t content_end = 0;
  bool in_delimiter_run = false;
  auto close = [&] {
    if (start != kNone) spans.push_back({start, content_end});
    start = kNone;
    in_delimiter_run = false;
  };
  for (size_t pos = 0; pos < text.size();) {
    const size_t here = pos;
    const char32_t c = NextCodepoint(text, &pos);
    if (c == U'\n') {
      close();
      continue;
    }
    if (IsWhitespace(c)) continue;
    if (IsSentenceDelimiter(c)) {
      if (start == kNone) start = here;
      content_end = pos;
      in_delimiter_run = true;
      continue;
    }
    // Ordinary content: a preceding delimiter run ends the open sentence.
    if (in_delimiter_run) close();
    if (start == kNone) start = here;
    content_end = pos;
  }
  close();
  return spans;
}

std::vector<std::string_view> SentenceTexts(std::string_view text) {
  std::vector<std::string_view> out;
  for (const SentenceSpan& span : SegmentSentences(text)) {
    out.push_back(text.substr(span.begin, span.end - span.begin));
  }
  return out;
}

LanguageStats& LanguageStats::operator+=(const LanguageStats& other) {
  tokens += other.tokens;
  sentences += other.sentences;
  documents += other.documents;
  return *this;
}

CorpusStats& CorpusStats::Merge(const CorpusStats& other) {
  for (const auto& [lang, stats] : other.per_language) per_language[lang] += stats;
  total += other.total;
  unknown_languages.insert(other.unknown_languages.begin(), other.unknown_languages.end());
  return *this;
}

void AddToStats(const CleanDocument& doc, CorpusStats* stats, const LanguageTable& table) {
  LanguageStats delta;
  delta.documents = 1;
  for (const std::string& p : doc.paragraphs) {
    delta.tokens += CountWhitespaceTokens(p);
    delta.sentences += SegmentSentences(p).size();
  }
  std::string key = doc.lang;
  if (!table.Contains(doc.lang)) {
    stats->unknown_languages.insert(doc.lang);
    key = std::string(kOtherLanguage);
  }
  stats->per_language[key] += delta;
  stats->total += delta;
}

CorpusStats ComputeStats(std::span<const CleanDocument> corpus, const LanguageTable& table) {
  CorpusStats stats;
  for (const CleanDocument& doc : corpus) AddToStats(doc, &stats, table);
  return stats;
}

std::string StatsToJson(const CorpusStats& stats) {
  auto entry = [](const LanguageStats& s) {
    return json{{"tokens", s.tokens}, {"sentences", s.sentences}, {"documents", s.documents}};
  };
  json out = json::object();
  for (const auto& [lang, s] : stats.per_language) out[lang] = entry(s);
  out["total"] = entry(stats.total);
  out["unknown_languages"] = stats.unknown_languages;
  return out.dump(2);
}

SearchQueries GenerateSearchQueries(std::span<const CleanDocument> corpus, std::string_view lang,
                                    size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  std::unordered_map<std::string, uint64_t> counts;
  for (const CleanDocument& doc : corpus) {
    if (doc.lang != lang) continue;
    for (const std::string& p : doc.paragraphs) {
      for (std::string_view token : SplitWhitespace(p)) ++counts[ToLower(token)];
    }
  }
  if (counts.empty()) throw DataError("no tokens for language " + std::string(lang));
  std::vector<std::pair<std::string, uint64_t>> ranked(counts.begin(), counts.end());
  const size_t n = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<ptrdiff_t>(n), ranked.end(),
                    [](const auto& a, const auto& b) {
                      return a.second != b.second ? a.second > b.second : a.first < b.first;
                    });
  SearchQueries result;
  for (size_t i = 0; i < n; ++i) result.words.push_back(std::move(ranked[i].first));
  result.short_list = ranked.size() < k;
  return result;
}

}  // namespace corpus_forge
