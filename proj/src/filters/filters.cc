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

#include "corpus_forge/filters.h"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "corpus_forge/errors.h"
#include "corpus_forge/parallel.h"
#include "corpus_forge/unicode.h"
#include "json.hpp"

namespace corpus_forge {

using nlohmann::json;

namespace {

void AddTag(CleanDocument* doc, std::string_view tag) {
  if (std::find(doc->provenance.begin(), doc->provenance.end(), tag) == doc->provenance.end()) {
    doc->provenance.emplace_back(tag);
  }
}

bool EndsWithDelimiter(std::string_view sentence) {
  char32_t last = 0;
  for (size_t pos = 0; pos < sentence.size();) last = NextCodepoint(sentence, &pos);
  return IsSentenceDelimiter(last);
}

std::string Sha256(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  return std::string(reinterpret_cast<const char*>(digest), length);
}

}  // namespace

SentenceFilterOutcome RemoveSentences(const CleanDocument& doc, std::string_view tag,
                                      const std::function<bool(std::string_view)>& remove) {
  SentenceFilterOutcome outcome;
  outcome.doc.id = doc.id;
  outcome.doc.lang = doc.lang;
  outcome.doc.provenance = doc.provenance;
  AddTag(&outcome.doc, tag);
  for (const std::string& paragraph : doc.paragraphs) {
    const std::vector<std::string_view> sentences = SentenceTexts(paragraph);
    std::vector<std::string_view> kept;
    for (std::string_view sentence : sentences) {
      if (remove(sentence)) {
        ++outcome.sentences_removed;
        outcome.tokens_removed += CountWhitespaceTokens(sentence);
      } else {
        kept.push_back(sentence);
      }
    }
    if (kept.size() == sentences.size()) {
      outcome.doc.paragraphs.push_back(paragraph);
      continue;
    }
    if (kept.empty()) continue;
    // Rejoin so that re-segmenting yields exactly the kept sentences.
    std::string rebuilt(kept.front());
    for (size_t i = 1; i < kept.size(); ++i) {
      rebuilt.push_back(EndsWithDelimiter(kept[i - 1]) ? ' ' : '\n');
      rebuilt.append(kept[i]);
    }
    outcome.doc.paragraphs.push_back(std::move(rebuilt));
  }
  return outcome;
}

SentenceFilterOutcome ScriptRatioFilter(const CleanDocument& doc, double threshold,
                                        const LanguageTable& table) {
  const Script native = table.Get(doc.lang).script;
  return RemoveSentences(doc, "script-ratio", [&](std::string_view sentence) {
    return ComputeNativeRatio(sentence, native).value < threshold;
  });
}

size_t StrippedWordCount(const CleanDocument& doc) {
  size_t words = 0;
  for (const std::string& p : doc.paragraphs) words += CountWhitespaceTokens(StripPunctuation(p));
  return words;
}

bool PassesPunctuationLength(const CleanDocument& doc, size_t min_words) {
  return StrippedWordCount(doc) >= min_words;
}

Blacklist ParseBlacklist(std::string_view text, std::string lang) {
  Blacklist blacklist;
  blacklist.lang = std::move(lang);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const std::string entry = CollapseWhitespace(line);
    if (entry.empty() || entry.front() == '#') continue;
    if (entry.find(' ') == std::string::npos) {
      blacklist.words.push_back(entry);
    } else {
      blacklist.phrases.push_back(entry);
    }
  }
  return blacklist;
}

Blacklist LoadBlacklist(const std::filesystem::path& path, std::string lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open blacklist " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseBlacklist(buffer.str(), std::move(lang));
}

std::string NormalizeMatchToken(std::string_view token, bool case_fold) {
  const std::string nfc = NormalizeNfc(token);
  const std::string_view trimmed = TrimPunctuation(nfc);
  return case_fold ? FoldCase(trimmed) : std::string(trimmed);
}

std::vector<std::string> MatchTokens(std::string_view sentence, bool case_fold) {
  std::vector<std::string> tokens;
  for (std::string_view raw : SplitWhitespace(sentence)) {
    std::string token = NormalizeMatchToken(raw, case_fold);
    if (!token.empty()) tokens.push_back(std::move(token));
  }
  return tokens;
}

namespace {

std::vector<std::vector<std::string>> BlacklistPatterns(const Blacklist& blacklist) {
  std::vector<std::vector<std::string>> patterns;
  auto add = [&](const std::string& entry) {
    std::vector<std::string> tokens = MatchTokens(entry, blacklist.case_fold);
    if (!tokens.empty()) patterns.push_back(std::move(tokens));
  };
  for (const std::string& word : blacklist.words) add(word);
  for (const std::string& phrase : blacklist.phrases) add(phrase);
  return patterns;
}

}  // namespace

OffensiveMatcher::OffensiveMatcher(const Blacklist& blacklist)
    : lang_(blacklist.lang),
      case_fold_(blacklist.case_fold),
      automaton_(BlacklistPatterns(blacklist)) {}

bool OffensiveMatcher::Matches(std::string_view sentence) const {
  return automaton_.Matches(MatchTokens(sentence, case_fold_));
}

SentenceFilterOutcome OffensiveMatcher::Apply(const CleanDocument& doc) const {
  return RemoveSentences(doc, "offensive",
                         [this](std::string_view sentence) { return Matches(sentence); });
}

std::string Deduplicator::NormalizedKey(const CleanDocument& doc) {
  return FoldCase(CollapseWhitespace(NormalizeNfc(doc.Text())));
}

bool Deduplicator::Insert(const CleanDocument& doc) {
  return seen_.insert(Sha256(NormalizedKey(doc))).second;
}

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kLid: return "lid";
    case Stage::kScriptRatio: return "script-ratio";
    case Stage::kOffensive: return "offensive";
    case Stage::kPunctuationLength: return "punctuation-length";
    case Stage::kDedup: return "dedup";
  }
  return "?";
}

Stage ParseStage(std::string_view name) {
  for (Stage stage : {Stage::kLid, Stage::kScriptRatio, Stage::kOffensive,
                      Stage::kPunctuationLength, Stage::kDedup}) {
    if (StageName(stage) == name) return stage;
  }
  throw ConfigError("unknown pipeline stage: " + std::string(name));
}

const StageCounters* FilterReport::Find(Stage stage) const {
  for (const StageCounters& c : stages) {
    if (c.stage == stage) return &c;
  }
  return nullptr;
}

std::string FilterReport::ToJson() const {
  json out;
  out["documents_before"] = documents_before;
  out["documents_after"] = documents_after;
  out["tokens_before"] = tokens_before;
  out["tokens_after"] = tokens_after;
  json stage_list = json::array();
  for (const StageCounters& c : stages) {
    stage_list.push_back({{"stage", StageName(c.stage)},
                          {"documents_in", c.documents_in},
                          {"documents_out", c.documents_out},
                          {"tokens_in", c.tokens_in},
                          {"tokens_out", c.tokens_out},
                          {"sentences_removed", c.sentences_removed},
                          {"paragraphs_removed", c.paragraphs_removed},
                          {"documents_removed", c.documents_removed},
                          {"documents_emptied", c.documents_emptied},
                          {"documents_skipped", c.documents_skipped}});
  }
  out["stages"] = std::move(stage_list);
  return out.dump(2);
}

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<const LidModel> lid,
                   std::vector<Blacklist> blacklists, const LanguageTable& table)
    : config_(std::move(config)), lid_(std::move(lid)), table_(table) {
  auto enabled = [&](Stage s) {
    return std::find(config_.stages.begin(), config_.stages.end(), s) != config_.stages.end();
  };
  for (size_t i = 0; i < config_.stages.size(); ++i) {
    for (size_t j = i + 1; j < config_.stages.size(); ++j) {
      if (config_.stages[i] == config_.stages[j]) {
        throw ConfigError("stage listed twice: " + std::string(StageName(config_.stages[i])));
      }
    }
  }
  if (enabled(Stage::kLid) && !lid_) throw ConfigError("stage 'lid' requires a LID model");
  if (enabled(Stage::kOffensive) && blacklists.empty()) {
    throw ConfigError("stage 'offensive' requires at least one blacklist");
  }
  if (!(config_.script_threshold >= 0.0 && config_.script_threshold <= 1.0)) {
    throw ConfigError("script threshold must lie in [0, 1]");
  }
  for (const Blacklist& blacklist : blacklists) {
    if (!table_.Contains(blacklist.lang)) {
      throw ConfigError("blacklist for unknown language " + blacklist.lang);
    }
    if (matchers_.contains(blacklist.lang)) {
      throw ConfigError("two blacklists for language " + blacklist.lang);
    }
    matchers_.emplace(blacklist.lang, OffensiveMatcher(blacklist));
  }
}

Pipeline::DocResult Pipeline::ApplyStage(Stage stage, CleanDocument doc) const {
  DocResult result;
  switch (stage) {
    case Stage::kLid: {
      FilterOutcome outcome = FilterParagraphs(*lid_, doc, doc.lang);
      result.doc = std::move(outcome.doc);
      result.skipped = outcome.skipped;
      result.paragraphs_removed = outcome.paragraphs_removed;
      break;
    }
    case Stage::kScriptRatio: {
      SentenceFilterOutcome outcome = ScriptRatioFilter(doc, config_.script_threshold, table_);
      result.doc = std::move(outcome.doc);
      result.sentences_removed = outcome.sentences_removed;
      break;
    }
    case Stage::kOffensive: {
      auto it = matchers_.find(doc.lang);
      if (it == matchers_.end()) {
        result.doc = std::move(doc);
        AddTag(&result.doc, "offensive-skipped");
        result.skipped = true;
        return result;
      }
      SentenceFilterOutcome outcome = it->second.Apply(doc);
      if (config_.offensive_document_level && outcome.sentences_removed > 0) {
        result.doc = std::move(doc);
        result.keep = false;
        result.sentences_removed = outcome.sentences_removed;
        return result;
      }
      result.doc = std::move(outcome.doc);
      result.sentences_removed = outcome.sentences_removed;
      break;
    }
    case Stage::kPunctuationLength:
      result.keep = PassesPunctuationLength(doc, config_.min_words);
      result.doc = std::move(doc);
      return result;
    case Stage::kDedup:
      throw Error("dedup is not a per-document stage");
  }
  if (result.doc.empty()) {
    result.keep = false;
    result.emptied = true;
  }
  return result;
}

Pipeline::Run::Run(const Pipeline& pipeline, int workers)
    : pipeline_(pipeline), workers_(workers) {
  for (Stage stage : pipeline_.config_.stages) report_.stages.push_back(StageCounters{stage});
}

std::vector<CleanDocument> Pipeline::Run::Process(std::vector<CleanDocument> batch) {
  std::vector<size_t> tokens(batch.size());
  ParallelFor(batch.size(), workers_, [&](size_t i) { tokens[i] = batch[i].TokenCount(); });
  report_.documents_before += batch.size();
  for (size_t t : tokens) report_.tokens_before += t;

  for (size_t s = 0; s < pipeline_.config_.stages.size(); ++s) {
    const Stage stage = pipeline_.config_.stages[s];
    StageCounters& counters = report_.stages[s];
    counters.documents_in += batch.size();
    for (size_t t : tokens) counters.tokens_in += t;

    std::vector<CleanDocument> survivors;
    std::vector<size_t> survivor_tokens;
    survivors.reserve(batch.size());
    if (stage == Stage::kDedup) {
      for (size_t i = 0; i < batch.size(); ++i) {
        if (dedup_.Insert(batch[i])) {
          survivors.push_back(std::move(batch[i]));
          survivor_tokens.push_back(tokens[i]);
        } else {
          ++counters.documents_removed;
        }
      }
    } else {
      std::vector<DocResult> results(batch.size());
      std::vector<size_t> tokens_after(batch.size());
      ParallelFor(batch.size(), workers_, [&](size_t i) {
        results[i] = pipeline_.ApplyStage(stage, std::move(batch[i]));
        tokens_after[i] = results[i].doc.TokenCount();
      });
      for (size_t i = 0; i < results.size(); ++i) {
        DocResult& r = results[i];
        counters.sentences_removed += r.sentences_removed;
        counters.paragraphs_removed += r.paragraphs_removed;
        if (r.skipped) ++counters.documents_skipped;
        if (r.keep) {
          survivors.push_back(std::move(r.doc));
          survivor_tokens.push_back(tokens_after[i]);
        } else if (r.emptied) {
          ++counters.documents_emptied;
        } else {
          ++counters.documents_removed;
        }
      }
    }
    batch = std::move(survivors);
    tokens = std::move(survivor_tokens);
    counters.documents_out += batch.size();
    for (size_t t : tokens) counters.tokens_out += t;
  }
  report_.documents_after += batch.size();
  for (size_t t : tokens) report_.tokens_after += t;
  return batch;
}

std::vector<CleanDocument> Pipeline::Apply(std::vector<CleanDocument> corpus,
                                           FilterReport* report, int workers) const {
  Run run(*this, workers);
  std::vector<CleanDocument> out = run.Process(std::move(corpus));
  if (report != nullptr) *report = run.report();
  return out;
}

}  // namespace corpus_forge
