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

// Corpus cleaning rules and the pipeline that chains them:
//
//   lid                 drop paragraphs identified as another language
//   script-ratio        drop sentences with native-script ratio < threshold
//   offensive           drop sentences containing a blacklisted word/phrase
//   punctuation-length  drop documents with < min_words words once
//                       punctuation is stripped
//   dedup               drop documents whose normalized text was seen before
//
// A document left without paragraphs by a sentence- or paragraph-level rule
// is dropped and counted as emptied.

#ifndef CORPUS_FORGE_FILTERS_H_
#define CORPUS_FORGE_FILTERS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpus_forge/corpus.h"
#include "corpus_forge/languages.h"
#include "corpus_forge/lid.h"
#include "corpus_forge/token_automaton.h"

namespace corpus_forge {

struct SentenceFilterOutcome {
  CleanDocument doc;
  size_t sentences_removed = 0;
  size_t tokens_removed = 0;
};

// Removes the sentences for which `remove` returns true. Paragraphs with no
// removal are kept verbatim; the others are rebuilt from their surviving
// sentences and dropped if none survive. `tag` is added to the provenance
// once.
SentenceFilterOutcome RemoveSentences(const CleanDocument& doc, std::string_view tag,
                                      const std::function<bool(std::string_view)>& remove);

inline constexpr double kDefaultScriptThreshold = 0.75;
inline constexpr size_t kDefaultMinWords = 10;

// Removes every sentence whose native-script letter ratio is strictly below
// `threshold` (letterless sentences have ratio 0).
SentenceFilterOutcome ScriptRatioFilter(const CleanDocument& doc,
                                        double threshold = kDefaultScriptThreshold,
                                        const LanguageTable& table = LanguageTable::Default());

// Whitespace word count of the whole document after punctuation is removed.
size_t StrippedWordCount(const CleanDocument& doc);

// Keep/drop decision: keep iff StrippedWordCount(doc) >= min_words.
bool PassesPunctuationLength(const CleanDocument& doc, size_t min_words = kDefaultMinWords);

struct Blacklist {
  std::string lang;
  std::vector<std::string> words;
  std::vector<std::string> phrases;
  bool case_fold = true;
};

// One entry per line; '#' starts a comment line; entries with internal
// whitespace are phrases. Entries are whitespace-collapsed.
Blacklist ParseBlacklist(std::string_view text, std::string lang);
Blacklist LoadBlacklist(const std::filesystem::path& path, std::string lang);

// Token normalization shared by blacklist entries and sentence text: NFC,
// surrounding punctuation trimmed, case folded when requested.
std::string NormalizeMatchToken(std::string_view token, bool case_fold);

std::vector<std::string> MatchTokens(std::string_view sentence, bool case_fold);

// Whole-token blacklist matcher; one automaton per blacklist.
class OffensiveMatcher {
 public:
  explicit OffensiveMatcher(const Blacklist& blacklist);

  bool Matches(std::string_view sentence) const;
  SentenceFilterOutcome Apply(const CleanDocument& doc) const;

  const std::string& lang() const { return lang_; }

 private:
  std::string lang_;
  bool case_fold_;
  TokenAutomaton automaton_;
};

// Exact duplicate detection on NFC-normalized, whitespace-collapsed,
// case-folded document text. First occurrence wins.
class Deduplicator {
 public:
  static std::string NormalizedKey(const CleanDocument& doc);

  // True the first time a key is seen.
  bool Insert(const CleanDocument& doc);
  size_t size() const { return seen_.size(); }

 private:
  std::unordered_set<std::string> seen_;  // SHA-256 digests
};

enum class Stage { kLid, kScriptRatio, kOffensive, kPunctuationLength, kDedup };

std::string_view StageName(Stage stage);
Stage ParseStage(std::string_view name);  // throws ConfigError

struct PipelineConfig {
  std::vector<Stage> stages = {Stage::kLid, Stage::kScriptRatio, Stage::kOffensive,
                               Stage::kPunctuationLength, Stage::kDedup};
  double script_threshold = kDefaultScriptThreshold;
  size_t min_words = kDefaultMinWords;
  // Drop the whole document, not just the sentence, on an offensive match.
  bool offensive_document_level = false;
};

struct StageCounters {
  Stage stage;
  uint64_t documents_in = 0;
  uint64_t documents_out = 0;
  uint64_t tokens_in = 0;
  uint64_t tokens_out = 0;
  uint64_t sentences_removed = 0;
  uint64_t paragraphs_removed = 0;
  uint64_t documents_removed = 0;  // rejected by the rule itself
  uint64_t documents_emptied = 0;  // lost all paragraphs
  uint64_t documents_skipped = 0;  // rule not applicable to the language
};

struct FilterReport {
  uint64_t documents_before = 0;
  uint64_t documents_after = 0;
  uint64_t tokens_before = 0;
  uint64_t tokens_after = 0;
  std::vector<StageCounters> stages;

  const StageCounters* Find(Stage stage) const;
  std::string ToJson() const;
};

class Pipeline {
 public:
  // Throws ConfigError when a configured stage lacks its resources: lid needs
  // a model, offensive needs at least one blacklist. Blacklist languages must
  // be in `table`.
  Pipeline(PipelineConfig config, std::shared_ptr<const LidModel> lid,
           std::vector<Blacklist> blacklists,
           const LanguageTable& table = LanguageTable::Default());

  const PipelineConfig& config() const { return config_; }
  const LanguageTable& table() const { return table_; }

  // Stateful run over a document stream. Feed batches in stream order; the
  // output of each batch keeps input order.
  class Run {
   public:
    explicit Run(const Pipeline& pipeline, int workers = 1);
    std::vector<CleanDocument> Process(std::vector<CleanDocument> batch);
    const FilterReport& report() const { return report_; }

   private:
    const Pipeline& pipeline_;
    int workers_;
    Deduplicator dedup_;
    FilterReport report_;
  };

  // Whole corpus in memory.
  std::vector<CleanDocument> Apply(std::vector<CleanDocument> corpus, FilterReport* report,
                                   int workers = 1) const;

 private:
  struct DocResult {
    CleanDocument doc;
    bool keep = true;
    bool emptied = false;
    bool skipped = false;
    size_t sentences_removed = 0;
    size_t paragraphs_removed = 0;
  };
  DocResult ApplyStage(Stage stage, CleanDocument doc) const;

  PipelineConfig config_;
  std::shared_ptr<const LidModel> lid_;
  std::map<std::string, OffensiveMatcher, std::less<>> matchers_;
  LanguageTable table_;
};

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_FILTERS_H_
