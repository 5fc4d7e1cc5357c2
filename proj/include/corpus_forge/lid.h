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

// Language identification with a character n-gram naive Bayes model plus a
// per-language script prior.
//
// Text is case folded and every run of non-letters becomes a single space
// before n-grams are extracted, so grams capture word boundaries. A language
// scores
//
//   sum over grams g   log P(g | lang)
// + sum over letters c log P(script(c) | lang)
//
// Both distributions are smoothed on relative frequencies:
//
//   P(x | lang) = (f(x | lang) + k / M) / (1 + k * V / M)
//
// where f is the observed relative frequency, k the smoothing constant, V
// the event-space size (distinct grams over all languages plus one for
// unseen grams; number of scripts) and M a fixed reference mass. This is
// add-k smoothing as if every language had been trained on exactly M
// events, which makes the model invariant to uniform scaling of one
// language's counts (duplicated training data changes nothing).

#ifndef CORPUS_FORGE_LID_H_
#define CORPUS_FORGE_LID_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus_forge/corpus.h"
#include "corpus_forge/languages.h"
#include "corpus_forge/scripts.h"

namespace corpus_forge {

struct LabeledText {
  std::string lang;
  std::string text;
};

struct LidOptions {
  int order = 3;  // 2, 3 or 4
  double smoothing = 0.5;
  size_t min_letters = 20;
  double reference_mass = 1e6;
  // Languages that must receive training text; empty means "whatever the
  // samples contain".
  std::vector<std::string> languages;
};

struct LidPrediction {
  std::string lang;
  double score;  // log-likelihood plus script log-prior
};

class LidModel {
 public:
  // Throws std::invalid_argument for bad options and DataError listing every
  // language without training letters or outside `table`.
  static LidModel Train(std::span<const LabeledText> samples, const LidOptions& options = {},
                        const LanguageTable& table = LanguageTable::Default());

  static LidModel FromJson(std::string_view text);
  static LidModel Load(const std::filesystem::path& path);
  std::string ToJson() const;
  void Save(const std::filesystem::path& path) const;

  // Argmax language, or nullopt (Unknown) when the text has fewer than
  // min_letters letters. Ties go to the smaller language code.
  std::optional<LidPrediction> Predict(std::string_view text) const;

  // Score for every supported language, in languages() order. Empty when the
  // text is too short.
  std::vector<double> Scores(std::string_view text) const;

  bool Supports(std::string_view lang) const;
  const std::vector<std::string>& languages() const { return languages_; }
  int order() const { return order_; }
  double smoothing() const { return smoothing_; }
  size_t min_letters() const { return min_letters_; }

 private:
  using GramKey = unsigned __int128;
  struct GramHash {
    size_t operator()(GramKey key) const {
      const uint64_t lo = static_cast<uint64_t>(key);
      const uint64_t hi = static_cast<uint64_t>(key >> 64);
      return static_cast<size_t>(lo ^ (hi * 0x9E3779B97F4A7C15ULL));
    }
  };
  struct LanguageCounts {
    std::unordered_map<GramKey, uint64_t, GramHash> grams;
    std::array<uint64_t, kNumScripts> scripts{};
  };

  LidModel() = default;
  void BuildTables();
  void ForEachGram(std::string_view text, auto&& fn) const;
  static GramKey PackGram(std::u32string_view gram);
  static std::u32string UnpackGram(GramKey key, int order);

  int order_ = 3;
  double smoothing_ = 0.5;
  size_t min_letters_ = 20;
  double reference_mass_ = 1e6;
  std::vector<std::string> languages_;  // sorted
  std::vector<LanguageCounts> counts_;

  // Derived from counts_ by BuildTables().
  std::unordered_map<GramKey, std::vector<double>, GramHash> gram_log_prob_;
  std::vector<double> unseen_log_prob_;
  std::vector<std::array<double, kNumScripts>> script_log_prob_;
};

struct FilterOutcome {
  CleanDocument doc;
  size_t paragraphs_removed = 0;
  size_t tokens_removed = 0;
  bool skipped = false;  // target language unsupported by the model
};

inline constexpr std::string_view kLidTag = "lid";
inline constexpr std::string_view kLidSkippedTag = "lid-skipped";

// Drops paragraphs confidently identified as another language; Unknown
// paragraphs are kept. Unsupported targets pass through with a
// "lid-skipped" provenance tag.
FilterOutcome FilterParagraphs(const LidModel& model, const CleanDocument& doc,
                               std::string_view target);

inline constexpr std::string_view kUnknownLanguage = "unknown";

struct LidReport {
  struct Entry {
    size_t total = 0;
    size_t correct = 0;
    std::optional<double> accuracy;  // absent when there were no test items
  };
  std::map<std::string, Entry> per_language;
  // gold -> predicted ("unknown" for too-short text) -> count
  std::map<std::string, std::map<std::string, size_t>> confusion;

  std::string ToJson() const;
};

// Top-1 accuracy per supported language. Throws DataError for test labels
// the model does not support.
LidReport EvaluateLid(const LidModel& model, std::span<const LabeledText> test);

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_LID_H_
