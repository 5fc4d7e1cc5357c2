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

// Temperature-smoothed language sampling for multilingual pretraining data.
//
// With per-language token counts n_l and N = sum n_l:
//   q_l = n_l / N,   p_l = q_l^alpha / sum_j q_j^alpha,   r_l = p_l / q_l
// alpha = 1 reproduces the raw distribution; alpha < 1 flattens it so that
// low-resource languages get r_l > 1.

#ifndef CORPUS_FORGE_SAMPLING_H_
#define CORPUS_FORGE_SAMPLING_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_forge/corpus.h"
#include "corpus_forge/languages.h"

namespace corpus_forge {

inline constexpr double kDefaultAlpha = 0.3;

struct LanguagePlan {
  std::string lang;
  uint64_t tokens = 0;
  double raw_fraction = 0.0;  // q
  double probability = 0.0;   // p
  double replication = 0.0;   // p / q; 0 for empty languages
};

struct SamplingPlan {
  double alpha = kDefaultAlpha;
  std::vector<LanguagePlan> languages;  // sorted by code
  std::vector<std::string> warnings;

  const LanguagePlan* Find(std::string_view lang) const;
  std::string ToJson() const;
};

// Throws std::invalid_argument unless 0 < alpha <= 1, and DataError when
// every count is zero. Zero-count languages get p = 0 and a warning.
SamplingPlan TemperaturePlan(const std::map<std::string, uint64_t>& token_counts,
                             double alpha = kDefaultAlpha);

// Per-language whitespace token totals of a corpus.
std::map<std::string, uint64_t> TokenCountsByLanguage(std::span<const CleanDocument> corpus);

struct MaterializeOptions {
  uint64_t seed = 0;
  uint64_t target_tokens = 0;
  size_t num_shards = 1;
};

struct MaterializedSample {
  // Emitted corpus indices per shard, in emission order.
  std::vector<std::vector<size_t>> shards;
  std::map<std::string, uint64_t> emitted_tokens;
  std::map<std::string, uint64_t> emitted_documents;
  uint64_t total_tokens = 0;
  std::vector<std::string> warnings;

  double TokenShare(std::string_view lang) const;
};

// Samples documents with replacement until each shard reaches its share of
// target_tokens. A language is drawn with probability proportional to
// p_l / (mean document length of l), so that emitted token shares converge
// to p_l; a document is then drawn uniformly within the language. Shard i
// uses a stream seeded from (seed, i), so the result depends only on the
// inputs. Throws DataError if a corpus language is missing from the plan or
// no planned language has tokens.
MaterializedSample Materialize(std::span<const CleanDocument> corpus, const SamplingPlan& plan,
                               const MaterializeOptions& options);

// "<xx>" for a language code in the table; throws DataError otherwise.
std::string LangToken(std::string_view lang,
                      const LanguageTable& table = LanguageTable::Default());

// "<xx> " followed by the document text.
std::string PrependLangToken(const CleanDocument& doc,
                             const LanguageTable& table = LanguageTable::Default());

// The document as a single line: paragraphs joined by spaces, line breaks
// replaced by spaces, optionally prefixed with the language token.
std::string ShardLine(const CleanDocument& doc, bool with_lang_token,
                      const LanguageTable& table = LanguageTable::Default());

// Writes shard-00000.txt, shard-00001.txt, ... into `dir` and returns their
// paths.
std::vector<std::filesystem::path> WriteShards(std::span<const CleanDocument> corpus,
                                               const MaterializedSample& sample,
                                               const std::filesystem::path& dir,
                                               bool with_lang_token);

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_SAMPLING_H_
