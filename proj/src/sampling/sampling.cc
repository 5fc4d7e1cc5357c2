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

#include "corpus_forge/sampling.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "corpus_forge/errors.h"
#include "corpus_forge/rng.h"
#include "json.hpp"

namespace corpus_forge {

using nlohmann::json;

const LanguagePlan* SamplingPlan::Find(std::string_view lang) const {
  for (const LanguagePlan& l : languages) {
    if (l.lang == lang) return &l;
  }
  return nullptr;
}

std::string SamplingPlan::ToJson() const {
  json langs = json::object();
  for (const LanguagePlan& l : languages) {
    langs[l.lang] = {{"tokens", l.tokens},
                     {"raw_fraction", l.raw_fraction},
                     {"probability", l.probability},
                     {"replication", l.replication}};
  }
  return json{{"alpha", alpha}, {"languages", std::move(langs)}, {"warnings", warnings}}.dump(2);
}

SamplingPlan TemperaturePlan(const std::map<std::string, uint64_t>& token_counts, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  long double total = 0;
  for (const auto& [lang, n] : token_counts) total += static_cast<long double>(n);
  if (total == 0) throw DataError("all language token counts are zero");

  SamplingPlan plan;
  plan.alpha = alpha;
  double norm = 0.0;
  for (const auto& [lang, n] : token_counts) {
    LanguagePlan l;
    l.lang = lang;
    l.tokens = n;
    l.raw_fraction = static_cast<double>(static_cast<long double>(n) / total);
    if (n == 0) plan.warnings.push_back("language " + lang + " has no tokens; probability 0");
    // Unnormalized weight parked in `probability` until the sum is known.
    l.probability = alpha == 1.0 ? l.raw_fraction : std::pow(l.raw_fraction, alpha);
    norm += l.probability;
    plan.languages.push_back(std::move(l));
  }
  for (LanguagePlan& l : plan.languages) {
    if (alpha != 1.0) l.probability /= norm;
    l.replication = l.tokens == 0 ? 0.0 : l.probability / l.raw_fraction;
  }
  return plan;
}

std::map<std::string, uint64_t> TokenCountsByLanguage(std::span<const CleanDocument> corpus) {
  std::map<std::string, uint64_t> counts;
  for (const CleanDocument& doc : corpus) counts[doc.lang] += doc.TokenCount();
  return counts;
}

double MaterializedSample::TokenShare(std::string_view lang) const {
  if (total_tokens == 0) return 0.0;
  auto it = emitted_tokens.find(std::string(lang));
  return it == emitted_tokens.end()
             ? 0.0
             : static_cast<double>(it->second) / static_cast<double>(total_tokens);
}

MaterializedSample Materialize(std::span<const CleanDocument> corpus, const SamplingPlan& plan,
                               const MaterializeOptions& options) {
  if (options.num_shards == 0) throw std::invalid_argument("need at least one shard");

  struct Pool {
    std::string lang;
    std::vector<size_t> docs;
    uint64_t tokens = 0;
    double weight = 0.0;
  };
  std::vector<Pool> pools(plan.languages.size());
  for (size_t l = 0; l < plan.languages.size(); ++l) pools[l].lang = plan.languages[l].lang;
  std::vector<uint64_t> doc_tokens(corpus.size());
  uint64_t largest = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    size_t l = 0;
    while (l < pools.size() && pools[l].lang != corpus[i].lang) ++l;
    if (l == pools.size()) throw DataError("language " + corpus[i].lang + " is not in the plan");
    doc_tokens[i] = corpus[i].TokenCount();
    largest = std::max(largest, doc_tokens[i]);
    pools[l].docs.push_back(i);
    pools[l].tokens += doc_tokens[i];
  }

  double weight_sum = 0.0;
  for (size_t l = 0; l < pools.size(); ++l) {
    Pool& pool = pools[l];
    if (pool.tokens == 0 || plan.languages[l].probability <= 0.0) continue;
    const double mean_length =
        static_cast<double>(pool.tokens) / static_cast<double>(pool.docs.size());
    pool.weight = plan.languages[l].probability / mean_length;
    weight_sum += pool.weight;
  }
  if (weight_sum <= 0.0) throw DataError("no planned language has any tokens in the corpus");

  MaterializedSample sample;
  if (options.target_tokens < largest) {
    sample.warnings.push_back("target_tokens is smaller than the largest document (" +
                              std::to_string(largest) + " tokens)");
  }
  sample.shards.resize(options.num_shards);
  for (size_t shard = 0; shard < options.num_shards; ++shard) {
    const uint64_t target = options.target_tokens / options.num_shards +
                            (shard < options.target_tokens % options.num_shards ? 1 : 0);
    Rng rng(DeriveSeed(options.seed, shard));
    uint64_t emitted = 0;
    do {
      double pick = rng.Uniform() * weight_sum;
      size_t l = 0;
      // Falls through to the last weighted pool on rounding at the top end.
      size_t last = 0;
      for (; l < pools.size(); ++l) {
        if (pools[l].weight <= 0.0) continue;
        last = l;
        if (pick < pools[l].weight) break;
        pick -= pools[l].weight;
      }
      if (l == pools.size()) l = last;
      const Pool& pool = pools[l];
      const size_t doc = pool.docs[rng.Below(pool.docs.size())];
      sample.shards[shard].push_back(doc);
      sample.emitted_tokens[pool.lang] += doc_tokens[doc];
      ++sample.emitted_documents[pool.lang];
      sample.total_tokens += doc_tokens[doc];
      emitted += doc_tokens[doc];
    } while (emitted < target);
  }
  return sample;
}

std::string LangToken(std::string_view lang, const LanguageTable& table) {
  if (!table.Contains(lang)) throw DataError("unknown language code: " + std::string(lang));
  return "<" + std::string(lang) + ">";
}

std::string PrependLangToken(const CleanDocument& doc, const LanguageTable& table) {
  return LangToken(doc.lang, table) + " " + doc.Text();
}

std::string ShardLine(const CleanDocument& doc, bool with_lang_token, const LanguageTable& table) {
  std::string line;
  if (with_lang_token) line = LangToken(doc.lang, table) + " ";
  for (size_t p = 0; p < doc.paragraphs.size(); ++p) {
    if (p > 0) line.push_back(' ');
    for (char ch : doc.paragraphs[p]) line.push_back(ch == '\n' || ch == '\r' ? ' ' : ch);
  }
  return line;
}

std::vector<std::filesystem::path> WriteShards(std::span<const CleanDocument> corpus,
                                               const MaterializedSample& sample,
                                               const std::filesystem::path& dir,
                                               bool with_lang_token) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (size_t shard = 0; shard < sample.shards.size(); ++shard) {
    char name[32];
    std::snprintf(name, sizeof(name), "shard-%05zu.txt", shard);
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write shard " + path.string());
    for (size_t doc : sample.shards[shard]) out << ShardLine(corpus[doc], with_lang_token) << '\n';
    paths.push_back(path);
  }
  return paths;
}

}  // namespace corpus_forge
