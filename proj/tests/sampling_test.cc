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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "corpus_forge/errors.h"
#include "corpus_forge/rng.h"
#include "oracles.h"
#include "test_support.h"

namespace corpus_forge {
namespace {

using testing::FreshTempDir;
using testing::OraclePlan;
using testing::ReadFile;

CleanDocument Doc(std::string id, std::string lang, size_t tokens) {
  CleanDocument d;
  d.id = std::move(id);
  d.lang = std::move(lang);
  std::string text;
  for (size_t i = 0; i < tokens; ++i) text += (i ? " w" : "w") + std::to_string(i);
  d.paragraphs.push_back(text);
  return d;
}

TEST(TemperaturePlanTest, NineHundredToOneHundred) {
  const std::map<std::string, uint64_t> counts = {{"as", 900}, {"bn", 100}};
  const auto oracle = OraclePlan(counts, 0.3L);
  EXPECT_NEAR(static_cast<double>(oracle.at("as")), 0.6591, 1e-4);
  EXPECT_NEAR(static_cast<double>(oracle.at("bn")), 0.3409, 1e-4);

  const SamplingPlan plan = TemperaturePlan(counts, 0.3);
  ASSERT_EQ(plan.languages.size(), 2u);
  EXPECT_NEAR(plan.Find("as")->probability, static_cast<double>(oracle.at("as")), 1e-12);
  EXPECT_NEAR(plan.Find("bn")->probability, static_cast<double>(oracle.at("bn")), 1e-12);
  EXPECT_DOUBLE_EQ(plan.Find("as")->raw_fraction, 0.9);
  EXPECT_GT(plan.Find("bn")->replication, 1.0);
  EXPECT_LT(plan.Find("as")->replication, 1.0);
}

TEST(TemperaturePlanTest, AlphaOneIsIdentity) {
  const std::map<std::string, uint64_t> counts = {{"hi", 7}, {"ta", 13}, {"ur", 80}};
  const SamplingPlan plan = TemperaturePlan(counts, 1.0);
  for (const LanguagePlan& l : plan.languages) {
    EXPECT_EQ(l.probability, static_cast<double>(counts.at(l.lang)) / 100.0) << l.lang;
  }
}

TEST(TemperaturePlanTest, EqualCountsAreUniform) {
  for (double alpha : {0.1, 0.3, 0.7, 1.0}) {
    const SamplingPlan plan = TemperaturePlan({{"a", 5}, {"b", 5}, {"c", 5}, {"d", 5}}, alpha);
    for (const LanguagePlan& l : plan.languages) EXPECT_NEAR(l.probability, 0.25, 1e-15);
  }
}

TEST(TemperaturePlanTest, Errors) {
  EXPECT_THROW(TemperaturePlan({{"hi", 1}}, 0.0), std::invalid_argument);
  EXPECT_THROW(TemperaturePlan({{"hi", 1}}, 1.5), std::invalid_argument);
  EXPECT_THROW(TemperaturePlan({{"hi", 1}}, std::nan("")), std::invalid_argument);
  EXPECT_THROW(TemperaturePlan({{"hi", 0}, {"ta", 0}}, 0.3), DataError);
  EXPECT_THROW(TemperaturePlan({}, 0.3), DataError);
}

TEST(TemperaturePlanTest, ZeroCountLanguageWarns) {
  const SamplingPlan plan = TemperaturePlan({{"hi", 10}, {"sd", 0}}, 0.3);
  EXPECT_EQ(plan.Find("sd")->probability, 0.0);
  EXPECT_EQ(plan.Find("hi")->probability, 1.0);
  ASSERT_EQ(plan.warnings.size(), 1u);
  EXPECT_NE(plan.warnings[0].find("sd"), std::string::npos);
}

TEST(TemperaturePlanTest, JsonHasEveryLanguage) {
  const SamplingPlan plan = TemperaturePlan({{"hi", 10}, {"ta", 30}}, 0.5);
  const std::string json = plan.ToJson();
  EXPECT_NE(json.find("\"hi\""), std::string::npos);
  EXPECT_NE(json.find("\"replication\""), std::string::npos);
  EXPECT_NE(json.find("\"alpha\": 0.5"), std::string::npos);
}

std::map<std::string, uint64_t> RandomCounts(Rng& rng) {
  std::map<std::string, uint64_t> counts;
  const size_t n = 2 + rng.Below(23);
  for (size_t i = 0; i < n; ++i) {
    // Spread over many orders of magnitude.
    const double exponent = rng.Uniform() * 9.0;
    counts["l" + std::to_string(i)] = 1 + static_cast<uint64_t>(std::pow(10.0, exponent));
  }
  return counts;
}

TEST(TemperaturePlanProperty, SumsToOneAndMatchesOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto counts = RandomCounts(rng);
    const double alpha = 0.05 + 0.95 * rng.Uniform();
    const SamplingPlan plan = TemperaturePlan(counts, alpha);
    const auto oracle = OraclePlan(counts, alpha);
    double sum = 0.0;
    for (const LanguagePlan& l : plan.languages) {
      sum += l.probability;
      EXPECT_GT(l.probability, 0.0);
      EXPECT_NEAR(l.probability, static_cast<double>(oracle.at(l.lang)), 1e-12);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(TemperaturePlanProperty, ReplicationDecreasesWithSize) {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto counts = RandomCounts(rng);
    const SamplingPlan plan = TemperaturePlan(counts, 0.05 + 0.9 * rng.Uniform());
    std::vector<LanguagePlan> by_size = plan.languages;
    std::sort(by_size.begin(), by_size.end(),
              [](const LanguagePlan& a, const LanguagePlan& b) { return a.tokens < b.tokens; });
    for (size_t i = 1; i < by_size.size(); ++i) {
      if (by_size[i].tokens == by_size[i - 1].tokens) {
        EXPECT_NEAR(by_size[i].replication, by_size[i - 1].replication,
                    1e-12 * by_size[i].replication);
      } else {
        EXPECT_LT(by_size[i].replication, by_size[i - 1].replication);
      }
    }
    // Below-average languages are upsampled.
    const double mean = 1.0 / static_cast<double>(by_size.size());
    for (const LanguagePlan& l : by_size) {
      if (l.raw_fraction < mean) EXPECT_GE(l.replication, 1.0);
    }
  }
}

TEST(TemperaturePlanProperty, ScaleInvariant) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, uint64_t> counts;
    for (size_t i = 0; i < 6; ++i) counts["l" + std::to_string(i)] = 1 + rng.Below(100000);
    std::map<std::string, uint64_t> scaled = counts;
    const uint64_t factor = 1 + rng.Below(1000);
    for (auto& [lang, n] : scaled) n *= factor;
    const SamplingPlan a = TemperaturePlan(counts, 0.3);
    const SamplingPlan b = TemperaturePlan(scaled, 0.3);
    for (size_t i = 0; i < a.languages.size(); ++i) {
      EXPECT_NEAR(a.languages[i].probability, b.languages[i].probability, 1e-12);
    }
  }
}

TEST(MaterializeTest, SharesConvergeToPlan) {
  // Unequal document lengths so the share is measured in tokens.
  std::vector<CleanDocument> corpus;
  for (size_t i = 0; i < 90; ++i) corpus.push_back(Doc("as" + std::to_string(i), "as", i % 2 ? 15 : 5));
  for (size_t i = 0; i < 5; ++i) corpus.push_back(Doc("bn" + std::to_string(i), "bn", 20));
  const auto counts = TokenCountsByLanguage(corpus);
  ASSERT_EQ(counts.at("as"), 900u);
  ASSERT_EQ(counts.at("bn"), 100u);
  const SamplingPlan plan = TemperaturePlan(counts, 0.3);
  const MaterializedSample sample = Materialize(corpus, plan, {.seed = 5, .target_tokens = 1000000});
  EXPECT_GE(sample.total_tokens, 1000000u);
  EXPECT_NEAR(sample.TokenShare("bn"), 0.3409, 0.02);
  EXPECT_NEAR(sample.TokenShare("as"), 0.6591, 0.02);
  EXPECT_TRUE(sample.warnings.empty());
}

TEST(MaterializeTest, DeterministicAndShardedBySeed) {
  const auto langs = testing::SyntheticLanguages();
  const auto corpus = testing::SyntheticCorpus(langs, 120, 3);
  const SamplingPlan plan = TemperaturePlan(TokenCountsByLanguage(corpus), 0.3);
  const MaterializeOptions options{.seed = 9, .target_tokens = 20000, .num_shards = 3};
  const MaterializedSample a = Materialize(corpus, plan, options);
  const MaterializedSample b = Materialize(corpus, plan, options);
  EXPECT_EQ(a.shards, b.shards);
  EXPECT_EQ(a.emitted_tokens, b.emitted_tokens);
  ASSERT_EQ(a.shards.size(), 3u);

  const std::filesystem::path d1 = FreshTempDir("sampling_det_a");
  const std::filesystem::path d2 = FreshTempDir("sampling_det_b");
  const auto p1 = WriteShards(corpus, a, d1, true);
  const auto p2 = WriteShards(corpus, b, d2, true);
  ASSERT_EQ(p1.size(), 3u);
  EXPECT_EQ(p1[1].filename(), "shard-00001.txt");
  for (size_t i = 0; i < p1.size(); ++i) EXPECT_EQ(ReadFile(p1[i]), ReadFile(p2[i]));

  const MaterializedSample c = Materialize(corpus, plan, {.seed = 10, .target_tokens = 20000});
  EXPECT_NE(a.shards[0], c.shards[0]);
}

TEST(MaterializeTest, SingleLanguageDrawsOnlyItsDocuments) {
  std::vector<CleanDocument> corpus;
  for (size_t i = 0; i < 10; ++i) corpus.push_back(Doc("d" + std::to_string(i), "ta", 3));
  const SamplingPlan plan = TemperaturePlan(TokenCountsByLanguage(corpus), 0.3);
  const MaterializedSample s = Materialize(corpus, plan, {.seed = 1, .target_tokens = 300});
  ASSERT_EQ(s.shards.size(), 1u);
  EXPECT_EQ(s.shards[0].size(), 100u);
  std::set<size_t> seen(s.shards[0].begin(), s.shards[0].end());
  EXPECT_GT(seen.size(), 5u);
  EXPECT_LT(*seen.rbegin(), corpus.size());
  EXPECT_DOUBLE_EQ(s.TokenShare("ta"), 1.0);
}

TEST(MaterializeTest, EmittedContentIsUnchanged) {
  const auto langs = testing::SyntheticLanguages();
  const auto corpus = testing::SyntheticCorpus(langs, 48, 4);
  const SamplingPlan plan = TemperaturePlan(TokenCountsByLanguage(corpus), 0.3);
  const MaterializedSample s = Materialize(corpus, plan, {.seed = 2, .target_tokens = 5000});
  const std::filesystem::path dir = FreshTempDir("sampling_content");
  const auto paths = WriteShards(corpus, s, dir, false);
  const std::string text = ReadFile(paths[0]);
  std::vector<std::string> lines;
  size_t start = 0;
  for (size_t nl; (nl = text.find('\n', start)) != std::string::npos; start = nl + 1) {
    lines.push_back(text.substr(start, nl - start));
  }
  ASSERT_EQ(lines.size(), s.shards[0].size());
  for (size_t i = 0; i < lines.size(); ++i) {
    EXPECT_EQ(lines[i], ShardLine(corpus[s.shards[0][i]], false));
  }
}

TEST(MaterializeTest, SmallTargetWarnsAndEmitsOneDocument) {
  const std::vector<CleanDocument> corpus = {Doc("a", "hi", 50), Doc("b", "hi", 60)};
  const SamplingPlan plan = TemperaturePlan(TokenCountsByLanguage(corpus), 0.3);
  const MaterializedSample s = Materialize(corpus, plan, {.seed = 1, .target_tokens = 10});
  ASSERT_EQ(s.shards[0].size(), 1u);
  ASSERT_EQ(s.warnings.size(), 1u);
}

TEST(MaterializeTest, LanguageMissingFromPlanIsAnError) {
  const std::vector<CleanDocument> corpus = {Doc("a", "hi", 5), Doc("b", "ta", 5)};
  const SamplingPlan plan = TemperaturePlan({{"hi", 5}}, 0.3);
  EXPECT_THROW(Materialize(corpus, plan, {.seed = 1, .target_tokens = 10}), DataError);
}

TEST(LangTokenTest, Prefixing) {
  CleanDocument hi;
  hi.lang = "hi";
  hi.paragraphs = {"नमस्ते"};
  EXPECT_EQ(PrependLangToken(hi), "<hi> नमस्ते");
  CleanDocument again = hi;
  again.paragraphs = {PrependLangToken(hi)};
  EXPECT_EQ(PrependLangToken(again), "<hi> <hi> नमस्ते");
  CleanDocument ur;
  ur.lang = "ur";
  ur.paragraphs = {"سلام"};
  EXPECT_EQ(PrependLangToken(ur).substr(0, 5), "<ur> ");
  CleanDocument xx;
  xx.lang = "xx";
  xx.paragraphs = {"abc"};
  EXPECT_THROW(PrependLangToken(xx), DataError);
  EXPECT_EQ(LangToken("en"), "<en>");
  EXPECT_THROW(LangToken("fr"), DataError);
}

TEST(LangTokenTest, ShardLineFlattensParagraphs) {
  CleanDocument doc;
  doc.lang = "ta";
  doc.paragraphs = {"one\ntwo", "three"};
  EXPECT_EQ(ShardLine(doc, false), "one two three");
  EXPECT_EQ(ShardLine(doc, true), "<ta> one two three");
}

}  // namespace
}  // namespace corpus_forge
