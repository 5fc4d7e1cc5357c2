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

#include "corpus_forge/lid.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>

#include "corpus_forge/errors.h"
#include "corpus_forge/rng.h"
#include "corpus_forge/unicode.h"
#include "test_support.h"

namespace corpus_forge {
namespace {

using testing::SyntheticLanguage;

// ~3 KB of training text per language.
std::vector<LabeledText> TrainingSamples(const std::vector<SyntheticLanguage>& languages,
                                         uint64_t seed, size_t paragraphs = 12) {
  Rng rng(seed);
  std::vector<LabeledText> samples;
  for (const SyntheticLanguage& lang : languages) {
    for (size_t i = 0; i < paragraphs; ++i) samples.push_back({lang.code(), lang.Paragraph(rng, 3)});
  }
  return samples;
}

class LidTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    languages_ = new std::vector<SyntheticLanguage>(testing::SyntheticLanguages());
    samples_ = new std::vector<LabeledText>(TrainingSamples(*languages_, 1));
    model_ = new LidModel(LidModel::Train(*samples_));
  }
  static void TearDownTestSuite() {
    delete model_;
    delete samples_;
    delete languages_;
  }

  static const SyntheticLanguage& Lang(std::string_view code) {
    for (const auto& l : *languages_) {
      if (l.code() == code) return l;
    }
    throw std::invalid_argument("no such language");
  }

  static std::vector<SyntheticLanguage>* languages_;
  static std::vector<LabeledText>* samples_;
  static LidModel* model_;
};

std::vector<SyntheticLanguage>* LidTest::languages_ = nullptr;
std::vector<LabeledText>* LidTest::samples_ = nullptr;
LidModel* LidTest::model_ = nullptr;

TEST_F(LidTest, SingleLanguageModel) {
  const std::vector<LabeledText> samples = {{"hi", "नमस्ते दुनिया यह एक परीक्षण है"}};
  const LidModel m = LidModel::Train(samples);
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto p = m.Predict(Lang("mr").Sentence(rng, 10, 12));
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->lang, "hi");
  }
}

TEST_F(LidTest, DisjointScriptsHeldIn) {
  std::vector<LabeledText> samples;
  for (const auto& s : *samples_) {
    if (s.lang == "ta" || s.lang == "ur") samples.push_back(s);
  }
  const LidModel m = LidModel::Train(samples);
  for (const auto& s : samples) EXPECT_EQ(m.Predict(s.text)->lang, s.lang);
}

TEST_F(LidTest, TooShortOrLetterlessIsUnknown) {
  EXPECT_FALSE(model_->Predict("தமிழ்").has_value());
  EXPECT_FALSE(model_->Predict("12345 67890 !!! ... 1234567890 1234567890").has_value());
  EXPECT_FALSE(model_->Predict("").has_value());
  EXPECT_TRUE(model_->Scores("abc").empty());
}

TEST_F(LidTest, UniqueScriptTextGoesToItsLanguage) {
  const LanguageTable& table = LanguageTable::Default();
  Rng rng(17);
  for (const std::string& code : table.UniqueScriptLanguages()) {
    const Script script = table.Get(code).script;
    const std::vector<char32_t> letters = testing::ScriptLetters(script);
    const std::vector<char32_t> marks = testing::ScriptMarks(script);
    for (int trial = 0; trial < 30; ++trial) {
      // Random letters of the script, unrelated to the training lexicon.
      std::u32string text;
      const size_t n = 20 + rng.Below(60);
      for (size_t i = 0; i < n; ++i) {
        if (i > 0 && rng.Bernoulli(0.2)) text.push_back(U' ');
        const auto& pool = !marks.empty() && rng.Bernoulli(0.3) ? marks : letters;
        text.push_back(pool[rng.Below(pool.size())]);
      }
      const auto p = model_->Predict(ToUtf8(text));
      ASSERT_TRUE(p.has_value());
      EXPECT_EQ(p->lang, code) << ToUtf8(text);
    }
  }
}

TEST_F(LidTest, TamilParagraph) {
  Rng rng(8);
  EXPECT_EQ(model_->Predict(Lang("ta").Paragraph(rng, 2))->lang, "ta");
}

TEST_F(LidTest, ScalingOneLanguageLeavesArgmaxUnchanged) {
  std::vector<LabeledText> doubled;
  for (const auto& s : *samples_) {
    doubled.push_back(s);
    if (s.lang == "hi" || s.lang == "en") doubled.push_back(s);
  }
  const LidModel m2 = LidModel::Train(doubled);
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const auto& lang = (*languages_)[rng.Below(languages_->size())];
    const std::string text = lang.Sentence(rng, 4, 10);
    const auto a = model_->Predict(text);
    const auto b = m2.Predict(text);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_EQ(a->lang, b->lang);
    EXPECT_EQ(model_->Scores(text), m2.Scores(text));
  }
}

TEST_F(LidTest, TrainingIsOrderIndependent) {
  std::vector<LabeledText> reversed(samples_->rbegin(), samples_->rend());
  EXPECT_EQ(LidModel::Train(reversed).ToJson(), model_->ToJson());
}

TEST_F(LidTest, SerializationRoundTripIsBitwise) {
  const auto dir = testing::FreshTempDir("lid_roundtrip");
  model_->Save(dir / "m.json");
  const LidModel loaded = LidModel::Load(dir / "m.json");
  EXPECT_EQ(loaded.languages(), model_->languages());
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const std::string text = (*languages_)[rng.Below(languages_->size())].Sentence(rng);
    const auto a = model_->Scores(text);
    const auto b = loaded.Scores(text);
    ASSERT_EQ(a.size(), b.size());
    for (size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(std::bit_cast<uint64_t>(a[k]), std::bit_cast<uint64_t>(b[k]));
    }
  }
}

TEST_F(LidTest, TrainingErrors) {
  LidOptions options;
  options.languages = {"hi", "ta"};
  std::vector<LabeledText> only_hi = {{"hi", "नमस्ते दुनिया"}};
  try {
    LidModel::Train(only_hi, options);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("ta"), std::string::npos);
  }
  std::vector<LabeledText> digits = {{"hi", "123 456"}};
  EXPECT_THROW(LidModel::Train(digits), DataError);
  std::vector<LabeledText> unknown = {{"xx", "abc"}};
  EXPECT_THROW(LidModel::Train(unknown), DataError);
  options = {};
  options.order = 5;
  EXPECT_THROW(LidModel::Train(only_hi, options), std::invalid_argument);
  options.order = 3;
  options.smoothing = 0;
  EXPECT_THROW(LidModel::Train(only_hi, options), std::invalid_argument);
}

TEST_F(LidTest, FilterParagraphsDropsForeign) {
  Rng rng(12);
  CleanDocument doc;
  doc.id = "d";
  doc.lang = "ta";
  doc.paragraphs = {Lang("ta").Paragraph(rng, 2), Lang("bn").Paragraph(rng, 2),
                    Lang("ta").Paragraph(rng, 2)};
  const FilterOutcome out = FilterParagraphs(*model_, doc, "ta");
  EXPECT_EQ(out.doc.paragraphs.size(), 2u);
  EXPECT_EQ(out.doc.paragraphs[0], doc.paragraphs[0]);
  EXPECT_EQ(out.doc.paragraphs[1], doc.paragraphs[2]);
  EXPECT_EQ(out.paragraphs_removed, 1u);
  EXPECT_EQ(out.doc.provenance, std::vector<std::string>{std::string(kLidTag)});
  EXPECT_FALSE(out.skipped);
}

TEST_F(LidTest, FilterKeepsUnknownParagraphs) {
  CleanDocument doc;
  doc.id = "d";
  doc.lang = "ta";
  doc.paragraphs = {"12 34", "ok"};
  EXPECT_EQ(FilterParagraphs(*model_, doc, "ta").doc.paragraphs, doc.paragraphs);
}

TEST_F(LidTest, AllForeignEmptiesDocument) {
  Rng rng(13);
  CleanDocument doc;
  doc.id = "d";
  doc.lang = "ta";
  doc.paragraphs = {Lang("ur").Paragraph(rng, 2), Lang("kn").Paragraph(rng, 2)};
  const FilterOutcome out = FilterParagraphs(*model_, doc, "ta");
  EXPECT_TRUE(out.doc.empty());
  EXPECT_EQ(out.paragraphs_removed, 2u);
}

TEST_F(LidTest, UnsupportedTargetPassesThrough) {
  std::vector<LabeledText> samples;
  for (const auto& s : *samples_) {
    if (s.lang != "brx") samples.push_back(s);
  }
  const LidModel m = LidModel::Train(samples);
  ASSERT_FALSE(m.Supports("brx"));
  Rng rng(14);
  CleanDocument doc;
  doc.id = "d";
  doc.lang = "brx";
  doc.paragraphs = {Lang("brx").Paragraph(rng, 1), Lang("ur").Paragraph(rng, 1)};
  const FilterOutcome out = FilterParagraphs(m, doc, "brx");
  EXPECT_TRUE(out.skipped);
  EXPECT_EQ(out.doc.paragraphs, doc.paragraphs);
  EXPECT_EQ(out.doc.provenance, std::vector<std::string>{std::string(kLidSkippedTag)});
}

TEST_F(LidTest, EvaluateMemorizationAndMislabel) {
  std::vector<LabeledText> samples;
  for (const auto& s : *samples_) {
    if (s.lang == "ta" || s.lang == "ur" || s.lang == "gu") samples.push_back(s);
  }
  const LidModel m = LidModel::Train(samples);
  LidReport r = EvaluateLid(m, samples);
  for (const auto& [lang, e] : r.per_language) EXPECT_EQ(e.accuracy, 1.0) << lang;

  std::vector<LabeledText> test = samples;
  // The only "gu" item is actually Tamil text.
  std::erase_if(test, [](const LabeledText& t) { return t.lang == "gu"; });
  const auto tamil = std::find_if(samples.begin(), samples.end(),
                                  [](const LabeledText& t) { return t.lang == "ta"; });
  test.push_back({"gu", tamil->text});
  r = EvaluateLid(m, test);
  EXPECT_EQ(r.per_language.at("gu").accuracy, 0.0);
  EXPECT_EQ(r.per_language.at("ta").accuracy, 1.0);
  EXPECT_EQ(r.per_language.at("ur").accuracy, 1.0);
  size_t row = 0;
  for (const auto& [pred, n] : r.confusion.at("ta")) row += n;
  EXPECT_EQ(row, r.per_language.at("ta").total);

  std::vector<LabeledText> no_gu;
  for (const auto& t : samples) {
    if (t.lang != "gu") no_gu.push_back(t);
  }
  r = EvaluateLid(m, no_gu);
  EXPECT_FALSE(r.per_language.at("gu").accuracy.has_value());

  std::vector<LabeledText> unsupported = {{"hi", "नमस्ते"}};
  EXPECT_THROW(EvaluateLid(m, unsupported), DataError);
}

}  // namespace
}  // namespace corpus_forge
