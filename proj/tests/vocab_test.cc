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

#include "corpus_forge/vocab.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "corpus_forge/errors.h"
#include "corpus_forge/rng.h"
#include "corpus_forge/unicode.h"
#include "test_support.h"

namespace corpus_forge {
namespace {

using testing::Codepoints;
using testing::FreshTempDir;

// Recounts everything on every step; no incremental bookkeeping.
std::vector<std::string> BruteForceWordPiece(const std::map<std::string, uint64_t>& counts,
                                             size_t vocab_size, uint64_t min_freq) {
  std::vector<std::string> pieces = SpecialTokens();
  const std::set<std::string> specials(pieces.begin(), pieces.end());
  std::set<std::string> alphabet;
  std::vector<std::pair<std::vector<std::string>, uint64_t>> words;
  for (const auto& [word, freq] : counts) {
    std::vector<std::string> symbols = Codepoints(word);
    for (const std::string& s : symbols) alphabet.insert(s);
    for (size_t i = 1; i < symbols.size(); ++i) symbols[i] = "##" + symbols[i];
    words.emplace_back(std::move(symbols), freq);
  }
  for (const std::string& c : alphabet) pieces.push_back(c);
  for (const std::string& c : alphabet) pieces.push_back("##" + c);
  std::set<std::string> known(pieces.begin(), pieces.end());
  std::set<std::pair<std::string, std::string>> banned;

  while (pieces.size() < vocab_size) {
    std::map<std::string, uint64_t> unit;
    std::map<std::pair<std::string, std::string>, uint64_t> pair;
    for (const auto& [symbols, freq] : words) {
      for (size_t i = 0; i < symbols.size(); ++i) {
        unit[symbols[i]] += freq;
        if (i + 1 < symbols.size()) pair[{symbols[i], symbols[i + 1]}] += freq;
      }
    }
    const std::pair<std::string, std::string>* best = nullptr;
    uint64_t best_count = 0;
    for (const auto& [ab, count] : pair) {
      if (count < min_freq || banned.contains(ab)) continue;
      if (best != nullptr) {
        using u128 = unsigned __int128;
        const u128 lhs = static_cast<u128>(count) * unit[best->first] * unit[best->second];
        const u128 rhs = static_cast<u128>(best_count) * unit[ab.first] * unit[ab.second];
        // Map order already gives the lexicographic tie-break.
        if (lhs < rhs || (lhs == rhs && count <= best_count)) continue;
      }
      best = &ab;
      best_count = count;
    }
    if (best == nullptr) break;
    const auto [a, b] = *best;
    const std::string merged = a + b.substr(2);
    // An initial piece may not read as "##" plus text; a bare "##" is fine.
    const bool looks_continued = merged.size() > 2 && merged.rfind("##", 0) == 0;
    if ((a.rfind("##", 0) != 0 && looks_continued) || specials.contains(merged)) {
      banned.insert({a, b});
      continue;
    }
    for (auto& [symbols, freq] : words) {
      std::vector<std::string> next;
      for (size_t i = 0; i < symbols.size(); ++i) {
        if (i + 1 < symbols.size() && symbols[i] == a && symbols[i + 1] == b) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(symbols[i]);
        }
      }
      symbols = std::move(next);
    }
    if (known.insert(merged).second) pieces.push_back(merged);
  }
  return pieces;
}

std::string Join(const std::vector<std::string>& pieces) {
  std::string word;
  for (size_t i = 0; i < pieces.size(); ++i) {
    word += i == 0 ? pieces[i] : pieces[i].substr(2);
  }
  return word;
}

// Pieces after the specials, for failure messages.
std::string Tail(const std::vector<std::string>& pieces) {
  std::string out;
  for (size_t i = SpecialTokens().size(); i < pieces.size(); ++i) out += pieces[i] + " ";
  return out;
}

VocabModel SmallModel(std::vector<std::string> extra) {
  std::vector<std::string> pieces = SpecialTokens();
  for (std::string& p : extra) pieces.push_back(std::move(p));
  return VocabModel(std::move(pieces));
}

TEST(SpecialTokensTest, Layout) {
  const auto specials = SpecialTokens();
  ASSERT_EQ(specials.size(), 29u);
  EXPECT_EQ(specials[0], "[PAD]");
  EXPECT_EQ(specials[1], "[UNK]");
  EXPECT_EQ(specials[4], "[MASK]");
  EXPECT_NE(std::find(specials.begin(), specials.end(), "<hi>"), specials.end());
  EXPECT_NE(std::find(specials.begin(), specials.end(), "<ur>"), specials.end());
}

TEST(SampleTrainingTextTest, FractionAndDeterminism) {
  const auto all = SampleTrainingText(100, 1.0, 3);
  ASSERT_EQ(all.size(), 100u);
  EXPECT_EQ(all.back(), 99u);
  const auto half = SampleTrainingText(10000, 0.5, 3);
  EXPECT_NEAR(static_cast<double>(half.size()), 5000.0, 200.0);
  EXPECT_EQ(half, SampleTrainingText(10000, 0.5, 3));
  EXPECT_NE(half, SampleTrainingText(10000, 0.5, 4));
  EXPECT_TRUE(std::is_sorted(half.begin(), half.end()));
  EXPECT_THROW(SampleTrainingText(10, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(SampleTrainingText(10, 1.5, 1), std::invalid_argument);
  EXPECT_THROW(SampleTrainingText(0, 0.5, 1), DataError);
}

TEST(VocabModelTest, GreedyLongestMatch) {
  const VocabModel m = SmallModel({"u", "n", "a", "b", "l", "e", "##n", "##a", "##b", "##l",
                                   "##e", "un", "##able", "##ab"});
  EXPECT_EQ(m.Tokenize("unable"), (std::vector<std::string>{"un", "##able"}));
  EXPECT_EQ(m.Tokenize("unab"), (std::vector<std::string>{"un", "##ab"}));
  EXPECT_EQ(m.Tokenize("un"), (std::vector<std::string>{"un"}));
  EXPECT_EQ(m.Tokenize("unxable"), (std::vector<std::string>{"[UNK]"}));
  // "##" pieces never start a word.
  EXPECT_EQ(m.Tokenize("able"), (std::vector<std::string>{"a", "##b", "##l", "##e"}));
}

TEST(VocabModelTest, LangTokensAndSpecials) {
  const VocabModel m = SmallModel({"a", "##a"});
  EXPECT_EQ(m.Tokenize("<hi> aa [MASK] <zz>"),
            (std::vector<std::string>{"<hi>", "a", "##a", "[UNK]", "[UNK]"}));
  EXPECT_EQ(*m.LangTokenId("hi"), *m.Id("<hi>"));
  EXPECT_FALSE(m.LangTokenId("fr").has_value());
  EXPECT_TRUE(m.IsSpecial(*m.Id("<ta>")));
  EXPECT_FALSE(m.IsSpecial(*m.Id("a")));
  EXPECT_EQ(m.regular_ids().size(), 2u);
}

TEST(VocabModelTest, PieceCapFallsBackToUnk) {
  const VocabModel m = SmallModel({"a", "##a"});
  EXPECT_EQ(m.Encode(std::string(100, 'a')).size(), 100u);
  EXPECT_EQ(m.Tokenize(std::string(101, 'a')), (std::vector<std::string>{"[UNK]"}));
}

TEST(VocabModelTest, RejectsBadPieceLists) {
  EXPECT_THROW(VocabModel({"a", "b"}), DataError);
  EXPECT_THROW(VocabModel({"[UNK]", "a", "a"}), DataError);
  EXPECT_THROW(VocabModel({"[UNK]", ""}), DataError);
  EXPECT_THROW(VocabModel({"[UNK]", "a b"}), DataError);
  const VocabModel minimal({"[UNK]", "a"});
  EXPECT_FALSE(minimal.mask_id().has_value());
}

TEST(VocabModelTest, SaveLoadRoundTrip) {
  const VocabModel m = SmallModel({"क", "##ा", "का", "##र"});
  const auto path = FreshTempDir("vocab_io") / "vocab.txt";
  m.Save(path);
  const VocabModel loaded = VocabModel::Load(path);
  EXPECT_EQ(loaded.pieces(), m.pieces());
  EXPECT_EQ(loaded.Tokenize("कार"), (std::vector<std::string>{"का", "##र"}));
}

TEST(TrainWordPieceTest, SingleCandidateMerge) {
  std::map<std::string, uint64_t> counts;
  CountWords("aa aa aa", &counts);
  WordPieceStats stats;
  const VocabModel m = TrainWordPiece(counts, {.vocab_size = 100, .min_pair_freq = 1}, &stats);
  EXPECT_TRUE(m.Id("aa").has_value());
  EXPECT_EQ(stats.merges, 1u);
  EXPECT_EQ(stats.alphabet_size, 2u);
  EXPECT_EQ(m.size(), SpecialTokens().size() + 3);
  EXPECT_EQ(m.Tokenize("aa"), (std::vector<std::string>{"aa"}));
}

TEST(TrainWordPieceTest, BudgetEqualToInitialSizeMergesNothing) {
  std::map<std::string, uint64_t> counts;
  CountWords("abc abd bcd", &counts);
  WordPieceStats stats;
  const size_t initial = SpecialTokens().size() + 2 * 4;
  const VocabModel m = TrainWordPiece(counts, {.vocab_size = initial, .min_pair_freq = 1}, &stats);
  EXPECT_EQ(stats.merges, 0u);
  EXPECT_EQ(m.size(), initial);
  EXPECT_THROW(TrainWordPiece(counts, {.vocab_size = initial - 1}), std::invalid_argument);
}

TEST(TrainWordPieceTest, MinPairFrequencyStops) {
  std::map<std::string, uint64_t> counts = {{"ab", 1}, {"cd", 1}};
  WordPieceStats stats;
  TrainWordPiece(counts, {.vocab_size = 1000, .min_pair_freq = 2}, &stats);
  EXPECT_EQ(stats.merges, 0u);
  EXPECT_EQ(stats.stop_reason, "no pair reaches min_pair_freq");
}

TEST(TrainWordPieceTest, Errors) {
  EXPECT_THROW(TrainWordPiece({}, {}), DataError);
  std::map<std::string, uint64_t> lang_only;
  CountWords("<hi> <ta>", &lang_only);
  EXPECT_TRUE(lang_only.empty());
}

TEST(TrainWordPieceTest, NeverProducesContinuationLookingInitialPieces) {
  const std::map<std::string, uint64_t> counts = {{"##x", 50}, {"#", 3}};
  const VocabModel m = TrainWordPiece(counts, {.vocab_size = 200, .min_pair_freq = 1});
  for (const std::string& p : m.pieces()) {
    // Only the base continuation forms and merges rooted in one may start with "##".
    if (p.rfind("##", 0) == 0) EXPECT_GE(p.size(), 3u) << p;
  }
  EXPECT_EQ(Join(m.Tokenize("##x")), "##x");
}

TEST(TrainWordPieceTest, MergesNeverCollideWithSpecials) {
  const std::map<std::string, uint64_t> counts = {{"[UNK]", 40}, {"[MASK]", 40}};
  const VocabModel m = TrainWordPiece(counts, {.vocab_size = 400, .min_pair_freq = 1});
  for (int32_t id = 0; id < static_cast<int32_t>(m.size()); ++id) {
    if (m.IsSpecial(id)) EXPECT_LT(id, static_cast<int32_t>(SpecialTokens().size()));
  }
}

class TrainedVocabTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto langs = testing::SyntheticLanguages();
    corpus_ = new std::vector<CleanDocument>(testing::SyntheticCorpus(langs, 240, 21));
    counts_ = new std::map<std::string, uint64_t>();
    for (const CleanDocument& doc : *corpus_) CountWords(doc.Text(), counts_);
  }
  static void TearDownTestSuite() {
    delete corpus_;
    delete counts_;
  }

  static size_t InitialSize() {
    std::set<std::string> alphabet;
    for (const auto& [word, freq] : *counts_) {
      for (const std::string& c : Codepoints(word)) alphabet.insert(c);
    }
    return SpecialTokens().size() + 2 * alphabet.size();
  }

  static std::vector<CleanDocument>* corpus_;
  static std::map<std::string, uint64_t>* counts_;
};

std::vector<CleanDocument>* TrainedVocabTest::corpus_ = nullptr;
std::map<std::string, uint64_t>* TrainedVocabTest::counts_ = nullptr;

TEST_F(TrainedVocabTest, BaseCoverageAndRoundTrip) {
  const VocabModel m = TrainWordPiece(*counts_, {.vocab_size = InitialSize() + 1000});
  for (const auto& [word, freq] : *counts_) {
    for (const std::string& c : Codepoints(word)) {
      ASSERT_TRUE(m.Id(c).has_value()) << c;
      ASSERT_TRUE(m.Id("##" + c).has_value()) << c;
    }
  }
  // Every training word is covered, so none falls back to [UNK].
  size_t checked = 0;
  for (const auto& [word, freq] : *counts_) {
    const auto pieces = m.Tokenize(word);
    ASSERT_EQ(std::count(pieces.begin(), pieces.end(), "[UNK]"), 0) << word;
    ASSERT_EQ(Join(pieces), word);
    for (const std::string& p : pieces) ASSERT_FALSE(m.IsSpecial(*m.Id(p)));
    ++checked;
  }
  EXPECT_GT(checked, 3000u);
}

TEST_F(TrainedVocabTest, DeterministicAndNested) {
  const size_t base = InitialSize();
  const VocabModel big = TrainWordPiece(*counts_, {.vocab_size = base + 1500});
  EXPECT_EQ(big.pieces(), TrainWordPiece(*counts_, {.vocab_size = base + 1500}).pieces());
  const VocabModel small = TrainWordPiece(*counts_, {.vocab_size = base + 500});
  ASSERT_EQ(small.size(), base + 500);
  EXPECT_TRUE(std::equal(small.pieces().begin(), small.pieces().end(), big.pieces().begin()));
}

TEST_F(TrainedVocabTest, FertilityDoesNotGrowWithVocabulary) {
  double previous = 1e9;
  for (size_t extra : {250, 500, 1000, 2000}) {
    const size_t size = InitialSize() + extra;
    const VocabModel m = TrainWordPiece(*counts_, {.vocab_size = size});
    const FertilityReport report = Fertility(m, *corpus_);
    uint64_t pieces = 0, words = 0;
    for (const auto& [lang, e] : report.languages) {
      pieces += e.pieces;
      words += e.words;
      EXPECT_GE(e.fertility, 1.0);
      EXPECT_EQ(e.unk_words, 0u);
    }
    const double fertility = static_cast<double>(pieces) / static_cast<double>(words);
    EXPECT_LE(fertility, previous) << size;
    previous = fertility;
  }
}

TEST(TrainWordPieceProperty, MatchesBruteForce) {
  Rng rng(31);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d", "#", "क", "##"};
  for (int trial = 0; trial < 150; ++trial) {
    std::map<std::string, uint64_t> counts;
    const size_t n = 1 + rng.Below(25);
    for (size_t i = 0; i < n; ++i) {
      std::string word;
      const size_t len = 1 + rng.Below(7);
      for (size_t j = 0; j < len; ++j) word += alphabet[rng.Below(alphabet.size() - 1)];
      counts[word] += 1 + rng.Below(9);
    }
    if (trial % 10 == 0) counts["##"] += 5;
    const uint64_t min_freq = 1 + rng.Below(3);
    const size_t vocab_size = SpecialTokens().size() + 12 + rng.Below(40);
    const auto expected = BruteForceWordPiece(counts, vocab_size, min_freq);
    try {
      const VocabModel m =
          TrainWordPiece(counts, {.vocab_size = vocab_size, .min_pair_freq = min_freq});
      ASSERT_EQ(m.pieces(), expected) << "trial " << trial << "\n got: " << Tail(m.pieces())
                                      << "\n want: " << Tail(expected);
    } catch (const std::invalid_argument&) {
      // Alphabet larger than the budget; the oracle then returns the base set.
      ASSERT_GT(expected.size(), vocab_size);
    }
  }
}

TEST(FertilityTest, Arithmetic) {
  const VocabModel m = SmallModel({"a", "b", "##a", "##b", "ab", "##ab"});
  CleanDocument doc;
  doc.lang = "hi";
  doc.paragraphs = {"ababababab a"};  // 5 pieces + 1 piece
  CleanDocument one;
  one.lang = "ta";
  one.paragraphs = {"ab a b <ta>"};
  CleanDocument empty;
  empty.lang = "ur";
  const std::vector<CleanDocument> corpus = {doc, one, empty};
  const FertilityReport r = Fertility(m, corpus);
  EXPECT_EQ(r.languages.at("hi").words, 2u);
  EXPECT_EQ(r.languages.at("hi").pieces, 6u);
  EXPECT_DOUBLE_EQ(r.languages.at("hi").fertility, 3.0);
  EXPECT_DOUBLE_EQ(r.languages.at("ta").fertility, 1.0);
  EXPECT_FALSE(r.languages.contains("ur"));
  ASSERT_EQ(r.warnings.size(), 1u);

  CleanDocument unk;
  unk.lang = "bn";
  unk.paragraphs = {"zz ab"};
  const std::vector<CleanDocument> with_unk = {unk};
  const FertilityReport u = Fertility(m, with_unk);
  EXPECT_EQ(u.languages.at("bn").unk_words, 1u);
  EXPECT_DOUBLE_EQ(u.languages.at("bn").fertility, 1.0);
  EXPECT_NE(u.ToJson().find("\"unk_words\": 1"), std::string::npos);
}

}  // namespace
}  // namespace corpus_forge
