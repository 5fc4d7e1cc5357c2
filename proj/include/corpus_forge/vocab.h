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

// WordPiece vocabularies: training by likelihood-scored pair merging, greedy
// longest-match segmentation and fertility (pieces per word) reporting.

#ifndef CORPUS_FORGE_VOCAB_H_
#define CORPUS_FORGE_VOCAB_H_

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

namespace corpus_forge {

inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kMaskToken = "[MASK]";
inline constexpr std::string_view kContinuation = "##";
inline constexpr size_t kMaxPiecesPerWord = 100;
inline constexpr size_t kDefaultVocabSize = 8000;

// [PAD] [UNK] [CLS] [SEP] [MASK] followed by "<xx>" for every table language.
std::vector<std::string> SpecialTokens(const LanguageTable& table = LanguageTable::Default());

// Indices of the documents kept when each is included independently with
// probability `fraction`. Throws std::invalid_argument for fraction outside
// (0, 1] and DataError for an empty corpus.
std::vector<size_t> SampleTrainingText(size_t num_documents, double fraction, uint64_t seed);

class VocabModel {
 public:
  // Throws DataError on duplicate or empty pieces, pieces containing
  // whitespace, or a missing [UNK].
  explicit VocabModel(std::vector<std::string> pieces,
                      const LanguageTable& table = LanguageTable::Default());

  // One piece per line; the line number is the id.
  static VocabModel Load(const std::filesystem::path& path,
                         const LanguageTable& table = LanguageTable::Default());
  void Save(const std::filesystem::path& path) const;

  std::optional<int32_t> Id(std::string_view piece) const;
  const std::string& Piece(int32_t id) const { return pieces_[id]; }
  const std::vector<std::string>& pieces() const { return pieces_; }
  size_t size() const { return pieces_.size(); }

  bool IsSpecial(int32_t id) const { return is_special_[id]; }
  int32_t unk_id() const { return unk_id_; }
  // nullopt when the vocabulary lacks the token.
  std::optional<int32_t> pad_id() const { return Id(kPadToken); }
  std::optional<int32_t> cls_id() const { return Id(kClsToken); }
  std::optional<int32_t> sep_id() const { return Id(kSepToken); }
  std::optional<int32_t> mask_id() const { return Id(kMaskToken); }
  std::optional<int32_t> LangTokenId(std::string_view lang) const;

  // Ids of ordinary (non-special) pieces in ascending order.
  const std::vector<int32_t>& regular_ids() const { return regular_ids_; }

  // Greedy longest-match segmentation of each whitespace word of the NFC
  // normalized text. A word equal to a language token ("<hi>") maps to that
  // token; other specials are never produced except [UNK], which replaces a
  // whole word that cannot be segmented within kMaxPiecesPerWord pieces.
  std::vector<int32_t> Encode(std::string_view text) const;
  std::vector<std::string> Tokenize(std::string_view text) const;

  // Segmentation of a single already-normalized word; appends to `out` and
  // returns false when the word became [UNK].
  bool EncodeWord(std::string_view word, std::vector<int32_t>* out) const;

 private:
  std::vector<std::string> pieces_;
  std::unordered_map<std::string, int32_t> ids_;
  // Non-special pieces only, split by position: word-initial pieces keyed
  // by their text, continuation pieces by their text without "##".
  std::unordered_map<std::string, int32_t> initial_;
  std::unordered_map<std::string, int32_t> continuation_;
  std::unordered_map<std::string, int32_t> lang_tokens_;
  std::vector<bool> is_special_;
  std::vector<int32_t> regular_ids_;
  size_t max_piece_bytes_ = 0;
  int32_t unk_id_ = -1;
};

struct WordPieceOptions {
  size_t vocab_size = kDefaultVocabSize;
  uint64_t min_pair_freq = 2;
};

struct WordPieceStats {
  size_t alphabet_size = 0;  // base pieces, both positional forms
  size_t merges = 0;
  std::string stop_reason;
};

// Word frequencies of NFC-normalized whitespace words. Words equal to a
// language token are skipped.
void CountWords(std::string_view text, std::map<std::string, uint64_t>* counts,
                const LanguageTable& table = LanguageTable::Default());

// Starts from the specials plus every observed character in word-initial and
// "##" forms, then repeatedly merges the adjacent pair with the highest
// count(ab) / (count(a) * count(b)); ties go to the more frequent pair, then
// to the lexicographically smaller (a, b). Stops at vocab_size pieces or when
// no pair occurs min_pair_freq times. Throws DataError for empty input and
// std::invalid_argument when vocab_size is below the initial size.
VocabModel TrainWordPiece(const std::map<std::string, uint64_t>& word_counts,
                          const WordPieceOptions& options, WordPieceStats* stats = nullptr,
                          const LanguageTable& table = LanguageTable::Default());

struct FertilityEntry {
  uint64_t words = 0;
  uint64_t pieces = 0;
  uint64_t unk_words = 0;
  double fertility = 0.0;
};

struct FertilityReport {
  std::map<std::string, FertilityEntry> languages;
  std::vector<std::string> warnings;

  std::string ToJson() const;
};

// Pieces per whitespace word for each language of the corpus; [UNK] counts
// as one piece. Languages without words are omitted with a warning.
FertilityReport Fertility(const VocabModel& model, std::span<const CleanDocument> corpus);

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_VOCAB_H_
