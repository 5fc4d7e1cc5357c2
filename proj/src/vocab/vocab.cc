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

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "corpus_forge/errors.h"
#include "corpus_forge/rng.h"
#include "corpus_forge/unicode.h"
#include "json.hpp"

namespace corpus_forge {
namespace {

bool IsUtf8Continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

bool StartsWithContinuation(std::string_view piece) {
  return piece.size() > kContinuation.size() && piece.starts_with(kContinuation);
}

// "<xx>" with xx in the table.
bool IsLangTokenWord(std::string_view word, const LanguageTable& table) {
  return word.size() > 2 && word.front() == '<' && word.back() == '>' &&
         table.Contains(word.substr(1, word.size() - 2));
}

}  // namespace

std::vector<std::string> SpecialTokens(const LanguageTable& table) {
  std::vector<std::string> specials = {std::string(kPadToken), std::string(kUnkToken),
                                       std::string(kClsToken), std::string(kSepToken),
                                       std::string(kMaskToken)};
  for (const Language& lang : table.languages()) specials.push_back("<" + lang.code + ">");
  return specials;
}

std::vector<size_t> SampleTrainingText(size_t num_documents, double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must lie in (0, 1]");
  }
  if (num_documents == 0) throw DataError("cannot sample from an empty corpus");
  Rng rng(seed);
  std::vector<size_t> kept;
  for (size_t i = 0; i < num_documents; ++i) {
    if (rng.Bernoulli(fraction)) kept.push_back(i);
  }
  return kept;
}

VocabModel::VocabModel(std::vector<std::string> pieces, const LanguageTable& table)
    : pieces_(std::move(pieces)) {
  std::unordered_set<std::string> specials;
  for (std::string& s : SpecialTokens(table)) specials.insert(std::move(s));
  is_special_.resize(pieces_.size());
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const std::string& piece = pieces_[i];
    const int32_t id = static_cast<int32_t>(i);
    if (piece.empty()) throw DataError("empty vocabulary piece at id " + std::to_string(i));
    for (std::string_view rest = piece; !rest.empty();) {
      size_t pos = 0;
      if (IsWhitespace(NextCodepoint(rest, &pos))) {
        throw DataError("vocabulary piece with whitespace at id " + std::to_string(i));
      }
      rest.remove_prefix(pos);
    }
    if (!ids_.emplace(piece, id).second) throw DataError("duplicate vocabulary piece: " + piece);
    if (specials.contains(piece)) {
      is_special_[i] = true;
      if (piece == kUnkToken) unk_id_ = id;
      if (piece.front() == '<') lang_tokens_.emplace(piece, id);
      continue;
    }
    regular_ids_.push_back(id);
    if (StartsWithContinuation(piece)) {
      continuation_.emplace(piece.substr(kContinuation.size()), id);
    } else {
      initial_.emplace(piece, id);
    }
    max_piece_bytes_ = std::max(max_piece_bytes_, piece.size());
  }
  if (unk_id_ < 0) throw DataError("vocabulary has no [UNK] piece");
}

VocabModel VocabModel::Load(const std::filesystem::path& path, const LanguageTable& table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vocabulary " + path.string());
  std::vector<std::string> pieces;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pieces.push_back(line);
  }
  return VocabModel(std::move(pieces), table);
}

void VocabModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vocabulary " + path.string());
  for (const std::string& piece : pieces_) out << piece << '\n';
}

std::optional<int32_t> VocabModel::Id(std::string_view piece) const {
  auto it = ids_.find(std::string(piece));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<int32_t> VocabModel::LangTokenId(std::string_view lang) const {
  auto it = lang_tokens_.find("<" + std::string(lang) + ">");
  if (it == lang_tokens_.end()) return std::nullopt;
  return it->second;
}

bool VocabModel::EncodeWord(std::string_view word, std::vector<int32_t>* out) const {
  const size_t mark = out->size();
  std::string key;
  size_t start = 0;
  while (start < word.size()) {
    const auto& table = start == 0 ? initial_ : continuation_;
    size_t end = std::min(word.size(), start + max_piece_bytes_);
    int32_t found = -1;
    for (; end > start; --end) {
      if (end < word.size() && IsUtf8Continuation(word[end])) continue;
      key.assign(word.substr(start, end - start));
      auto it = table.find(key);
      if (it != table.end()) {
        found = it->second;
        break;
      }
    }
    if (found < 0 || out->size() - mark == kMaxPiecesPerWord) {
      out->resize(mark);
      out->push_back(unk_id_);
      return false;
    }
    out->push_back(found);
    start = end;
  }
  return true;
}

std::vector<int32_t> VocabModel::Encode(std::string_view text) const {
  const std::string normalized = NormalizeNfc(text);
  std::vector<int32_t> ids;
  for (std::string_view word : SplitWhitespace(normalized)) {
    if (word.front() == '<') {
      auto it = lang_tokens_.find(std::string(word));
      if (it != lang_tokens_.end()) {
        ids.push_back(it->second);
        continue;
      }
    }
    EncodeWord(word, &ids);
  }
  return ids;
}

std::vector<std::string> VocabModel::Tokenize(std::string_view text) const {
  std::vector<std::string> pieces;
  for (int32_t id : Encode(text)) pieces.push_back(pieces_[id]);
  return pieces;
}

void CountWords(std::string_view text, std::map<std::string, uint64_t>* counts,
                const LanguageTable& table) {
  const std::string normalized = NormalizeNfc(text);
  for (std::string_view word : SplitWhitespace(normalized)) {
    if (IsLangTokenWord(word, table)) continue;
    ++(*counts)[std::string(word)];
  }
}

namespace {

// Pair-merge state. Pieces are referenced by vocabulary id throughout.
class MergeTrainer {
 public:
  // The first `num_specials` pieces are reserved and never produced by a merge.
  MergeTrainer(const std::map<std::string, uint64_t>& word_counts, std::vector<std::string> pieces,
               size_t num_specials)
      : pieces_(std::move(pieces)), num_specials_(num_specials) {
    for (size_t i = 0; i < pieces_.size(); ++i) ids_.emplace(pieces_[i], static_cast<int32_t>(i));
    for (const auto& [word, freq] : word_counts) {
      if (freq == 0) continue;
      std::vector<int32_t> symbols;
      size_t pos = 0;
      std::string ch;
      while (pos < word.size()) {
        const size_t begin = pos;
        NextCodepoint(word, &pos);
        ch.assign(symbols.empty() ? "" : kContinuation);
        ch.append(word, begin, pos - begin);
        symbols.push_back(IdOf(ch));
      }
      words_.push_back(std::move(symbols));
      freqs_.push_back(freq);
    }
    piece_counts_.assign(pieces_.size(), 0);
    for (size_t w = 0; w < words_.size(); ++w) {
      for (int32_t s : words_[w]) piece_counts_[s] += freqs_[w];
      AddPairs(static_cast<int32_t>(w), {});
    }
    stamp_.assign(words_.size(), 0);
  }

  std::vector<std::string> TakePieces() { return std::move(pieces_); }
  size_t num_pieces() const { return pieces_.size(); }

  // Index of the best eligible pair, or -1.
  int64_t BestPair(uint64_t min_freq) const {
    int64_t best = -1;
    for (size_t i = 0; i < pairs_.size(); ++i) {
      const Pair& p = pairs_[i];
      if (p.banned || p.count < min_freq || p.count == 0) continue;
      if (best < 0 || Better(p, pairs_[best])) best = static_cast<int64_t>(i);
    }
    return best;
  }

  // Applies the merge; returns false when the pair is banned instead.
  bool Merge(int64_t pair_index) {
    Pair& pair = pairs_[pair_index];
    const int32_t a = pair.a;
    const int32_t b = pair.b;
    const bool initial = !StartsWithContinuation(pieces_[a]);
    std::string merged = pieces_[a] + pieces_[b].substr(kContinuation.size());
    auto existing = ids_.find(merged);
    if ((initial && StartsWithContinuation(merged)) ||
        (existing != ids_.end() && static_cast<size_t>(existing->second) < num_specials_)) {
      // Would be read back as a continuation piece or a special token.
      pair.banned = true;
      return false;
    }
    const int32_t target = IdOf(merged);
    if (static_cast<size_t>(target) >= piece_counts_.size()) piece_counts_.resize(target + 1, 0);

    std::vector<int32_t> touched = std::move(pair.words);
    pair.words.clear();
    ++generation_;
    for (int32_t w : touched) {
      if (stamp_[w] == generation_) continue;
      stamp_[w] = generation_;
      std::vector<int32_t>& symbols = words_[w];
      bool present = false;
      for (size_t i = 0; i + 1 < symbols.size() && !present; ++i) {
        present = symbols[i] == a && symbols[i + 1] == b;
      }
      if (!present) continue;
      const uint64_t freq = freqs_[w];
      std::vector<uint64_t> before = RemovePairs(w);
      std::vector<int32_t> next;
      next.reserve(symbols.size());
      for (size_t i = 0; i < symbols.size(); ++i) {
        if (i + 1 < symbols.size() && symbols[i] == a && symbols[i + 1] == b) {
          next.push_back(target);
          piece_counts_[a] -= freq;
          piece_counts_[b] -= freq;
          piece_counts_[target] += freq;
          ++i;
        } else {
          next.push_back(symbols[i]);
        }
      }
      symbols = std::move(next);
      AddPairs(w, before);
    }
    return true;
  }

 private:
  struct Pair {
    int32_t a;
    int32_t b;
    uint64_t count = 0;
    bool banned = false;
    std::vector<int32_t> words;  // may hold stale or repeated entries
  };

  static uint64_t Key(int32_t a, int32_t b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
  }

  int32_t IdOf(const std::string& piece) {
    auto [it, inserted] = ids_.try_emplace(piece, static_cast<int32_t>(pieces_.size()));
    if (inserted) pieces_.push_back(piece);
    return it->second;
  }

  // count(x) / (count(a) * count(b)) compared by cross multiplication.
  bool Better(const Pair& x, const Pair& y) const {
    using u128 = unsigned __int128;
    const u128 lhs = static_cast<u128>(x.count) * piece_counts_[y.a] * piece_counts_[y.b];
    const u128 rhs = static_cast<u128>(y.count) * piece_counts_[x.a] * piece_counts_[x.b];
    if (lhs != rhs) return lhs > rhs;
    if (x.count != y.count) return x.count > y.count;
    if (pieces_[x.a] != pieces_[y.a]) return pieces_[x.a] < pieces_[y.a];
    return pieces_[x.b] < pieces_[y.b];
  }

  std::vector<uint64_t> RemovePairs(int32_t w) {
    const std::vector<int32_t>& symbols = words_[w];
    std::vector<uint64_t> keys;
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      const uint64_t key = Key(symbols[i], symbols[i + 1]);
      pairs_[pair_index_.at(key)].count -= freqs_[w];
      keys.push_back(key);
    }
    return keys;
  }

  void AddPairs(int32_t w, const std::vector<uint64_t>& before) {
    const std::vector<int32_t>& symbols = words_[w];
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      const uint64_t key = Key(symbols[i], symbols[i + 1]);
      auto [it, inserted] = pair_index_.try_emplace(key, pairs_.size());
      if (inserted) pairs_.push_back(Pair{symbols[i], symbols[i + 1], 0, false, {}});
      Pair& pair = pairs_[it->second];
      pair.count += freqs_[w];
      if (std::find(before.begin(), before.end(), key) == before.end()) pair.words.push_back(w);
    }
  }

  std::vector<std::string> pieces_;
  size_t num_specials_;
  std::unordered_map<std::string, int32_t> ids_;
  std::vector<std::vector<int32_t>> words_;
  std::vector<uint64_t> freqs_;
  std::vector<uint64_t> piece_counts_;
  std::vector<Pair> pairs_;
  std::unordered_map<uint64_t, size_t> pair_index_;
  std::vector<uint32_t> stamp_;
  uint32_t generation_ = 0;
};

}  // namespace

VocabModel TrainWordPiece(const std::map<std::string, uint64_t>& word_counts,
                          const WordPieceOptions& options, WordPieceStats* stats,
                          const LanguageTable& table) {
  std::set<std::string> alphabet;
  for (const auto& [word, freq] : word_counts) {
    if (freq == 0) continue;
    size_t pos = 0;
    while (pos < word.size()) {
      const size_t begin = pos;
      NextCodepoint(word, &pos);
      alphabet.insert(word.substr(begin, pos - begin));
    }
  }
  if (alphabet.empty()) throw DataError("no training words");

  std::vector<std::string> pieces = SpecialTokens(table);
  const size_t num_specials = pieces.size();
  for (const std::string& ch : alphabet) pieces.push_back(ch);
  for (const std::string& ch : alphabet) pieces.push_back(std::string(kContinuation) + ch);
  const size_t initial_size = pieces.size();
  if (options.vocab_size < initial_size) {
    throw std::invalid_argument("vocab_size " + std::to_string(options.vocab_size) +
                                " is below the initial vocabulary of " +
                                std::to_string(initial_size) + " pieces");
  }

  WordPieceStats local;
  local.alphabet_size = 2 * alphabet.size();
  MergeTrainer trainer(word_counts, std::move(pieces), num_specials);
  local.stop_reason = "vocab_size reached";
  while (trainer.num_pieces() < options.vocab_size) {
    const int64_t best = trainer.BestPair(std::max<uint64_t>(options.min_pair_freq, 1));
    if (best < 0) {
      local.stop_reason = "no pair reaches min_pair_freq";
      break;
    }
    if (trainer.Merge(best)) ++local.merges;
  }
  if (stats != nullptr) *stats = local;
  return VocabModel(trainer.TakePieces(), table);
}

std::string FertilityReport::ToJson() const {
  nlohmann::json langs = nlohmann::json::object();
  for (const auto& [lang, e] : languages) {
    langs[lang] = {{"words", e.words},
                   {"pieces", e.pieces},
                   {"unk_words", e.unk_words},
                   {"fertility", e.fertility}};
  }
  return nlohmann::json{{"languages", std::move(langs)}, {"warnings", warnings}}.dump(2);
}

FertilityReport Fertility(const VocabModel& model, std::span<const CleanDocument> corpus) {
  std::map<std::string, FertilityEntry> entries;
  std::vector<int32_t> ids;
  for (const CleanDocument& doc : corpus) {
    FertilityEntry& e = entries[doc.lang];
    const std::string normalized = NormalizeNfc(doc.Text());
    for (std::string_view word : SplitWhitespace(normalized)) {
      ids.clear();
      ++e.words;
      if (auto lang = model.Id(word); lang && model.IsSpecial(*lang) && word.front() == '<') {
        ++e.pieces;
        continue;
      }
      if (!model.EncodeWord(word, &ids)) ++e.unk_words;
      e.pieces += ids.size();
    }
  }
  FertilityReport report;
  for (auto& [lang, e] : entries) {
    if (e.words == 0) {
      report.warnings.push_back("language " + lang + " has no words; omitted");
      continue;
    }
    e.fertility = static_cast<double>(e.pieces) / static_cast<double>(e.words);
    report.languages.emplace(lang, e);
  }
  return report;
}

}  // namespace corpus_forge
