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

// Masked and translation language modeling examples built from tokenized
// text. Only the data side; no training happens here.

#ifndef CORPUS_FORGE_PRETRAIN_H_
#define CORPUS_FORGE_PRETRAIN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpus_forge/vocab.h"

namespace corpus_forge {

inline constexpr int32_t kIgnoreLabel = -100;
inline constexpr size_t kDefaultMaxLen = 512;
inline constexpr double kDefaultMaskProb = 0.15;

struct PackOptions {
  size_t max_len = kDefaultMaxLen;
  // Put several documents in one sequence; otherwise one document (or a
  // piece of an oversized one) per sequence.
  bool pack = true;
  // Start every sequence with [CLS]; it takes one of the max_len slots.
  bool cls = false;
};

// Streaming packer. Documents are appended whole while they fit; a document
// that does not fit starts a new sequence, and one longer than a sequence is
// split into max_len-sized continuation sequences.
class SequencePacker {
 public:
  // Throws std::invalid_argument for max_len too small to hold content, or
  // when cls is requested and the vocabulary has no [CLS].
  SequencePacker(const PackOptions& options, const VocabModel& vocab);

  // Appends completed sequences to `out`. Empty documents are ignored.
  void Add(std::span<const int32_t> doc, std::vector<std::vector<int32_t>>* out);
  void Flush(std::vector<std::vector<int32_t>>* out);

 private:
  void Emit(std::vector<std::vector<int32_t>>* out);
  size_t Capacity() const { return options_.max_len - (options_.cls ? 1 : 0); }

  PackOptions options_;
  int32_t cls_id_ = -1;
  std::vector<int32_t> current_;
};

std::vector<std::vector<int32_t>> PackSequences(std::span<const std::vector<int32_t>> docs,
                                                const PackOptions& options,
                                                const VocabModel& vocab);

struct PretrainExample {
  std::vector<int32_t> input_ids;
  // Original id at each selected position, kIgnoreLabel elsewhere.
  std::vector<int32_t> labels;
  // Index of [SEP] (= source length) for translation pairs.
  std::optional<size_t> boundary;

  size_t length() const { return input_ids.size(); }
  std::vector<size_t> MaskedPositions() const;
  // input_ids with every labeled position restored.
  std::vector<int32_t> Unmasked() const;
  std::string ToJson() const;  // one line
};

// Selects each non-special position with probability mask_prob; a selected
// position becomes [MASK] with probability 0.8, a uniformly drawn regular
// piece with probability 0.1, and stays unchanged otherwise. Throws
// std::invalid_argument for mask_prob outside [0, 1), an empty sequence, or
// a vocabulary without [MASK].
PretrainExample BuildMlm(std::span<const int32_t> sequence, const VocabModel& vocab,
                         double mask_prob, uint64_t seed);

struct ParallelPair {
  std::string id;
  std::string source;  // Indic side
  std::string target;  // English side
};

// [source][SEP][target]; when too long, both sides are cut in proportion to
// their lengths (each keeps at least one piece) so the total is max_len.
// Throws DataError when a side tokenizes to nothing, std::invalid_argument
// for max_len < 3 or a vocabulary without [SEP].
PretrainExample BuildTlm(const ParallelPair& pair, const VocabModel& vocab, size_t max_len,
                         double mask_prob, uint64_t seed);

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_PRETRAIN_H_
