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

#include "corpus_forge/pretrain.h"

#include <algorithm>
#include <stdexcept>

#include "corpus_forge/errors.h"
#include "corpus_forge/rng.h"
#include "json.hpp"

namespace corpus_forge {

SequencePacker::SequencePacker(const PackOptions& options, const VocabModel& vocab)
    : options_(options) {
  if (options.max_len < (options.cls ? 2u : 1u)) throw std::invalid_argument("max_len too small");
  if (options.cls) {
    auto cls = vocab.cls_id();
    if (!cls) throw std::invalid_argument("vocabulary has no [CLS]");
    cls_id_ = *cls;
  }
}

void SequencePacker::Emit(std::vector<std::vector<int32_t>>* out) {
  if (current_.empty()) return;
  std::vector<int32_t> seq;
  seq.reserve(current_.size() + 1);
  if (options_.cls) seq.push_back(cls_id_);
  seq.insert(seq.end(), current_.begin(), current_.end());
  out->push_back(std::move(seq));
  current_.clear();
}

void SequencePacker::Add(std::span<const int32_t> doc, std::vector<std::vector<int32_t>>* out) {
  if (doc.empty()) return;
  const size_t capacity = Capacity();
  if (!options_.pack || current_.size() + doc.size() > capacity) Emit(out);
  while (doc.size() > capacity) {
    current_.assign(doc.begin(), doc.begin() + capacity);
    Emit(out);
    doc = doc.subspan(capacity);
  }
  current_.insert(current_.end(), doc.begin(), doc.end());
  if (!options_.pack) Emit(out);
}

void SequencePacker::Flush(std::vector<std::vector<int32_t>>* out) { Emit(out); }

std::vector<std::vector<int32_t>> PackSequences(std::span<const std::vector<int32_t>> docs,
                                                const PackOptions& options,
                                                const VocabModel& vocab) {
  SequencePacker packer(options, vocab);
  std::vector<std::vector<int32_t>> out;
  for (const std::vector<int32_t>& doc : docs) packer.Add(doc, &out);
  packer.Flush(&out);
  return out;
}

std::vector<size_t> PretrainExample::MaskedPositions() const {
  std::vector<size_t> positions;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kIgnoreLabel) positions.push_back(i);
  }
  return positions;
}

std::vector<int32_t> PretrainExample::Unmasked() const {
  std::vector<int32_t> ids = input_ids;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kIgnoreLabel) ids[i] = labels[i];
  }
  return ids;
}

std::string PretrainExample::ToJson() const {
  nlohmann::json j = {{"input_ids", input_ids},
                      {"labels", labels},
                      {"masked_positions", MaskedPositions()},
                      {"length", length()}};
  if (boundary) j["boundary"] = *boundary;
  return j.dump();
}

namespace {

void ApplyMask(const VocabModel& vocab, double mask_prob, uint64_t seed, PretrainExample* ex) {
  if (!(mask_prob >= 0.0 && mask_prob < 1.0)) {
    throw std::invalid_argument("mask_prob must lie in [0, 1)");
  }
  const auto mask = vocab.mask_id();
  if (!mask) throw std::invalid_argument("vocabulary has no [MASK]");
  const std::vector<int32_t>& regular = vocab.regular_ids();
  ex->labels.assign(ex->input_ids.size(), kIgnoreLabel);
  Rng rng(seed);
  for (size_t i = 0; i < ex->input_ids.size(); ++i) {
    const int32_t id = ex->input_ids[i];
    if (vocab.IsSpecial(id)) continue;
    if (!rng.Bernoulli(mask_prob)) continue;
    ex->labels[i] = id;
    const double r = rng.Uniform();
    if (r < 0.8) {
      ex->input_ids[i] = *mask;
    } else if (r < 0.9 && !regular.empty()) {
      ex->input_ids[i] = regular[rng.Below(regular.size())];
    }
  }
}

}  // namespace

PretrainExample BuildMlm(std::span<const int32_t> sequence, const VocabModel& vocab,
                         double mask_prob, uint64_t seed) {
  if (sequence.empty()) throw std::invalid_argument("empty sequence");
  PretrainExample ex;
  ex.input_ids.assign(sequence.begin(), sequence.end());
  ApplyMask(vocab, mask_prob, seed, &ex);
  return ex;
}

PretrainExample BuildTlm(const ParallelPair& pair, const VocabModel& vocab, size_t max_len,
                         double mask_prob, uint64_t seed) {
  if (max_len < 3) throw std::invalid_argument("max_len must be at least 3");
  const auto sep = vocab.sep_id();
  if (!sep) throw std::invalid_argument("vocabulary has no [SEP]");
  std::vector<int32_t> source = vocab.Encode(pair.source);
  std::vector<int32_t> target = vocab.Encode(pair.target);
  if (source.empty() || target.empty()) {
    throw DataError("parallel pair " + pair.id + " has an empty side");
  }
  const size_t budget = max_len - 1;
  if (source.size() + target.size() > budget) {
    const size_t total = source.size() + target.size();
    size_t keep_source = std::clamp<size_t>(budget * source.size() / total, 1, budget - 1);
    size_t keep_target = budget - keep_source;
    if (keep_target > target.size()) {
      keep_target = target.size();
      keep_source = budget - keep_target;
    } else if (keep_source > source.size()) {
      keep_source = source.size();
      keep_target = budget - keep_source;
    }
    source.resize(keep_source);
    target.resize(keep_target);
  }
  PretrainExample ex;
  ex.input_ids = std::move(source);
  ex.boundary = ex.input_ids.size();
  ex.input_ids.push_back(*sep);
  ex.input_ids.insert(ex.input_ids.end(), target.begin(), target.end());
  ApplyMask(vocab, mask_prob, seed, &ex);
  return ex;
}

}  // namespace corpus_forge
