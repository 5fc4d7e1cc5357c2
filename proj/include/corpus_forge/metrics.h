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

// Scoring for classification, chunking (IOB2), extractive QA and sentence
// retrieval, plus per-task and per-language aggregation of scores.

#ifndef CORPUS_FORGE_METRICS_H_
#define CORPUS_FORGE_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_forge/corpus.h"

namespace corpus_forge {

struct LabelRecord {
  std::string id;
  std::string gold;
  std::string pred;
};

// Exact-match fraction. Throws std::invalid_argument when empty.
double Accuracy(std::span<const LabelRecord> records);

struct TagRecord {
  std::string id;
  std::vector<std::string> gold;
  std::vector<std::string> pred;
};

struct Chunk {
  std::string type;
  size_t begin;  // inclusive
  size_t end;    // exclusive
  auto operator<=>(const Chunk&) const = default;
};

// Chunks of an IOB2 sequence. An I-X that does not continue an X chunk opens
// a new one and is counted in `repairs`. Throws std::invalid_argument for
// tags other than O, B-X and I-X.
std::vector<Chunk> ExtractChunks(std::span<const std::string> tags, size_t* repairs = nullptr);

struct ChunkScore {
  uint64_t true_positives = 0;
  uint64_t predicted = 0;
  uint64_t gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  uint64_t repairs = 0;  // in predictions
  std::vector<RecordError> errors;  // excluded records, line = record index + 1
};

// Micro-averaged exact-span F1. Records with unequal lengths or invalid tags
// are excluded and reported. With no chunks on either side P = R = F1 = 1.
ChunkScore ChunkF1(std::span<const TagRecord> records);

struct QaRecord {
  std::string id;
  std::vector<std::string> golds;  // all empty (or none) = unanswerable
  std::string pred;
};

struct QaOptions {
  // Strip punctuation and fold case before comparing tokens.
  bool normalize = true;
};

// Bag-of-whitespace-tokens F1 of one prediction against one gold. Both
// empty scores 1; exactly one empty scores 0.
double TokenF1(std::string_view gold, std::string_view pred, const QaOptions& options = {});

// Max TokenF1 over the golds; with no gold answers, 1 iff pred is empty.
double RecordF1(const QaRecord& record, const QaOptions& options = {});

// Mean RecordF1 times 100. Throws std::invalid_argument when empty.
double SpanF1(std::span<const QaRecord> records, const QaOptions& options = {});

struct Matrix {
  size_t rows = 0;
  size_t dim = 0;
  std::vector<float> data;  // row-major

  std::span<const float> Row(size_t i) const { return {data.data() + i * dim, dim}; }
};

// Binary: uint32 rows, uint32 dim (little-endian), rows*dim float32. Any
// other file is read as JSONL with one float array per line. Throws
// DataError on malformed or ragged input.
Matrix ReadMatrix(const std::filesystem::path& path);
void WriteMatrix(const Matrix& m, const std::filesystem::path& path);

struct RetrievalScore {
  double accuracy = 0.0;
  uint64_t correct = 0;
  uint64_t rows = 0;
  uint64_t zero_norm_rows = 0;  // over both matrices
};

// For every source row, the target row of highest cosine similarity (lowest
// index on ties; similarity with a zero-norm row is -inf) must be the same
// index. Throws std::invalid_argument on shape mismatch or empty input.
RetrievalScore RetrievalAccuracy(const Matrix& source, const Matrix& target);

// Mean of the vectors whose mask entry is true. Throws std::invalid_argument
// when none is, or on size mismatch.
std::vector<double> MeanPool(std::span<const std::vector<float>> vectors,
                             std::span<const bool> mask);

// task -> language -> score
using ScoreTable = std::map<std::string, std::map<std::string, double>>;

struct BenchmarkReport {
  ScoreTable scores;
  std::map<std::string, double> task_averages;      // over the task's languages
  std::map<std::string, double> language_averages;  // over the language's tasks

  std::string ToJson() const;
  // Languages as columns, tasks as rows, one decimal.
  std::string Render() const;
};

BenchmarkReport Aggregate(const ScoreTable& scores);

// Either {task: {lang: score}} for one model or {model: {task: {lang: score}}};
// the depth decides. Single-model input is keyed by "". Throws DataError on
// other shapes or non-numeric scores.
std::map<std::string, ScoreTable> ParseScoreTables(std::string_view json_text);

// Prediction files, one JSON object per line. Bad lines and duplicate ids are
// skipped and reported.
std::vector<LabelRecord> ReadLabelRecords(const std::filesystem::path& path,
                                          std::vector<RecordError>* errors);
std::vector<TagRecord> ReadTagRecords(const std::filesystem::path& path,
                                      std::vector<RecordError>* errors);
std::vector<QaRecord> ReadQaRecords(const std::filesystem::path& path,
                                    std::vector<RecordError>* errors);

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_METRICS_H_
