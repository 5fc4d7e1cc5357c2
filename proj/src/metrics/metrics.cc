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

#include "corpus_forge/metrics.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "corpus_forge/errors.h"
#include "corpus_forge/unicode.h"
#include "json.hpp"

namespace corpus_forge {

using nlohmann::json;

double Accuracy(std::span<const LabelRecord> records) {
  if (records.empty()) throw std::invalid_argument("accuracy of zero records");
  size_t correct = 0;
  for (const LabelRecord& r : records) correct += r.gold == r.pred ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

std::vector<Chunk> ExtractChunks(std::span<const std::string> tags, size_t* repairs) {
  std::vector<Chunk> chunks;
  bool open = false;
  for (size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag == "O") {
      open = false;
      continue;
    }
    if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
      throw std::invalid_argument("invalid IOB2 tag: " + tag);
    }
    const std::string_view type = std::string_view(tag).substr(2);
    if (tag[0] == 'I' && open && chunks.back().type == type) {
      chunks.back().end = i + 1;
      continue;
    }
    if (tag[0] == 'I' && repairs != nullptr) ++*repairs;
    chunks.push_back(Chunk{std::string(type), i, i + 1});
    open = true;
  }
  return chunks;
}

ChunkScore ChunkF1(std::span<const TagRecord> records) {
  ChunkScore score;
  for (size_t r = 0; r < records.size(); ++r) {
    const TagRecord& rec = records[r];
    if (rec.gold.size() != rec.pred.size()) {
      score.errors.push_back({r + 1, "record " + rec.id + ": gold has " +
                                         std::to_string(rec.gold.size()) + " tags, prediction " +
                                         std::to_string(rec.pred.size())});
      continue;
    }
    std::vector<Chunk> gold;
    std::vector<Chunk> pred;
    size_t repairs = 0;
    try {
      gold = ExtractChunks(rec.gold);
      pred = ExtractChunks(rec.pred, &repairs);
    } catch (const std::invalid_argument& e) {
      score.errors.push_back({r + 1, "record " + rec.id + ": " + e.what()});
      continue;
    }
    score.repairs += repairs;
    score.gold += gold.size();
    score.predicted += pred.size();
    // Both lists are in start order and chunks within a list do not overlap.
    size_t g = 0;
    size_t p = 0;
    while (g < gold.size() && p < pred.size()) {
      if (gold[g] == pred[p]) {
        ++score.true_positives;
        ++g;
        ++p;
      } else if (gold[g].begin < pred[p].begin ||
                 (gold[g].begin == pred[p].begin && gold[g] < pred[p])) {
        ++g;
      } else {
        ++p;
      }
    }
  }
  if (score.gold == 0 && score.predicted == 0) {
    score.precision = score.recall = score.f1 = 1.0;
    return score;
  }
  const double tp = static_cast<double>(score.true_positives);
  score.precision = score.predicted == 0 ? 0.0 : tp / static_cast<double>(score.predicted);
  score.recall = score.gold == 0 ? 0.0 : tp / static_cast<double>(score.gold);
  const double sum = score.precision + score.recall;
  score.f1 = sum == 0.0 ? 0.0 : 2.0 * score.precision * score.recall / sum;
  return score;
}

namespace {

std::vector<std::string> QaTokens(std::string_view text, const QaOptions& options) {
  std::string prepared =
      options.normalize ? FoldCase(StripPunctuation(NormalizeNfc(text))) : std::string(text);
  std::vector<std::string> tokens;
  for (std::string_view t : SplitWhitespace(prepared)) tokens.emplace_back(t);
  return tokens;
}

double BagF1(const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
  if (gold.empty() && pred.empty()) return 1.0;
  if (gold.empty() || pred.empty()) return 0.0;
  std::unordered_map<std::string, int64_t> counts;
  for (const std::string& t : gold) ++counts[t];
  size_t overlap = 0;
  for (const std::string& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double TokenF1(std::string_view gold, std::string_view pred, const QaOptions& options) {
  return BagF1(QaTokens(gold, options), QaTokens(pred, options));
}

double RecordF1(const QaRecord& record, const QaOptions& options) {
  const std::vector<std::string> pred = QaTokens(record.pred, options);
  if (record.golds.empty()) return pred.empty() ? 1.0 : 0.0;
  double best = 0.0;
  for (const std::string& gold : record.golds) {
    best = std::max(best, BagF1(QaTokens(gold, options), pred));
  }
  return best;
}

double SpanF1(std::span<const QaRecord> records, const QaOptions& options) {
  if (records.empty()) throw std::invalid_argument("F1 of zero records");
  double sum = 0.0;
  for (const QaRecord& r : records) sum += RecordF1(r, options);
  return 100.0 * sum / static_cast<double>(records.size());
}

Matrix ReadMatrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Matrix m;
  if (bytes.size() >= 8) {
    uint32_t header[2];
    std::memcpy(header, bytes.data(), sizeof(header));
    const uint64_t cells = static_cast<uint64_t>(header[0]) * header[1];
    if (bytes.size() == 8 + 4 * cells) {
      m.rows = header[0];
      m.dim = header[1];
      m.data.resize(cells);
      std::memcpy(m.data.data(), bytes.data() + 8, 4 * cells);
      return m;
    }
  }
  std::istringstream lines(bytes);
  std::string line;
  size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error&) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": not a JSON array");
    }
    if (!row.is_array() || row.empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected a float array");
    }
    if (m.rows == 0) m.dim = row.size();
    if (row.size() != m.dim) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    for (const json& v : row) {
      if (!v.is_number()) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": non-numeric value");
      }
      m.data.push_back(v.get<float>());
    }
    ++m.rows;
  }
  return m;
}

void WriteMatrix(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  const uint32_t header[2] = {static_cast<uint32_t>(m.rows), static_cast<uint32_t>(m.dim)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(float)));
}

namespace {

std::vector<double> RowNorms(const Matrix& m) {
  std::vector<double> norms(m.rows);
  for (size_t i = 0; i < m.rows; ++i) {
    double sq = 0.0;
    for (float v : m.Row(i)) sq += static_cast<double>(v) * v;
    norms[i] = std::sqrt(sq);
  }
  return norms;
}

}  // namespace

RetrievalScore RetrievalAccuracy(const Matrix& source, const Matrix& target) {
  if (source.rows == 0) throw std::invalid_argument("empty embedding matrix");
  if (source.rows != target.rows || source.dim != target.dim) {
    throw std::invalid_argument("embedding matrices differ in shape");
  }
  const std::vector<double> src_norm = RowNorms(source);
  const std::vector<double> tgt_norm = RowNorms(target);
  RetrievalScore score;
  score.rows = source.rows;
  for (double n : src_norm) score.zero_norm_rows += n == 0.0 ? 1 : 0;
  for (double n : tgt_norm) score.zero_norm_rows += n == 0.0 ? 1 : 0;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < source.rows; ++i) {
    const std::span<const float> s = source.Row(i);
    size_t best = 0;
    double best_sim = kNegInf;
    for (size_t j = 0; j < target.rows; ++j) {
      double sim = kNegInf;
      if (src_norm[i] > 0.0 && tgt_norm[j] > 0.0) {
        const std::span<const float> t = target.Row(j);
        double dot = 0.0;
        for (size_t k = 0; k < source.dim; ++k) dot += static_cast<double>(s[k]) * t[k];
        sim = dot / (src_norm[i] * tgt_norm[j]);
      }
      if (j == 0 || sim > best_sim) {
        best = j;
        best_sim = sim;
      }
    }
    score.correct += best == i ? 1 : 0;
  }
  score.accuracy = static_cast<double>(score.correct) / static_cast<double>(score.rows);
  return score;
}

std::vector<double> MeanPool(std::span<const std::vector<float>> vectors,
                             std::span<const bool> mask) {
  if (vectors.size() != mask.size()) throw std::invalid_argument("mask size mismatch");
  std::vector<double> sum;
  size_t n = 0;
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (!mask[i]) continue;
    if (n == 0) sum.assign(vectors[i].size(), 0.0);
    if (vectors[i].size() != sum.size()) throw std::invalid_argument("vector size mismatch");
    for (size_t k = 0; k < sum.size(); ++k) sum[k] += vectors[i][k];
    ++n;
  }
  if (n == 0) throw std::invalid_argument("every position is masked");
  for (double& v : sum) v /= static_cast<double>(n);
  return sum;
}

BenchmarkReport Aggregate(const ScoreTable& scores) {
  BenchmarkReport report;
  report.scores = scores;
  std::map<std::string, std::pair<double, size_t>> by_lang;
  for (const auto& [task, langs] : scores) {
    if (langs.empty()) continue;
    double sum = 0.0;
    for (const auto& [lang, value] : langs) {
      sum += value;
      by_lang[lang].first += value;
      ++by_lang[lang].second;
    }
    report.task_averages[task] = sum / static_cast<double>(langs.size());
  }
  for (const auto& [lang, acc] : by_lang) {
    report.language_averages[lang] = acc.first / static_cast<double>(acc.second);
  }
  return report;
}

std::string BenchmarkReport::ToJson() const {
  return json{{"scores", scores},
              {"task_averages", task_averages},
              {"language_averages", language_averages}}
      .dump(2);
}

namespace {

std::string OneDecimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::string BenchmarkReport::Render() const {
  std::set<std::string> langs;
  for (const auto& [task, row] : scores) {
    for (const auto& [lang, v] : row) langs.insert(lang);
  }
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"task"};
  header.insert(header.end(), langs.begin(), langs.end());
  header.push_back("avg");
  cells.push_back(header);
  for (const auto& [task, row] : scores) {
    std::vector<std::string> line = {task};
    for (const std::string& lang : langs) {
      auto it = row.find(lang);
      line.push_back(it == row.end() ? "-" : OneDecimal(it->second));
    }
    auto avg = task_averages.find(task);
    line.push_back(avg == task_averages.end() ? "-" : OneDecimal(avg->second));
    cells.push_back(std::move(line));
  }
  std::vector<std::string> footer = {"avg"};
  for (const std::string& lang : langs) footer.push_back(OneDecimal(language_averages.at(lang)));
  footer.push_back("");
  cells.push_back(std::move(footer));

  std::vector<size_t> widths(header.size(), 0);
  for (const auto& line : cells) {
    for (size_t c = 0; c < line.size(); ++c) {
      widths[c] = std::max(widths[c], CodepointCount(line[c]));
    }
  }
  std::string out;
  for (const auto& line : cells) {
    std::string text;
    for (size_t c = 0; c < line.size(); ++c) {
      if (c > 0) text += "  ";
      const size_t pad = widths[c] - CodepointCount(line[c]);
      if (c == 0) {
        text += line[c] + std::string(pad, ' ');
      } else {
        text += std::string(pad, ' ') + line[c];
      }
    }
    out += std::string(TrimWhitespace(text)) + "\n";
  }
  return out;
}

namespace {

ScoreTable ParseTasks(const json& j) {
  ScoreTable table;
  for (const auto& [task, langs] : j.items()) {
    if (!langs.is_object()) throw DataError("task " + task + " is not an object");
    auto& row = table[task];
    for (const auto& [lang, value] : langs.items()) {
      if (!value.is_number()) throw DataError("score " + task + "/" + lang + " is not a number");
      row[lang] = value.get<double>();
    }
  }
  return table;
}

}  // namespace

std::map<std::string, ScoreTable> ParseScoreTables(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid score JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("score JSON must be an object");
  // Depth 3 when the first leaf sits two objects down.
  bool nested = false;
  for (const auto& [k1, v1] : j.items()) {
    if (!v1.is_object()) throw DataError("score JSON entry " + k1 + " is not an object");
    for (const auto& [k2, v2] : v1.items()) {
      nested = v2.is_object();
      break;
    }
    break;
  }
  std::map<std::string, ScoreTable> out;
  if (!nested) {
    out[""] = ParseTasks(j);
    return out;
  }
  for (const auto& [model, tasks] : j.items()) {
    if (!tasks.is_object()) throw DataError("model " + model + " is not an object");
    out[model] = ParseTasks(tasks);
  }
  return out;
}

namespace {

// Reads JSONL objects with a unique string "id", calling `parse` on each.
template <typename Record>
std::vector<Record> ReadRecords(const std::filesystem::path& path,
                                std::vector<RecordError>* errors,
                                const std::function<Record(const json&)>& parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<Record> records;
  std::unordered_set<std::string> ids;
  std::string line;
  size_t line_no = 0;
  auto fail = [&](std::string message) {
    if (errors != nullptr) errors->push_back({line_no, std::move(message)});
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    try {
      const json j = json::parse(line);
      if (!j.is_object()) {
        fail("not a JSON object");
        continue;
      }
      std::string id;
      if (j.contains("id") && j["id"].is_string()) {
        id = j["id"].get<std::string>();
      } else if (j.contains("id") && j["id"].is_number_integer()) {
        id = j["id"].dump();
      } else {
        fail("missing id");
        continue;
      }
      if (!ids.insert(id).second) {
        fail("duplicate id " + id);
        continue;
      }
      Record r = parse(j);
      r.id = id;
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      fail(e.what());
    } catch (const DataError& e) {
      fail(e.what());
    }
  }
  return records;
}

std::string LabelText(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::vector<std::string> Tags(const json& v) {
  if (!v.is_array()) throw DataError("tags must be an array");
  return v.get<std::vector<std::string>>();
}

}  // namespace

std::vector<LabelRecord> ReadLabelRecords(const std::filesystem::path& path,
                                          std::vector<RecordError>* errors) {
  return ReadRecords<LabelRecord>(path, errors, [](const json& j) {
    return LabelRecord{"", LabelText(j.at("gold")), LabelText(j.at("pred"))};
  });
}

std::vector<TagRecord> ReadTagRecords(const std::filesystem::path& path,
                                      std::vector<RecordError>* errors) {
  return ReadRecords<TagRecord>(path, errors, [](const json& j) {
    return TagRecord{"", Tags(j.at("gold")), Tags(j.at("pred"))};
  });
}

std::vector<QaRecord> ReadQaRecords(const std::filesystem::path& path,
                                    std::vector<RecordError>* errors) {
  return ReadRecords<QaRecord>(path, errors, [](const json& j) {
    QaRecord r;
    const json& gold = j.at("gold");
    if (gold.is_string()) {
      if (!TrimWhitespace(gold.get_ref<const std::string&>()).empty()) {
        r.golds.push_back(gold.get<std::string>());
      }
    } else if (gold.is_array()) {
      for (const json& g : gold) {
        const std::string text = g.get<std::string>();
        if (!TrimWhitespace(text).empty()) r.golds.push_back(text);
      }
    } else if (!gold.is_null()) {
      throw DataError("gold must be a string or an array of strings");
    }
    r.pred = j.at("pred").is_null() ? "" : j.at("pred").get<std::string>();
    return r;
  });
}

}  // namespace corpus_forge
