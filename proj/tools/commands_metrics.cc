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

// score <task> and aggregate.

#include <iostream>

#include "cli_support.h"
#include "corpus_forge/errors.h"
#include "corpus_forge/metrics.h"

namespace corpus_forge::cli {
namespace {

using nlohmann::json;

struct ScoreOptions {
  std::string task;
  std::string predictions;
  std::string source;
  std::string target;
  std::string output;
  bool normalize = true;
};

int RunScore(const ScoreOptions& o, const Context& ctx) {
  RunReport report("score " + o.task, ctx);
  json score = {{"task", o.task}};
  const bool needs_predictions = o.task != "retrieval";
  if (needs_predictions && o.predictions.empty()) {
    throw ConfigError("score " + o.task + " needs --predictions");
  }
  if (!needs_predictions && (o.source.empty() || o.target.empty())) {
    throw ConfigError("score retrieval needs --source and --target");
  }
  std::vector<RecordError> errors;
  if (o.task == "accuracy") {
    report.Input("predictions", o.predictions);
    const auto records = ReadLabelRecords(o.predictions, &errors);
    if (records.empty()) throw DataError("no valid records in " + o.predictions);
    const double acc = Accuracy(records);
    score["metric"] = "accuracy";
    score["value"] = acc;
    score["percent"] = 100.0 * acc;
    score["records"] = records.size();
  } else if (o.task == "chunk") {
    report.Input("predictions", o.predictions);
    const auto records = ReadTagRecords(o.predictions, &errors);
    const ChunkScore s = ChunkF1(records);
    // Numbered by valid record, not by file line.
    report.RecordErrors(o.predictions + " (records)", s.errors);
    score["metric"] = "chunk_f1";
    score["value"] = s.f1;
    score["percent"] = 100.0 * s.f1;
    score["precision"] = s.precision;
    score["recall"] = s.recall;
    score["true_positives"] = s.true_positives;
    score["predicted_chunks"] = s.predicted;
    score["gold_chunks"] = s.gold;
    score["repairs"] = s.repairs;
    score["records"] = records.size() - s.errors.size();
    report.Counter("iob2_repairs", s.repairs);
  } else if (o.task == "qa") {
    report.Input("predictions", o.predictions);
    const auto records = ReadQaRecords(o.predictions, &errors);
    if (records.empty()) throw DataError("no valid records in " + o.predictions);
    const double f1 = SpanF1(records, {.normalize = o.normalize});
    score["metric"] = "span_f1";
    score["value"] = f1 / 100.0;
    score["percent"] = f1;
    score["records"] = records.size();
    report.Param("normalize", o.normalize);
  } else {
    report.Input("source", o.source);
    report.Input("target", o.target);
    const Matrix src = ReadMatrix(o.source);
    const Matrix tgt = ReadMatrix(o.target);
    if (src.rows != tgt.rows || src.dim != tgt.dim) {
      throw DataError("embedding shapes differ: " + std::to_string(src.rows) + "x" +
                      std::to_string(src.dim) + " vs " + std::to_string(tgt.rows) + "x" +
                      std::to_string(tgt.dim));
    }
    const RetrievalScore s = RetrievalAccuracy(src, tgt);
    score["metric"] = "retrieval_accuracy";
    score["value"] = s.accuracy;
    score["percent"] = 100.0 * s.accuracy;
    score["correct"] = s.correct;
    score["records"] = s.rows;
    score["zero_norm_rows"] = s.zero_norm_rows;
    if (s.zero_norm_rows > 0) {
      report.Warning(std::to_string(s.zero_norm_rows) + " zero-norm rows scored as -inf");
    }
  }
  report.RecordErrors(needs_predictions ? o.predictions : o.source, errors);
  WriteText(o.output, score.dump(2) + "\n");
  report.Output("score", o.output);
  report.result() = score;
  return report.Finish(o.output);
}

struct AggregateOptions {
  std::string input;
  std::string output;
  std::string table;
};

int RunAggregate(const AggregateOptions& o, const Context& ctx) {
  RunReport report("aggregate", ctx);
  report.Input("scores", o.input);
  const auto tables = ParseScoreTables(ReadText(o.input));
  json out;
  std::string rendered;
  if (tables.size() == 1 && tables.begin()->first.empty()) {
    const BenchmarkReport r = Aggregate(tables.begin()->second);
    out = json::parse(r.ToJson());
    rendered = r.Render();
  } else {
    out = json::object();
    for (const auto& [model, scores] : tables) {
      const BenchmarkReport r = Aggregate(scores);
      out[model] = json::parse(r.ToJson());
      rendered += model + "\n" + r.Render() + "\n";
    }
  }
  WriteText(o.output, out.dump(2) + "\n");
  report.Output("aggregate", o.output);
  if (o.table.empty()) {
    std::cout << rendered;
  } else {
    WriteText(o.table, rendered);
    report.Output("table", o.table);
  }
  report.Counter("models", tables.size());
  return report.Finish(o.output);
}

}  // namespace

void RegisterMetricsCommands(CLI::App& app, Context& ctx) {
  {
    auto o = std::make_shared<ScoreOptions>();
    CLI::App* sub = AddCommand(app, ctx, "score", "Score predictions for one task", o, &RunScore);
    sub->add_option("task", o->task, "accuracy, chunk, qa or retrieval")
        ->required()
        ->check(CLI::IsMember({"accuracy", "chunk", "qa", "retrieval"}));
    sub->add_option("-p,--predictions", o->predictions, "Prediction records (jsonl)")
        ->check(CLI::ExistingFile);
    sub->add_option("--source", o->source, "Source embeddings (retrieval)")
        ->check(CLI::ExistingFile);
    sub->add_option("--target", o->target, "Target embeddings (retrieval)")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o->output, "Score (json)")->required();
    sub->add_flag("--normalize,!--no-normalize", o->normalize,
                  "QA: strip punctuation and fold case")
        ->capture_default_str();
  }
  {
    auto o = std::make_shared<AggregateOptions>();
    CLI::App* sub = AddCommand(app, ctx, "aggregate", "Task and language averages of scores", o,
                               &RunAggregate);
    sub->add_option("-i,--input", o->input, "Scores: {task: {lang: x}} or {model: {...}}")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o->output, "Averages (json)")->required();
    sub->add_option("--table", o->table, "Rendered table; default: standard output");
  }
}

}  // namespace corpus_forge::cli
