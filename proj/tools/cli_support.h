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

// Plumbing shared by the command implementations.

#ifndef CORPUS_FORGE_TOOLS_CLI_SUPPORT_H_
#define CORPUS_FORGE_TOOLS_CLI_SUPPORT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corpus_forge/corpus.h"
#include "json.hpp"

namespace corpus_forge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;

// Global flags plus the action chosen by the parsed subcommand.
struct Context {
  int workers = 1;
  uint64_t seed = 0;
  size_t max_record_errors = 0;
  std::string report;  // overrides <output>.report.json
  std::function<int()> action;
};

// JSON run report: inputs, parameters, counters, record errors, warnings and
// wall time.
class RunReport {
 public:
  RunReport(std::string command, const Context& ctx);

  void Input(const std::string& key, const std::filesystem::path& path);
  void Output(const std::string& key, const std::filesystem::path& path);
  void Param(const std::string& key, nlohmann::json value);
  void Counter(const std::string& key, nlohmann::json value);
  void Warning(std::string message);
  void Warnings(const std::vector<std::string>& messages);
  // Errors from one input; each counts against the record-error budget.
  void RecordErrors(const std::string& source, const std::vector<RecordError>& errors);
  nlohmann::json& result() { return json_["result"]; }

  size_t record_errors() const { return record_errors_; }

  // Writes the report next to `primary_output` unless --report was given,
  // then returns the exit code for the record-error budget.
  int Finish(const std::filesystem::path& primary_output);

 private:
  const Context& ctx_;
  nlohmann::json json_;
  size_t record_errors_ = 0;
  std::chrono::steady_clock::time_point start_;
};

// Adds `--input`, `--format` and `--lang` to a subcommand.
struct CorpusInput {
  std::string path;
  std::string format = "jsonl";
  std::string default_lang;

  void AddOptions(CLI::App* sub, bool required = true);
  // Whole corpus; unreadable or unresolvable records go to the report.
  std::vector<CleanDocument> Read(RunReport* report) const;
};

// Streams documents in file order in batches of `batch_size`.
void ForEachBatch(const CorpusInput& input, RunReport* report, size_t batch_size,
                  const std::function<void(std::vector<CleanDocument>)>& fn);

// Adds `--input` (file or directory) and `--format` (auto, text or jsonl;
// auto picks jsonl for .jsonl files).
void AddTextInput(CLI::App* sub, std::string* path, std::string* format);

// Document texts in file order, without language resolution (shards and
// plain text need no language). JSONL paragraphs are joined by blank lines.
// A directory path is read file by file in name order.
void ForEachText(const std::string& path, const std::string& format, RunReport* report,
                 size_t batch_size, const std::function<void(std::vector<std::string>)>& fn);

std::ofstream OpenOutput(const std::filesystem::path& path);
void WriteText(const std::filesystem::path& path, const std::string& text);
std::string ReadText(const std::filesystem::path& path);

// Adds a subcommand whose parse callback selects `run` on `opts` as the
// action.
template <typename Options>
CLI::App* AddCommand(CLI::App& app, Context& ctx, const std::string& name, const std::string& help,
                     std::shared_ptr<Options> opts, int (*run)(const Options&, const Context&)) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->callback([&ctx, opts, run] { ctx.action = [&ctx, opts, run] { return run(*opts, ctx); }; });
  return sub;
}

// Subcommand registration, one group per file.
void RegisterCorpusCommands(CLI::App& app, Context& ctx);
void RegisterLidCommands(CLI::App& app, Context& ctx);
void RegisterSamplingCommands(CLI::App& app, Context& ctx);
void RegisterVocabCommands(CLI::App& app, Context& ctx);
void RegisterPretrainCommands(CLI::App& app, Context& ctx);
void RegisterMetricsCommands(CLI::App& app, Context& ctx);

}  // namespace corpus_forge::cli

#endif  // CORPUS_FORGE_TOOLS_CLI_SUPPORT_H_
