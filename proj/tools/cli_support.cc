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

#include "cli_support.h"

#include <algorithm>
#include <iostream>
#include <sstream>

#include "corpus_forge/errors.h"

namespace corpus_forge::cli {

using nlohmann::json;

namespace {

// Keeps reports small on very dirty inputs; the count stays exact.
constexpr size_t kListedRecordErrors = 100;

}  // namespace

RunReport::RunReport(std::string command, const Context& ctx)
    : ctx_(ctx), start_(std::chrono::steady_clock::now()) {
  json_["command"] = std::move(command);
  json_["inputs"] = json::object();
  json_["outputs"] = json::object();
  json_["parameters"] = {{"workers", ctx.workers},
                         {"seed", ctx.seed},
                         {"max_record_errors", ctx.max_record_errors}};
  json_["counters"] = json::object();
  json_["record_errors"] = {{"count", 0}, {"listed", json::array()}};
  json_["warnings"] = json::array();
}

void RunReport::Input(const std::string& key, const std::filesystem::path& path) {
  json_["inputs"][key] = path.string();
}

void RunReport::Output(const std::string& key, const std::filesystem::path& path) {
  json_["outputs"][key] = path.string();
}

void RunReport::Param(const std::string& key, json value) {
  json_["parameters"][key] = std::move(value);
}

void RunReport::Counter(const std::string& key, json value) {
  json_["counters"][key] = std::move(value);
}

void RunReport::Warning(std::string message) { json_["warnings"].push_back(std::move(message)); }

void RunReport::Warnings(const std::vector<std::string>& messages) {
  for (const std::string& m : messages) Warning(m);
}

void RunReport::RecordErrors(const std::string& source, const std::vector<RecordError>& errors) {
  json& listed = json_["record_errors"]["listed"];
  for (const RecordError& e : errors) {
    if (listed.size() < kListedRecordErrors) {
      listed.push_back({{"source", source}, {"line", e.line}, {"message", e.message}});
    }
  }
  record_errors_ += errors.size();
  json_["record_errors"]["count"] = record_errors_;
}

int RunReport::Finish(const std::filesystem::path& primary_output) {
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  json_["wall_time_seconds"] = elapsed.count();
  const bool over_budget = record_errors_ > ctx_.max_record_errors;
  json_["status"] = over_budget ? "record-error budget exceeded" : "ok";
  const std::filesystem::path path =
      ctx_.report.empty() ? std::filesystem::path(primary_output.string() + ".report.json")
                          : std::filesystem::path(ctx_.report);
  WriteText(path, json_.dump(2) + "\n");
  if (over_budget) {
    std::cerr << "error: " << record_errors_ << " record errors exceed the budget of "
              << ctx_.max_record_errors << " (see " << path.string() << ")\n";
    return kExitData;
  }
  return kExitOk;
}

void CorpusInput::AddOptions(CLI::App* sub, bool required) {
  CLI::Option* in = sub->add_option("-i,--input", path, "Corpus file")->check(CLI::ExistingFile);
  if (required) in->required();
  sub->add_option("--format", format, "Corpus format: jsonl or text")
      ->check(CLI::IsMember({"jsonl", "text"}))
      ->capture_default_str();
  sub->add_option("--lang", default_lang, "Language for records without a lang field");
}

void ForEachBatch(const CorpusInput& input, RunReport* report, size_t batch_size,
                  const std::function<void(std::vector<CleanDocument>)>& fn) {
  report->Input("corpus", input.path);
  CorpusReader reader(input.path, ParseCorpusFormat(input.format));
  std::vector<RecordError> conversion_errors;
  std::vector<CleanDocument> batch;
  while (std::optional<RawDocument> raw = reader.Next()) {
    try {
      batch.push_back(ToCleanDocument(*raw, input.default_lang));
    } catch (const DataError& e) {
      conversion_errors.push_back({reader.lines_read(), e.what()});
      continue;
    }
    if (batch.size() == batch_size) {
      fn(std::move(batch));
      batch.clear();
    }
  }
  if (!batch.empty()) fn(std::move(batch));
  std::vector<RecordError> errors = reader.errors();
  errors.insert(errors.end(), conversion_errors.begin(), conversion_errors.end());
  std::sort(errors.begin(), errors.end(),
            [](const RecordError& a, const RecordError& b) { return a.line < b.line; });
  report->RecordErrors(input.path, errors);
}

std::vector<CleanDocument> CorpusInput::Read(RunReport* report) const {
  std::vector<CleanDocument> docs;
  ForEachBatch(*this, report, 4096, [&](std::vector<CleanDocument> batch) {
    for (CleanDocument& d : batch) docs.push_back(std::move(d));
  });
  return docs;
}

void AddTextInput(CLI::App* sub, std::string* path, std::string* format) {
  sub->add_option("-i,--input", *path,
                  "Text (one document per line) or jsonl; a directory reads every file in name "
                  "order")
      ->required()
      ->check(CLI::ExistingPath);
  sub->add_option("--format", *format, "auto, text or jsonl")
      ->check(CLI::IsMember({"auto", "jsonl", "text"}))
      ->capture_default_str();
}

void ForEachText(const std::string& path, const std::string& format, RunReport* report,
                 size_t batch_size, const std::function<void(std::vector<std::string>)>& fn) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no files in " + path);
  } else {
    files.push_back(path);
  }
  std::vector<std::string> batch;
  for (const std::filesystem::path& file : files) {
    report->Input(files.size() == 1 ? "text" : "text:" + file.filename().string(), file);
    const std::string resolved =
        format != "auto" ? format : (file.extension() == ".jsonl" ? "jsonl" : "text");
    CorpusReader reader(file, ParseCorpusFormat(resolved));
    while (std::optional<RawDocument> raw = reader.Next()) {
      if (raw->paragraphs.empty()) {
        batch.push_back(std::move(raw->text));
      } else {
        std::string text;
        for (const std::string& p : raw->paragraphs) text += (text.empty() ? "" : "\n\n") + p;
        batch.push_back(std::move(text));
      }
      if (batch.size() == batch_size) {
        fn(std::move(batch));
        batch.clear();
      }
    }
    report->RecordErrors(file.string(), reader.errors());
  }
  if (!batch.empty()) fn(std::move(batch));
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = OpenOutput(path);
  out << text;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace corpus_forge::cli
