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

// clean, stats, queries, dedup and to-deva.

#include <memory>

#include "cli_support.h"
#include "corpus_forge/errors.h"
#include "corpus_forge/filters.h"
#include "corpus_forge/lid.h"
#include "corpus_forge/scripts.h"

namespace corpus_forge::cli {
namespace {

using nlohmann::json;

constexpr size_t kBatchSize = 1024;

struct CleanOptions {
  CorpusInput input;
  std::string output;
  std::string lid_model;
  std::vector<std::string> blacklists;  // lang=path
  std::vector<std::string> stages = {"lid", "script-ratio", "offensive", "punctuation-length",
                                     "dedup"};
  double threshold = kDefaultScriptThreshold;
  size_t min_words = kDefaultMinWords;
  bool document_level = false;
};

int RunClean(const CleanOptions& o, const Context& ctx) {
  RunReport report("clean", ctx);
  PipelineConfig config;
  config.stages.clear();
  for (const std::string& name : o.stages) config.stages.push_back(ParseStage(name));
  config.script_threshold = o.threshold;
  config.min_words = o.min_words;
  config.offensive_document_level = o.document_level;

  std::shared_ptr<const LidModel> lid;
  if (!o.lid_model.empty()) {
    lid = std::make_shared<LidModel>(LidModel::Load(o.lid_model));
    report.Input("lid_model", o.lid_model);
  }
  std::vector<Blacklist> blacklists;
  for (const std::string& spec : o.blacklists) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw ConfigError("--blacklist expects lang=path, got " + spec);
    }
    const std::string path = spec.substr(eq + 1);
    if (!std::filesystem::is_regular_file(path)) throw ConfigError("no blacklist file " + path);
    blacklists.push_back(LoadBlacklist(path, spec.substr(0, eq)));
    report.Input("blacklist:" + spec.substr(0, eq), path);
  }
  const Pipeline pipeline(config, lid, std::move(blacklists));
  report.Param("stages", o.stages);
  report.Param("threshold", o.threshold);
  report.Param("min_words", o.min_words);
  report.Param("offensive_document_level", o.document_level);

  std::ofstream out = OpenOutput(o.output);
  Pipeline::Run run(pipeline, ctx.workers);
  uint64_t written = 0;
  ForEachBatch(o.input, &report, kBatchSize, [&](std::vector<CleanDocument> batch) {
    for (const CleanDocument& doc : run.Process(std::move(batch))) {
      WriteJsonl(doc, out);
      ++written;
    }
  });
  out.close();
  report.Output("corpus", o.output);
  report.Counter("documents_written", written);
  report.result() = json::parse(run.report().ToJson());
  return report.Finish(o.output);
}

struct StatsOptions {
  CorpusInput input;
  std::string output;
};

int RunStats(const StatsOptions& o, const Context& ctx) {
  RunReport report("stats", ctx);
  CorpusStats stats;
  ForEachBatch(o.input, &report, kBatchSize, [&](std::vector<CleanDocument> batch) {
    for (const CleanDocument& doc : batch) AddToStats(doc, &stats);
  });
  if (!stats.unknown_languages.empty()) {
    report.Warning(std::to_string(stats.unknown_languages.size()) +
                   " language codes outside the table were counted under \"other\"");
  }
  WriteText(o.output, StatsToJson(stats) + "\n");
  report.Output("stats", o.output);
  report.Counter("documents", stats.total.documents);
  report.Counter("tokens", stats.total.tokens);
  report.Counter("sentences", stats.total.sentences);
  return report.Finish(o.output);
}

struct QueriesOptions {
  CorpusInput input;
  std::string output;
  std::string query_lang;
  size_t k = 10;
};

int RunQueries(const QueriesOptions& o, const Context& ctx) {
  RunReport report("queries", ctx);
  const std::vector<CleanDocument> docs = o.input.Read(&report);
  const SearchQueries queries = GenerateSearchQueries(docs, o.query_lang, o.k);
  std::string text;
  for (const std::string& w : queries.words) text += w + "\n";
  WriteText(o.output, text);
  report.Output("queries", o.output);
  report.Param("query_lang", o.query_lang);
  report.Param("k", o.k);
  report.Counter("queries", queries.words.size());
  if (queries.short_list) {
    report.Warning("fewer than " + std::to_string(o.k) + " distinct tokens for " + o.query_lang);
  }
  return report.Finish(o.output);
}

struct DedupOptions {
  CorpusInput input;
  std::string output;
};

int RunDedup(const DedupOptions& o, const Context& ctx) {
  RunReport report("dedup", ctx);
  Deduplicator dedup;
  uint64_t in = 0, written = 0;
  std::ofstream out = OpenOutput(o.output);
  ForEachBatch(o.input, &report, kBatchSize, [&](std::vector<CleanDocument> batch) {
    for (const CleanDocument& doc : batch) {
      ++in;
      if (!dedup.Insert(doc)) continue;
      WriteJsonl(doc, out);
      ++written;
    }
  });
  out.close();
  report.Output("corpus", o.output);
  report.Counter("documents_in", in);
  report.Counter("documents_written", written);
  report.Counter("duplicates_removed", in - written);
  return report.Finish(o.output);
}

struct ToDevaOptions {
  CorpusInput input;
  std::string output;
  std::string script;  // empty: each document's language script
};

int RunToDeva(const ToDevaOptions& o, const Context& ctx) {
  RunReport report("to-deva", ctx);
  std::optional<Script> forced;
  if (!o.script.empty()) {
    forced = ParseScript(o.script);
    report.Param("script", o.script);
  }
  const LanguageTable& table = LanguageTable::Default();
  std::map<std::string, size_t> passed_through;
  std::vector<RecordError> unsupported;
  uint64_t in = 0, written = 0;
  std::ofstream out = OpenOutput(o.output);
  ForEachBatch(o.input, &report, kBatchSize, [&](std::vector<CleanDocument> batch) {
    for (CleanDocument& doc : batch) {
      ++in;
      const Script source = forced ? *forced : table.Get(doc.lang).script;
      try {
        for (std::string& p : doc.paragraphs) {
          DevanagariConversion conv = ToDevanagari(p, source);
          p = std::move(conv.text);
          for (const auto& [cp, n] : conv.passed_through) {
            char hex[16];
            std::snprintf(hex, sizeof(hex), "U+%04X", static_cast<unsigned>(cp));
            passed_through[hex] += n;
          }
        }
      } catch (const UnsupportedScriptError& e) {
        unsupported.push_back({in, "document " + doc.id + ": " + e.what()});
        continue;
      }
      doc.provenance.emplace_back("to-deva");
      WriteJsonl(doc, out);
      ++written;
    }
  });
  out.close();
  report.RecordErrors("unsupported-script", unsupported);
  report.Output("corpus", o.output);
  report.Counter("documents_in", in);
  report.Counter("documents_written", written);
  report.result()["passed_through"] = passed_through;
  return report.Finish(o.output);
}

}  // namespace

void RegisterCorpusCommands(CLI::App& app, Context& ctx) {
  {
    auto o = std::make_shared<CleanOptions>();
    CLI::App* sub = AddCommand(app, ctx, "clean", "Run the filter pipeline", o, &RunClean);
    o->input.AddOptions(sub);
    sub->add_option("-o,--output", o->output, "Cleaned corpus (jsonl)")->required();
    sub->add_option("--lid-model", o->lid_model, "LID model for the lid stage")
        ->check(CLI::ExistingFile);
    sub->add_option("--blacklist", o->blacklists, "lang=path, repeatable");
    sub->add_option("--stages", o->stages, "Stage order")->delimiter(',')->capture_default_str();
    sub->add_option("--threshold", o->threshold, "Native-script ratio threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--min-words", o->min_words, "Minimum words after stripping punctuation")
        ->capture_default_str();
    sub->add_flag("--offensive-document-level", o->document_level,
                  "Drop whole documents on an offensive match");
  }
  {
    auto o = std::make_shared<StatsOptions>();
    CLI::App* sub = AddCommand(app, ctx, "stats", "Per-language token, sentence and document counts", o,
                        &RunStats);
    o->input.AddOptions(sub);
    sub->add_option("-o,--output", o->output, "Statistics (json)")->required();
  }
  {
    auto o = std::make_shared<QueriesOptions>();
    CLI::App* sub =
        AddCommand(app, ctx, "queries", "Most frequent words of a language as search queries", o,
            &RunQueries);
    o->input.AddOptions(sub);
    sub->add_option("-o,--output", o->output, "One query per line")->required();
    sub->add_option("--query-lang", o->query_lang, "Language to draw queries from")->required();
    sub->add_option("-k", o->k, "Number of queries")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  {
    auto o = std::make_shared<DedupOptions>();
    CLI::App* sub = AddCommand(app, ctx, "dedup", "Exact deduplication on normalized text", o, &RunDedup);
    o->input.AddOptions(sub);
    sub->add_option("-o,--output", o->output, "Deduplicated corpus (jsonl)")->required();
  }
  {
    auto o = std::make_shared<ToDevaOptions>();
    CLI::App* sub = AddCommand(app, ctx, "to-deva", "Transliterate Brahmi-derived text to Devanagari",
                        o, &RunToDeva);
    o->input.AddOptions(sub);
    sub->add_option("-o,--output", o->output, "Converted corpus (jsonl)")->required();
    sub->add_option("--script", o->script, "Source script; default: the document language's");
  }
}

}  // namespace corpus_forge::cli
