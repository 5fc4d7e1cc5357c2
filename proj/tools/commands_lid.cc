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

// lid-train, lid-eval and lid-filter.

#include "cli_support.h"
#include "corpus_forge/lid.h"
#include "corpus_forge/parallel.h"

namespace corpus_forge::cli {
namespace {

using nlohmann::json;

struct LidTrainOptions {
  CorpusInput input;
  std::string output;
  LidOptions lid;
};

int RunLidTrain(const LidTrainOptions& o, const Context& ctx) {
  RunReport report("lid-train", ctx);
  std::vector<LabeledText> samples;
  for (const CleanDocument& doc : o.input.Read(&report)) {
    for (const std::string& p : doc.paragraphs) samples.push_back({doc.lang, p});
  }
  const LidModel model = LidModel::Train(samples, o.lid);
  model.Save(o.output);
  report.Output("model", o.output);
  report.Param("order", o.lid.order);
  report.Param("smoothing", o.lid.smoothing);
  report.Param("min_letters", o.lid.min_letters);
  report.Counter("samples", samples.size());
  report.Counter("languages", model.languages().size());
  return report.Finish(o.output);
}

struct LidEvalOptions {
  CorpusInput input;
  std::string model;
  std::string output;
};

int RunLidEval(const LidEvalOptions& o, const Context& ctx) {
  RunReport report("lid-eval", ctx);
  const LidModel model = LidModel::Load(o.model);
  report.Input("model", o.model);
  std::vector<LabeledText> test;
  std::map<std::string, size_t> unsupported;
  for (const CleanDocument& doc : o.input.Read(&report)) {
    if (!model.Supports(doc.lang)) {
      unsupported[doc.lang] += doc.paragraphs.size();
      continue;
    }
    for (const std::string& p : doc.paragraphs) test.push_back({doc.lang, p});
  }
  for (const auto& [lang, n] : unsupported) {
    report.Warning(std::to_string(n) + " paragraphs of " + lang +
                   " skipped: not supported by the model");
  }
  const LidReport lid = EvaluateLid(model, test);
  WriteText(o.output, lid.ToJson() + "\n");
  report.Output("evaluation", o.output);
  report.Counter("paragraphs", test.size());
  return report.Finish(o.output);
}

struct LidFilterOptions {
  CorpusInput input;
  std::string model;
  std::string output;
};

int RunLidFilter(const LidFilterOptions& o, const Context& ctx) {
  RunReport report("lid-filter", ctx);
  const LidModel model = LidModel::Load(o.model);
  report.Input("model", o.model);
  uint64_t in = 0, written = 0, emptied = 0, skipped = 0, paragraphs = 0, tokens = 0;
  std::ofstream out = OpenOutput(o.output);
  ForEachBatch(o.input, &report, 1024, [&](std::vector<CleanDocument> batch) {
    std::vector<FilterOutcome> results(batch.size());
    ParallelFor(batch.size(), ctx.workers, [&](size_t i) {
      results[i] = FilterParagraphs(model, batch[i], batch[i].lang);
    });
    for (FilterOutcome& r : results) {
      ++in;
      paragraphs += r.paragraphs_removed;
      tokens += r.tokens_removed;
      skipped += r.skipped ? 1 : 0;
      if (r.doc.empty()) {
        ++emptied;
        continue;
      }
      WriteJsonl(r.doc, out);
      ++written;
    }
  });
  out.close();
  report.Output("corpus", o.output);
  report.Counter("documents_in", in);
  report.Counter("documents_written", written);
  report.Counter("documents_emptied", emptied);
  report.Counter("documents_skipped", skipped);
  report.Counter("paragraphs_removed", paragraphs);
  report.Counter("tokens_removed", tokens);
  return report.Finish(o.output);
}

}  // namespace

void RegisterLidCommands(CLI::App& app, Context& ctx) {
  {
    auto o = std::make_shared<LidTrainOptions>();
    CLI::App* sub = AddCommand(app, ctx, "lid-train",
                               "Train the character n-gram language identifier", o, &RunLidTrain);
    o->input.AddOptions(sub);
    sub->add_option("-o,--output", o->output, "Model file")->required();
    sub->add_option("--order", o->lid.order, "n-gram order")
        ->check(CLI::IsMember({2, 3, 4}))
        ->capture_default_str();
    sub->add_option("--smoothing", o->lid.smoothing, "Additive smoothing")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--min-letters", o->lid.min_letters, "Shorter texts are Unknown")
        ->capture_default_str();
  }
  {
    auto o = std::make_shared<LidEvalOptions>();
    CLI::App* sub = AddCommand(app, ctx, "lid-eval", "Per-language top-1 accuracy on paragraphs",
                               o, &RunLidEval);
    o->input.AddOptions(sub);
    sub->add_option("-m,--model", o->model, "Model file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o->output, "Evaluation (json)")->required();
  }
  {
    auto o = std::make_shared<LidFilterOptions>();
    CLI::App* sub = AddCommand(app, ctx, "lid-filter",
                               "Drop paragraphs identified as another language", o, &RunLidFilter);
    o->input.AddOptions(sub);
    sub->add_option("-m,--model", o->model, "Model file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o->output, "Filtered corpus (jsonl)")->required();
  }
}

}  // namespace corpus_forge::cli
