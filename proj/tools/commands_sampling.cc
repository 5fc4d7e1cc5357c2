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

// plan and sample.

#include "cli_support.h"
#include "corpus_forge/errors.h"
#include "corpus_forge/sampling.h"

namespace corpus_forge::cli {
namespace {

using nlohmann::json;

std::map<std::string, uint64_t> ReadCounts(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadText(path));
  } catch (const json::parse_error& e) {
    throw DataError("invalid counts JSON in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw DataError(path + ": counts must be an object of language: tokens");
  std::map<std::string, uint64_t> counts;
  for (const auto& [lang, n] : j.items()) {
    if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<int64_t>() >= 0)) {
      throw DataError(path + ": count for " + lang + " is not a non-negative integer");
    }
    counts[lang] = n.get<uint64_t>();
  }
  return counts;
}

// Inverse of SamplingPlan::ToJson.
SamplingPlan ReadPlan(const std::string& path) {
  try {
    const json j = json::parse(ReadText(path));
    SamplingPlan plan;
    plan.alpha = j.at("alpha").get<double>();
    for (const auto& [lang, entry] : j.at("languages").items()) {
      LanguagePlan l;
      l.lang = lang;
      l.tokens = entry.at("tokens").get<uint64_t>();
      l.raw_fraction = entry.at("raw_fraction").get<double>();
      l.probability = entry.at("probability").get<double>();
      l.replication = entry.at("replication").get<double>();
      plan.languages.push_back(std::move(l));
    }
    return plan;
  } catch (const json::exception& e) {
    throw DataError("invalid plan file " + path + ": " + e.what());
  }
}

struct PlanOptions {
  CorpusInput input;
  std::string counts;
  std::string output;
  double alpha = kDefaultAlpha;
};

int RunPlan(const PlanOptions& o, const Context& ctx) {
  RunReport report("plan", ctx);
  std::map<std::string, uint64_t> counts;
  if (!o.counts.empty()) {
    counts = ReadCounts(o.counts);
    report.Input("counts", o.counts);
  } else {
    counts = TokenCountsByLanguage(o.input.Read(&report));
  }
  const SamplingPlan plan = TemperaturePlan(counts, o.alpha);
  WriteText(o.output, plan.ToJson() + "\n");
  report.Output("plan", o.output);
  report.Param("alpha", o.alpha);
  report.Counter("languages", plan.languages.size());
  report.Warnings(plan.warnings);
  return report.Finish(o.output);
}

struct SampleOptions {
  CorpusInput input;
  std::string plan;
  std::string output;
  double alpha = kDefaultAlpha;
  uint64_t target_tokens = 0;
  size_t shards = 1;
  bool lang_token = true;
};

int RunSample(const SampleOptions& o, const Context& ctx) {
  RunReport report("sample", ctx);
  const std::vector<CleanDocument> corpus = o.input.Read(&report);
  SamplingPlan plan;
  if (!o.plan.empty()) {
    plan = ReadPlan(o.plan);
    report.Input("plan", o.plan);
  } else {
    plan = TemperaturePlan(TokenCountsByLanguage(corpus), o.alpha);
    report.Param("alpha", o.alpha);
  }
  const MaterializedSample sample = Materialize(
      corpus, plan, {.seed = ctx.seed, .target_tokens = o.target_tokens, .num_shards = o.shards});
  const std::vector<std::filesystem::path> paths =
      WriteShards(corpus, sample, o.output, o.lang_token);
  report.Output("shards", o.output);
  report.Param("target_tokens", o.target_tokens);
  report.Param("shards", o.shards);
  report.Param("lang_token", o.lang_token);
  report.Warnings(sample.warnings);
  json lines = json::object();
  for (size_t i = 0; i < paths.size(); ++i) {
    lines[paths[i].filename().string()] = sample.shards[i].size();
  }
  report.Counter("shard_lines", lines);
  report.Counter("emitted_tokens", sample.total_tokens);
  json languages = json::object();
  for (const LanguagePlan& l : plan.languages) {
    const auto docs = sample.emitted_documents.find(l.lang);
    languages[l.lang] = {
        {"planned_probability", l.probability},
        {"token_share", sample.TokenShare(l.lang)},
        {"documents", docs == sample.emitted_documents.end() ? 0 : docs->second}};
  }
  report.result()["languages"] = languages;
  return report.Finish(o.output);
}

}  // namespace

void RegisterSamplingCommands(CLI::App& app, Context& ctx) {
  {
    auto o = std::make_shared<PlanOptions>();
    CLI::App* sub =
        AddCommand(app, ctx, "plan", "Temperature-smoothed language sampling plan", o, &RunPlan);
    o->input.AddOptions(sub, false);
    CLI::Option* counts = sub->add_option("--counts", o->counts, "JSON object lang: tokens")
                              ->check(CLI::ExistingFile);
    sub->get_option("--input")->excludes(counts);
    sub->add_option("-o,--output", o->output, "Plan (json)")->required();
    sub->add_option("--alpha", o->alpha, "Temperature exponent in (0, 1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  }
  {
    auto o = std::make_shared<SampleOptions>();
    CLI::App* sub = AddCommand(app, ctx, "sample",
                               "Materialize upsampled shards by sampling with replacement", o,
                               &RunSample);
    o->input.AddOptions(sub);
    sub->add_option("--plan", o->plan, "Plan file; default: computed with --alpha")
        ->check(CLI::ExistingFile);
    sub->add_option("--alpha", o->alpha, "Temperature exponent in (0, 1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("-o,--output", o->output, "Shard directory")->required();
    sub->add_option("--target-tokens", o->target_tokens, "Tokens to emit")->required();
    sub->add_option("--shards", o->shards, "Number of shards")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--lang-token,!--no-lang-token", o->lang_token,
                  "Prefix each line with its <xx> language token")
        ->capture_default_str();
  }
}

}  // namespace corpus_forge::cli
