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

// mlm-build and tlm-build. Example i is masked with a seed derived from
// (--seed, i), so output does not depend on --workers.

#include <algorithm>
#include <unordered_set>

#include "cli_support.h"
#include "corpus_forge/errors.h"
#include "corpus_forge/parallel.h"
#include "corpus_forge/pretrain.h"
#include "corpus_forge/rng.h"

namespace corpus_forge::cli {
namespace {

using nlohmann::json;

constexpr size_t kExampleBatch = 512;

struct MlmOptions {
  std::string input;
  std::string format = "auto";
  std::string vocab;
  std::string output;
  PackOptions pack;
  double mask_prob = kDefaultMaskProb;
};

int RunMlmBuild(const MlmOptions& o, const Context& ctx) {
  RunReport report("mlm-build", ctx);
  const VocabModel vocab = VocabModel::Load(o.vocab);
  report.Input("vocab", o.vocab);
  SequencePacker packer(o.pack, vocab);
  std::ofstream out = OpenOutput(o.output);
  std::vector<std::vector<int32_t>> pending;
  uint64_t documents = 0, examples = 0, positions = 0, masked = 0;

  auto drain = [&](bool all) {
    while (pending.size() >= kExampleBatch || (all && !pending.empty())) {
      const size_t n = std::min(pending.size(), kExampleBatch);
      std::vector<std::string> lines(n);
      std::vector<size_t> selected(n);
      ParallelFor(n, ctx.workers, [&](size_t i) {
        const PretrainExample ex =
            BuildMlm(pending[i], vocab, o.mask_prob, DeriveSeed(ctx.seed, examples + i));
        lines[i] = ex.ToJson();
        selected[i] = ex.MaskedPositions().size();
      });
      for (size_t i = 0; i < n; ++i) {
        out << lines[i] << '\n';
        positions += pending[i].size();
        masked += selected[i];
      }
      examples += n;
      pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(n));
    }
  };

  ForEachText(o.input, o.format, &report, 1024, [&](std::vector<std::string> batch) {
    std::vector<std::vector<int32_t>> encoded(batch.size());
    ParallelFor(batch.size(), ctx.workers, [&](size_t i) { encoded[i] = vocab.Encode(batch[i]); });
    for (const std::vector<int32_t>& ids : encoded) {
      ++documents;
      packer.Add(ids, &pending);
    }
    drain(false);
  });
  packer.Flush(&pending);
  drain(true);
  out.close();

  report.Output("examples", o.output);
  report.Param("max_len", o.pack.max_len);
  report.Param("pack", o.pack.pack);
  report.Param("cls", o.pack.cls);
  report.Param("mask_prob", o.mask_prob);
  report.Counter("documents", documents);
  report.Counter("examples", examples);
  report.Counter("positions", positions);
  report.Counter("masked_positions", masked);
  return report.Finish(o.output);
}

struct TlmOptions {
  std::string input;
  std::string vocab;
  std::string output;
  size_t max_len = kDefaultMaxLen;
  double mask_prob = kDefaultMaskProb;
};

// Pairs with the line each came from.
std::vector<ParallelPair> ReadPairs(const std::string& path, std::vector<size_t>* line_numbers,
                                   std::vector<RecordError>* errors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<ParallelPair> pairs;
  std::unordered_set<std::string> ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      ParallelPair p;
      const json& id = j.at("id");
      p.id = id.is_string() ? id.get<std::string>() : id.dump();
      p.source = j.at("source").get<std::string>();
      p.target = j.at("target").get<std::string>();
      if (!ids.insert(p.id).second) {
        errors->push_back({line_no, "duplicate id " + p.id});
        continue;
      }
      pairs.push_back(std::move(p));
      line_numbers->push_back(line_no);
    } catch (const json::exception& e) {
      errors->push_back({line_no, e.what()});
    }
  }
  return pairs;
}

int RunTlmBuild(const TlmOptions& o, const Context& ctx) {
  RunReport report("tlm-build", ctx);
  const VocabModel vocab = VocabModel::Load(o.vocab);
  report.Input("vocab", o.vocab);
  report.Input("pairs", o.input);
  std::vector<RecordError> errors;
  std::vector<size_t> line_numbers;
  const std::vector<ParallelPair> pairs = ReadPairs(o.input, &line_numbers, &errors);

  std::vector<std::optional<std::string>> lines(pairs.size());
  std::vector<std::string> failures(pairs.size());
  std::vector<size_t> lengths(pairs.size(), 0);
  ParallelFor(pairs.size(), ctx.workers, [&](size_t i) {
    try {
      const PretrainExample ex =
          BuildTlm(pairs[i], vocab, o.max_len, o.mask_prob, DeriveSeed(ctx.seed, i));
      lines[i] = ex.ToJson();
      lengths[i] = ex.length();
    } catch (const DataError& e) {
      failures[i] = e.what();
    }
  });
  std::ofstream out = OpenOutput(o.output);
  uint64_t examples = 0, truncated = 0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (!lines[i]) {
      errors.push_back({line_numbers[i], failures[i]});
      continue;
    }
    out << *lines[i] << '\n';
    ++examples;
    truncated += lengths[i] == o.max_len ? 1 : 0;
  }
  out.close();
  std::sort(errors.begin(), errors.end(),
            [](const RecordError& a, const RecordError& b) { return a.line < b.line; });
  report.RecordErrors(o.input, errors);
  report.Output("examples", o.output);
  report.Param("max_len", o.max_len);
  report.Param("mask_prob", o.mask_prob);
  report.Counter("pairs", pairs.size());
  report.Counter("examples", examples);
  report.Counter("at_max_len", truncated);
  return report.Finish(o.output);
}

void AddMaskOption(CLI::App* sub, double* mask_prob) {
  sub->add_option("--mask-prob", *mask_prob, "Selection probability in [0, 1)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

}  // namespace

void RegisterPretrainCommands(CLI::App& app, Context& ctx) {
  {
    auto o = std::make_shared<MlmOptions>();
    CLI::App* sub = AddCommand(app, ctx, "mlm-build",
                               "Pack documents and build masked language modeling examples", o,
                               &RunMlmBuild);
    AddTextInput(sub, &o->input, &o->format);
    sub->add_option("-v,--vocab", o->vocab, "Vocabulary file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o->output, "Examples (jsonl)")->required();
    sub->add_option("--max-len", o->pack.max_len, "Sequence length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--pack,!--no-pack", o->pack.pack, "Pack several documents per sequence")
        ->capture_default_str();
    sub->add_flag("--cls", o->pack.cls, "Start every sequence with [CLS]");
    AddMaskOption(sub, &o->mask_prob);
  }
  {
    auto o = std::make_shared<TlmOptions>();
    CLI::App* sub = AddCommand(app, ctx, "tlm-build",
                               "Build translation language modeling examples from pairs", o,
                               &RunTlmBuild);
    sub->add_option("-i,--input", o->input, "Pairs, jsonl with id, source, target")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-v,--vocab", o->vocab, "Vocabulary file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o->output, "Examples (jsonl)")->required();
    sub->add_option("--max-len", o->max_len, "Sequence length")
        ->check(CLI::Range(3, 1 << 20))
        ->capture_default_str();
    AddMaskOption(sub, &o->mask_prob);
  }
}

}  // namespace corpus_forge::cli
