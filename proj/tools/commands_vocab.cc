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

// vocab-train, tokenize and fertility.

#include "cli_support.h"
#include "corpus_forge/parallel.h"
#include "corpus_forge/vocab.h"

namespace corpus_forge::cli {
namespace {

using nlohmann::json;

struct VocabTrainOptions {
  std::string input;
  std::string format = "auto";
  std::string output;
  WordPieceOptions wordpiece;
  double fraction = 1.0;
};

int RunVocabTrain(const VocabTrainOptions& o, const Context& ctx) {
  RunReport report("vocab-train", ctx);
  std::vector<std::string> texts;
  ForEachText(o.input, o.format, &report, 4096, [&](std::vector<std::string> batch) {
    for (std::string& t : batch) texts.push_back(std::move(t));
  });
  const std::vector<size_t> kept = SampleTrainingText(texts.size(), o.fraction, ctx.seed);

  // Per-worker counts; addition makes the merge order irrelevant.
  const size_t parts = static_cast<size_t>(std::max(ctx.workers, 1));
  std::vector<std::map<std::string, uint64_t>> partial(parts);
  ParallelFor(parts, ctx.workers, [&](size_t p) {
    for (size_t k = p; k < kept.size(); k += parts) CountWords(texts[kept[k]], &partial[p]);
  });
  std::map<std::string, uint64_t> counts = std::move(partial[0]);
  for (size_t p = 1; p < parts; ++p) {
    for (const auto& [word, n] : partial[p]) counts[word] += n;
  }

  WordPieceStats stats;
  const VocabModel model = TrainWordPiece(counts, o.wordpiece, &stats);
  model.Save(o.output);
  report.Output("vocab", o.output);
  report.Param("vocab_size", o.wordpiece.vocab_size);
  report.Param("min_pair_freq", o.wordpiece.min_pair_freq);
  report.Param("fraction", o.fraction);
  report.Counter("documents", texts.size());
  report.Counter("documents_sampled", kept.size());
  report.Counter("distinct_words", counts.size());
  report.Counter("alphabet_size", stats.alphabet_size);
  report.Counter("merges", stats.merges);
  report.Counter("pieces", model.size());
  report.result()["stop_reason"] = stats.stop_reason;
  if (model.size() < o.wordpiece.vocab_size) {
    report.Warning("stopped at " + std::to_string(model.size()) + " pieces: " + stats.stop_reason);
  }
  return report.Finish(o.output);
}

struct TokenizeOptions {
  std::string input;
  std::string format = "auto";
  std::string vocab;
  std::string output;
  bool ids = false;
};

int RunTokenize(const TokenizeOptions& o, const Context& ctx) {
  RunReport report("tokenize", ctx);
  const VocabModel model = VocabModel::Load(o.vocab);
  report.Input("vocab", o.vocab);
  std::ofstream out = OpenOutput(o.output);
  uint64_t lines = 0, pieces = 0, unk = 0;
  ForEachText(o.input, o.format, &report, 1024, [&](std::vector<std::string> batch) {
    std::vector<std::vector<int32_t>> encoded(batch.size());
    ParallelFor(batch.size(), ctx.workers, [&](size_t i) { encoded[i] = model.Encode(batch[i]); });
    for (const std::vector<int32_t>& ids : encoded) {
      for (size_t k = 0; k < ids.size(); ++k) {
        if (k > 0) out << ' ';
        if (o.ids) {
          out << ids[k];
        } else {
          out << model.Piece(ids[k]);
        }
        unk += ids[k] == model.unk_id() ? 1 : 0;
      }
      out << '\n';
      pieces += ids.size();
      ++lines;
    }
  });
  out.close();
  report.Output("tokens", o.output);
  report.Counter("lines", lines);
  report.Counter("pieces", pieces);
  report.Counter("unk_pieces", unk);
  return report.Finish(o.output);
}

struct FertilityOptions {
  CorpusInput input;
  std::string vocab;
  std::string output;
};

int RunFertility(const FertilityOptions& o, const Context& ctx) {
  RunReport report("fertility", ctx);
  const VocabModel model = VocabModel::Load(o.vocab);
  report.Input("vocab", o.vocab);
  const FertilityReport fertility = Fertility(model, o.input.Read(&report));
  WriteText(o.output, fertility.ToJson() + "\n");
  report.Output("fertility", o.output);
  report.Counter("languages", fertility.languages.size());
  report.Warnings(fertility.warnings);
  return report.Finish(o.output);
}


}  // namespace

void RegisterVocabCommands(CLI::App& app, Context& ctx) {
  {
    auto o = std::make_shared<VocabTrainOptions>();
    CLI::App* sub =
        AddCommand(app, ctx, "vocab-train", "Train a WordPiece vocabulary", o, &RunVocabTrain);
    AddTextInput(sub, &o->input, &o->format);
    sub->add_option("-o,--output", o->output, "Vocabulary, one piece per line")->required();
    sub->add_option("--vocab-size", o->wordpiece.vocab_size, "Target number of pieces")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--min-pair-freq", o->wordpiece.min_pair_freq,
                    "Stop when no pair occurs this often")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--fraction", o->fraction, "Fraction of documents used, in (0, 1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  }
  {
    auto o = std::make_shared<TokenizeOptions>();
    CLI::App* sub = AddCommand(app, ctx, "tokenize", "Greedy longest-match WordPiece segmentation",
                               o, &RunTokenize);
    AddTextInput(sub, &o->input, &o->format);
    sub->add_option("-v,--vocab", o->vocab, "Vocabulary file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o->output, "One tokenized document per line")->required();
    sub->add_flag("--ids", o->ids, "Write piece ids instead of pieces");
  }
  {
    auto o = std::make_shared<FertilityOptions>();
    CLI::App* sub =
        AddCommand(app, ctx, "fertility", "Pieces per word for each language", o, &RunFertility);
    o->input.AddOptions(sub);
    sub->add_option("-v,--vocab", o->vocab, "Vocabulary file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o->output, "Fertility report (json)")->required();
  }
}

}  // namespace corpus_forge::cli
