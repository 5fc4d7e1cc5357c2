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

#include "corpus_forge/lid.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "corpus_forge/errors.h"
#include "corpus_forge/unicode.h"
#include "json.hpp"

namespace corpus_forge {

using nlohmann::json;

namespace {

constexpr std::string_view kModelFormat = "corpus-forge-lid";
constexpr int kModelVersion = 1;

// Case-folded letters with each non-letter run replaced by one space, padded
// with a space on both sides.
std::u32string PrepareText(std::string_view text) {
  std::u32string out = U" ";
  for (size_t pos = 0; pos < text.size();) {
    const char32_t c = NextCodepoint(text, &pos);
    if (IsLetter(c)) {
      out.push_back(FoldCase(c));
    } else if (out.back() != U' ') {
      out.push_back(U' ');
    }
  }
  if (out.back() != U' ') out.push_back(U' ');
  return out;
}

void ValidateOptions(int order, double smoothing, double reference_mass) {
  if (order < 2 || order > 4) throw std::invalid_argument("n-gram order must be 2, 3 or 4");
  if (!(smoothing > 0) || !std::isfinite(smoothing)) {
    throw std::invalid_argument("smoothing must be positive");
  }
  if (!(reference_mass > 0) || !std::isfinite(reference_mass)) {
    throw std::invalid_argument("reference mass must be positive");
  }
}

}  // namespace

LidModel::GramKey LidModel::PackGram(std::u32string_view gram) {
  GramKey key = 0;
  for (char32_t c : gram) key = (key << 21) | static_cast<GramKey>(c & 0x1FFFFF);
  return key;
}

std::u32string LidModel::UnpackGram(GramKey key, int order) {
  std::u32string gram(static_cast<size_t>(order), U' ');
  for (int i = order - 1; i >= 0; --i) {
    gram[static_cast<size_t>(i)] = static_cast<char32_t>(key & 0x1FFFFF);
    key >>= 21;
  }
  return gram;
}

void LidModel::ForEachGram(std::string_view text, auto&& fn) const {
  const std::u32string prepared = PrepareText(text);
  const size_t n = static_cast<size_t>(order_);
  if (prepared.size() < n) return;
  for (size_t i = 0; i + n <= prepared.size(); ++i) {
    fn(PackGram(std::u32string_view(prepared).substr(i, n)));
  }
}

LidModel LidModel::Train(std::span<const LabeledText> samples, const LidOptions& options,
                         const LanguageTable& table) {
  ValidateOptions(options.order, options.smoothing, options.reference_mass);
  LidModel model;
  model.order_ = options.order;
  model.smoothing_ = options.smoothing;
  model.min_letters_ = options.min_letters;
  model.reference_mass_ = options.reference_mass;

  std::set<std::string> langs(options.languages.begin(), options.languages.end());
  for (const LabeledText& sample : samples) langs.insert(sample.lang);
  std::vector<std::string> unknown;
  for (const std::string& lang : langs) {
    if (!table.Contains(lang)) unknown.push_back(lang);
  }
  if (!unknown.empty()) {
    std::string message = "training languages not in the language table:";
    for (const std::string& lang : unknown) message += " " + lang;
    throw DataError(message);
  }
  if (langs.empty()) throw DataError("no training samples");
  model.languages_.assign(langs.begin(), langs.end());
  model.counts_.resize(model.languages_.size());

  for (const LabeledText& sample : samples) {
    const size_t index = static_cast<size_t>(
        std::lower_bound(model.languages_.begin(), model.languages_.end(), sample.lang) -
        model.languages_.begin());
    LanguageCounts& counts = model.counts_[index];
    const ScriptProfile profile = ComputeScriptProfile(sample.text);
    if (profile.total == 0) continue;
    for (size_t s = 0; s < kNumScripts; ++s) counts.scripts[s] += profile.counts[s];
    model.ForEachGram(sample.text, [&](GramKey key) { ++counts.grams[key]; });
  }

  std::vector<std::string> empty;
  for (size_t i = 0; i < model.languages_.size(); ++i) {
    if (model.counts_[i].grams.empty()) empty.push_back(model.languages_[i]);
  }
  if (!empty.empty()) {
    std::string message = "languages without training letters:";
    for (const std::string& lang : empty) message += " " + lang;
    throw DataError(message);
  }
  model.BuildTables();
  return model;
}

void LidModel::BuildTables() {
  const size_t num_langs = languages_.size();
  const double k_over_m = smoothing_ / reference_mass_;

  std::set<GramKey> vocabulary;
  for (const LanguageCounts& counts : counts_) {
    for (const auto& [key, count] : counts.grams) vocabulary.insert(key);
  }
  const double vocab_size = static_cast<double>(vocabulary.size() + 1);
  const double gram_norm = std::log1p(k_over_m * vocab_size);
  const double unseen = std::log(k_over_m) - gram_norm;

  gram_log_prob_.clear();
  gram_log_prob_.reserve(vocabulary.size());
  for (GramKey key : vocabulary) gram_log_prob_.emplace(key, std::vector<double>(num_langs, unseen));
  unseen_log_prob_.assign(num_langs, unseen);

  const double script_norm = std::log1p(k_over_m * static_cast<double>(kNumScripts));
  script_log_prob_.assign(num_langs, {});
  for (size_t l = 0; l < num_langs; ++l) {
    const LanguageCounts& counts = counts_[l];
    uint64_t total = 0;
    for (const auto& [key, count] : counts.grams) total += count;
    const double dtotal = static_cast<double>(total);
    for (const auto& [key, count] : counts.grams) {
      gram_log_prob_[key][l] = std::log(static_cast<double>(count) / dtotal + k_over_m) - gram_norm;
    }
    uint64_t letters = 0;
    for (uint64_t c : counts.scripts) letters += c;
    const double dletters = static_cast<double>(letters);
    for (size_t s = 0; s < kNumScripts; ++s) {
      const double freq = letters == 0 ? 0.0 : static_cast<double>(counts.scripts[s]) / dletters;
      script_log_prob_[l][s] = std::log(freq + k_over_m) - script_norm;
    }
  }
}

std::vector<double> LidModel::Scores(std::string_view text) const {
  const ScriptProfile profile = ComputeScriptProfile(text);
  if (profile.total < std::max<size_t>(min_letters_, 1)) return {};
  const size_t num_langs = languages_.size();
  std::vector<double> scores(num_langs, 0.0);
  for (size_t l = 0; l < num_langs; ++l) {
    for (size_t s = 0; s < kNumScripts; ++s) {
      if (profile.counts[s] > 0) {
        scores[l] += static_cast<double>(profile.counts[s]) * script_log_prob_[l][s];
      }
    }
  }
  ForEachGram(text, [&](GramKey key) {
    auto it = gram_log_prob_.find(key);
    const std::vector<double>& row = it == gram_log_prob_.end() ? unseen_log_prob_ : it->second;
    for (size_t l = 0; l < num_langs; ++l) scores[l] += row[l];
  });
  return scores;
}

std::optional<LidPrediction> LidModel::Predict(std::string_view text) const {
  const std::vector<double> scores = Scores(text);
  if (scores.empty()) return std::nullopt;
  // languages_ is sorted, so the first maximum is the smallest code.
  size_t best = 0;
  for (size_t l = 1; l < scores.size(); ++l) {
    if (scores[l] > scores[best]) best = l;
  }
  return LidPrediction{languages_[best], scores[best]};
}

bool LidModel::Supports(std::string_view lang) const {
  return std::binary_search(languages_.begin(), languages_.end(), lang);
}

std::string LidModel::ToJson() const {
  json langs = json::object();
  for (size_t l = 0; l < languages_.size(); ++l) {
    json scripts = json::object();
    for (size_t s = 0; s < kNumScripts; ++s) {
      if (counts_[l].scripts[s] > 0) {
        scripts[std::string(ScriptName(static_cast<Script>(s)))] = counts_[l].scripts[s];
      }
    }
    json grams = json::object();
    for (const auto& [key, count] : counts_[l].grams) grams[ToUtf8(UnpackGram(key, order_))] = count;
    langs[languages_[l]] = {{"scripts", std::move(scripts)}, {"ngrams", std::move(grams)}};
  }
  json out = {{"format", kModelFormat},
              {"version", kModelVersion},
              {"order", order_},
              {"smoothing", smoothing_},
              {"min_letters", min_letters_},
              {"reference_mass", reference_mass_},
              {"languages", std::move(langs)}};
  return out.dump();
}

LidModel LidModel::FromJson(std::string_view text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("LID model is not valid JSON: ") + e.what());
  }
  try {
    if (in.at("format").get<std::string>() != kModelFormat) throw DataError("not a LID model file");
    if (in.at("version").get<int>() != kModelVersion) {
      throw DataError("unsupported LID model version");
    }
    LidModel model;
    model.order_ = in.at("order").get<int>();
    model.smoothing_ = in.at("smoothing").get<double>();
    model.min_letters_ = in.at("min_letters").get<size_t>();
    model.reference_mass_ = in.at("reference_mass").get<double>();
    ValidateOptions(model.order_, model.smoothing_, model.reference_mass_);
    for (const auto& [lang, entry] : in.at("languages").items()) {
      model.languages_.push_back(lang);
      LanguageCounts counts;
      for (const auto& [name, count] : entry.at("scripts").items()) {
        counts.scripts[static_cast<size_t>(ParseScript(name))] = count.get<uint64_t>();
      }
      for (const auto& [gram, count] : entry.at("ngrams").items()) {
        const std::u32string chars = ToUtf32(gram);
        if (chars.size() != static_cast<size_t>(model.order_)) {
          throw DataError("n-gram of wrong length in LID model: " + gram);
        }
        counts.grams[PackGram(chars)] = count.get<uint64_t>();
      }
      model.counts_.push_back(std::move(counts));
    }
    if (model.languages_.empty()) throw DataError("LID model has no languages");
    model.BuildTables();
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed LID model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed LID model: ") + e.what());
  }
}

LidModel LidModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open LID model " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

void LidModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write LID model " + path.string());
  out << ToJson() << '\n';
}

namespace {

void AddTagOnce(std::vector<std::string>* tags, std::string_view tag) {
  if (std::find(tags->begin(), tags->end(), tag) == tags->end()) tags->emplace_back(tag);
}

}  // namespace

FilterOutcome FilterParagraphs(const LidModel& model, const CleanDocument& doc,
                               std::string_view target) {
  FilterOutcome outcome;
  outcome.doc = doc;
  if (!model.Supports(target)) {
    outcome.skipped = true;
    AddTagOnce(&outcome.doc.provenance, kLidSkippedTag);
    return outcome;
  }
  outcome.doc.paragraphs.clear();
  for (const std::string& paragraph : doc.paragraphs) {
    const std::optional<LidPrediction> prediction = model.Predict(paragraph);
    if (prediction && prediction->lang != target) {
      ++outcome.paragraphs_removed;
      outcome.tokens_removed += CountWhitespaceTokens(paragraph);
      continue;
    }
    outcome.doc.paragraphs.push_back(paragraph);
  }
  AddTagOnce(&outcome.doc.provenance, kLidTag);
  return outcome;
}

std::string LidReport::ToJson() const {
  json langs = json::object();
  for (const auto& [lang, entry] : per_language) {
    langs[lang] = {{"total", entry.total},
                   {"correct", entry.correct},
                   {"accuracy", entry.accuracy ? json(*entry.accuracy) : json(nullptr)}};
  }
  return json{{"languages", std::move(langs)}, {"confusion", confusion}}.dump(2);
}

LidReport EvaluateLid(const LidModel& model, std::span<const LabeledText> test) {
  LidReport report;
  for (const std::string& lang : model.languages()) report.per_language[lang];
  for (const LabeledText& item : test) {
    if (!model.Supports(item.lang)) {
      throw DataError("test label not supported by the model: " + item.lang);
    }
  }
  for (const LabeledText& item : test) {
    const std::optional<LidPrediction> prediction = model.Predict(item.text);
    const std::string predicted = prediction ? prediction->lang : std::string(kUnknownLanguage);
    LidReport::Entry& entry = report.per_language[item.lang];
    ++entry.total;
    if (predicted == item.lang) ++entry.correct;
    ++report.confusion[item.lang][predicted];
  }
  for (auto& [lang, entry] : report.per_language) {
    if (entry.total > 0) {
      entry.accuracy = static_cast<double>(entry.correct) / static_cast<double>(entry.total);
    }
  }
  return report;
}

}  // namespace corpus_forge
