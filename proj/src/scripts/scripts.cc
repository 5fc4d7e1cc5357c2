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

#include "corpus_forge/scripts.h"

#include <unicode/uchar.h>

#include <algorithm>
#include <stdexcept>

#include "corpus_forge/errors.h"
#include "corpus_forge/unicode.h"

namespace corpus_forge {
namespace {

constexpr ScriptRange kRanges[] = {
    {0x0041, 0x005A, Script::kLatin},
    {0x0061, 0x007A, Script::kLatin},
    {0x00AA, 0x00AA, Script::kLatin},
    {0x00BA, 0x00BA, Script::kLatin},
    {0x00C0, 0x024F, Script::kLatin},
    {0x0600, 0x06FF, Script::kArabic},
    {0x0750, 0x077F, Script::kArabic},
    {0x08A0, 0x08FF, Script::kArabic},
    {0x0900, 0x097F, Script::kDevanagari},
    {0x0980, 0x09FF, Script::kBengali},
    {0x0A00, 0x0A7F, Script::kGurmukhi},
    {0x0A80, 0x0AFF, Script::kGujarati},
    {0x0B00, 0x0B7F, Script::kOdia},
    {0x0B80, 0x0BFF, Script::kTamil},
    {0x0C00, 0x0C7F, Script::kTelugu},
    {0x0C80, 0x0CFF, Script::kKannada},
    {0x0D00, 0x0D7F, Script::kMalayalam},
    {0x1C50, 0x1C7F, Script::kOlChiki},
    {0x1E00, 0x1EFF, Script::kLatin},
    {0xA8E0, 0xA8FF, Script::kDevanagari},
    {0xAAE0, 0xAAFF, Script::kMeitei},
    {0xABC0, 0xABFF, Script::kMeitei},
    {0xFB50, 0xFDFF, Script::kArabic},
    {0xFE70, 0xFEFF, Script::kArabic},
};

constexpr std::string_view kNames[kNumScripts] = {
    "Devanagari", "Bengali", "Gujarati", "Gurmukhi", "Kannada", "Malayalam", "Odia",
    "Tamil",      "Telugu",  "Arabic",   "Latin",    "OlChiki", "Meitei",    "Other",
};

char32_t BlockBase(Script script) {
  switch (script) {
    case Script::kDevanagari: return 0x0900;
    case Script::kBengali: return 0x0980;
    case Script::kGurmukhi: return 0x0A00;
    case Script::kGujarati: return 0x0A80;
    case Script::kOdia: return 0x0B00;
    case Script::kTamil: return 0x0B80;
    case Script::kTelugu: return 0x0C00;
    case Script::kKannada: return 0x0C80;
    case Script::kMalayalam: return 0x0D00;
    default: return 0;
  }
}

// Block offsets whose character differs in meaning from the Devanagari
// character at the same offset, beyond the shared 0x70..0x7F tail.
bool IsScriptSpecificOffset(Script script, char32_t offset) {
  // AU/AI length marks and similar vowel-sign extensions.
  if (offset >= 0x55 && offset <= 0x57) return true;
  switch (script) {
    case Script::kTelugu:
      return offset == 0x04 || (offset >= 0x58 && offset <= 0x5A) || offset == 0x5D;
    case Script::kKannada:
      return offset == 0x04 || offset == 0x5D;
    case Script::kMalayalam:
      return offset == 0x04 || offset == 0x3B || offset == 0x3C || offset == 0x4E ||
             offset == 0x4F || (offset >= 0x54 && offset <= 0x5F);
    default:
      return false;
  }
}

bool IsAssigned(char32_t c) { return u_charType(static_cast<UChar32>(c)) != U_UNASSIGNED; }

}  // namespace

std::span<const ScriptRange> ScriptRanges() { return kRanges; }

Script ScriptOf(char32_t c) {
  if (c < 0x41) return Script::kOther;
  auto it = std::upper_bound(std::begin(kRanges), std::end(kRanges), c,
                             [](char32_t v, const ScriptRange& r) { return v < r.first; });
  if (it == std::begin(kRanges)) return Script::kOther;
  --it;
  return c <= it->last ? it->script : Script::kOther;
}

std::string_view ScriptName(Script script) { return kNames[static_cast<size_t>(script)]; }

Script ParseScript(std::string_view name) {
  const std::string wanted = FoldCase(name);
  for (size_t i = 0; i < kNumScripts; ++i) {
    if (FoldCase(kNames[i]) == wanted) return static_cast<Script>(i);
  }
  // Common alternative spellings.
  if (wanted == "gurumukhi") return Script::kGurmukhi;
  if (wanted == "oriya") return Script::kOdia;
  if (wanted == "ol chiki" || wanted == "ol-chiki") return Script::kOlChiki;
  if (wanted == "meithi" || wanted == "meetei" || wanted == "meetei mayek") return Script::kMeitei;
  throw std::invalid_argument("unknown script: " + std::string(name));
}

bool IsBrahmiAligned(Script script) { return BlockBase(script) != 0; }

bool HasCase(Script script) { return script == Script::kLatin; }

ScriptProfile& ScriptProfile::operator+=(const ScriptProfile& other) {
  for (size_t i = 0; i < kNumScripts; ++i) counts[i] += other.counts[i];
  total += other.total;
  return *this;
}

ScriptProfile ComputeScriptProfile(std::string_view text) {
  ScriptProfile profile;
  for (size_t pos = 0; pos < text.size();) {
    const char32_t c = NextCodepoint(text, &pos);
    if (!IsLetter(c)) continue;
    ++profile.counts[static_cast<size_t>(ScriptOf(c))];
    ++profile.total;
  }
  return profile;
}

NativeRatio ComputeNativeRatio(const ScriptProfile& profile, Script expected) {
  if (profile.total == 0) return {0.0, true};
  return {static_cast<double>(profile.count(expected)) / static_cast<double>(profile.total),
          false};
}

NativeRatio ComputeNativeRatio(std::string_view text, Script expected) {
  return ComputeNativeRatio(ComputeScriptProfile(text), expected);
}

DevanagariConversion ToDevanagari(std::string_view text, Script source) {
  const char32_t base = BlockBase(source);
  if (base == 0) {
    throw UnsupportedScriptError("no Devanagari mapping for script " +
                                 std::string(ScriptName(source)));
  }
  DevanagariConversion result;
  if (source == Script::kDevanagari) {
    result.text = std::string(text);
    return result;
  }
  result.text.reserve(text.size());
  for (size_t pos = 0; pos < text.size();) {
    const size_t here = pos;
    const char32_t c = NextCodepoint(text, &pos);
    if (c < base || c >= base + 0x80) {
      result.text.append(text.substr(here, pos - here));
      continue;
    }
    const char32_t offset = c - base;
    const char32_t target = 0x0900 + offset;
    if (offset >= 0x70 || IsScriptSpecificOffset(source, offset) || !IsAssigned(c) ||
        !IsAssigned(target)) {
      ++result.passed_through[c];
      AppendUtf8(c, &result.text);
      continue;
    }
    AppendUtf8(target, &result.text);
  }
  return result;
}

}  // namespace corpus_forge
