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

// Script classification for the thirteen writing systems used by the
// supported languages, native-script ratios, and conversion of Brahmi-derived
// scripts into Devanagari.

#ifndef CORPUS_FORGE_SCRIPTS_H_
#define CORPUS_FORGE_SCRIPTS_H_

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace corpus_forge {

enum class Script {
  kDevanagari,
  kBengali,
  kGujarati,
  kGurmukhi,
  kKannada,
  kMalayalam,
  kOdia,
  kTamil,
  kTelugu,
  kArabic,
  kLatin,
  kOlChiki,
  kMeitei,
  kOther,
};

inline constexpr size_t kNumScripts = static_cast<size_t>(Script::kOther) + 1;

struct ScriptRange {
  char32_t first;
  char32_t last;  // inclusive
  Script script;
};

// The embedded range table, sorted and non-overlapping.
std::span<const ScriptRange> ScriptRanges();

// Total lookup; unmapped codepoints are kOther.
Script ScriptOf(char32_t c);

std::string_view ScriptName(Script script);

// Accepts the names produced by ScriptName, case-insensitively.
// Throws std::invalid_argument for unknown names.
Script ParseScript(std::string_view name);

// Blocks laid out in parallel with U+0900..U+097F.
bool IsBrahmiAligned(Script script);

// The scripts with upper/lower case distinctions.
bool HasCase(Script script);

struct ScriptProfile {
  std::array<size_t, kNumScripts> counts{};
  size_t total = 0;

  size_t count(Script s) const { return counts[static_cast<size_t>(s)]; }
  ScriptProfile& operator+=(const ScriptProfile& other);
  friend bool operator==(const ScriptProfile&, const ScriptProfile&) = default;
};

// Counts letter codepoints (categories L and M) per script. Whitespace,
// digits, punctuation and symbols are ignored.
ScriptProfile ComputeScriptProfile(std::string_view text);

struct NativeRatio {
  double value = 0.0;
  bool empty = false;  // no letters at all; value is 0
};

NativeRatio ComputeNativeRatio(const ScriptProfile& profile, Script expected);
NativeRatio ComputeNativeRatio(std::string_view text, Script expected);

struct DevanagariConversion {
  std::string text;
  // Source-block codepoints that have no aligned Devanagari counterpart and
  // were copied unchanged, with occurrence counts.
  std::map<char32_t, size_t> passed_through;
};

// Maps each codepoint of the source script's block onto the Devanagari block
// by fixed offset. Codepoints outside the source block are untouched.
// Throws UnsupportedScriptError for scripts that are not block-aligned with
// Devanagari (Arabic, Latin, Ol Chiki, Meitei, Other).
DevanagariConversion ToDevanagari(std::string_view text, Script source);

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_SCRIPTS_H_
