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

// Thin UTF-8 and character-property layer over ICU. Everything above this
// file works on UTF-8 std::string and char32_t codepoints.

#ifndef CORPUS_FORGE_UNICODE_H_
#define CORPUS_FORGE_UNICODE_H_

#include <string>
#include <string_view>
#include <vector>

namespace corpus_forge {

// Decodes the codepoint starting at text[*pos] and advances *pos. Ill-formed
// sequences decode to U+FFFD.
char32_t NextCodepoint(std::string_view text, size_t* pos);

void AppendUtf8(char32_t c, std::string* out);
std::string ToUtf8(std::u32string_view text);
std::u32string ToUtf32(std::string_view text);

bool IsValidUtf8(std::string_view text);
size_t CodepointCount(std::string_view text);

bool IsWhitespace(char32_t c);

// Letter-like codepoint: general category L* or M*. Combining marks count so
// that Indic vowel signs and viramas contribute to letter totals.
bool IsLetter(char32_t c);

// General category P*. The dandas (U+0964, U+0965) are Po and included.
bool IsPunctuation(char32_t c);

char32_t FoldCase(char32_t c);
char32_t ToLower(char32_t c);

// Per-codepoint simple case folding / lowercasing of a UTF-8 string.
std::string FoldCase(std::string_view text);
std::string ToLower(std::string_view text);

// Unicode NFC normalization.
std::string NormalizeNfc(std::string_view text);

// Maximal runs of non-whitespace codepoints.
std::vector<std::string_view> SplitWhitespace(std::string_view text);
size_t CountWhitespaceTokens(std::string_view text);

// Collapses every whitespace run to one ASCII space and trims both ends.
std::string CollapseWhitespace(std::string_view text);

std::string_view TrimWhitespace(std::string_view text);

// Drops leading and trailing punctuation codepoints.
std::string_view TrimPunctuation(std::string_view text);

// Removes every punctuation codepoint.
std::string StripPunctuation(std::string_view text);

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_UNICODE_H_
