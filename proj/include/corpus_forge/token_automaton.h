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

#ifndef CORPUS_FORGE_TOKEN_AUTOMATON_H_
#define CORPUS_FORGE_TOKEN_AUTOMATON_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace corpus_forge {

// Aho-Corasick automaton whose alphabet is whole tokens rather than bytes.
// A pattern is a non-empty token sequence; a match is a contiguous run of
// input tokens equal to some pattern, so matches always fall on token
// boundaries.
class TokenAutomaton {
 public:
  explicit TokenAutomaton(const std::vector<std::vector<std::string>>& patterns);

  // Index of the first pattern (in construction order) ending at the
  // earliest position, or -1 when no pattern occurs in `tokens`.
  int FindFirst(std::span<const std::string> tokens) const;
  bool Matches(std::span<const std::string> tokens) const { return FindFirst(tokens) >= 0; }

  size_t num_states() const { return nodes_.size(); }
  size_t num_patterns() const { return num_patterns_; }

 private:
  struct Node {
    std::unordered_map<int32_t, int32_t> next;
    int32_t fail = 0;
    // Smallest pattern index recognized at this state, through the failure
    // chain; -1 if none.
    int32_t output = -1;
  };

  int32_t Step(int32_t state, int32_t symbol) const;

  std::unordered_map<std::string, int32_t> symbols_;
  std::vector<Node> nodes_;
  size_t num_patterns_ = 0;
};

}  // namespace corpus_forge

#endif  // CORPUS_FORGE_TOKEN_AUTOMATON_H_
