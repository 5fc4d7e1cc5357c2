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

#include "corpus_forge/token_automaton.h"

#include <deque>
#include <stdexcept>

namespace corpus_forge {

TokenAutomaton::TokenAutomaton(const std::vector<std::vector<std::string>>& patterns)
    : nodes_(1), num_patterns_(patterns.size()) {
  // Trie.
  for (size_t p = 0; p < patterns.size(); ++p) {
    if (patterns[p].empty()) throw std::invalid_argument("empty pattern");
    int32_t state = 0;
    for (const std::string& token : patterns[p]) {
      auto [sym, inserted] = symbols_.try_emplace(token, static_cast<int32_t>(symbols_.size()));
      auto it = nodes_[state].next.find(sym->second);
      if (it == nodes_[state].next.end()) {
        nodes_.emplace_back();
        const int32_t child = static_cast<int32_t>(nodes_.size() - 1);
        nodes_[state].next.emplace(sym->second, child);
        state = child;
      } else {
        state = it->second;
      }
    }
    if (nodes_[state].output < 0) nodes_[state].output = static_cast<int32_t>(p);
  }

  // Failure links, breadth first.
  std::deque<int32_t> queue;
  for (const auto& [sym, child] : nodes_[0].next) queue.push_back(child);
  while (!queue.empty()) {
    const int32_t state = queue.front();
    queue.pop_front();
    const int32_t fail_output = nodes_[nodes_[state].fail].output;
    if (fail_output >= 0 && (nodes_[state].output < 0 || fail_output < nodes_[state].output)) {
      nodes_[state].output = fail_output;
    }
    for (const auto& [sym, child] : nodes_[state].next) {
      int32_t f = nodes_[state].fail;
      while (f != 0 && !nodes_[f].next.contains(sym)) f = nodes_[f].fail;
      auto it = nodes_[f].next.find(sym);
      nodes_[child].fail = (it != nodes_[f].next.end() && it->second != child) ? it->second : 0;
      queue.push_back(child);
    }
  }
}

int32_t TokenAutomaton::Step(int32_t state, int32_t symbol) const {
  while (true) {
    auto it = nodes_[state].next.find(symbol);
    if (it != nodes_[state].next.end()) return it->second;
    if (state == 0) return 0;
    state = nodes_[state].fail;
  }
}

int TokenAutomaton::FindFirst(std::span<const std::string> tokens) const {
  int32_t state = 0;
  for (const std::string& token : tokens) {
    auto sym = symbols_.find(token);
    if (sym == symbols_.end()) {
      // A token outside every pattern cannot be part of any match.
      state = 0;
      continue;
    }
    state = Step(state, sym->second);
    if (nodes_[state].output >= 0) return nodes_[state].output;
  }
  return -1;
}

}  // namespace corpus_forge
