/*
 * Copyright (c) 2026, the apv authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "apv/term.hpp"

namespace apv::dy {

// Witness for a successful synthesis. Leaves are facts of the analyzed
// closure; internal nodes are labeled with the composition rule whose
// premises are the children's conclusions.
struct Derivation {
  enum class Rule {
    Fact,
    PairIntro,
    SymEncIntro,
    AsymEncIntro,
    SignIntro,
    FunAppIntro,
  };

  Rule rule = Rule::Fact;
  Term conclusion;
  std::vector<Derivation> premises;

  size_t depth() const;
};

// Rebuilds the conclusion bottom-up, using only `analyzed` facts at the
// leaves; returns the rebuilt term iff every node checks out.
std::optional<Term> replay_derivation(const Derivation& d,
                                      const std::set<Term>& analyzed);

// Least fixpoint of the decomposition rules over `facts`. Decryption keys
// may themselves need composing, so analysis interleaves with synthesis
// until stable.
std::set<Term> analyze(const std::set<Term>& facts);

// Persistent intruder knowledge: values are immutable, add_fact returns a
// new knowledge base sharing nothing mutable with the old one.
class KnowledgeBase {
 public:
  KnowledgeBase();
  static KnowledgeBase from_facts(std::set<Term> facts);

  [[nodiscard]] KnowledgeBase add_fact(const Term& fact) const;

  const std::set<Term>& facts() const;
  const std::set<Term>& analyzed() const;

  // Bumped on every add_fact along a derivation chain.
  uint64_t generation() const;
  // Globally unique id of this value, usable as a memoization key.
  uint64_t uid() const;

  bool derivable(const Term& goal) const;
  std::optional<Derivation> derive(const Term& goal) const;

 private:
  struct State;
  explicit KnowledgeBase(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

}  // namespace apv::dy
