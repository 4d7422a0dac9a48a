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

#include "apv/dy/knowledge.hpp"

#include <atomic>
#include <map>

namespace apv::dy {

namespace {

// Structure-directed synthesis over a fixed closure. Composition never needs
// to exceed the goal's own structure: every derivation of a composed head is
// either closure membership or the head's introduction rule, so recursing on
// the constructor arguments is complete and depth-minimal.
bool synthesizable(const std::set<Term>& closure, const Term& goal,
                   std::map<Term, bool>* memo) {
  if (closure.count(goal)) return true;
  if (memo) {
    auto it = memo->find(goal);
    if (it != memo->end()) return it->second;
  }
  bool out = false;
  switch (goal.kind()) {
    case TermKind::Atom:
    case TermKind::Inv:
      out = false;  // atoms and private keys cannot be composed
      break;
    case TermKind::Pair:
    case TermKind::SymEnc:
    case TermKind::AsymEnc:
    case TermKind::Sign:
      out = synthesizable(closure, goal.args()[0], memo) &&
            synthesizable(closure, goal.args()[1], memo);
      break;
    case TermKind::FunApp: {
      out = synthesizable(closure, Term::atom(goal.name()), memo);
      for (const Term& arg : goal.args()) {
        if (!out) break;
        out = synthesizable(closure, arg, memo);
      }
      break;
    }
  }
  if (memo) memo->emplace(goal, out);
  return out;
}

}  // namespace

size_t Derivation::depth() const {
  size_t max_child = 0;
  for (const Derivation& p : premises) {
    max_child = std::max(max_child, p.depth());
  }
  return premises.empty() ? 0 : 1 + max_child;
}

std::optional<Term> replay_derivation(const Derivation& d,
                                      const std::set<Term>& analyzed) {
  if (d.rule == Derivation::Rule::Fact) {
    if (!analyzed.count(d.conclusion)) return std::nullopt;
    return d.conclusion;
  }
  std::vector<Term> parts;
  parts.reserve(d.premises.size());
  for (const Derivation& p : d.premises) {
    auto t = replay_derivation(p, analyzed);
    if (!t) return std::nullopt;
    parts.push_back(std::move(*t));
  }
  Term rebuilt;
  switch (d.rule) {
    case Derivation::Rule::PairIntro:
      if (parts.size() != 2) return std::nullopt;
      rebuilt = Term::pair(parts[0], parts[1]);
      break;
    case Derivation::Rule::SymEncIntro:
      if (parts.size() != 2) return std::nullopt;
      rebuilt = Term::sym_enc(parts[0], parts[1]);
      break;
    case Derivation::Rule::AsymEncIntro:
      if (parts.size() != 2) return std::nullopt;
      rebuilt = Term::asym_enc(parts[0], parts[1]);
      break;
    case Derivation::Rule::SignIntro:
      if (parts.size() != 2) return std::nullopt;
      rebuilt = Term::sign(parts[0], parts[1]);
      break;
    case Derivation::Rule::FunAppIntro:
      if (d.conclusion.kind() != TermKind::FunApp) return std::nullopt;
      rebuilt = Term::fun_app(d.conclusion.name(), parts,
                              d.conclusion.one_way());
      break;
    case Derivation::Rule::Fact:
      return std::nullopt;  // handled above
  }
  if (rebuilt != d.conclusion) return std::nullopt;
  return rebuilt;
}

std::set<Term> analyze(const std::set<Term>& facts) {
  std::set<Term> closure = facts;
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Term, bool> memo;
    std::vector<Term> fresh;
    for (const Term& t : closure) {
      switch (t.kind()) {
        case TermKind::Pair:
          fresh.push_back(t.args()[0]);
          fresh.push_back(t.args()[1]);
          break;
        case TermKind::Sign:
          // sign-then-reveal: a signature discloses its payload
          fresh.push_back(t.args()[0]);
          break;
        case TermKind::SymEnc:
          if (synthesizable(closure, t.args()[1], &memo)) {
            fresh.push_back(t.args()[0]);
          }
          break;
        case TermKind::AsymEnc:
          if (synthesizable(closure, Term::inv(t.args()[1]), &memo)) {
            fresh.push_back(t.args()[0]);
          }
          break;
        case TermKind::FunApp:
          if (!t.one_way()) {
            for (const Term& arg : t.args()) fresh.push_back(arg);
          }
          break;
        case TermKind::Atom:
        case TermKind::Inv:
          break;
      }
    }
    for (Term& t : fresh) {
      if (closure.insert(std::move(t)).second) changed = true;
    }
  }
  return closure;
}

struct KnowledgeBase::State {
  std::set<Term> facts;
  std::set<Term> analyzed;
  uint64_t generation = 0;
  uint64_t uid = 0;
};

namespace {
std::atomic<uint64_t> g_kb_uid{1};
}  // namespace

KnowledgeBase::KnowledgeBase() {
  auto state = std::make_shared<State>();
  state->uid = g_kb_uid.fetch_add(1);
  state_ = std::move(state);
}

KnowledgeBase::KnowledgeBase(std::shared_ptr<const State> state)
    : state_(std::move(state)) {}

KnowledgeBase KnowledgeBase::from_facts(std::set<Term> facts) {
  auto state = std::make_shared<State>();
  state->analyzed = analyze(facts);
  state->facts = std::move(facts);
  state->uid = g_kb_uid.fetch_add(1);
  return KnowledgeBase(std::move(state));
}

KnowledgeBase KnowledgeBase::add_fact(const Term& fact) const {
  auto state = std::make_shared<State>();
  state->facts = state_->facts;
  state->facts.insert(fact);
  // Incremental reclosure: rules are monotone, so restarting the fixpoint
  // from the previous closure plus the new fact is exact.
  std::set<Term> seed = state_->analyzed;
  seed.insert(fact);
  state->analyzed = analyze(seed);
  state->generation = state_->generation + 1;
  state->uid = g_kb_uid.fetch_add(1);
  return KnowledgeBase(std::move(state));
}

const std::set<Term>& KnowledgeBase::facts() const { return state_->facts; }
const std::set<Term>& KnowledgeBase::analyzed() const {
  return state_->analyzed;
}
uint64_t KnowledgeBase::generation() const { return state_->generation; }
uint64_t KnowledgeBase::uid() const { return state_->uid; }

bool KnowledgeBase::derivable(const Term& goal) const {
  std::map<Term, bool> memo;
  return synthesizable(state_->analyzed, goal, &memo);
}

namespace {

std::optional<Derivation> derive_tree(const std::set<Term>& closure,
                                      const Term& goal) {
  if (closure.count(goal)) {
    return Derivation{Derivation::Rule::Fact, goal, {}};
  }
  auto binary = [&](Derivation::Rule rule) -> std::optional<Derivation> {
    auto left = derive_tree(closure, goal.args()[0]);
    if (!left) return std::nullopt;
    auto right = derive_tree(closure, goal.args()[1]);
    if (!right) return std::nullopt;
    return Derivation{rule, goal, {std::move(*left), std::move(*right)}};
  };
  switch (goal.kind()) {
    case TermKind::Atom:
    case TermKind::Inv:
      return std::nullopt;
    case TermKind::Pair:
      return binary(Derivation::Rule::PairIntro);
    case TermKind::SymEnc:
      return binary(Derivation::Rule::SymEncIntro);
    case TermKind::AsymEnc:
      return binary(Derivation::Rule::AsymEncIntro);
    case TermKind::Sign:
      return binary(Derivation::Rule::SignIntro);
    case TermKind::FunApp: {
      if (!derive_tree(closure, Term::atom(goal.name()))) return std::nullopt;
      std::vector<Derivation> premises;
      premises.reserve(goal.args().size());
      for (const Term& arg : goal.args()) {
        auto p = derive_tree(closure, arg);
        if (!p) return std::nullopt;
        premises.push_back(std::move(*p));
      }
      return Derivation{Derivation::Rule::FunAppIntro, goal,
                        std::move(premises)};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Derivation> KnowledgeBase::derive(const Term& goal) const {
  return derive_tree(state_->analyzed, goal);
}

}  // namespace apv::dy
