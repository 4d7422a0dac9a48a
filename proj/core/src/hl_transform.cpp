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

#include "apv/hl/transform.hpp"

#include <sstream>

#include "apv/anb/parser.hpp"

namespace apv::hl {

namespace {

void error_at(std::vector<Diagnostic>& diags, size_t interaction_index,
              const std::string& message, const std::string& code) {
  diags.push_back(Diagnostic::error(
      SourceSpan{},
      "interaction " + std::to_string(interaction_index + 1) + ": " + message,
      code));
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    size_t begin = item.find_first_not_of(" \t");
    size_t end = item.find_last_not_of(" \t");
    if (begin == std::string::npos) continue;
    out.push_back(item.substr(begin, end - begin + 1));
  }
  return out;
}

}  // namespace

TransformResult to_anb(const HLModel& model,
                       const std::map<std::string, PayloadGrammar>& grammars) {
  TransformResult result;
  auto& diags = result.diagnostics;

  ProtocolSpec spec;
  spec.name = model.name;

  for (const HLPrincipal& principal : model.principals) {
    spec.declarations[principal.name] = Sort::Agent;
  }
  for (const auto& [name, sort] : model.types) {
    auto [it, inserted] = spec.declarations.emplace(name, sort);
    if (!inserted && it->second != sort) {
      diags.push_back(Diagnostic::error(
          SourceSpan{}, "conflicting sort for '" + name + "'",
          "duplicate-declaration"));
      return result;
    }
  }

  // Pass 1: lower payloads in order, accumulating grammar-assigned sorts.
  for (size_t i = 0; i < model.interactions.size(); ++i) {
    const HLInteraction& interaction = model.interactions[i];
    const std::string& payload_text = interaction.tags.at("payload");

    Action action;
    action.sender = interaction.from;
    action.receiver = interaction.to;
    action.mode = ChannelMode::Plain;
    if (auto channel = interaction.tags.find("channel");
        channel != interaction.tags.end()) {
      auto mode = mode_from_arrow(channel->second);
      if (!mode) {
        error_at(diags, i, "unknown channel mode '" + channel->second + "'",
                 "schema-error");
        return result;
      }
      action.mode = *mode;
    }

    if (interaction.stereotype == "transaction") {
      std::string grammar_name;
      if (auto tag = interaction.tags.find("grammar");
          tag != interaction.tags.end()) {
        grammar_name = tag->second;
      } else if (model.default_grammar) {
        grammar_name = *model.default_grammar;
      } else {
        error_at(diags, i, "transaction names no grammar and no default is set",
                 "schema-error");
        return result;
      }
      auto grammar = grammars.find(grammar_name);
      if (grammar == grammars.end()) {
        error_at(diags, i, "grammar '" + grammar_name + "' is not registered",
                 "schema-error");
        return result;
      }
      PayloadParseResult payload =
          parse_payload(grammar->second, payload_text, spec.declarations);
      for (const Diagnostic& d : payload.diagnostics) {
        Diagnostic tagged = d;
        tagged.message =
            "interaction " + std::to_string(i + 1) + ": " + tagged.message;
        diags.push_back(std::move(tagged));
      }
      if (!payload.ok()) return result;
      for (const auto& [atom, sort] : payload.captured_sorts) {
        auto [it, inserted] = spec.declarations.emplace(atom, sort);
        if (!inserted && it->second != sort) {
          error_at(diags, i,
                   "captured '" + atom + "' conflicts with an earlier sort",
                   "duplicate-declaration");
          return result;
        }
      }
      action.payload = *payload.term;
    } else {
      auto parsed = anb::parse_term(payload_text, spec.declarations);
      for (const Diagnostic& d : parsed.diagnostics) {
        Diagnostic tagged = d;
        tagged.message =
            "interaction " + std::to_string(i + 1) + ": " + tagged.message;
        diags.push_back(std::move(tagged));
      }
      if (!parsed.ok()) return result;
      action.payload = *parsed.term;
    }
    spec.actions.push_back(std::move(action));
  }

  // Principal attributes -> knowledge, against the final declarations.
  for (const HLPrincipal& principal : model.principals) {
    std::vector<Term> knowledge;
    for (const std::string& text : principal.knowledge) {
      auto parsed = anb::parse_term(text, spec.declarations);
      for (const Diagnostic& d : parsed.diagnostics) diags.push_back(d);
      if (!parsed.ok()) return result;
      knowledge.push_back(*parsed.term);
    }
    spec.knowledge[principal.name] = std::move(knowledge);
  }

  // Constraints -> goals.
  auto occurs_in_some_payload = [&](const Term& t) {
    for (const Action& action : spec.actions) {
      if (subterms(action.payload).count(t)) return true;
    }
    return false;
  };

  for (const HLConstraint& constraint : model.constraints) {
    if (constraint.kind == "secrecy") {
      auto term_arg = constraint.args.find("term");
      auto between_arg = constraint.args.find("between");
      if (term_arg == constraint.args.end() ||
          between_arg == constraint.args.end()) {
        diags.push_back(Diagnostic::error(
            SourceSpan{}, "secrecy constraint needs 'term' and 'between'",
            "schema-error"));
        return result;
      }
      auto parsed = anb::parse_term(term_arg->second, spec.declarations);
      for (const Diagnostic& d : parsed.diagnostics) diags.push_back(d);
      if (!parsed.ok()) return result;
      if (!occurs_in_some_payload(*parsed.term)) {
        diags.push_back(Diagnostic::error(
            SourceSpan{},
            "secrecy term '" + term_arg->second +
                "' does not occur in any payload",
            "goal-lowering-error"));
        return result;
      }
      spec.goals.push_back(Goal::secrecy(*parsed.term,
                                         split_commas(between_arg->second)));
      continue;
    }

    auto claimer = constraint.args.find("claimer");
    auto peer = constraint.args.find("peer");
    auto on = constraint.args.find("on");
    if (claimer == constraint.args.end() || peer == constraint.args.end() ||
        on == constraint.args.end()) {
      diags.push_back(Diagnostic::error(
          SourceSpan{},
          "agreement constraint needs 'claimer', 'peer' and 'on'",
          "schema-error"));
      return result;
    }
    std::vector<Term> on_terms;
    for (const std::string& text : split_commas(on->second)) {
      auto parsed = anb::parse_term(text, spec.declarations);
      for (const Diagnostic& d : parsed.diagnostics) diags.push_back(d);
      if (!parsed.ok()) return result;
      if (!occurs_in_some_payload(*parsed.term)) {
        diags.push_back(Diagnostic::error(
            SourceSpan{},
            "agreement term '" + text + "' does not occur in any payload",
            "goal-lowering-error"));
        return result;
      }
      on_terms.push_back(*parsed.term);
    }
    if (constraint.kind == "inj-agreement") {
      spec.goals.push_back(Goal::inj_agreement(claimer->second, peer->second,
                                               std::move(on_terms)));
    } else {
      spec.goals.push_back(Goal::weak_agreement(claimer->second, peer->second,
                                                std::move(on_terms)));
    }
  }

  if (spec.goals.empty()) {
    diags.push_back(Diagnostic::warning(SourceSpan{},
                                        "model declares no goals", "no-goals"));
  }

  result.spec = std::move(spec);
  return result;
}

}  // namespace apv::hl
