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

#include "apv/hl/grammar.hpp"

#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "apv/anb/parser.hpp"

namespace apv::hl {

using json = nlohmann::json;

namespace {

void schema_error(std::vector<Diagnostic>& diags, const std::string& message) {
  diags.push_back(Diagnostic::error(SourceSpan{}, message, "schema-error"));
}

std::vector<std::string> whitespace_tokens(const std::string& payload) {
  std::istringstream in(payload);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

// Capture placeholders: $name.
std::set<std::string> template_captures(const std::string& tmpl) {
  std::set<std::string> out;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '$') continue;
    size_t j = i + 1;
    std::string name;
    while (j < tmpl.size() &&
           (std::isalnum(static_cast<unsigned char>(tmpl[j])) ||
            tmpl[j] == '_')) {
      name += tmpl[j++];
    }
    if (!name.empty()) out.insert(name);
    i = j - 1;
  }
  return out;
}

}  // namespace

GrammarLoadResult load_payload_grammar(const std::string& document) {
  GrammarLoadResult result;
  auto& diags = result.diagnostics;

  json j = json::parse(document, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    schema_error(diags, "malformed JSON document");
    return result;
  }

  PayloadGrammar grammar;
  grammar.name = j.value("name", "");
  if (grammar.name.empty()) {
    schema_error(diags, "grammar needs a 'name'");
    return result;
  }
  std::string ambiguity = j.value("ambiguity", "first");
  if (ambiguity == "error") {
    grammar.ambiguity_is_error = true;
  } else if (ambiguity != "first") {
    schema_error(diags, "'ambiguity' must be \"first\" or \"error\"");
    return result;
  }

  std::set<std::string> token_names;
  for (const json& tj : j.value("tokens", json::array())) {
    TokenClass token;
    token.name = tj.value("name", "");
    token.regex = tj.value("regex", "");
    auto sort = sort_from_string(tj.value("sort", ""));
    if (token.name.empty() || token.regex.empty() || !sort) {
      schema_error(diags, "token classes need 'name', 'sort' and 'regex'");
      return result;
    }
    token.sort = *sort;
    if (!token_names.insert(token.name).second) {
      schema_error(diags, "duplicate token class '" + token.name + "'");
      return result;
    }
    try {
      std::regex probe(token.regex);
    } catch (const std::regex_error&) {
      schema_error(diags, "invalid regex for token class '" + token.name + "'");
      return result;
    }
    grammar.tokens.push_back(std::move(token));
  }

  std::set<std::string> labels;
  for (const json& pj : j.value("productions", json::array())) {
    Production production;
    production.label = pj.value("label", "");
    if (production.label.empty() || !labels.insert(production.label).second) {
      schema_error(diags, "productions need unique labels");
      return result;
    }
    const json& seq = pj.value("sequence", json::array());
    if (!seq.is_array() || seq.empty()) {
      schema_error(diags,
                   "production '" + production.label + "' has no sequence");
      return result;
    }
    for (const json& item_json : seq) {
      if (!item_json.is_string()) {
        schema_error(diags, "sequence items must be strings");
        return result;
      }
      std::string text = item_json.get<std::string>();
      SeqItem item;
      auto colon = text.find(':');
      if (colon != std::string::npos &&
          token_names.count(text.substr(0, colon))) {
        item.is_literal = false;
        item.token_class = text.substr(0, colon);
        item.capture = text.substr(colon + 1);
      } else if (token_names.count(text)) {
        item.is_literal = false;
        item.token_class = text;
        item.capture = text;
      } else {
        item.literal = std::move(text);
      }
      production.sequence.push_back(std::move(item));
    }
    grammar.productions.push_back(std::move(production));
  }
  if (grammar.productions.empty()) {
    schema_error(diags, "grammar declares no productions");
    return result;
  }

  if (!j.contains("templates") || !j["templates"].is_object()) {
    schema_error(diags, "missing 'templates' object");
    return result;
  }
  for (const auto& [label, tmpl] : j["templates"].items()) {
    if (!tmpl.is_string()) {
      schema_error(diags, "templates must be term-skeleton strings");
      return result;
    }
    grammar.templates[label] = tmpl.get<std::string>();
  }

  // Every production needs a template whose captures it produces.
  for (const Production& production : grammar.productions) {
    auto tmpl = grammar.templates.find(production.label);
    if (tmpl == grammar.templates.end()) {
      schema_error(diags,
                   "production '" + production.label + "' has no template");
      return result;
    }
    std::set<std::string> produced;
    for (const SeqItem& item : production.sequence) {
      if (!item.is_literal) produced.insert(item.capture);
    }
    for (const std::string& used : template_captures(tmpl->second)) {
      if (!produced.count(used)) {
        schema_error(diags, "template of '" + production.label +
                                "' uses capture '$" + used +
                                "' its production does not produce");
        return result;
      }
    }
  }

  result.grammar = std::move(grammar);
  return result;
}

PayloadParseResult parse_payload(const PayloadGrammar& grammar,
                                 const std::string& payload,
                                 const Decls& decls) {
  PayloadParseResult result;
  auto& diags = result.diagnostics;

  const std::vector<std::string> lexemes = whitespace_tokens(payload);

  // Token-class disjointness, checked on this payload's lexemes.
  for (const std::string& lexeme : lexemes) {
    size_t matching = 0;
    for (const TokenClass& token : grammar.tokens) {
      if (std::regex_match(lexeme, std::regex(token.regex))) ++matching;
    }
    if (matching > 1) {
      diags.push_back(Diagnostic::warning(
          SourceSpan{},
          "lexeme '" + lexeme + "' matches more than one token class",
          "token-overlap"));
    }
  }

  const Production* matched = nullptr;
  std::map<std::string, std::string> captures;
  for (const Production& production : grammar.productions) {
    if (production.sequence.size() != lexemes.size()) continue;
    std::map<std::string, std::string> trial;
    bool ok = true;
    for (size_t i = 0; i < lexemes.size() && ok; ++i) {
      const SeqItem& item = production.sequence[i];
      if (item.is_literal) {
        ok = item.literal == lexemes[i];
        continue;
      }
      const TokenClass* token = nullptr;
      for (const TokenClass& t : grammar.tokens) {
        if (t.name == item.token_class) token = &t;
      }
      ok = token && std::regex_match(lexemes[i], std::regex(token->regex));
      if (ok) {
        auto previous = trial.find(item.capture);
        if (previous != trial.end() && previous->second != lexemes[i]) {
          ok = false;  // repeated capture must match the same lexeme
        } else {
          trial[item.capture] = lexemes[i];
        }
      }
    }
    if (!ok) continue;
    if (!matched) {
      matched = &production;
      captures = std::move(trial);
      if (!grammar.ambiguity_is_error) break;
    } else {
      diags.push_back(Diagnostic::error(
          SourceSpan{},
          "payload matches both '" + matched->label + "' and '" +
              production.label + "'",
          "ambiguous-match"));
      return result;
    }
  }

  if (!matched) {
    diags.push_back(Diagnostic::error(
        SourceSpan{}, "no production matches payload '" + payload + "'",
        "no-production-matches"));
    return result;
  }

  // Captured atoms take the sort of their token class.
  Decls extended = decls;
  for (const SeqItem& item : matched->sequence) {
    if (item.is_literal) continue;
    for (const TokenClass& token : grammar.tokens) {
      if (token.name != item.token_class) continue;
      const std::string& atom = captures.at(item.capture);
      result.captured_sorts[atom] = token.sort;
      extended.emplace(atom, token.sort);
    }
  }

  // Textual substitution of $captures, then one shared term grammar.
  std::string skeleton = grammar.templates.at(matched->label);
  std::string instantiated;
  for (size_t i = 0; i < skeleton.size(); ++i) {
    if (skeleton[i] != '$') {
      instantiated += skeleton[i];
      continue;
    }
    size_t j = i + 1;
    std::string name;
    while (j < skeleton.size() &&
           (std::isalnum(static_cast<unsigned char>(skeleton[j])) ||
            skeleton[j] == '_')) {
      name += skeleton[j++];
    }
    instantiated += captures.at(name);
    i = j - 1;
  }

  auto parsed = anb::parse_term(instantiated, extended);
  for (const Diagnostic& d : parsed.diagnostics) diags.push_back(d);
  if (!parsed.ok()) return result;
  result.term = parsed.term;
  return result;
}

}  // namespace apv::hl
