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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apv/diagnostics.hpp"
#include "apv/term.hpp"

namespace apv::hl {

// Domain payload notation: token classes assign sorts to lexemes,
// productions are literal/token sequences, templates map captures to a term
// skeleton in AnB surface syntax with `$name` placeholders.
struct TokenClass {
  std::string name;
  Sort sort = Sort::Untyped;
  std::string regex;

  bool operator==(const TokenClass&) const = default;
};

struct SeqItem {
  bool is_literal = true;
  std::string literal;
  std::string token_class;
  std::string capture;

  bool operator==(const SeqItem&) const = default;
};

struct Production {
  std::string label;
  std::vector<SeqItem> sequence;

  bool operator==(const Production&) const = default;
};

struct PayloadGrammar {
  std::string name;
  std::vector<TokenClass> tokens;
  std::vector<Production> productions;
  std::map<std::string, std::string> templates;  // label -> term skeleton
  // "first": ordered choice; "error": two full matches are an AmbiguousMatch.
  bool ambiguity_is_error = false;

  bool operator==(const PayloadGrammar&) const = default;
};

struct GrammarLoadResult {
  std::optional<PayloadGrammar> grammar;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return grammar.has_value() && !has_errors(diagnostics); }
};

// Loads a grammar JSON document (`name`, `tokens`, `productions`,
// `templates`, optional `ambiguity`). Every capture used in a template must
// be produced by its production.
GrammarLoadResult load_payload_grammar(const std::string& document);

struct PayloadParseResult {
  std::optional<Term> term;
  // Sorts assigned to captured atoms by their token classes.
  std::map<std::string, Sort> captured_sorts;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return term.has_value() && !has_errors(diagnostics); }
};

// Matches the payload (whitespace-tokenized) against the productions in
// declaration order; the first full match instantiates its template.
// Token-class overlap on the payload's lexemes is reported as a warning.
PayloadParseResult parse_payload(const PayloadGrammar& grammar,
                                 const std::string& payload,
                                 const Decls& decls);

}  // namespace apv::hl
