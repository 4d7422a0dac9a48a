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

// Structured stand-in for an annotated interaction model: principals play
// the stereotyped lifelines, interactions the stereotyped messages, tagged
// values carry payload text and channel annotations.
struct HLPrincipal {
  std::string name;
  std::vector<std::string> knowledge;  // initial-knowledge term strings

  bool operator==(const HLPrincipal&) const = default;
};

struct HLInteraction {
  std::string from;
  std::string to;
  std::string stereotype;                  // "transaction" | "message"
  std::map<std::string, std::string> tags;  // payload, channel, grammar

  bool operator==(const HLInteraction&) const = default;
};

struct HLConstraint {
  std::string kind;  // "secrecy" | "agreement" | "inj-agreement"
  std::map<std::string, std::string> args;

  bool operator==(const HLConstraint&) const = default;
};

struct HLModel {
  std::string name;
  std::optional<std::string> default_grammar;
  std::map<std::string, Sort> types;  // extra identifier sorts beyond Agent
  std::vector<HLPrincipal> principals;
  std::vector<HLInteraction> interactions;
  std::vector<HLConstraint> constraints;

  bool operator==(const HLModel&) const = default;
};

struct HLLoadResult {
  std::optional<HLModel> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

// Loads and validates the JSON interchange document (top-level keys `name`,
// `principals`, `interactions`, `constraints`, optional `default_grammar`
// and `types`). Unknown stereotypes are errors, as are interactions naming
// undeclared principals.
HLLoadResult load_hl_model(const std::string& document);

}  // namespace apv::hl
