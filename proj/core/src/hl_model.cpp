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

#include "apv/hl/model.hpp"

#include <set>

#include <nlohmann/json.hpp>

namespace apv::hl {

using json = nlohmann::json;

namespace {

void schema_error(std::vector<Diagnostic>& diags, const std::string& message) {
  diags.push_back(Diagnostic::error(SourceSpan{}, message, "schema-error"));
}

}  // namespace

HLLoadResult load_hl_model(const std::string& document) {
  HLLoadResult result;
  auto& diags = result.diagnostics;

  json j = json::parse(document, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    schema_error(diags, "malformed JSON document");
    return result;
  }

  HLModel model;
  if (!j.contains("name") || !j["name"].is_string()) {
    schema_error(diags, "missing model 'name'");
    return result;
  }
  model.name = j["name"].get<std::string>();
  if (j.contains("default_grammar")) {
    if (!j["default_grammar"].is_string()) {
      schema_error(diags, "'default_grammar' must be a string");
      return result;
    }
    model.default_grammar = j["default_grammar"].get<std::string>();
  }

  if (j.contains("types")) {
    if (!j["types"].is_object()) {
      schema_error(diags, "'types' must map identifiers to sort names");
      return result;
    }
    for (const auto& [name, sort_json] : j["types"].items()) {
      if (!sort_json.is_string()) {
        schema_error(diags, "sort of '" + name + "' must be a string");
        return result;
      }
      auto sort = sort_from_string(sort_json.get<std::string>());
      if (!sort) {
        schema_error(diags, "unknown sort '" + sort_json.get<std::string>() +
                                "' for '" + name + "'");
        return result;
      }
      model.types[name] = *sort;
    }
  }

  if (!j.contains("principals") || !j["principals"].is_array()) {
    schema_error(diags, "missing 'principals' array");
    return result;
  }
  std::set<std::string> principal_names;
  for (const json& pj : j["principals"]) {
    if (!pj.is_object() || !pj.contains("name") || !pj["name"].is_string()) {
      schema_error(diags, "principal entries need a 'name'");
      return result;
    }
    if (pj.contains("stereotype") && pj["stereotype"] != "principal") {
      diags.push_back(Diagnostic::error(
          SourceSpan{},
          "unknown stereotype '" + pj["stereotype"].get<std::string>() +
              "' on principal",
          "unknown-stereotype"));
      return result;
    }
    HLPrincipal principal;
    principal.name = pj["name"].get<std::string>();
    if (!principal_names.insert(principal.name).second) {
      schema_error(diags, "duplicate principal '" + principal.name + "'");
      return result;
    }
    for (const json& kj : pj.value("knowledge", json::array())) {
      if (!kj.is_string()) {
        schema_error(diags, "knowledge entries must be term strings");
        return result;
      }
      principal.knowledge.push_back(kj.get<std::string>());
    }
    model.principals.push_back(std::move(principal));
  }

  if (!j.contains("interactions") || !j["interactions"].is_array()) {
    schema_error(diags, "missing 'interactions' array");
    return result;
  }
  for (const json& ij : j["interactions"]) {
    if (!ij.is_object()) {
      schema_error(diags, "interaction entries must be objects");
      return result;
    }
    HLInteraction interaction;
    interaction.from = ij.value("from", "");
    interaction.to = ij.value("to", "");
    interaction.stereotype = ij.value("stereotype", "");
    if (interaction.stereotype != "transaction" &&
        interaction.stereotype != "message") {
      diags.push_back(Diagnostic::error(
          SourceSpan{},
          "unknown stereotype '" + interaction.stereotype + "' on interaction",
          "unknown-stereotype"));
      return result;
    }
    for (const std::string* endpoint : {&interaction.from, &interaction.to}) {
      if (!principal_names.count(*endpoint)) {
        diags.push_back(Diagnostic::error(
            SourceSpan{},
            "interaction references undeclared principal '" + *endpoint + "'",
            "dangling-principal-reference"));
        return result;
      }
    }
    if (ij.contains("tags")) {
      if (!ij["tags"].is_object()) {
        schema_error(diags, "'tags' must be an object");
        return result;
      }
      for (const auto& [key, value] : ij["tags"].items()) {
        if (!value.is_string()) {
          schema_error(diags, "tagged value '" + key + "' must be a string");
          return result;
        }
        interaction.tags[key] = value.get<std::string>();
      }
    }
    if (!interaction.tags.count("payload")) {
      schema_error(diags, "interaction from '" + interaction.from +
                              "' carries no 'payload' tagged value");
      return result;
    }
    model.interactions.push_back(std::move(interaction));
  }

  for (const json& cj : j.value("constraints", json::array())) {
    if (!cj.is_object() || !cj.contains("kind") || !cj["kind"].is_string()) {
      schema_error(diags, "constraint entries need a 'kind'");
      return result;
    }
    HLConstraint constraint;
    constraint.kind = cj["kind"].get<std::string>();
    if (constraint.kind != "secrecy" && constraint.kind != "agreement" &&
        constraint.kind != "inj-agreement") {
      diags.push_back(Diagnostic::error(
          SourceSpan{}, "unknown stereotype '" + constraint.kind +
                            "' on constraint",
          "unknown-stereotype"));
      return result;
    }
    for (const auto& [key, value] : cj.value("args", json::object()).items()) {
      if (!value.is_string()) {
        schema_error(diags, "constraint argument '" + key + "' must be a string");
        return result;
      }
      constraint.args[key] = value.get<std::string>();
    }
    model.constraints.push_back(std::move(constraint));
  }

  result.model = std::move(model);
  return result;
}

}  // namespace apv::hl
