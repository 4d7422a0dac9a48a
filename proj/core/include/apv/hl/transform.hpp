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

#include "apv/diagnostics.hpp"
#include "apv/hl/grammar.hpp"
#include "apv/hl/model.hpp"
#include "apv/protocol.hpp"

namespace apv::hl {

struct TransformResult {
  std::optional<ProtocolSpec> spec;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return spec.has_value() && !has_errors(diagnostics); }
};

// Lowers the annotated model to the pivot notation: one action per
// interaction in order, transaction payloads through their registered
// grammar, message payloads through the shared term grammar, constraints to
// goals, principal attributes to knowledge. Declarations are synthesized
// from principals, the model's type annotations and the grammar-assigned
// capture sorts. The transformation never inspects payload text itself;
// swapping a grammar changes only the lowered payload terms.
TransformResult to_anb(const HLModel& model,
                       const std::map<std::string, PayloadGrammar>& grammars);

}  // namespace apv::hl
