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

#include <optional>
#include <string>
#include <vector>

#include "apv/diagnostics.hpp"
#include "apv/protocol.hpp"
#include "apv/term.hpp"

namespace apv::anb {

struct ParseResult {
  std::optional<ProtocolSpec> spec;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return spec.has_value() && !has_errors(diagnostics); }
};

// Parses an AnB protocol document. On success the returned spec satisfies
// the core model invariants; error diagnostics imply no spec is produced.
ParseResult parse_protocol(const std::string& source);

struct TermParseResult {
  std::optional<Term> term;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return term.has_value() && !has_errors(diagnostics); }
};

// Parses a single term in the protocol payload syntax against the given
// declarations. Session-suffixed ground atoms (`NA#s1`) are admitted and
// resolve through their base identifier.
TermParseResult parse_term(const std::string& source, const Decls& decls);

}  // namespace apv::anb
