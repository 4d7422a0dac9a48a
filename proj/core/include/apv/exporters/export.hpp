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

#include <string>
#include <vector>

#include "apv/protocol.hpp"
#include "apv/testgen/atc.hpp"

namespace apv::exporters {

struct ExportArtifact {
  enum class Format { AnB, TamarinTheory, AtcJson };

  Format format = Format::AnB;
  std::string text;
  std::vector<std::string> warnings;  // constructs lowered heuristically
};

// Canonical AnB emission; reparses structurally equal.
ExportArtifact export_anb(const ProtocolSpec& spec);

// Multiset-rewriting theory skeleton: one setup rule per long-term key
// family, one rule per role-script step, action facts for the claims, one
// lemma per goal. Channel modes other than plain are encoded as dedicated
// message-fact families and each such encoding emits one warning.
// Precondition: the spec passes the executability check.
ExportArtifact export_tamarin(const ProtocolSpec& spec);

// Archival bundle: the AnB artifact plus the ATC file text.
std::vector<ExportArtifact> export_atc_bundle(
    const ProtocolSpec& spec, const testgen::AbstractTestCase& atc);

}  // namespace apv::exporters
