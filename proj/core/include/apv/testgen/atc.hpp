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

#include "apv/check/search.hpp"
#include "apv/diagnostics.hpp"
#include "apv/protocol.hpp"

namespace apv::testgen {

// One step of a tool-independent replayable test script. ExpectSend is an
// honest send the harness waits for, Inject is an intruder delivery, Observe
// records a term entering the intruder's knowledge.
struct AtcStep {
  enum class Kind { ExpectSend, Inject, Observe };

  Kind kind = Kind::ExpectSend;
  std::string instance;
  Term term;

  bool operator==(const AtcStep&) const = default;
};

struct AtcAssertion {
  enum class Kind { SecretLearned, CommitWithoutRunning, DuplicateCommit };

  Kind kind = Kind::SecretLearned;
  size_t goal_index = 0;
  Term term;                 // SecretLearned
  std::string claimer;       // agreement: committing agent
  std::string peer;          // agreement: claimed peer agent
  std::vector<Term> values;  // agreement data

  bool operator==(const AtcAssertion&) const = default;
};

struct AbstractTestCase {
  std::string protocol;
  std::string dishonest = "i";
  size_t goal_index = 0;
  std::string goal_text;
  std::vector<check::SessionAssignment> sessions;
  std::vector<AtcStep> steps;
  AtcAssertion assertion;

  bool operator==(const AbstractTestCase&) const = default;
};

// Serializes an attack into an ATC: sends become ExpectSend (plus Observe
// when the intruder sees the payload), deliveries become Inject, the
// assertion restates the violated goal. Precondition: verify_trace accepts.
AbstractTestCase trace_to_atc(const ProtocolSpec& spec,
                              const check::AttackTrace& trace);

// Reconstructs a replayable trace from an ATC; the result is checkable with
// verify_trace (witnesses are recomputed there, not carried by the ATC).
check::AttackTrace atc_to_trace(const ProtocolSpec& spec,
                                const AbstractTestCase& atc);

struct IntruderDirective {
  enum class Kind { WaitFor, Send, Record };

  Kind kind = Kind::WaitFor;
  std::string instance;  // WaitFor: sender to watch; Send: delivery target
  Term term;             // WaitFor: exact ground pattern; Send: payload
  std::string binding;   // Record: name of the recorded observation

  bool operator==(const IntruderDirective&) const = default;
};

struct IntruderScript {
  std::vector<IntruderDirective> directives;
  AtcAssertion assertion;

  bool operator==(const IntruderScript&) const = default;
};

// ExpectSend -> WaitFor, Inject -> Send, Observe -> Record, preserving order.
IntruderScript atc_to_intruder_script(const AbstractTestCase& atc);

// --- file formats ----------------------------------------------------------

std::string atc_to_json(const AbstractTestCase& atc);

struct AtcLoadResult {
  std::optional<AbstractTestCase> atc;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return atc.has_value() && !has_errors(diagnostics); }
};

AtcLoadResult atc_from_json(const std::string& text, const ProtocolSpec& spec);

std::string trace_to_json(const check::AttackTrace& trace);

struct TraceLoadResult {
  std::optional<check::AttackTrace> trace;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return trace.has_value() && !has_errors(diagnostics); }
};

TraceLoadResult trace_from_json(const std::string& text,
                                const ProtocolSpec& spec);

}  // namespace apv::testgen
