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

#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apv/check/instantiate.hpp"
#include "apv/check/roles.hpp"
#include "apv/check/search.hpp"
#include "apv/dy/knowledge.hpp"
#include "apv/protocol.hpp"
#include "apv/testgen/atc.hpp"

namespace apv::sim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Executable state machine of one protocol party.
struct ParticipantProcess {
  enum class Status { Ready, Blocked, Completed, Stuck };

  check::Instance instance;  // ground script, label, agent binding
  size_t pc = 0;
  Bindings bindings;
  Status status = Status::Ready;
};

// Deterministic participant compilation: same script, session, assignment
// and seed always materialize the same fresh names.
ParticipantProcess compile_participant(const check::RoleScript& script,
                                       size_t session,
                                       const check::SessionAssignment& binding,
                                       unsigned seed);

struct Violation {
  enum class Kind { SecretLearned, CommitWithoutRunning, DuplicateCommit };

  Kind kind = Kind::SecretLearned;
  size_t goal_index = 0;
  Term term;                  // SecretLearned
  check::ClaimRecord commit;  // agreement violations
  size_t step = 0;            // simulation step that raised it

  bool operator==(const Violation&) const = default;
};

// Watches the goals over the observed claim events and a mirror of the
// intruder's knowledge, maintained with the same engine the checker uses.
struct SecurityMonitor {
  const ProtocolSpec* spec = nullptr;
  std::string dishonest = "i";
  std::vector<check::ClaimRecord> claims;
  dy::KnowledgeBase mirror;
  std::vector<Violation> violations;  // append-only
};

SecurityMonitor make_monitor(const ProtocolSpec& spec,
                             const std::set<Term>& intruder_facts,
                             std::string dishonest);

// Evaluates every watched goal against the current post-state; newly raised
// violations are appended to the monitor and returned.
std::vector<Violation> monitor_check(SecurityMonitor& monitor, size_t step);

struct SimReport {
  enum class Verdict { ViolationReproduced, NotReproduced };
  enum class Reason { None, ScriptStalled, RunCompletedClean,
                      StepBudgetExhausted };

  Verdict verdict = Verdict::NotReproduced;
  Reason reason = Reason::ScriptStalled;
  std::optional<Violation> violation;    // first raised
  std::vector<Violation> all_violations;
  std::vector<std::string> log;  // "step|actor|kind|term" records
  size_t steps_executed = 0;
};

const char* to_string(SimReport::Reason reason);

// Deterministic event loop: an eligible intruder directive runs first,
// otherwise the lowest-id Ready process executes one step; the monitor
// evaluates after every step. The run ends at the first violation, at
// script+process completion, on deadlock, or at max_steps.
//
// With an empty intruder script the hub is passive and forwards every
// genuine send to its addressed instance.
SimReport run(const ProtocolSpec& spec,
              std::vector<ParticipantProcess> processes,
              const testgen::IntruderScript& script,
              const std::vector<check::SessionAssignment>& sessions,
              SecurityMonitor monitor, size_t max_steps);

// Convenience wrapper: builds processes, monitor and intruder script from an
// abstract test case and runs it. Throws ConfigError when the script
// references an instance the session table does not produce.
SimReport simulate(const ProtocolSpec& spec,
                   const testgen::AbstractTestCase& atc, unsigned seed = 0,
                   size_t max_steps = 1000);

// Honest run: all sessions, passive hub, no intruder directives.
SimReport simulate_honest(const ProtocolSpec& spec,
                          const std::vector<check::SessionAssignment>& sessions,
                          std::string dishonest = "i", unsigned seed = 0,
                          size_t max_steps = 1000);

}  // namespace apv::sim
