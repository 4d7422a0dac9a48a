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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apv/check/roles.hpp"
#include "apv/dy/knowledge.hpp"
#include "apv/protocol.hpp"
#include "apv/term.hpp"

namespace apv::check {

// One protocol session instantiates every action role with an agent from the
// pool. An agent named like the dishonest agent plays that role as the
// intruder: no honest process exists and the role's instantiated knowledge
// is absorbed into the intruder's.
using SessionAssignment = std::map<std::string, std::string>;

struct SearchConfig {
  int max_sessions = 2;
  // Pool in enumeration order; the member equal to `dishonest` (if any) is
  // the intruder's agent identity.
  std::vector<std::string> agents = {"a", "b", "i"};
  std::string dishonest = "i";
  int max_depth = 64;
  uint64_t max_states = 500000;
  // Desk-scale guardrail: max_sessions above 3 is rejected unless overridden.
  bool override_session_guard = false;
  // When set, only the listed goal indices are checked.
  std::optional<std::set<size_t>> goal_filter;
  // Role-assignment policy: all instantiations by default, or this exact
  // session list.
  std::optional<std::vector<SessionAssignment>> explicit_sessions;
  // Collect per-term exploration detail (delivered terms, knowledge union).
  bool collect_detail = false;
};

struct InstanceInfo {
  std::string label;  // "s<k>:<Role>"
  size_t session = 0;
  std::string role;
  std::string agent;

  bool operator==(const InstanceInfo&) const = default;
};

struct ClaimRecord {
  ClaimSpec::Kind kind = ClaimSpec::Kind::Secret;
  size_t goal_index = 0;
  std::string instance;
  std::string by_agent;
  std::string toward_agent;          // agreement
  std::vector<Term> values;          // agreement data / [secret]
  std::vector<std::string> parties;  // secrecy party agents

  bool operator==(const ClaimRecord&) const = default;
};

struct TraceEvent {
  enum class Kind { Send, Deliver, Claim };

  Kind kind = Kind::Send;
  std::string instance;
  size_t action_index = 0;
  ChannelMode mode = ChannelMode::Plain;
  Term term;
  std::optional<ClaimRecord> claim;

  bool operator==(const TraceEvent&) const = default;
};

// Ordered ground witness of a goal violation. Replaying the events through
// the knowledge engine re-establishes every delivery obligation.
struct AttackTrace {
  std::string protocol;
  std::string dishonest = "i";
  size_t goal_index = 0;
  Goal goal;
  std::vector<SessionAssignment> sessions;
  std::vector<InstanceInfo> instances;
  std::vector<TraceEvent> events;

  bool is_secrecy = true;
  Term secret;                                  // secrecy
  std::optional<dy::Derivation> derivation;     // secrecy witness
  std::optional<ClaimRecord> commit;            // agreement witness
  bool duplicate = false;  // DuplicateCommit (vs CommitWithoutRunning)
};

struct SearchStats {
  uint64_t states = 0;
  uint64_t transitions = 0;
  int max_depth_reached = 0;
  bool reached_all_completed = false;
  // Populated when SearchConfig::collect_detail is set.
  std::set<Term> delivered_terms;
  std::set<Term> intruder_terms_union;
};

struct SearchOutcome {
  enum class Kind { SafeAtBound, Attack, BudgetExceeded };

  Kind kind = Kind::SafeAtBound;
  std::optional<AttackTrace> trace;
  SearchStats stats;
  std::string message;
};

// Declarations extended with the runtime identifiers of a search: agent pool
// names and the intruder's own supply atoms (NI1, KI1).
Decls runtime_declarations(const ProtocolSpec& spec,
                           const std::vector<std::string>& agents);

// Bounded-session state-space exploration against the Dolev-Yao network.
// Deterministic: identical spec and config yield identical outcomes.
// Throws std::invalid_argument on an invalid config.
SearchOutcome search(const ProtocolSpec& spec, const SearchConfig& config);

struct VerifyResult {
  bool accepted = false;
  std::string reason;  // first failed obligation when rejected

  static VerifyResult accept() { return {true, ""}; }
  static VerifyResult reject(std::string why) { return {false, std::move(why)}; }
};

// Independent certificate check: re-validates every trace obligation
// (derivability of injections, pattern conformance, the goal-violation
// condition) by replay, without using search.
VerifyResult verify_trace(const ProtocolSpec& spec, const AttackTrace& trace);

}  // namespace apv::check
