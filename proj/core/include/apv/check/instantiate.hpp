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
#include <set>
#include <string>
#include <vector>

#include "apv/check/roles.hpp"
#include "apv/check/search.hpp"
#include "apv/protocol.hpp"

namespace apv::check {

// A ground role instance: the script with role atoms bound to agents and
// fresh atoms renamed to their session-unique names. Only receive-bound
// variables remain symbolic.
struct Instance {
  InstanceInfo info;
  std::vector<Term> knowledge;  // instantiated initial knowledge
  std::vector<Step> steps;      // instantiated payloads and claim terms
  // Roles whose identity this instance knows from its initial knowledge.
  std::map<std::string, std::string> known_role_agents;
};

struct Instantiation {
  std::vector<Instance> instances;  // honest instances, by (session, role)
  std::set<Term> intruder_facts;    // pool names, supply, absorbed knowledge
  size_t action_count = 0;
};

std::string instance_label(size_t session, const std::string& role);

// Session-unique ground name for a fresh atom (`NA#s1`, `NA#s1~7` for a
// nonzero seed).
std::string fresh_atom_name(const std::string& base, size_t session,
                            unsigned seed);

// Grounds one role script for one session: role atoms the role knows map to
// their assigned agents, fresh atoms to session-unique names fixed by the
// seed. Deterministic in all arguments.
Instance make_instance(const RoleScript& script, size_t session,
                       const SessionAssignment& assignment,
                       const std::string& agent, unsigned seed);

// Builds the ground instances for the given sessions. Roles assigned to the
// dishonest agent produce no instance; their instantiated knowledge and
// pre-materialized fresh atoms feed the intruder instead.
Instantiation instantiate(const ProtocolSpec& spec,
                          const std::map<std::string, RoleScript>& scripts,
                          const std::vector<SessionAssignment>& sessions,
                          const std::string& dishonest,
                          const std::vector<std::string>& pool,
                          unsigned seed = 0);

// Resolves a fired claim against an instance's runtime view: agreement peers
// and secrecy parties resolve through receive bindings first, then through
// the roles the instance knows from its initial knowledge. Claims whose data
// or participants stay unresolved are vacuous and yield nullopt.
std::optional<ClaimRecord> resolve_claim(const ClaimSpec& claim,
                                         const Instance& instance,
                                         const Bindings& bindings);

// Canonical encoding of a claim record, for state hashing and comparisons.
std::string claim_key(const ClaimRecord& claim);

}  // namespace apv::check
