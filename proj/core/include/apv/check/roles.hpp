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
#include <set>
#include <string>
#include <vector>

#include "apv/diagnostics.hpp"
#include "apv/protocol.hpp"
#include "apv/term.hpp"

namespace apv::check {

// Claim attached to a role-script step. Agreement claims carry the goal's
// data terms in the role's local view (variables for received data); secrecy
// claims carry the secret term and the party roles.
struct ClaimSpec {
  enum class Kind { Running, Commit, Secret };

  Kind kind = Kind::Secret;
  size_t goal_index = 0;
  std::string peer_role;  // agreement: the role on the other side of the claim
  std::vector<Term> on;   // agreement data, in this role's view
  Term secret;            // secrecy
  std::vector<std::string> parties;  // secrecy party roles
  // False when the role never learns every identifier the claim mentions;
  // unresolvable claims are skipped at run time.
  bool resolvable = true;

  bool operator==(const ClaimSpec&) const = default;
};

struct Step {
  enum class Dir { Send, Receive };

  Dir dir = Dir::Send;
  size_t action_index = 0;
  std::string peer_role;
  ChannelMode mode = ChannelMode::Plain;
  // Payload in the role's local view: atoms unknown at receive time are
  // variable atoms; everything else is as written in the protocol.
  Term payload;
  std::vector<std::string> fresh;  // atoms first generated at this send
  std::vector<ClaimSpec> claims_after;

  bool operator==(const Step&) const = default;
};

struct RoleScript {
  std::string role;
  std::vector<Term> initial_knowledge;
  std::vector<Step> steps;
  std::set<std::string> fresh_atoms;

  bool operator==(const RoleScript&) const = default;
};

// Splits the global exchange list into per-role send/receive scripts with
// variables for data unknown at receive time, and attaches claim events:
// Running at the peer's last send, Commit at the claimer's last step, Secret
// at completion of each party.
std::map<std::string, RoleScript> project_roles(const ProtocolSpec& spec);

// Checks that every sender can derive each scripted payload from its initial
// knowledge, the messages received so far and its own fresh atoms. Empty
// result means the protocol is executable.
std::vector<Diagnostic> executability_check(const ProtocolSpec& spec);

}  // namespace apv::check
