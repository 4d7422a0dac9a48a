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

#include "apv/protocol.hpp"

#include <set>

namespace apv {

const char* mode_arrow(ChannelMode mode) {
  switch (mode) {
    case ChannelMode::Plain: return "->";
    case ChannelMode::Authentic: return "*->";
    case ChannelMode::Confidential: return "->*";
    case ChannelMode::Secure: return "*->*";
  }
  return "->";
}

std::optional<ChannelMode> mode_from_arrow(std::string_view arrow) {
  if (arrow == "->") return ChannelMode::Plain;
  if (arrow == "*->") return ChannelMode::Authentic;
  if (arrow == "->*") return ChannelMode::Confidential;
  if (arrow == "*->*") return ChannelMode::Secure;
  return std::nullopt;
}

Goal Goal::secrecy(Term term, std::vector<std::string> parties) {
  Goal g;
  g.kind = Kind::Secrecy;
  g.term = std::move(term);
  g.parties = std::move(parties);
  return g;
}

Goal Goal::weak_agreement(std::string claimer, std::string peer,
                          std::vector<Term> on) {
  Goal g;
  g.kind = Kind::WeakAgreement;
  g.claimer = std::move(claimer);
  g.peer = std::move(peer);
  g.on = std::move(on);
  return g;
}

Goal Goal::inj_agreement(std::string claimer, std::string peer,
                         std::vector<Term> on) {
  Goal g = weak_agreement(std::move(claimer), std::move(peer), std::move(on));
  g.kind = Kind::InjAgreement;
  return g;
}

std::vector<std::string> ProtocolSpec::action_roles() const {
  std::set<std::string> roles;
  for (const Action& a : actions) {
    roles.insert(a.sender);
    roles.insert(a.receiver);
  }
  return {roles.begin(), roles.end()};
}

}  // namespace apv
