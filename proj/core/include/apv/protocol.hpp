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
#include <string_view>
#include <vector>

#include "apv/term.hpp"

namespace apv {

// Channel modes toggle two independent intruder capabilities; there is no
// total strength order.
enum class ChannelMode {
  Plain,         // ->    readable, injectable
  Authentic,     // *->   readable, not injectable
  Confidential,  // ->*   not readable, injectable
  Secure,        // *->*  not readable, not injectable
};

inline bool mode_readable(ChannelMode mode) {
  return mode == ChannelMode::Plain || mode == ChannelMode::Authentic;
}

inline bool mode_injectable(ChannelMode mode) {
  return mode == ChannelMode::Plain || mode == ChannelMode::Confidential;
}

const char* mode_arrow(ChannelMode mode);
std::optional<ChannelMode> mode_from_arrow(std::string_view arrow);

struct Action {
  std::string sender;
  std::string receiver;
  ChannelMode mode = ChannelMode::Plain;
  Term payload;

  bool operator==(const Action&) const = default;
};

struct Goal {
  enum class Kind { Secrecy, WeakAgreement, InjAgreement };

  Kind kind = Kind::Secrecy;
  // Secrecy
  Term term;
  std::vector<std::string> parties;
  // Agreement
  std::string claimer;
  std::string peer;
  std::vector<Term> on;

  static Goal secrecy(Term term, std::vector<std::string> parties);
  static Goal weak_agreement(std::string claimer, std::string peer,
                             std::vector<Term> on);
  static Goal inj_agreement(std::string claimer, std::string peer,
                            std::vector<Term> on);

  bool operator==(const Goal&) const = default;
};

struct ProtocolSpec {
  std::string name;
  Decls declarations;
  std::map<std::string, std::vector<Term>> knowledge;  // role -> initial terms
  std::vector<Action> actions;
  std::vector<Goal> goals;

  // Roles appearing as sender or receiver, sorted by name.
  std::vector<std::string> action_roles() const;

  bool operator==(const ProtocolSpec&) const = default;
};

}  // namespace apv
