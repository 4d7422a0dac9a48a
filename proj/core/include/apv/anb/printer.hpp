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

#include "apv/protocol.hpp"
#include "apv/term.hpp"

namespace apv::anb {

// Term in payload position: top-level pairs print as comma chains.
std::string print_term(const Term& t);

// Term in list-item position: a top-level pair is parenthesized so the comma
// is not read as a list separator.
std::string print_term_item(const Term& t);

std::string print_goal(const Goal& g);

// Canonical document form: one declaration line per sort, knowledge sorted
// by role, actions in order, minimal parentheses. Reparsing the output
// yields a structurally equal spec.
std::string pretty_print(const ProtocolSpec& spec);

}  // namespace apv::anb
