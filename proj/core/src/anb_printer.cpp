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

#include "apv/anb/printer.hpp"

#include <array>

namespace apv::anb {

namespace {

void print_payload(const Term& t, std::string& out);

void print_item(const Term& t, std::string& out) {
  if (t.kind() == TermKind::Pair) {
    out += "(";
    print_payload(t, out);
    out += ")";
    return;
  }
  print_payload(t, out);
}

void print_payload(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Atom:
      out += t.name();
      return;
    case TermKind::Pair:
      print_item(t.args()[0], out);
      out += ",";
      print_payload(t.args()[1], out);
      return;
    case TermKind::SymEnc:
    case TermKind::AsymEnc:
    case TermKind::Sign:
      out += "{";
      print_payload(t.args()[0], out);
      out += "}";
      print_item(t.args()[1], out);
      return;
    case TermKind::FunApp: {
      out += t.name();
      out += "(";
      for (size_t i = 0; i < t.args().size(); ++i) {
        if (i > 0) out += ",";
        print_item(t.args()[i], out);
      }
      out += ")";
      return;
    }
    case TermKind::Inv:
      out += "inv(";
      print_payload(t.args()[0], out);
      out += ")";
      return;
  }
}

}  // namespace

std::string print_term(const Term& t) {
  std::string out;
  print_payload(t, out);
  return out;
}

std::string print_term_item(const Term& t) {
  std::string out;
  print_item(t, out);
  return out;
}

std::string print_goal(const Goal& g) {
  std::string out;
  switch (g.kind) {
    case Goal::Kind::Secrecy: {
      out += print_term(g.term);
      out += " secret between ";
      for (size_t i = 0; i < g.parties.size(); ++i) {
        if (i > 0) out += ",";
        out += g.parties[i];
      }
      return out;
    }
    case Goal::Kind::WeakAgreement:
    case Goal::Kind::InjAgreement: {
      out += g.claimer;
      out += g.kind == Goal::Kind::InjAgreement ? " injectively authenticates "
                                                : " authenticates ";
      out += g.peer;
      out += " on ";
      for (size_t i = 0; i < g.on.size(); ++i) {
        if (i > 0) out += ",";
        out += print_term_item(g.on[i]);
      }
      return out;
    }
  }
  return out;
}

std::string pretty_print(const ProtocolSpec& spec) {
  std::string out = "Protocol: " + spec.name + "\n";

  static constexpr std::array<Sort, 5> kDeclOrder = {
      Sort::Agent, Sort::Number, Sort::SymmetricKey, Sort::PublicKey,
      Sort::Function};
  out += "\nTypes:\n";
  for (Sort sort : kDeclOrder) {
    std::string line;
    for (const auto& [name, decl_sort] : spec.declarations) {
      if (decl_sort != sort) continue;
      if (!line.empty()) line += ",";
      line += name;
    }
    if (line.empty()) continue;
    out += "  ";
    out += to_string(sort);
    out += " " + line + ";\n";
  }

  if (!spec.knowledge.empty()) {
    out += "\nKnowledge:\n";
    for (const auto& [role, terms] : spec.knowledge) {
      out += "  " + role + ": ";
      for (size_t i = 0; i < terms.size(); ++i) {
        if (i > 0) out += ",";
        out += print_term_item(terms[i]);
      }
      out += ";\n";
    }
  }

  out += "\nActions:\n";
  for (const Action& a : spec.actions) {
    out += "  " + a.sender + " " + mode_arrow(a.mode) + " " + a.receiver +
           ": " + print_term(a.payload) + "\n";
  }

  if (!spec.goals.empty()) {
    out += "\nGoals:\n";
    for (const Goal& g : spec.goals) {
      out += "  " + print_goal(g) + "\n";
    }
  }

  return out;
}

}  // namespace apv::anb
