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

#include "apv/term.hpp"

#include <cassert>

namespace apv {

const char* to_string(Sort sort) {
  switch (sort) {
    case Sort::Agent: return "Agent";
    case Sort::Number: return "Number";
    case Sort::SymmetricKey: return "SymmetricKey";
    case Sort::PublicKey: return "PublicKey";
    case Sort::PrivateKey: return "PrivateKey";
    case Sort::Function: return "Function";
    case Sort::Untyped: return "Untyped";
  }
  return "?";
}

std::optional<Sort> sort_from_string(std::string_view name) {
  if (name == "Agent") return Sort::Agent;
  if (name == "Number") return Sort::Number;
  if (name == "SymmetricKey") return Sort::SymmetricKey;
  if (name == "PublicKey") return Sort::PublicKey;
  if (name == "Function") return Sort::Function;
  return std::nullopt;
}

namespace {

// Canonical encodings use one-letter constructor prefixes followed by a
// parenthesized child list; identifiers never contain parentheses or commas,
// so the encoding is injective.
std::string make_repr(TermKind kind, const std::string& name, bool variable,
                      bool one_way, const std::vector<Term>& args) {
  switch (kind) {
    case TermKind::Atom:
      return variable ? "?" + name : name;
    case TermKind::Pair:
      return "P(" + args[0].repr() + "," + args[1].repr() + ")";
    case TermKind::SymEnc:
      return "E(" + args[0].repr() + "," + args[1].repr() + ")";
    case TermKind::AsymEnc:
      return "A(" + args[0].repr() + "," + args[1].repr() + ")";
    case TermKind::Sign:
      return "G(" + args[0].repr() + "," + args[1].repr() + ")";
    case TermKind::FunApp: {
      std::string out = one_way ? "F!" : "F.";
      out += name;
      out += "(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i > 0) out += ",";
        out += args[i].repr();
      }
      out += ")";
      return out;
    }
    case TermKind::Inv:
      return "I(" + args[0].repr() + ")";
  }
  return "?";
}

}  // namespace

Term Term::atom(std::string name, bool variable) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Atom;
  node->name = std::move(name);
  node->variable = variable;
  node->repr = make_repr(node->kind, node->name, variable, false, {});
  return Term(std::move(node));
}

Term Term::pair(Term left, Term right) {
  assert(left && right);
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Pair;
  node->args = {std::move(left), std::move(right)};
  node->repr = make_repr(node->kind, node->name, false, false, node->args);
  return Term(std::move(node));
}

Term Term::sym_enc(Term payload, Term key) {
  assert(payload && key);
  auto node = std::make_shared<Node>();
  node->kind = TermKind::SymEnc;
  node->args = {std::move(payload), std::move(key)};
  node->repr = make_repr(node->kind, node->name, false, false, node->args);
  return Term(std::move(node));
}

Term Term::asym_enc(Term payload, Term key) {
  assert(payload && key);
  auto node = std::make_shared<Node>();
  node->kind = TermKind::AsymEnc;
  node->args = {std::move(payload), std::move(key)};
  node->repr = make_repr(node->kind, node->name, false, false, node->args);
  return Term(std::move(node));
}

Term Term::sign(Term payload, Term key) {
  assert(payload && key);
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Sign;
  node->args = {std::move(payload), std::move(key)};
  node->repr = make_repr(node->kind, node->name, false, false, node->args);
  return Term(std::move(node));
}

Term Term::fun_app(std::string function, std::vector<Term> args, bool one_way) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::FunApp;
  node->name = std::move(function);
  node->one_way = one_way;
  node->args = std::move(args);
  node->repr = make_repr(node->kind, node->name, false, one_way, node->args);
  return Term(std::move(node));
}

Term Term::inv(Term of) {
  assert(of);
  if (of.kind() == TermKind::Inv) return of.args()[0];  // inv(inv(t)) = t
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Inv;
  node->args = {std::move(of)};
  node->repr = make_repr(node->kind, node->name, false, false, node->args);
  return Term(std::move(node));
}

bool is_ground(const Term& t) {
  if (t.is_variable()) return false;
  for (const Term& arg : t.args()) {
    if (!is_ground(arg)) return false;
  }
  return true;
}

static void collect_subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  for (const Term& arg : t.args()) collect_subterms(arg, out);
}

std::set<Term> subterms(const Term& t) {
  std::set<Term> out;
  collect_subterms(t, out);
  return out;
}

std::set<std::string> variables_of(const Term& t) {
  std::set<std::string> out;
  for (const Term& sub : subterms(t)) {
    if (sub.is_variable()) out.insert(sub.name());
  }
  return out;
}

std::set<std::string> atom_names_of(const Term& t) {
  std::set<std::string> out;
  for (const Term& sub : subterms(t)) {
    if (sub.kind() == TermKind::Atom || sub.kind() == TermKind::FunApp) {
      out.insert(sub.name());
    }
  }
  return out;
}

Term substitute(const Term& t, const Bindings& binding) {
  if (binding.empty()) return t;
  switch (t.kind()) {
    case TermKind::Atom: {
      if (!t.is_variable()) return t;
      auto it = binding.find(t.name());
      return it == binding.end() ? t : it->second;
    }
    case TermKind::Pair:
      return Term::pair(substitute(t.args()[0], binding),
                        substitute(t.args()[1], binding));
    case TermKind::SymEnc:
      return Term::sym_enc(substitute(t.args()[0], binding),
                           substitute(t.args()[1], binding));
    case TermKind::AsymEnc:
      return Term::asym_enc(substitute(t.args()[0], binding),
                            substitute(t.args()[1], binding));
    case TermKind::Sign:
      return Term::sign(substitute(t.args()[0], binding),
                        substitute(t.args()[1], binding));
    case TermKind::FunApp: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(substitute(a, binding));
      return Term::fun_app(t.name(), std::move(args), t.one_way());
    }
    case TermKind::Inv:
      return Term::inv(substitute(t.args()[0], binding));
  }
  return t;
}

Term rename_atoms(const Term& t, const Bindings& mapping) {
  if (mapping.empty()) return t;
  switch (t.kind()) {
    case TermKind::Atom: {
      auto it = mapping.find(t.name());
      return it == mapping.end() ? t : it->second;
    }
    case TermKind::Pair:
      return Term::pair(rename_atoms(t.args()[0], mapping),
                        rename_atoms(t.args()[1], mapping));
    case TermKind::SymEnc:
      return Term::sym_enc(rename_atoms(t.args()[0], mapping),
                           rename_atoms(t.args()[1], mapping));
    case TermKind::AsymEnc:
      return Term::asym_enc(rename_atoms(t.args()[0], mapping),
                            rename_atoms(t.args()[1], mapping));
    case TermKind::Sign:
      return Term::sign(rename_atoms(t.args()[0], mapping),
                        rename_atoms(t.args()[1], mapping));
    case TermKind::FunApp: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(rename_atoms(a, mapping));
      return Term::fun_app(t.name(), std::move(args), t.one_way());
    }
    case TermKind::Inv:
      return Term::inv(rename_atoms(t.args()[0], mapping));
  }
  return t;
}

static bool match_into(const Term& pattern, const Term& ground, Bindings& b) {
  if (pattern.is_variable()) {
    auto it = b.find(pattern.name());
    if (it != b.end()) return it->second == ground;
    b.emplace(pattern.name(), ground);
    return true;
  }
  if (pattern.kind() != ground.kind()) return false;
  switch (pattern.kind()) {
    case TermKind::Atom:
      return pattern.name() == ground.name() && !ground.is_variable();
    case TermKind::FunApp:
      if (pattern.name() != ground.name()) return false;
      if (pattern.args().size() != ground.args().size()) return false;
      break;
    default:
      break;
  }
  for (size_t i = 0; i < pattern.args().size(); ++i) {
    if (!match_into(pattern.args()[i], ground.args()[i], b)) return false;
  }
  return true;
}

std::optional<Bindings> match(const Term& pattern, const Term& ground,
                              const Bindings& base) {
  Bindings b = base;
  if (!match_into(pattern, ground, b)) return std::nullopt;
  return b;
}

std::optional<Sort> lookup_sort(const Decls& decls, const std::string& name) {
  auto it = decls.find(name);
  if (it != decls.end()) return it->second;
  auto hash = name.find('#');
  if (hash != std::string::npos) {
    it = decls.find(name.substr(0, hash));
    if (it != decls.end()) return it->second;
  }
  return std::nullopt;
}

Sort term_sort(const Term& t, const Decls& decls) {
  switch (t.kind()) {
    case TermKind::Atom: {
      auto sort = lookup_sort(decls, t.name());
      if (!sort) throw UndeclaredIdentifierError(t.name());
      return *sort;
    }
    case TermKind::Pair:
    case TermKind::SymEnc:
    case TermKind::AsymEnc:
    case TermKind::Sign:
      return Sort::Untyped;
    case TermKind::FunApp: {
      auto sort = lookup_sort(decls, t.name());
      if (!sort) throw UndeclaredIdentifierError(t.name());
      // Key-sorted identifiers act as key-yielding functions; a plain
      // Function has no result annotation and stays Untyped.
      return *sort == Sort::Function ? Sort::Untyped : *sort;
    }
    case TermKind::Inv:
      return Sort::PrivateKey;
  }
  return Sort::Untyped;
}

}  // namespace apv
