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

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace apv {

enum class Sort {
  Agent,
  Number,
  SymmetricKey,
  PublicKey,
  PrivateKey,
  Function,
  Untyped,
};

const char* to_string(Sort sort);

// Parses one of the five declarable sort names (PrivateKey and Untyped only
// arise from term structure, never from declarations).
std::optional<Sort> sort_from_string(std::string_view name);

enum class TermKind {
  Atom,
  Pair,
  SymEnc,
  AsymEnc,
  Sign,
  FunApp,
  Inv,
};

class UndeclaredIdentifierError : public std::runtime_error {
 public:
  explicit UndeclaredIdentifierError(std::string identifier)
      : std::runtime_error("undeclared identifier: " + identifier),
        identifier_(std::move(identifier)) {}

  const std::string& identifier() const { return identifier_; }

 private:
  std::string identifier_;
};

// Immutable message term. Handles are cheap to copy and safe to share across
// threads; all structural state lives behind a shared const node.
//
// Equality, ordering and hashing are structural, via a canonical injective
// string encoding computed at construction time. Inv(Inv(t)) is normalized
// to t by the inv() factory, so structural equality is equality modulo that
// normalization.
class Term {
 public:
  Term() = default;  // null handle; only valid as a placeholder

  static Term atom(std::string name, bool variable = false);
  static Term pair(Term left, Term right);
  static Term sym_enc(Term payload, Term key);
  static Term asym_enc(Term payload, Term key);
  static Term sign(Term payload, Term key);
  static Term fun_app(std::string function, std::vector<Term> args,
                      bool one_way = true);
  static Term inv(Term of);

  bool is_null() const { return node_ == nullptr; }
  explicit operator bool() const { return node_ != nullptr; }

  TermKind kind() const { return node().kind; }
  // Atom identifier or FunApp function name.
  const std::string& name() const { return node().name; }
  bool is_variable() const { return node().kind == TermKind::Atom && node().variable; }
  bool one_way() const { return node().one_way; }
  const std::vector<Term>& args() const { return node().args; }

  // Canonical injective encoding; doubles as the total order key.
  const std::string& repr() const { return node().repr; }

  bool operator==(const Term& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    return node().repr == other.node().repr;
  }
  std::strong_ordering operator<=>(const Term& other) const {
    if (node_ == other.node_) return std::strong_ordering::equal;
    if (!node_) return std::strong_ordering::less;
    if (!other.node_) return std::strong_ordering::greater;
    return node().repr.compare(other.node().repr) <=> 0;
  }

 private:
  struct Node {
    TermKind kind;
    std::string name;
    bool variable = false;
    bool one_way = false;
    std::vector<Term> args;
    std::string repr;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const { return *node_; }

  std::shared_ptr<const Node> node_;
};

using Decls = std::map<std::string, Sort>;
using Bindings = std::map<std::string, Term>;

bool is_ground(const Term& t);

// Reflexive-transitive closure over constructor arguments, keys included.
std::set<Term> subterms(const Term& t);

// Names of variable atoms occurring in t.
std::set<std::string> variables_of(const Term& t);

// Names of all atoms occurring in t (variables included); FunApp function
// names are reported too, since they are derivable identifiers of their own.
std::set<std::string> atom_names_of(const Term& t);

// Simultaneously replaces variable atoms bound in `binding`; non-variable
// atoms and unbound variables pass through unchanged.
Term substitute(const Term& t, const Bindings& binding);

// Replaces any atom (variable or not) whose name is mapped. Function names
// are not touched. Used for session instantiation and fresh renaming.
Term rename_atoms(const Term& t, const Bindings& mapping);

// One-sided matching of a pattern against a ground term, extending `base`.
// Returns the extended bindings on success.
std::optional<Bindings> match(const Term& pattern, const Term& ground,
                              const Bindings& base);

// Sort lookup tolerating session-suffixed ground names (`NA#s1` resolves via
// its base identifier `NA`).
std::optional<Sort> lookup_sort(const Decls& decls, const std::string& name);

// Sort of the term's head. FunApp over a declared Function is Untyped; a
// FunApp whose head is declared with a key sort yields that sort. Pair and
// the encryptions are Untyped, Inv is PrivateKey.
// Throws UndeclaredIdentifierError for unknown atoms or function names.
Sort term_sort(const Term& t, const Decls& decls);

}  // namespace apv
