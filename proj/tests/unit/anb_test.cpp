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

#include <doctest.h>

#include <functional>
#include <random>

#include "apv/anb/parser.hpp"
#include "apv/anb/printer.hpp"
#include "support/corpus.hpp"

using namespace apv;

namespace {

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code) {
  for (const Diagnostic& d : diags) {
    if (d.code == code) return true;
  }
  return false;
}

// The expected NSPK model, built by hand from the grammar.
ProtocolSpec expected_nspk() {
  ProtocolSpec spec;
  spec.name = "NSPK";
  spec.declarations = {{"A", Sort::Agent},
                       {"B", Sort::Agent},
                       {"NA", Sort::Number},
                       {"NB", Sort::Number},
                       {"pk", Sort::PublicKey}};
  Term a = Term::atom("A"), b = Term::atom("B");
  Term na = Term::atom("NA"), nb = Term::atom("NB");
  Term pk = Term::atom("pk");
  Term pk_a = Term::fun_app("pk", {a});
  Term pk_b = Term::fun_app("pk", {b});
  spec.knowledge["A"] = {a, b, pk, Term::inv(pk_a)};
  spec.knowledge["B"] = {b, pk, Term::inv(pk_b)};
  spec.actions = {
      {"A", "B", ChannelMode::Plain, Term::asym_enc(Term::pair(na, a), pk_b)},
      {"B", "A", ChannelMode::Plain, Term::asym_enc(Term::pair(na, nb), pk_a)},
      {"A", "B", ChannelMode::Plain, Term::asym_enc(nb, pk_b)},
  };
  spec.goals = {Goal::secrecy(nb, {"A", "B"}),
                Goal::inj_agreement("B", "A", {na, nb})};
  return spec;
}

// Random well-formed protocol models for the round-trip property.
ProtocolSpec random_spec(std::mt19937& rng) {
  ProtocolSpec spec;
  spec.name = "Gen" + std::to_string(rng() % 1000);
  std::vector<std::string> roles = {"A", "B"};
  if (rng() % 2) roles.push_back("S");
  for (const std::string& r : roles) spec.declarations[r] = Sort::Agent;
  std::vector<std::string> numbers = {"N1", "N2"};
  for (const std::string& n : numbers) spec.declarations[n] = Sort::Number;
  spec.declarations["K1"] = Sort::SymmetricKey;
  spec.declarations["PK"] = Sort::PublicKey;
  spec.declarations["H"] = Sort::Function;

  auto role_atom = [&](const std::string& r) { return Term::atom(r); };
  auto random_role = [&]() { return roles[rng() % roles.size()]; };
  auto random_key = [&]() -> Term {
    switch (rng() % 3) {
      case 0: return Term::atom("K1");
      case 1: return Term::fun_app("PK", {role_atom(random_role())});
      default:
        return Term::inv(Term::fun_app("PK", {role_atom(random_role())}));
    }
  };
  std::function<Term(int)> random_payload = [&](int depth) -> Term {
    if (depth <= 0) {
      switch (rng() % 4) {
        case 0: return Term::atom("N1");
        case 1: return Term::atom("N2");
        case 2: return role_atom(random_role());
        default: return Term::atom("K1");
      }
    }
    switch (rng() % 5) {
      case 0:
        return Term::pair(random_payload(depth - 1), random_payload(depth - 1));
      case 1: {
        Term key = random_key();
        Term payload = random_payload(depth - 1);
        if (key.kind() == TermKind::Inv) return Term::sign(payload, key);
        if (key.kind() == TermKind::FunApp) return Term::asym_enc(payload, key);
        return Term::sym_enc(payload, key);
      }
      case 2:
        return Term::fun_app("H", {random_payload(depth - 1)});
      default:
        return random_payload(0);
    }
  };

  for (const std::string& r : roles) {
    std::vector<Term> knowledge;
    for (const std::string& other : roles) knowledge.push_back(role_atom(other));
    knowledge.push_back(Term::atom("PK"));
    if (rng() % 2) {
      knowledge.push_back(Term::inv(Term::fun_app("PK", {role_atom(r)})));
    }
    spec.knowledge[r] = std::move(knowledge);
  }

  static const ChannelMode modes[] = {ChannelMode::Plain, ChannelMode::Authentic,
                                      ChannelMode::Confidential,
                                      ChannelMode::Secure};
  size_t n_actions = 1 + rng() % 4;
  for (size_t i = 0; i < n_actions; ++i) {
    Action action;
    action.sender = random_role();
    do {
      action.receiver = random_role();
    } while (action.receiver == action.sender);
    action.mode = modes[rng() % 4];
    action.payload = random_payload(2);
    spec.actions.push_back(std::move(action));
  }

  // Goals over data that provably occurs in some payload.
  if (rng() % 2) {
    const Action& action = spec.actions[rng() % spec.actions.size()];
    const std::set<Term> subs = subterms(action.payload);
    std::vector<Term> occurring(subs.begin(), subs.end());
    Term secret = occurring[rng() % occurring.size()];
    spec.goals.push_back(Goal::secrecy(secret, {"A", "B"}));
  }
  if (rng() % 2) {
    const Action& action = spec.actions[rng() % spec.actions.size()];
    std::string peer = action.sender;
    std::string claimer = peer == "A" ? "B" : "A";
    bool claimer_acts = false;
    for (const Action& a : spec.actions) {
      if (a.sender == claimer || a.receiver == claimer) claimer_acts = true;
    }
    if (claimer_acts) {
      const std::set<Term> subs = subterms(action.payload);
      std::vector<Term> occurring(subs.begin(), subs.end());
      std::vector<Term> on = {occurring[rng() % occurring.size()]};
      spec.goals.push_back(rng() % 2
                               ? Goal::weak_agreement(claimer, peer, on)
                               : Goal::inj_agreement(claimer, peer, on));
    }
  }
  return spec;
}

}  // namespace

TEST_SUITE("anb") {

TEST_CASE("parses the NSPK corpus file to the hand-built model") {
  auto result = anb::parse_protocol(
      testing::read_file(testing::corpus_path("nspk.anb")));
  REQUIRE(result.ok());
  CHECK(result.spec->actions.size() == 3);
  CHECK(result.spec->goals.size() == 2);
  CHECK(*result.spec == expected_nspk());
}

TEST_CASE("sender equals receiver is an error") {
  auto result = anb::parse_protocol(
      "Protocol: P\n"
      "Types:\n  Agent A,B;\n  Number NA;\n"
      "Knowledge:\n  A: A,B;\n  B: A,B;\n"
      "Actions:\n  A -> A: NA\n");
  CHECK(!result.spec.has_value());
  CHECK(has_code(result.diagnostics, "sender-equals-receiver"));
}

TEST_CASE("empty actions section is an error") {
  auto result = anb::parse_protocol(
      "Protocol: P\n"
      "Types:\n  Agent A,B;\n  Number NA;\n"
      "Knowledge:\n  A: A,B;\n"
      "Actions:\n"
      "Goals:\n  NA secret between A,B\n");
  CHECK(!result.spec.has_value());
  CHECK(has_code(result.diagnostics, "no-actions"));
}

TEST_CASE("undeclared identifiers carry a span") {
  auto result = anb::parse_protocol(
      "Protocol: P\n"
      "Types:\n  Agent A,B;\n"
      "Knowledge:\n  A: A,B;\n  B: A,B;\n"
      "Actions:\n  A -> B: NX\n");
  CHECK(!result.spec.has_value());
  REQUIRE(has_code(result.diagnostics, "undeclared-identifier"));
  for (const Diagnostic& d : result.diagnostics) {
    if (d.code != "undeclared-identifier") continue;
    CHECK(d.span.line == 8);
    CHECK(d.span.column >= 1);
  }
}

TEST_CASE("duplicate declarations are rejected") {
  auto result = anb::parse_protocol(
      "Protocol: P\n"
      "Types:\n  Agent A,B;\n  Number A;\n"
      "Knowledge:\n  A: A,B;\n  B: A,B;\n"
      "Actions:\n  A -> B: B\n");
  CHECK(!result.spec.has_value());
  CHECK(has_code(result.diagnostics, "duplicate-declaration"));
}

TEST_CASE("unknown goal forms are rejected") {
  auto result = anb::parse_protocol(
      "Protocol: P\n"
      "Types:\n  Agent A,B;\n  Number NA;\n"
      "Knowledge:\n  A: A,B;\n  B: A,B;\n"
      "Actions:\n  A -> B: NA\n"
      "Goals:\n  NA hidden from B\n");
  CHECK(!result.spec.has_value());
  CHECK(has_code(result.diagnostics, "unknown-goal-form"));
}

TEST_CASE("missing goals section only warns") {
  auto result = anb::parse_protocol(
      "Protocol: P\n"
      "Types:\n  Agent A,B;\n  Number NA;\n"
      "Knowledge:\n  A: A,B;\n  B: A,B;\n"
      "Actions:\n  A -> B: NA\n");
  REQUIRE(result.ok());
  CHECK(result.spec->goals.empty());
  CHECK(has_code(result.diagnostics, "no-goals"));
}

TEST_CASE("parse_term resolves encryption by key sort") {
  Decls decls = {{"A", Sort::Agent},   {"B", Sort::Agent},
                 {"NA", Sort::Number}, {"K", Sort::SymmetricKey},
                 {"pk", Sort::PublicKey}};

  auto asym = anb::parse_term("{NA,A}pk(B)", decls);
  REQUIRE(asym.ok());
  CHECK(*asym.term ==
        Term::asym_enc(Term::pair(Term::atom("NA"), Term::atom("A")),
                       Term::fun_app("pk", {Term::atom("B")})));

  auto atom = anb::parse_term("NA", decls);
  REQUIRE(atom.ok());
  CHECK(*atom.term == Term::atom("NA"));

  auto sig = anb::parse_term("{NA}inv(pk(A))", decls);
  REQUIRE(sig.ok());
  CHECK(*sig.term ==
        Term::sign(Term::atom("NA"),
                   Term::inv(Term::fun_app("pk", {Term::atom("A")}))));

  auto sym = anb::parse_term("{NA}K", decls);
  REQUIRE(sym.ok());
  CHECK(sym.term->kind() == TermKind::SymEnc);

  auto bad_key = anb::parse_term("{NA}A", decls);
  CHECK(!bad_key.ok());

  auto undeclared = anb::parse_term("NX", decls);
  CHECK(!undeclared.ok());

  // Ground session names resolve through their base identifier.
  auto ground = anb::parse_term("{NA#s1,A}pk(B)", decls);
  REQUIRE(ground.ok());

  // inv over a non-public-key term is rejected.
  auto bad_inv = anb::parse_term("inv(NA)", decls);
  CHECK(!bad_inv.ok());
}

TEST_CASE("pair printing is right-associated with minimal parentheses") {
  Term na = Term::atom("NA"), nb = Term::atom("NB"), a = Term::atom("A");
  CHECK(anb::print_term(Term::pair(na, Term::pair(nb, a))) == "NA,NB,A");
  // A left-nested pair needs the grouping parentheses to survive reparse.
  CHECK(anb::print_term(Term::pair(Term::pair(na, nb), a)) == "(NA,NB),A");
}

TEST_CASE("single action prints as one canonical line") {
  auto result = anb::parse_protocol(
      testing::read_file(testing::corpus_path("toy_secret.anb")));
  REQUIRE(result.ok());
  std::string text = anb::pretty_print(*result.spec);
  CHECK(text.find("  A -> B: NA\n") != std::string::npos);
  size_t first = text.find("A -> B: NA");
  CHECK(text.find("A -> B: NA", first + 1) == std::string::npos);
}

TEST_CASE("round-trip on the corpus") {
  for (const std::string& file : testing::corpus_protocols()) {
    CAPTURE(file);
    auto first = anb::parse_protocol(
        testing::read_file(testing::corpus_path(file)));
    REQUIRE(first.ok());
    std::string printed = anb::pretty_print(*first.spec);
    auto second = anb::parse_protocol(printed);
    REQUIRE(second.ok());
    CHECK(*second.spec == *first.spec);
    // Printing is a fixpoint after one pass.
    CHECK(anb::pretty_print(*second.spec) == printed);
  }
}

TEST_CASE("round-trip on 200 generated well-formed models") {
  std::mt19937 rng(20260810);
  for (int i = 0; i < 200; ++i) {
    ProtocolSpec spec = random_spec(rng);
    std::string printed = anb::pretty_print(spec);
    CAPTURE(printed);
    auto parsed = anb::parse_protocol(printed);
    REQUIRE(parsed.ok());
    CHECK(*parsed.spec == spec);
    CHECK(anb::pretty_print(*parsed.spec) == printed);
  }
}

TEST_CASE("parsing is total: junk input yields diagnostics, never a spec") {
  const char* junk[] = {
      "",
      "Protocol",
      "Protocol: P\nTypes:\n  Agent A;\nActions:\n  A -> : NA\n",
      "Protocol: P\nTypes:\n  Agent A,B;\nKnowledge:\n  A: A;\nActions:\n"
      "  A -> B: {NA\n",
      "Protocol: P\nGoals:\n  x secret between A\n",
      "@@@@",
  };
  for (const char* source : junk) {
    CAPTURE(source);
    auto result = anb::parse_protocol(source);
    CHECK(!result.spec.has_value());
    CHECK(!result.diagnostics.empty());
    CHECK(has_errors(result.diagnostics));
  }
}

TEST_CASE("comments and session suffixes coexist") {
  auto result = anb::parse_protocol(
      "# leading comment\n"
      "Protocol: P  # trailing\n"
      "Types:\n  Agent A,B;  # trailing comment\n  Number NA;\n"
      "Knowledge:\n  A: A,B;\n  B: A,B;\n"
      "Actions:\n  A -> B: NA\n"
      "Goals:\n  NA secret between A,B\n");
  REQUIRE(result.ok());

  // A session-suffixed name in a protocol source is rejected.
  auto bad = anb::parse_protocol(
      "Protocol: P\n"
      "Types:\n  Agent A,B;\n  Number NA;\n"
      "Knowledge:\n  A: A,B;\n  B: A,B;\n"
      "Actions:\n  A -> B: NA#s1\n");
  CHECK(!bad.spec.has_value());
}

}  // TEST_SUITE
