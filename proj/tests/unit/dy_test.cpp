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

#include "apv/dy/knowledge.hpp"
#include "support/oracles.hpp"

using namespace apv;

TEST_SUITE("dy") {

TEST_CASE("pairing decomposes") {
  Term a = Term::atom("a"), b = Term::atom("b");
  auto closure = dy::analyze({Term::pair(a, b)});
  CHECK(closure.count(a) == 1);
  CHECK(closure.count(b) == 1);
}

TEST_CASE("encryption without the key stays opaque") {
  Term m = Term::atom("m"), k = Term::atom("k");
  auto closure = dy::analyze({Term::sym_enc(m, k)});
  CHECK(closure.count(m) == 0);
  CHECK(closure.count(k) == 0);
}

TEST_CASE("a key recovered via pairing unlocks a pending ciphertext") {
  // Hand fixpoint: {m}k and (k, a) give k and then m.
  Term m = Term::atom("m"), k = Term::atom("k"), a = Term::atom("a");
  auto closure = dy::analyze({Term::sym_enc(m, k), Term::pair(k, a)});
  CHECK(closure.count(k) == 1);
  CHECK(closure.count(m) == 1);
}

TEST_CASE("signatures reveal their payload, private keys stay private") {
  Term m = Term::atom("m");
  Term sk = Term::inv(Term::fun_app("pk", {Term::atom("a")}));
  auto closure = dy::analyze({Term::sign(m, sk)});
  CHECK(closure.count(m) == 1);
  CHECK(closure.count(sk) == 0);
}

TEST_CASE("asymmetric decryption needs the inverse key") {
  Term m = Term::atom("m");
  Term pk_a = Term::fun_app("pk", {Term::atom("a")});
  CHECK(dy::analyze({Term::asym_enc(m, pk_a)}).count(m) == 0);
  CHECK(dy::analyze({Term::asym_enc(m, pk_a), Term::inv(pk_a)}).count(m) == 1);
}

TEST_CASE("synthesis composes and decomposes as expected") {
  Term na = Term::atom("NA"), nb = Term::atom("NB");
  auto kb = dy::KnowledgeBase::from_facts({na, nb});

  auto pair = kb.derive(Term::pair(na, nb));
  REQUIRE(pair.has_value());
  CHECK(pair->rule == dy::Derivation::Rule::PairIntro);
  CHECK(pair->depth() == 1);

  Term pk_b = Term::fun_app("pk", {Term::atom("b")});
  auto sealed = dy::KnowledgeBase::from_facts({Term::asym_enc(na, pk_b)});
  CHECK(!sealed.derive(na).has_value());
  CHECK(!sealed.derivable(na));

  // Re-encryption: payload plus key suffice.
  auto re_enc = dy::KnowledgeBase::from_facts(
      {na, Term::atom("pk"), Term::atom("b")});
  auto derivation = re_enc.derive(Term::asym_enc(na, pk_b));
  REQUIRE(derivation.has_value());
  CHECK(derivation->rule == dy::Derivation::Rule::AsymEncIntro);
}

TEST_CASE("add_fact is persistent and fires delayed decryption") {
  Term na = Term::atom("NA");
  auto empty = dy::KnowledgeBase();
  auto one = empty.add_fact(na);
  CHECK(one.analyzed().count(na) == 1);
  CHECK(empty.analyzed().empty());
  CHECK(one.generation() == empty.generation() + 1);

  Term m = Term::atom("m"), k = Term::atom("k");
  auto sealed = dy::KnowledgeBase::from_facts({Term::sym_enc(m, k)});
  CHECK(sealed.analyzed().count(m) == 0);
  auto opened = sealed.add_fact(k);
  CHECK(opened.analyzed().count(m) == 1);
  CHECK(sealed.analyzed().count(m) == 0);

  // Re-adding an existing fact leaves the closure set-equal.
  auto again = opened.add_fact(k);
  CHECK(again.analyzed() == opened.analyzed());
}

TEST_CASE("closure is idempotent and monotone") {
  testing::TermGen gen(23);
  for (int i = 0; i < 100; ++i) {
    std::set<Term> facts = gen.random_facts(6, 3);
    auto closure = dy::analyze(facts);
    CHECK(dy::analyze(closure) == closure);

    std::set<Term> fewer;
    for (const Term& f : facts) {
      if (gen.rng()() % 2) fewer.insert(f);
    }
    auto smaller = dy::analyze(fewer);
    for (const Term& t : smaller) CHECK(closure.count(t) == 1);
  }
}

TEST_CASE("no-key confidentiality over randomized context") {
  testing::TermGen gen(31);
  Term m = Term::atom("secret_m"), k = Term::atom("secret_k");
  for (int i = 0; i < 100; ++i) {
    // The generator's atom pool never mentions secret_m or secret_k.
    std::set<Term> facts = gen.random_facts(5, 3);
    facts.insert(Term::sym_enc(m, k));
    auto kb = dy::KnowledgeBase::from_facts(facts);
    CHECK(!kb.derivable(m));
  }
}

TEST_CASE("one-way applications never release their arguments") {
  testing::TermGen gen(37);
  Term m = Term::atom("hidden_m");
  for (int i = 0; i < 100; ++i) {
    std::set<Term> facts = gen.random_facts(5, 3);
    facts.insert(Term::fun_app("h", {m}, /*one_way=*/true));
    auto kb = dy::KnowledgeBase::from_facts(facts);
    CHECK(!kb.derivable(m));
  }
  // A transparent application does release them.
  auto open = dy::KnowledgeBase::from_facts(
      {Term::fun_app("tuple", {m}, /*one_way=*/false)});
  CHECK(open.analyzed().count(m) == 1);
}

TEST_CASE("derivations replay to their conclusion") {
  testing::TermGen gen(41);
  for (int i = 0; i < 100; ++i) {
    std::set<Term> facts = gen.random_facts(6, 3);
    auto kb = dy::KnowledgeBase::from_facts(facts);
    testing::DerivabilityOracle oracle(facts);
    for (const Term& u : oracle.universe()) {
      auto derivation = kb.derive(u);
      if (!derivation) continue;
      auto replayed = dy::replay_derivation(*derivation, kb.analyzed());
      REQUIRE(replayed.has_value());
      CHECK(*replayed == u);
    }
  }
}

TEST_CASE("agrees with the brute-force oracle") {
  testing::TermGen gen(43);
  for (int i = 0; i < 100; ++i) {
    std::set<Term> facts = gen.random_facts(6, 3);
    auto kb = dy::KnowledgeBase::from_facts(facts);
    testing::DerivabilityOracle oracle(facts);
    for (const Term& u : oracle.universe()) {
      CAPTURE(u.repr());
      CHECK(kb.derivable(u) == oracle.derivable(u));
    }
  }
}

}  // TEST_SUITE
