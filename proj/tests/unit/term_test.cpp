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

#include "apv/term.hpp"
#include "support/oracles.hpp"

using namespace apv;

TEST_SUITE("term") {

TEST_CASE("structural equality and inv normalization") {
  Term na = Term::atom("NA");
  Term na2 = Term::atom("NA");
  CHECK(na == na2);
  CHECK(Term::pair(na, Term::atom("NB")) == Term::pair(na2, Term::atom("NB")));
  CHECK(Term::pair(na, Term::atom("NB")) != Term::pair(Term::atom("NB"), na));

  Term pk_a = Term::fun_app("pk", {Term::atom("A")});
  CHECK(Term::inv(Term::inv(pk_a)) == pk_a);

  // Left- and right-nested pairs are distinct terms.
  Term a = Term::atom("a"), b = Term::atom("b"), c = Term::atom("c");
  CHECK(Term::pair(Term::pair(a, b), c) != Term::pair(a, Term::pair(b, c)));

  // Variables are distinct from constants of the same name.
  CHECK(Term::atom("X", true) != Term::atom("X"));
}

TEST_CASE("subterms closure") {
  Term na = Term::atom("NA");
  CHECK(subterms(na) == std::set<Term>{na});

  Term nb = Term::atom("NB");
  Term p = Term::pair(na, nb);
  CHECK(subterms(p) == std::set<Term>{p, na, nb});

  Term pk_b = Term::fun_app("pk", {Term::atom("B")});
  Term enc = Term::asym_enc(na, pk_b);
  CHECK(subterms(enc) == std::set<Term>{enc, na, pk_b, Term::atom("B")});
}

TEST_CASE("subterms monotone") {
  testing::TermGen gen(7);
  for (int i = 0; i < 200; ++i) {
    Term t = gen.random_term(3);
    std::set<Term> all = subterms(t);
    for (const Term& sub : all) {
      for (const Term& deeper : subterms(sub)) {
        CHECK(all.count(deeper) == 1);
      }
    }
  }
}

TEST_CASE("substitute") {
  Term x = Term::atom("X", true);
  Term a = Term::atom("A");
  Term na = Term::atom("NA");

  CHECK(substitute(Term::pair(x, a), {{"X", na}}) == Term::pair(na, a));
  CHECK(substitute(na, {}) == na);

  Term k = Term::atom("K");
  Term nested = Term::sym_enc(x, k);
  Term pair_nb = Term::pair(na, Term::atom("NB"));
  CHECK(substitute(nested, {{"X", pair_nb}}) == Term::sym_enc(pair_nb, k));

  // Non-variable atoms are untouched even when their name is bound.
  CHECK(substitute(Term::pair(Term::atom("X"), x), {{"X", na}}) ==
        Term::pair(Term::atom("X"), na));
}

TEST_CASE("substitution composes for disjoint ground bindings") {
  testing::TermGen gen(11);
  for (int i = 0; i < 100; ++i) {
    // Pattern over two variables, bindings with ground ranges.
    Term pattern = Term::pair(
        Term::sym_enc(Term::atom("X", true), gen.random_term(2)),
        Term::pair(Term::atom("Y", true), Term::atom("X", true)));
    Bindings sigma = {{"X", gen.random_term(2)}};
    Bindings tau = {{"Y", gen.random_term(2)}};
    Bindings both = sigma;
    both.insert(tau.begin(), tau.end());
    CHECK(substitute(substitute(pattern, sigma), tau) ==
          substitute(pattern, both));
  }
}

TEST_CASE("match binds variables consistently") {
  Term pattern = Term::pair(Term::atom("X", true), Term::atom("X", true));
  Term na = Term::atom("NA");
  CHECK(match(pattern, Term::pair(na, na), {}).has_value());
  CHECK(!match(pattern, Term::pair(na, Term::atom("NB")), {}).has_value());

  Term enc_pattern = Term::asym_enc(Term::atom("X", true),
                                    Term::fun_app("pk", {Term::atom("B")}));
  Term ground = Term::asym_enc(na, Term::fun_app("pk", {Term::atom("B")}));
  auto bound = match(enc_pattern, ground, {});
  REQUIRE(bound.has_value());
  CHECK(bound->at("X") == na);
  CHECK(!match(enc_pattern,
               Term::asym_enc(na, Term::fun_app("pk", {Term::atom("A")})), {})
             .has_value());

  // An existing binding constrains the match.
  CHECK(!match(enc_pattern, ground, {{"X", Term::atom("NB")}}).has_value());
}

TEST_CASE("term_sort") {
  Decls decls = {{"NA", Sort::Number},
                 {"A", Sort::Agent},
                 {"pk", Sort::PublicKey},
                 {"h", Sort::Function}};

  CHECK(term_sort(Term::atom("NA"), decls) == Sort::Number);
  CHECK(term_sort(Term::fun_app("pk", {Term::atom("A")}), decls) ==
        Sort::PublicKey);
  CHECK(term_sort(Term::inv(Term::fun_app("pk", {Term::atom("A")})), decls) ==
        Sort::PrivateKey);
  CHECK(term_sort(Term::fun_app("h", {Term::atom("NA")}), decls) ==
        Sort::Untyped);
  CHECK(term_sort(Term::pair(Term::atom("NA"), Term::atom("A")), decls) ==
        Sort::Untyped);

  CHECK_THROWS_AS((void)term_sort(Term::atom("X"), decls),
                  UndeclaredIdentifierError);

  // Session-suffixed ground atoms resolve through their base name.
  CHECK(lookup_sort(decls, "NA#s1") == Sort::Number);
  CHECK(lookup_sort(decls, "NA#s2~7") == Sort::Number);
  CHECK(!lookup_sort(decls, "NX#s1").has_value());
}

TEST_CASE("ground terms") {
  CHECK(is_ground(Term::atom("NA")));
  CHECK(!is_ground(Term::pair(Term::atom("X", true), Term::atom("NA"))));
}

}  // TEST_SUITE
