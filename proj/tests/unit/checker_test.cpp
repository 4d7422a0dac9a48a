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

#include "apv/anb/parser.hpp"
#include "apv/check/roles.hpp"
#include "apv/check/search.hpp"
#include "apv/testgen/atc.hpp"
#include "support/corpus.hpp"

using namespace apv;

namespace {

Term rt(const ProtocolSpec& spec, const std::string& text) {
  auto parsed = anb::parse_term(
      text, check::runtime_declarations(spec, {"a", "b", "i"}));
  REQUIRE(parsed.ok());
  return *parsed.term;
}

// The Lowe man-in-the-middle run, written out event by event. Sessions:
// s1 = a with b (the attacked responder session, initiated by the intruder
// impersonating a), s2 = a with i (a genuinely talks to the intruder).
check::AttackTrace hand_lowe_trace(const ProtocolSpec& nspk) {
  check::AttackTrace trace;
  trace.protocol = "NSPK";
  trace.dishonest = "i";
  trace.goal_index = 0;  // NB secret between A,B
  trace.goal = nspk.goals[0];
  trace.sessions = {{{"A", "a"}, {"B", "b"}}, {{"A", "a"}, {"B", "i"}}};
  trace.instances = {{"s1:A", 0, "A", "a"},
                     {"s1:B", 0, "B", "b"},
                     {"s2:A", 1, "A", "a"}};

  auto send = [&](const std::string& inst, size_t action,
                  const std::string& term) {
    check::TraceEvent e;
    e.kind = check::TraceEvent::Kind::Send;
    e.instance = inst;
    e.action_index = action;
    e.mode = ChannelMode::Plain;
    e.term = rt(nspk, term);
    return e;
  };
  auto deliver = [&](const std::string& inst, size_t action,
                     const std::string& term) {
    check::TraceEvent e;
    e.kind = check::TraceEvent::Kind::Deliver;
    e.instance = inst;
    e.action_index = action;
    e.mode = ChannelMode::Plain;
    e.term = rt(nspk, term);
    return e;
  };

  trace.events = {
      send("s2:A", 0, "{NA#s2,a}pk(i)"),         // a opens a run with i
      deliver("s1:B", 0, "{NA#s2,a}pk(b)"),      // i re-encrypts towards b
      send("s1:B", 1, "{NA#s2,NB#s1}pk(a)"),     // b answers "a"
      deliver("s2:A", 1, "{NA#s2,NB#s1}pk(a)"),  // forwarded into a's run
      send("s2:A", 2, "{NB#s1}pk(i)"),           // a returns b's nonce to i
      deliver("s1:B", 2, "{NB#s1}pk(b)"),        // i re-encrypts, b completes
  };
  trace.is_secrecy = true;
  trace.secret = rt(nspk, "NB#s1");
  trace.derivation =
      dy::Derivation{dy::Derivation::Rule::Fact, rt(nspk, "NB#s1"), {}};
  return trace;
}

}  // namespace

TEST_SUITE("check") {

TEST_CASE("NSPK projection matches the hand projection") {
  ProtocolSpec nspk = testing::load_protocol("nspk.anb");
  auto scripts = check::project_roles(nspk);
  REQUIRE(scripts.size() == 2);

  const check::RoleScript& a = scripts.at("A");
  REQUIRE(a.steps.size() == 3);
  CHECK(a.fresh_atoms == std::set<std::string>{"NA"});
  CHECK(a.steps[0].dir == check::Step::Dir::Send);
  CHECK(a.steps[0].fresh == std::vector<std::string>{"NA"});
  // A knows everything in its first message: no variables.
  CHECK(a.steps[0].payload ==
        Term::asym_enc(Term::pair(Term::atom("NA"), Term::atom("A")),
                       Term::fun_app("pk", {Term::atom("B")})));
  // The received NB is a variable; A's own NA is pinned.
  CHECK(a.steps[1].dir == check::Step::Dir::Receive);
  CHECK(a.steps[1].payload ==
        Term::asym_enc(Term::pair(Term::atom("NA"), Term::atom("NB", true)),
                       Term::fun_app("pk", {Term::atom("A")})));
  CHECK(a.steps[2].payload ==
        Term::asym_enc(Term::atom("NB", true),
                       Term::fun_app("pk", {Term::atom("B")})));

  const check::RoleScript& b = scripts.at("B");
  REQUIRE(b.steps.size() == 3);
  CHECK(b.fresh_atoms == std::set<std::string>{"NB"});
  // B does not know the initiator: both the nonce and the name are bound.
  CHECK(b.steps[0].payload ==
        Term::asym_enc(
            Term::pair(Term::atom("NA", true), Term::atom("A", true)),
            Term::fun_app("pk", {Term::atom("B")})));
  // The reply goes to the key of whoever claimed to initiate.
  CHECK(b.steps[1].payload ==
        Term::asym_enc(Term::pair(Term::atom("NA", true), Term::atom("NB")),
                       Term::fun_app("pk", {Term::atom("A", true)})));
  CHECK(b.steps[2].payload ==
        Term::asym_enc(Term::atom("NB"),
                       Term::fun_app("pk", {Term::atom("B")})));

  // Claims: Running on A's last send, Commit and Secret at completions.
  REQUIRE(a.steps[2].claims_after.size() == 2);
  CHECK(a.steps[2].claims_after[0].kind == check::ClaimSpec::Kind::Secret);
  CHECK(a.steps[2].claims_after[0].goal_index == 0);
  CHECK(a.steps[2].claims_after[1].kind == check::ClaimSpec::Kind::Running);
  CHECK(a.steps[2].claims_after[1].peer_role == "B");
  REQUIRE(b.steps[2].claims_after.size() == 2);
  CHECK(b.steps[2].claims_after[0].kind == check::ClaimSpec::Kind::Secret);
  CHECK(b.steps[2].claims_after[1].kind == check::ClaimSpec::Kind::Commit);
  CHECK(b.steps[2].claims_after[1].peer_role == "A");
}

TEST_CASE("single action projection") {
  ProtocolSpec toy = testing::load_protocol("toy_secret.anb");
  auto scripts = check::project_roles(toy);
  CHECK(scripts.at("A").steps.size() == 1);
  CHECK(scripts.at("A").steps[0].dir == check::Step::Dir::Send);
  CHECK(scripts.at("B").steps.size() == 1);
  CHECK(scripts.at("B").steps[0].dir == check::Step::Dir::Receive);
  CHECK(scripts.at("B").steps[0].payload == Term::atom("NA", true));
  // A never receives: a send-only script.
  for (const check::Step& step : scripts.at("A").steps) {
    CHECK(step.dir == check::Step::Dir::Send);
  }
}

TEST_CASE("corpus protocols are executable") {
  for (const std::string& file : testing::corpus_protocols()) {
    CAPTURE(file);
    CHECK(check::executability_check(testing::load_protocol(file)).empty());
  }
}

TEST_CASE("missing key material is reported") {
  auto parsed = anb::parse_protocol(
      "Protocol: Bad\n"
      "Types:\n  Agent A,B;\n  Number NA;\n  PublicKey pk;\n"
      "Knowledge:\n  A: A,B;\n  B: A,B,pk;\n"
      "Actions:\n  A -> B: {NA}pk(B)\n");
  REQUIRE(parsed.ok());
  auto diags = check::executability_check(*parsed.spec);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == "not-executable");
  CHECK(diags[0].message.find("role A") != std::string::npos);
  CHECK(diags[0].message.find("pk(B)") != std::string::npos);
}

TEST_CASE("forwarding undecryptable data is reported") {
  auto parsed = anb::parse_protocol(
      "Protocol: BadFwd\n"
      "Types:\n  Agent A,B;\n  Number NA;\n  PublicKey pk;\n"
      "Knowledge:\n  A: A,B,pk;\n  B: A,B,pk;\n"
      "Actions:\n  A -> B: {NA}pk(B)\n  B -> A: NA\n");
  REQUIRE(parsed.ok());
  auto diags = check::executability_check(*parsed.spec);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("role B") != std::string::npos);
  CHECK(diags[0].message.find("missing NA") != std::string::npos);
}

TEST_CASE("plaintext secret falls to a one-send attack") {
  ProtocolSpec toy = testing::load_protocol("toy_secret.anb");
  check::SearchConfig config;
  config.agents = {"a", "b", "i"};
  auto outcome = check::search(toy, config);
  REQUIRE(outcome.kind == check::SearchOutcome::Kind::Attack);
  const check::AttackTrace& trace = *outcome.trace;
  CHECK(trace.is_secrecy);

  size_t sends = 0, delivers = 0;
  for (const auto& event : trace.events) {
    sends += event.kind == check::TraceEvent::Kind::Send;
    delivers += event.kind == check::TraceEvent::Kind::Deliver;
  }
  CHECK(sends == 1);
  CHECK(delivers == 0);
  REQUIRE(trace.derivation.has_value());
  CHECK(trace.derivation->rule == dy::Derivation::Rule::Fact);
  CHECK(trace.derivation->premises.empty());

  CHECK(check::verify_trace(toy, trace).accepted);
}

TEST_CASE("the hand-built Lowe trace is accepted by verify_trace") {
  ProtocolSpec nspk = testing::load_protocol("nspk.anb");
  check::AttackTrace lowe = hand_lowe_trace(nspk);
  auto verdict = check::verify_trace(nspk, lowe);
  CAPTURE(verdict.reason);
  CHECK(verdict.accepted);
}

TEST_CASE("tampered traces are rejected with the failed obligation") {
  ProtocolSpec nspk = testing::load_protocol("nspk.anb");

  // An injection the intruder cannot derive at that point.
  check::AttackTrace bad = hand_lowe_trace(nspk);
  bad.events[1].term = rt(nspk, "{NB#s1,a}pk(b)");
  auto underivable = check::verify_trace(nspk, bad);
  CHECK(!underivable.accepted);
  CHECK(underivable.reason.find("underivable injection") != std::string::npos);
  CHECK(underivable.reason.find("event 2") != std::string::npos);

  // A witness deriving a different term than the claimed secret.
  check::AttackTrace wrong_witness = hand_lowe_trace(nspk);
  wrong_witness.derivation =
      dy::Derivation{dy::Derivation::Rule::Fact, rt(nspk, "NA#s2"), {}};
  auto mismatch = check::verify_trace(nspk, wrong_witness);
  CHECK(!mismatch.accepted);
  CHECK(mismatch.reason == "witness mismatch");

  // A delivery whose pattern cannot match.
  check::AttackTrace bad_pattern = hand_lowe_trace(nspk);
  bad_pattern.events[5].term = rt(nspk, "{NB#s1}pk(a)");
  CHECK(!check::verify_trace(nspk, bad_pattern).accepted);
}

TEST_CASE("key-distribution replay yields a duplicate commit") {
  ProtocolSpec kdp = testing::load_protocol("kdp.anb");
  check::SearchConfig config;
  config.agents = {"a", "b", "i"};
  auto outcome = check::search(kdp, config);
  REQUIRE(outcome.kind == check::SearchOutcome::Kind::Attack);
  const check::AttackTrace& trace = *outcome.trace;
  CHECK(!trace.is_secrecy);
  CHECK(trace.duplicate);
  CHECK(trace.goal.kind == Goal::Kind::InjAgreement);
  REQUIRE(trace.commit.has_value());
  CHECK(trace.commit->by_agent == "b");
  CHECK(trace.commit->toward_agent == "a");
  CHECK(check::verify_trace(kdp, trace).accepted);

  // The same key reaches two responder commits: both sessions honest.
  REQUIRE(trace.sessions.size() == 2);
  CHECK(trace.sessions[0] == trace.sessions[1]);
}

TEST_CASE("weak agreement ignores replays that injective agreement flags") {
  auto parsed = anb::parse_protocol(
      "Protocol: KDPWeak\n"
      "Types:\n  Agent A,B;\n  Number TAG;\n  SymmetricKey KAB,psk;\n"
      "Knowledge:\n  A: A,B,psk(A,B);\n  B: A,B,psk(A,B);\n"
      "Actions:\n  A *-> B: {KAB,B}psk(A,B)\n  B -> A: {TAG}KAB\n"
      "Goals:\n  B authenticates A on KAB\n");
  REQUIRE(parsed.ok());
  check::SearchConfig config;
  config.agents = {"a", "b", "i"};
  auto outcome = check::search(*parsed.spec, config);
  CHECK(outcome.kind == check::SearchOutcome::Kind::SafeAtBound);
}

TEST_CASE("search validates its configuration") {
  ProtocolSpec toy = testing::load_protocol("toy_secret.anb");
  check::SearchConfig config;
  config.max_sessions = 4;
  CHECK_THROWS_AS(check::search(toy, config), std::invalid_argument);
  config.override_session_guard = true;
  config.max_sessions = 1;
  config.agents.clear();
  CHECK_THROWS_AS(check::search(toy, config), std::invalid_argument);
}

TEST_CASE("search outcome and trace bytes are deterministic") {
  ProtocolSpec kdp = testing::load_protocol("kdp.anb");
  check::SearchConfig config;
  config.agents = {"a", "b", "i"};
  auto first = check::search(kdp, config);
  auto second = check::search(kdp, config);
  REQUIRE(first.kind == check::SearchOutcome::Kind::Attack);
  REQUIRE(second.kind == check::SearchOutcome::Kind::Attack);
  CHECK(testgen::trace_to_json(*first.trace) ==
        testgen::trace_to_json(*second.trace));
  CHECK(first.stats.states == second.stats.states);
}

TEST_CASE("attacks found at a lower bound persist at higher bounds") {
  for (const std::string& file : {"toy_secret.anb", "kdp.anb"}) {
    CAPTURE(file);
    ProtocolSpec spec = testing::load_protocol(file);
    check::SearchConfig config;
    config.agents = {"a", "b", "i"};
    std::optional<size_t> attacked_goal;
    for (int sessions = 1; sessions <= 2; ++sessions) {
      config.max_sessions = sessions;
      auto outcome = check::search(spec, config);
      if (attacked_goal) {
        // Once violated, the goal stays violated at every larger bound.
        REQUIRE(outcome.kind == check::SearchOutcome::Kind::Attack);
      }
      if (outcome.kind == check::SearchOutcome::Kind::Attack) {
        attacked_goal = outcome.trace->goal_index;
      }
    }
  }
}

}  // TEST_SUITE
