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

// Same hand-validated Lowe run as in the checker tests.
check::AttackTrace hand_lowe_trace(const ProtocolSpec& nspk) {
  check::AttackTrace trace;
  trace.protocol = "NSPK";
  trace.dishonest = "i";
  trace.goal_index = 0;
  trace.goal = nspk.goals[0];
  trace.sessions = {{{"A", "a"}, {"B", "b"}}, {{"A", "a"}, {"B", "i"}}};
  trace.instances = {{"s1:A", 0, "A", "a"},
                     {"s1:B", 0, "B", "b"},
                     {"s2:A", 1, "A", "a"}};
  auto event = [&](check::TraceEvent::Kind kind, const std::string& inst,
                   size_t action, const std::string& term) {
    check::TraceEvent e;
    e.kind = kind;
    e.instance = inst;
    e.action_index = action;
    e.mode = ChannelMode::Plain;
    e.term = rt(nspk, term);
    return e;
  };
  using K = check::TraceEvent::Kind;
  trace.events = {
      event(K::Send, "s2:A", 0, "{NA#s2,a}pk(i)"),
      event(K::Deliver, "s1:B", 0, "{NA#s2,a}pk(b)"),
      event(K::Send, "s1:B", 1, "{NA#s2,NB#s1}pk(a)"),
      event(K::Deliver, "s2:A", 1, "{NA#s2,NB#s1}pk(a)"),
      event(K::Send, "s2:A", 2, "{NB#s1}pk(i)"),
      event(K::Deliver, "s1:B", 2, "{NB#s1}pk(b)"),
  };
  trace.is_secrecy = true;
  trace.secret = rt(nspk, "NB#s1");
  return trace;
}

}  // namespace

TEST_SUITE("testgen") {

TEST_CASE("the Lowe trace serializes to nine steps") {
  ProtocolSpec nspk = testing::load_protocol("nspk.anb");
  check::AttackTrace lowe = hand_lowe_trace(nspk);
  REQUIRE(check::verify_trace(nspk, lowe).accepted);

  testgen::AbstractTestCase atc = testgen::trace_to_atc(nspk, lowe);
  // Three plain-channel sends, each with its observation, and three
  // injections, in trace order.
  REQUIRE(atc.steps.size() == 9);
  using K = testgen::AtcStep::Kind;
  std::vector<K> kinds;
  for (const auto& step : atc.steps) kinds.push_back(step.kind);
  CHECK(kinds == std::vector<K>{K::ExpectSend, K::Observe, K::Inject,
                                K::ExpectSend, K::Observe, K::Inject,
                                K::ExpectSend, K::Observe, K::Inject});
  CHECK(atc.assertion.kind == testgen::AtcAssertion::Kind::SecretLearned);
  CHECK(atc.assertion.term == rt(nspk, "NB#s1"));
  CHECK(atc.goal_index == 0);
}

TEST_CASE("a passive trace yields expect and observe only") {
  ProtocolSpec toy = testing::load_protocol("toy_secret.anb");
  check::SearchConfig config;
  config.agents = {"a", "b", "i"};
  auto outcome = check::search(toy, config);
  REQUIRE(outcome.kind == check::SearchOutcome::Kind::Attack);

  testgen::AbstractTestCase atc = testgen::trace_to_atc(toy, *outcome.trace);
  REQUIRE(atc.steps.size() == 2);
  CHECK(atc.steps[0].kind == testgen::AtcStep::Kind::ExpectSend);
  CHECK(atc.steps[1].kind == testgen::AtcStep::Kind::Observe);
  // No deliveries in the trace, hence no injections in the ATC.
  for (const auto& step : atc.steps) {
    CHECK(step.kind != testgen::AtcStep::Kind::Inject);
  }
  CHECK(atc.assertion.kind == testgen::AtcAssertion::Kind::SecretLearned);
}

TEST_CASE("reconstructed traces satisfy the verifier") {
  ProtocolSpec nspk = testing::load_protocol("nspk.anb");
  check::AttackTrace lowe = hand_lowe_trace(nspk);
  auto atc = testgen::trace_to_atc(nspk, lowe);
  check::AttackTrace rebuilt = testgen::atc_to_trace(nspk, atc);
  auto verdict = check::verify_trace(nspk, rebuilt);
  CAPTURE(verdict.reason);
  CHECK(verdict.accepted);

  // Also for checker-produced traces across the attackable corpus.
  for (const std::string& file : {"nspk.anb", "toy_secret.anb", "kdp.anb"}) {
    CAPTURE(file);
    ProtocolSpec spec = testing::load_protocol(file);
    check::SearchConfig config;
    config.agents = {"a", "b", "i"};
    auto outcome = check::search(spec, config);
    REQUIRE(outcome.kind == check::SearchOutcome::Kind::Attack);
    auto from_search = testgen::trace_to_atc(spec, *outcome.trace);
    check::AttackTrace round = testgen::atc_to_trace(spec, from_search);
    auto v = check::verify_trace(spec, round);
    CAPTURE(v.reason);
    CHECK(v.accepted);
  }
}

TEST_CASE("ATC files reload structurally equal") {
  ProtocolSpec nspk = testing::load_protocol("nspk.anb");
  auto atc = testgen::trace_to_atc(nspk, hand_lowe_trace(nspk));
  std::string text = testgen::atc_to_json(atc);
  auto loaded = testgen::atc_from_json(text, nspk);
  REQUIRE(loaded.ok());
  CHECK(*loaded.atc == atc);
  CHECK(testgen::atc_to_json(*loaded.atc) == text);
}

TEST_CASE("trace files reload structurally equal") {
  ProtocolSpec kdp = testing::load_protocol("kdp.anb");
  check::SearchConfig config;
  config.agents = {"a", "b", "i"};
  auto outcome = check::search(kdp, config);
  REQUIRE(outcome.kind == check::SearchOutcome::Kind::Attack);
  std::string text = testgen::trace_to_json(*outcome.trace);
  auto loaded = testgen::trace_from_json(text, kdp);
  REQUIRE(loaded.ok());
  CHECK(testgen::trace_to_json(*loaded.trace) == text);
  CHECK(check::verify_trace(kdp, *loaded.trace).accepted);
}

TEST_CASE("malformed ATC documents are rejected") {
  ProtocolSpec nspk = testing::load_protocol("nspk.anb");
  CHECK(!testgen::atc_from_json("not json", nspk).ok());
  CHECK(!testgen::atc_from_json("{}", nspk).ok());
  CHECK(!testgen::atc_from_json(
             R"({"protocol":"NSPK","sessions":[],"steps":[],)"
             R"("assert":{"kind":"nonsense"}})",
             nspk)
             .ok());
}

TEST_CASE("intruder scripts mirror the ATC in order") {
  ProtocolSpec nspk = testing::load_protocol("nspk.anb");
  auto atc = testgen::trace_to_atc(nspk, hand_lowe_trace(nspk));
  testgen::IntruderScript script = testgen::atc_to_intruder_script(atc);
  REQUIRE(script.directives.size() == atc.steps.size());

  // The first directive waits for the initiator's opening ciphertext.
  CHECK(script.directives[0].kind == testgen::IntruderDirective::Kind::WaitFor);
  CHECK(script.directives[0].instance == "s2:A");
  CHECK(script.directives[0].term == rt(nspk, "{NA#s2,a}pk(i)"));

  using DK = testgen::IntruderDirective::Kind;
  using SK = testgen::AtcStep::Kind;
  for (size_t i = 0; i < atc.steps.size(); ++i) {
    switch (atc.steps[i].kind) {
      case SK::ExpectSend:
        CHECK(script.directives[i].kind == DK::WaitFor);
        break;
      case SK::Inject:
        CHECK(script.directives[i].kind == DK::Send);
        break;
      case SK::Observe:
        CHECK(script.directives[i].kind == DK::Record);
        CHECK(!script.directives[i].binding.empty());
        break;
    }
  }
  CHECK(script.assertion == atc.assertion);

  // A passive ATC compiles to a script with no Send directives.
  ProtocolSpec toy = testing::load_protocol("toy_secret.anb");
  check::SearchConfig config;
  config.agents = {"a", "b", "i"};
  auto outcome = check::search(toy, config);
  REQUIRE(outcome.kind == check::SearchOutcome::Kind::Attack);
  auto passive = testgen::atc_to_intruder_script(
      testgen::trace_to_atc(toy, *outcome.trace));
  for (const auto& d : passive.directives) {
    CHECK(d.kind != testgen::IntruderDirective::Kind::Send);
  }
}

}  // TEST_SUITE
