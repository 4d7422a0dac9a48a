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

#include "apv/testgen/atc.hpp"

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "apv/anb/parser.hpp"
#include "apv/anb/printer.hpp"
#include "apv/check/instantiate.hpp"

namespace apv::testgen {

using json = nlohmann::ordered_json;

namespace {

// Ground terms travel as AnB surface syntax; there is exactly one term
// grammar in the pipeline.
std::string term_text(const Term& t) { return anb::print_term(t); }

struct TermReader {
  Decls decls;
  std::vector<Diagnostic>* diags;

  std::optional<Term> operator()(const std::string& text) const {
    auto parsed = anb::parse_term(text, decls);
    if (!parsed.ok()) {
      for (const Diagnostic& d : parsed.diagnostics) diags->push_back(d);
      diags->push_back(Diagnostic::error(
          SourceSpan{}, "unparsable term '" + text + "'", "schema-error"));
      return std::nullopt;
    }
    return parsed.term;
  }
};

Decls decls_for(const ProtocolSpec& spec,
                const std::vector<check::SessionAssignment>& sessions,
                const std::string& dishonest) {
  std::set<std::string> agents;
  for (const check::SessionAssignment& s : sessions) {
    for (const auto& [role, agent] : s) agents.insert(agent);
  }
  agents.insert(dishonest);
  return check::runtime_declarations(
      spec, std::vector<std::string>(agents.begin(), agents.end()));
}

json sessions_to_json(const std::vector<check::SessionAssignment>& sessions) {
  json out = json::array();
  for (size_t s = 0; s < sessions.size(); ++s) {
    json roles = json::object();
    for (const auto& [role, agent] : sessions[s]) roles[role] = agent;
    out.push_back({{"id", "s" + std::to_string(s + 1)}, {"roles", roles}});
  }
  return out;
}

std::optional<std::vector<check::SessionAssignment>> sessions_from_json(
    const json& j, std::vector<Diagnostic>& diags) {
  if (!j.is_array()) {
    diags.push_back(Diagnostic::error(SourceSpan{}, "'sessions' must be an array",
                                      "schema-error"));
    return std::nullopt;
  }
  std::vector<check::SessionAssignment> out;
  for (const json& entry : j) {
    if (!entry.is_object() || !entry.contains("roles") ||
        !entry["roles"].is_object()) {
      diags.push_back(Diagnostic::error(
          SourceSpan{}, "session entry must carry a 'roles' object",
          "schema-error"));
      return std::nullopt;
    }
    check::SessionAssignment assignment;
    for (const auto& [role, agent] : entry["roles"].items()) {
      if (!agent.is_string()) {
        diags.push_back(Diagnostic::error(SourceSpan{},
                                          "agent names must be strings",
                                          "schema-error"));
        return std::nullopt;
      }
      assignment[role] = agent.get<std::string>();
    }
    out.push_back(std::move(assignment));
  }
  return out;
}

json claim_to_json(const check::ClaimRecord& c) {
  const char* kind = c.kind == check::ClaimSpec::Kind::Running   ? "running"
                     : c.kind == check::ClaimSpec::Kind::Commit ? "commit"
                                                                : "secret";
  json values = json::array();
  for (const Term& v : c.values) values.push_back(term_text(v));
  json parties = json::array();
  for (const std::string& p : c.parties) parties.push_back(p);
  return {{"kind", kind},       {"goal", c.goal_index},
          {"instance", c.instance}, {"by", c.by_agent},
          {"toward", c.toward_agent}, {"values", values},
          {"parties", parties}};
}

std::optional<check::ClaimRecord> claim_from_json(const json& j,
                                                  const TermReader& read,
                                                  std::vector<Diagnostic>& diags) {
  check::ClaimRecord c;
  std::string kind = j.value("kind", "");
  if (kind == "running") {
    c.kind = check::ClaimSpec::Kind::Running;
  } else if (kind == "commit") {
    c.kind = check::ClaimSpec::Kind::Commit;
  } else if (kind == "secret") {
    c.kind = check::ClaimSpec::Kind::Secret;
  } else {
    diags.push_back(Diagnostic::error(SourceSpan{},
                                      "unknown claim kind '" + kind + "'",
                                      "schema-error"));
    return std::nullopt;
  }
  c.goal_index = j.value("goal", 0u);
  c.instance = j.value("instance", "");
  c.by_agent = j.value("by", "");
  c.toward_agent = j.value("toward", "");
  for (const json& v : j.value("values", json::array())) {
    auto t = read(v.get<std::string>());
    if (!t) return std::nullopt;
    c.values.push_back(std::move(*t));
  }
  for (const json& p : j.value("parties", json::array())) {
    c.parties.push_back(p.get<std::string>());
  }
  return c;
}

json derivation_to_json(const dy::Derivation& d) {
  const char* rule = "fact";
  switch (d.rule) {
    case dy::Derivation::Rule::Fact: rule = "fact"; break;
    case dy::Derivation::Rule::PairIntro: rule = "pair-intro"; break;
    case dy::Derivation::Rule::SymEncIntro: rule = "sym-enc-intro"; break;
    case dy::Derivation::Rule::AsymEncIntro: rule = "asym-enc-intro"; break;
    case dy::Derivation::Rule::SignIntro: rule = "sign-intro"; break;
    case dy::Derivation::Rule::FunAppIntro: rule = "fun-app-intro"; break;
  }
  json out = {{"rule", rule}, {"term", term_text(d.conclusion)}};
  if (!d.premises.empty()) {
    json premises = json::array();
    for (const dy::Derivation& p : d.premises) {
      premises.push_back(derivation_to_json(p));
    }
    out["premises"] = premises;
  }
  return out;
}

std::optional<dy::Derivation> derivation_from_json(
    const json& j, const TermReader& read, std::vector<Diagnostic>& diags) {
  dy::Derivation d;
  std::string rule = j.value("rule", "");
  if (rule == "fact") {
    d.rule = dy::Derivation::Rule::Fact;
  } else if (rule == "pair-intro") {
    d.rule = dy::Derivation::Rule::PairIntro;
  } else if (rule == "sym-enc-intro") {
    d.rule = dy::Derivation::Rule::SymEncIntro;
  } else if (rule == "asym-enc-intro") {
    d.rule = dy::Derivation::Rule::AsymEncIntro;
  } else if (rule == "sign-intro") {
    d.rule = dy::Derivation::Rule::SignIntro;
  } else if (rule == "fun-app-intro") {
    d.rule = dy::Derivation::Rule::FunAppIntro;
  } else {
    diags.push_back(Diagnostic::error(
        SourceSpan{}, "unknown derivation rule '" + rule + "'", "schema-error"));
    return std::nullopt;
  }
  auto term = read(j.value("term", ""));
  if (!term) return std::nullopt;
  d.conclusion = std::move(*term);
  for (const json& p : j.value("premises", json::array())) {
    auto premise = derivation_from_json(p, read, diags);
    if (!premise) return std::nullopt;
    d.premises.push_back(std::move(*premise));
  }
  return d;
}

json assertion_to_json(const AtcAssertion& a) {
  switch (a.kind) {
    case AtcAssertion::Kind::SecretLearned:
      return {{"kind", "secret-learned"},
              {"goal", a.goal_index},
              {"term", term_text(a.term)}};
    case AtcAssertion::Kind::CommitWithoutRunning:
    case AtcAssertion::Kind::DuplicateCommit: {
      json values = json::array();
      for (const Term& v : a.values) values.push_back(term_text(v));
      return {{"kind", a.kind == AtcAssertion::Kind::DuplicateCommit
                           ? "duplicate-commit"
                           : "commit-without-running"},
              {"goal", a.goal_index},
              {"claimer", a.claimer},
              {"peer", a.peer},
              {"values", values}};
    }
  }
  return json::object();
}

std::optional<AtcAssertion> assertion_from_json(const json& j,
                                                const TermReader& read,
                                                std::vector<Diagnostic>& diags) {
  AtcAssertion a;
  std::string kind = j.value("kind", "");
  a.goal_index = j.value("goal", 0u);
  if (kind == "secret-learned") {
    a.kind = AtcAssertion::Kind::SecretLearned;
    auto t = read(j.value("term", ""));
    if (!t) return std::nullopt;
    a.term = std::move(*t);
    return a;
  }
  if (kind == "commit-without-running" || kind == "duplicate-commit") {
    a.kind = kind == "duplicate-commit" ? AtcAssertion::Kind::DuplicateCommit
                                        : AtcAssertion::Kind::CommitWithoutRunning;
    a.claimer = j.value("claimer", "");
    a.peer = j.value("peer", "");
    for (const json& v : j.value("values", json::array())) {
      auto t = read(v.get<std::string>());
      if (!t) return std::nullopt;
      a.values.push_back(std::move(*t));
    }
    return a;
  }
  diags.push_back(Diagnostic::error(
      SourceSpan{}, "unknown assertion kind '" + kind + "'", "schema-error"));
  return std::nullopt;
}

}  // namespace

AbstractTestCase trace_to_atc(const ProtocolSpec& spec,
                              const check::AttackTrace& trace) {
  AbstractTestCase atc;
  atc.protocol = trace.protocol;
  atc.dishonest = trace.dishonest;
  atc.goal_index = trace.goal_index;
  atc.goal_text = anb::print_goal(trace.goal);
  atc.sessions = trace.sessions;

  std::map<std::string, size_t> session_of;
  for (const check::InstanceInfo& info : trace.instances) {
    session_of[info.label] = info.session;
  }

  for (const check::TraceEvent& event : trace.events) {
    switch (event.kind) {
      case check::TraceEvent::Kind::Send: {
        atc.steps.push_back({AtcStep::Kind::ExpectSend, event.instance,
                             event.term});
        // Observe whenever the payload reaches the intruder: readable
        // channel, or the addressed receiver is intruder-played.
        bool observed = mode_readable(event.mode);
        if (!observed) {
          const Action& action = spec.actions[event.action_index];
          auto sit = session_of.find(event.instance);
          if (sit != session_of.end()) {
            const auto& assignment = trace.sessions[sit->second];
            auto receiver = assignment.find(action.receiver);
            observed = receiver != assignment.end() &&
                       receiver->second == trace.dishonest;
          }
        }
        if (observed) {
          atc.steps.push_back({AtcStep::Kind::Observe, event.instance,
                               event.term});
        }
        break;
      }
      case check::TraceEvent::Kind::Deliver:
        atc.steps.push_back({AtcStep::Kind::Inject, event.instance, event.term});
        break;
      case check::TraceEvent::Kind::Claim:
        break;
    }
  }

  if (trace.is_secrecy) {
    atc.assertion.kind = AtcAssertion::Kind::SecretLearned;
    atc.assertion.goal_index = trace.goal_index;
    atc.assertion.term = trace.secret;
  } else {
    atc.assertion.kind = trace.duplicate
                             ? AtcAssertion::Kind::DuplicateCommit
                             : AtcAssertion::Kind::CommitWithoutRunning;
    atc.assertion.goal_index = trace.goal_index;
    if (trace.commit) {
      atc.assertion.claimer = trace.commit->by_agent;
      atc.assertion.peer = trace.commit->toward_agent;
      atc.assertion.values = trace.commit->values;
    }
  }
  return atc;
}

check::AttackTrace atc_to_trace(const ProtocolSpec& spec,
                                const AbstractTestCase& atc) {
  check::AttackTrace trace;
  trace.protocol = atc.protocol;
  trace.dishonest = atc.dishonest;
  trace.goal_index = atc.goal_index;
  if (atc.goal_index < spec.goals.size()) {
    trace.goal = spec.goals[atc.goal_index];
  }
  trace.sessions = atc.sessions;

  // Rebuild instance tables and walk program counters to recover the action
  // index and channel mode of every step.
  const auto scripts = check::project_roles(spec);
  std::set<std::string> agents;
  for (const check::SessionAssignment& s : atc.sessions) {
    for (const auto& [role, agent] : s) agents.insert(agent);
  }
  agents.insert(atc.dishonest);
  const check::Instantiation inst = check::instantiate(
      spec, scripts, atc.sessions, atc.dishonest,
      std::vector<std::string>(agents.begin(), agents.end()));
  std::map<std::string, const check::Instance*> by_label;
  for (const check::Instance& i : inst.instances) {
    trace.instances.push_back(i.info);
    by_label[i.info.label] = &i;
  }

  std::map<std::string, size_t> pcs;
  for (const AtcStep& step : atc.steps) {
    if (step.kind == AtcStep::Kind::Observe) continue;
    check::TraceEvent event;
    event.kind = step.kind == AtcStep::Kind::ExpectSend
                     ? check::TraceEvent::Kind::Send
                     : check::TraceEvent::Kind::Deliver;
    event.instance = step.instance;
    event.term = step.term;
    auto it = by_label.find(step.instance);
    if (it != by_label.end()) {
      size_t& pc = pcs[step.instance];
      if (pc < it->second->steps.size()) {
        event.action_index = it->second->steps[pc].action_index;
        event.mode = it->second->steps[pc].mode;
        ++pc;
      }
    }
    trace.events.push_back(std::move(event));
  }

  trace.is_secrecy = atc.assertion.kind == AtcAssertion::Kind::SecretLearned;
  if (trace.is_secrecy) trace.secret = atc.assertion.term;
  trace.duplicate = atc.assertion.kind == AtcAssertion::Kind::DuplicateCommit;
  return trace;
}

IntruderScript atc_to_intruder_script(const AbstractTestCase& atc) {
  IntruderScript script;
  script.assertion = atc.assertion;
  size_t observed = 0;
  for (const AtcStep& step : atc.steps) {
    IntruderDirective directive;
    switch (step.kind) {
      case AtcStep::Kind::ExpectSend:
        directive.kind = IntruderDirective::Kind::WaitFor;
        directive.instance = step.instance;
        directive.term = step.term;
        break;
      case AtcStep::Kind::Inject:
        directive.kind = IntruderDirective::Kind::Send;
        directive.instance = step.instance;
        directive.term = step.term;
        break;
      case AtcStep::Kind::Observe:
        directive.kind = IntruderDirective::Kind::Record;
        directive.instance = step.instance;
        directive.term = step.term;
        directive.binding = "obs" + std::to_string(++observed);
        break;
    }
    script.directives.push_back(std::move(directive));
  }
  return script;
}

std::string atc_to_json(const AbstractTestCase& atc) {
  json steps = json::array();
  for (const AtcStep& step : atc.steps) {
    const char* kind = step.kind == AtcStep::Kind::ExpectSend ? "expect-send"
                       : step.kind == AtcStep::Kind::Inject  ? "inject"
                                                             : "observe";
    steps.push_back({{"kind", kind},
                     {"instance", step.instance},
                     {"term", term_text(step.term)}});
  }
  json out = {{"protocol", atc.protocol},
              {"dishonest", atc.dishonest},
              {"goal", {{"index", atc.goal_index}, {"text", atc.goal_text}}},
              {"sessions", sessions_to_json(atc.sessions)},
              {"steps", steps},
              {"assert", assertion_to_json(atc.assertion)}};
  return out.dump(2) + "\n";
}

AtcLoadResult atc_from_json(const std::string& text, const ProtocolSpec& spec) {
  AtcLoadResult result;
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    result.diagnostics.push_back(Diagnostic::error(
        SourceSpan{}, "malformed JSON document", "schema-error"));
    return result;
  }
  AbstractTestCase atc;
  atc.protocol = j.value("protocol", "");
  atc.dishonest = j.value("dishonest", "i");
  if (j.contains("goal") && j["goal"].is_object()) {
    atc.goal_index = j["goal"].value("index", 0u);
    atc.goal_text = j["goal"].value("text", "");
  }
  auto sessions = sessions_from_json(j.value("sessions", json::array()),
                                     result.diagnostics);
  if (!sessions) return result;
  atc.sessions = std::move(*sessions);

  TermReader read{decls_for(spec, atc.sessions, atc.dishonest),
                  &result.diagnostics};

  for (const json& step_json : j.value("steps", json::array())) {
    AtcStep step;
    std::string kind = step_json.value("kind", "");
    if (kind == "expect-send") {
      step.kind = AtcStep::Kind::ExpectSend;
    } else if (kind == "inject") {
      step.kind = AtcStep::Kind::Inject;
    } else if (kind == "observe") {
      step.kind = AtcStep::Kind::Observe;
    } else {
      result.diagnostics.push_back(Diagnostic::error(
          SourceSpan{}, "unknown step kind '" + kind + "'", "schema-error"));
      return result;
    }
    step.instance = step_json.value("instance", "");
    auto term = read(step_json.value("term", ""));
    if (!term) return result;
    step.term = std::move(*term);
    atc.steps.push_back(std::move(step));
  }

  if (!j.contains("assert")) {
    result.diagnostics.push_back(Diagnostic::error(
        SourceSpan{}, "missing 'assert' entry", "schema-error"));
    return result;
  }
  auto assertion = assertion_from_json(j["assert"], read, result.diagnostics);
  if (!assertion) return result;
  atc.assertion = std::move(*assertion);

  if (atc.goal_index >= spec.goals.size()) {
    result.diagnostics.push_back(Diagnostic::error(
        SourceSpan{}, "goal index out of range for this protocol",
        "schema-error"));
    return result;
  }
  result.atc = std::move(atc);
  return result;
}

std::string trace_to_json(const check::AttackTrace& trace) {
  json instances = json::array();
  for (const check::InstanceInfo& info : trace.instances) {
    instances.push_back({{"label", info.label},
                         {"session", info.session + 1},
                         {"role", info.role},
                         {"agent", info.agent}});
  }
  json events = json::array();
  for (const check::TraceEvent& event : trace.events) {
    switch (event.kind) {
      case check::TraceEvent::Kind::Send:
        events.push_back({{"kind", "send"},
                          {"instance", event.instance},
                          {"action", event.action_index},
                          {"mode", mode_arrow(event.mode)},
                          {"term", term_text(event.term)}});
        break;
      case check::TraceEvent::Kind::Deliver:
        events.push_back({{"kind", "deliver"},
                          {"instance", event.instance},
                          {"action", event.action_index},
                          {"mode", mode_arrow(event.mode)},
                          {"term", term_text(event.term)}});
        break;
      case check::TraceEvent::Kind::Claim:
        events.push_back(
            {{"kind", "claim"}, {"claim", claim_to_json(*event.claim)}});
        break;
    }
  }
  json witness;
  if (trace.is_secrecy) {
    witness = {{"kind", "secrecy"}, {"term", term_text(trace.secret)}};
    if (trace.derivation) {
      witness["derivation"] = derivation_to_json(*trace.derivation);
    }
  } else {
    witness = {{"kind", "agreement"}, {"duplicate", trace.duplicate}};
    if (trace.commit) witness["commit"] = claim_to_json(*trace.commit);
  }
  json out = {
      {"protocol", trace.protocol},
      {"dishonest", trace.dishonest},
      {"goal",
       {{"index", trace.goal_index}, {"text", anb::print_goal(trace.goal)}}},
      {"sessions", sessions_to_json(trace.sessions)},
      {"instances", instances},
      {"events", events},
      {"witness", witness}};
  return out.dump(2) + "\n";
}

TraceLoadResult trace_from_json(const std::string& text,
                                const ProtocolSpec& spec) {
  TraceLoadResult result;
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    result.diagnostics.push_back(Diagnostic::error(
        SourceSpan{}, "malformed JSON document", "schema-error"));
    return result;
  }
  check::AttackTrace trace;
  trace.protocol = j.value("protocol", "");
  trace.dishonest = j.value("dishonest", "i");
  if (j.contains("goal") && j["goal"].is_object()) {
    trace.goal_index = j["goal"].value("index", 0u);
  }
  if (trace.goal_index >= spec.goals.size()) {
    result.diagnostics.push_back(Diagnostic::error(
        SourceSpan{}, "goal index out of range for this protocol",
        "schema-error"));
    return result;
  }
  trace.goal = spec.goals[trace.goal_index];

  auto sessions = sessions_from_json(j.value("sessions", json::array()),
                                     result.diagnostics);
  if (!sessions) return result;
  trace.sessions = std::move(*sessions);

  TermReader read{decls_for(spec, trace.sessions, trace.dishonest),
                  &result.diagnostics};

  for (const json& ij : j.value("instances", json::array())) {
    check::InstanceInfo info;
    info.label = ij.value("label", "");
    info.session = ij.value("session", 1u) - 1;
    info.role = ij.value("role", "");
    info.agent = ij.value("agent", "");
    trace.instances.push_back(std::move(info));
  }

  for (const json& ej : j.value("events", json::array())) {
    check::TraceEvent event;
    std::string kind = ej.value("kind", "");
    if (kind == "claim") {
      event.kind = check::TraceEvent::Kind::Claim;
      auto claim = claim_from_json(ej.value("claim", json::object()), read,
                                   result.diagnostics);
      if (!claim) return result;
      event.claim = std::move(*claim);
      trace.events.push_back(std::move(event));
      continue;
    }
    if (kind == "send") {
      event.kind = check::TraceEvent::Kind::Send;
    } else if (kind == "deliver") {
      event.kind = check::TraceEvent::Kind::Deliver;
    } else {
      result.diagnostics.push_back(Diagnostic::error(
          SourceSpan{}, "unknown event kind '" + kind + "'", "schema-error"));
      return result;
    }
    event.instance = ej.value("instance", "");
    event.action_index = ej.value("action", 0u);
    auto mode = mode_from_arrow(ej.value("mode", "->"));
    if (!mode) {
      result.diagnostics.push_back(Diagnostic::error(
          SourceSpan{}, "unknown channel mode", "schema-error"));
      return result;
    }
    event.mode = *mode;
    auto term = read(ej.value("term", ""));
    if (!term) return result;
    event.term = std::move(*term);
    trace.events.push_back(std::move(event));
  }

  if (!j.contains("witness") || !j["witness"].is_object()) {
    result.diagnostics.push_back(Diagnostic::error(
        SourceSpan{}, "missing 'witness' entry", "schema-error"));
    return result;
  }
  const json& wj = j["witness"];
  std::string wkind = wj.value("kind", "");
  if (wkind == "secrecy") {
    trace.is_secrecy = true;
    auto term = read(wj.value("term", ""));
    if (!term) return result;
    trace.secret = std::move(*term);
    if (wj.contains("derivation")) {
      auto derivation =
          derivation_from_json(wj["derivation"], read, result.diagnostics);
      if (!derivation) return result;
      trace.derivation = std::move(*derivation);
    }
  } else if (wkind == "agreement") {
    trace.is_secrecy = false;
    trace.duplicate = wj.value("duplicate", false);
    if (wj.contains("commit")) {
      auto commit = claim_from_json(wj["commit"], read, result.diagnostics);
      if (!commit) return result;
      trace.commit = std::move(*commit);
    }
  } else {
    result.diagnostics.push_back(Diagnostic::error(
        SourceSpan{}, "unknown witness kind '" + wkind + "'", "schema-error"));
    return result;
  }
  result.trace = std::move(trace);
  return result;
}

}  // namespace apv::testgen
