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

#include "apv/check/search.hpp"

#include <deque>
#include <map>
#include <set>

#include "apv/anb/printer.hpp"
#include "apv/check/instantiate.hpp"

namespace apv::check {

namespace {

std::string at_event(size_t k) { return " at event " + std::to_string(k + 1); }

}  // namespace

// Re-validates every trace obligation by replay, without using search: step
// conformance of every send, channel legality and pattern conformance of
// every delivery, claim consistency, and finally the goal-violation
// condition itself.
VerifyResult verify_trace(const ProtocolSpec& spec, const AttackTrace& trace) {
  if (trace.goal_index >= spec.goals.size()) {
    return VerifyResult::reject("violated goal index out of range");
  }
  if (!(spec.goals[trace.goal_index] == trace.goal)) {
    return VerifyResult::reject("violated goal does not match the spec");
  }

  std::vector<std::string> pool;
  {
    std::set<std::string> agents;
    for (const SessionAssignment& s : trace.sessions) {
      for (const auto& [role, agent] : s) agents.insert(agent);
    }
    agents.insert(trace.dishonest);
    pool.assign(agents.begin(), agents.end());
  }

  const auto scripts = project_roles(spec);
  const Instantiation inst = instantiate(spec, scripts, trace.sessions,
                                         trace.dishonest, pool, /*seed=*/0);

  std::map<std::string, size_t> index_of;
  for (size_t i = 0; i < inst.instances.size(); ++i) {
    index_of[inst.instances[i].info.label] = i;
  }

  std::vector<size_t> pcs(inst.instances.size(), 0);
  std::vector<Bindings> bindings(inst.instances.size());
  dy::KnowledgeBase kb = dy::KnowledgeBase::from_facts(inst.intruder_facts);
  std::vector<std::vector<Term>> genuine(inst.action_count);
  std::vector<ClaimRecord> claims;
  std::deque<ClaimRecord> expected_claims;

  for (size_t k = 0; k < trace.events.size(); ++k) {
    const TraceEvent& event = trace.events[k];

    if (event.kind == TraceEvent::Kind::Claim) {
      if (!event.claim) {
        return VerifyResult::reject("claim event without record" + at_event(k));
      }
      if (expected_claims.empty()) {
        return VerifyResult::reject("unexpected claim event" + at_event(k));
      }
      if (!(expected_claims.front() == *event.claim)) {
        return VerifyResult::reject("claim mismatch" + at_event(k));
      }
      expected_claims.pop_front();
      continue;
    }

    auto it = index_of.find(event.instance);
    if (it == index_of.end()) {
      return VerifyResult::reject("unknown instance '" + event.instance + "'" +
                                  at_event(k));
    }
    const size_t i = it->second;
    const Instance& instance = inst.instances[i];
    if (pcs[i] >= instance.steps.size()) {
      return VerifyResult::reject("instance '" + event.instance +
                                  "' already completed" + at_event(k));
    }
    const Step& step = instance.steps[pcs[i]];
    if (step.action_index != event.action_index) {
      return VerifyResult::reject("action index mismatch" + at_event(k));
    }
    if (step.mode != event.mode) {
      return VerifyResult::reject("channel mode mismatch" + at_event(k));
    }

    if (event.kind == TraceEvent::Kind::Send) {
      if (step.dir != Step::Dir::Send) {
        return VerifyResult::reject("send out of script order" + at_event(k));
      }
      Term ground = substitute(step.payload, bindings[i]);
      if (!is_ground(ground) || ground != event.term) {
        return VerifyResult::reject("send payload mismatch" + at_event(k));
      }
      genuine[step.action_index].push_back(ground);
      const std::string& receiver_agent =
          trace.sessions[instance.info.session].at(step.peer_role);
      if (mode_readable(step.mode) || receiver_agent == trace.dishonest) {
        kb = kb.add_fact(ground);
      }
    } else {
      if (step.dir != Step::Dir::Receive) {
        return VerifyResult::reject("delivery out of script order" + at_event(k));
      }
      bool is_genuine = false;
      for (const Term& sent : genuine[step.action_index]) {
        if (sent == event.term) is_genuine = true;
      }
      if (!is_genuine) {
        if (!mode_injectable(step.mode)) {
          return VerifyResult::reject(
              "forged delivery on a non-injectable channel" + at_event(k));
        }
        if (!kb.derivable(event.term)) {
          return VerifyResult::reject("underivable injection" + at_event(k));
        }
      }
      Term pattern = substitute(step.payload, bindings[i]);
      auto bound = match(pattern, event.term, bindings[i]);
      if (!bound) {
        return VerifyResult::reject("pattern mismatch" + at_event(k));
      }
      bindings[i] = std::move(*bound);
    }

    ++pcs[i];
    for (const ClaimSpec& claim : step.claims_after) {
      auto record = resolve_claim(claim, instance, bindings[i]);
      if (!record) continue;
      claims.push_back(*record);
      expected_claims.push_back(std::move(*record));
    }
  }

  // Final obligation: the claimed goal violation must hold after replay.
  const Goal& goal = spec.goals[trace.goal_index];
  auto honest = [&](const std::string& agent) {
    return agent != trace.dishonest;
  };

  if (goal.kind == Goal::Kind::Secrecy) {
    if (!trace.is_secrecy) {
      return VerifyResult::reject("witness kind does not match a secrecy goal");
    }
    bool witnessed = false;
    for (const ClaimRecord& c : claims) {
      if (c.kind != ClaimSpec::Kind::Secret ||
          c.goal_index != trace.goal_index) {
        continue;
      }
      bool all_honest = true;
      for (const std::string& p : c.parties) {
        if (!honest(p)) all_honest = false;
      }
      if (!all_honest) continue;
      if (trace.secret && c.values[0] != trace.secret) continue;
      if (kb.derivable(c.values[0])) witnessed = true;
    }
    if (!witnessed) {
      return VerifyResult::reject("claimed secrecy violation not witnessed");
    }
    if (trace.derivation) {
      auto replayed = replay_derivation(*trace.derivation, kb.analyzed());
      if (!replayed || *replayed != trace.secret) {
        return VerifyResult::reject("witness mismatch");
      }
    }
    return VerifyResult::accept();
  }

  if (trace.is_secrecy) {
    return VerifyResult::reject("witness kind does not match an agreement goal");
  }
  const bool injective = goal.kind == Goal::Kind::InjAgreement;
  std::map<std::string, size_t> available;
  std::map<std::string, size_t> ever_seen;
  for (const ClaimRecord& c : claims) {
    if (c.goal_index != trace.goal_index) continue;
    std::string values;
    for (const Term& v : c.values) values += v.repr() + ";";
    if (c.kind == ClaimSpec::Kind::Running) {
      std::string key = c.by_agent + "|" + c.toward_agent + "|" + values;
      ++available[key];
      ++ever_seen[key];
      continue;
    }
    if (c.kind != ClaimSpec::Kind::Commit) continue;
    if (!honest(c.toward_agent)) continue;
    std::string key = c.toward_agent + "|" + c.by_agent + "|" + values;
    bool violated;
    bool duplicate = false;
    if (injective) {
      auto avail = available.find(key);
      if (avail != available.end() && avail->second > 0) {
        --avail->second;
        violated = false;
      } else {
        violated = true;
        duplicate = ever_seen.count(key) > 0;
      }
    } else {
      violated = ever_seen.count(key) == 0;
    }
    if (!violated) continue;
    if (trace.commit && !(*trace.commit == c)) continue;
    if (trace.commit && trace.duplicate != duplicate) {
      return VerifyResult::reject("agreement witness flavor mismatch");
    }
    return VerifyResult::accept();
  }
  return VerifyResult::reject("claimed agreement violation not witnessed");
}

}  // namespace apv::check
