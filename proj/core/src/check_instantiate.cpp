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

#include "apv/check/instantiate.hpp"

namespace apv::check {

std::string instance_label(size_t session, const std::string& role) {
  return "s" + std::to_string(session + 1) + ":" + role;
}

std::string fresh_atom_name(const std::string& base, size_t session,
                            unsigned seed) {
  std::string name = base + "#s" + std::to_string(session + 1);
  if (seed != 0) name += "~" + std::to_string(seed);
  return name;
}

namespace {

// Environment of one (session, role) instance: known role atoms to agents,
// fresh atoms to session-unique names.
Bindings instance_env(const RoleScript& script,
                      const SessionAssignment& assignment, size_t session,
                      unsigned seed,
                      std::map<std::string, std::string>* known_role_agents) {
  std::set<std::string> known_initial;
  for (const Term& k : script.initial_knowledge) {
    for (const std::string& n : atom_names_of(k)) known_initial.insert(n);
  }
  Bindings env;
  for (const auto& [r, a] : assignment) {
    if (known_initial.count(r)) {
      env[r] = Term::atom(a);
      if (known_role_agents) (*known_role_agents)[r] = a;
    }
  }
  for (const std::string& fresh : script.fresh_atoms) {
    env[fresh] = Term::atom(fresh_atom_name(fresh, session, seed));
  }
  return env;
}

}  // namespace

Instance make_instance(const RoleScript& script, size_t session,
                       const SessionAssignment& assignment,
                       const std::string& agent, unsigned seed) {
  Instance inst;
  inst.info.label = instance_label(session, script.role);
  inst.info.session = session;
  inst.info.role = script.role;
  inst.info.agent = agent;
  Bindings env = instance_env(script, assignment, session, seed,
                              &inst.known_role_agents);
  for (const Term& k : script.initial_knowledge) {
    inst.knowledge.push_back(rename_atoms(k, env));
  }
  for (const Step& step : script.steps) {
    Step ground = step;
    ground.payload = rename_atoms(step.payload, env);
    for (ClaimSpec& claim : ground.claims_after) {
      if (claim.secret) claim.secret = rename_atoms(claim.secret, env);
      for (Term& t : claim.on) t = rename_atoms(t, env);
    }
    inst.steps.push_back(std::move(ground));
  }
  return inst;
}

Instantiation instantiate(const ProtocolSpec& spec,
                          const std::map<std::string, RoleScript>& scripts,
                          const std::vector<SessionAssignment>& sessions,
                          const std::string& dishonest,
                          const std::vector<std::string>& pool,
                          unsigned seed) {
  Instantiation out;
  out.action_count = spec.actions.size();

  for (const std::string& agent : pool) {
    out.intruder_facts.insert(Term::atom(agent));
  }
  // Intruder nonce/key supply: material of its own to inject.
  out.intruder_facts.insert(Term::atom("NI1"));
  out.intruder_facts.insert(Term::atom("KI1"));

  for (size_t s = 0; s < sessions.size(); ++s) {
    const SessionAssignment& assignment = sessions[s];
    for (const auto& [role, script] : scripts) {
      auto agent_it = assignment.find(role);
      if (agent_it == assignment.end()) continue;
      const std::string& agent = agent_it->second;

      if (agent == dishonest) {
        Bindings env = instance_env(script, assignment, s, seed, nullptr);
        for (const Term& k : script.initial_knowledge) {
          out.intruder_facts.insert(rename_atoms(k, env));
        }
        for (const std::string& fresh : script.fresh_atoms) {
          out.intruder_facts.insert(env.at(fresh));
        }
        continue;
      }
      out.instances.push_back(make_instance(script, s, assignment, agent, seed));
    }
  }
  return out;
}

namespace {

std::optional<std::string> resolve_role_agent(const std::string& role,
                                              const Instance& instance,
                                              const Bindings& bindings) {
  auto bound = bindings.find(role);
  if (bound != bindings.end()) {
    if (bound->second.kind() != TermKind::Atom) return std::nullopt;
    return bound->second.name();
  }
  auto known = instance.known_role_agents.find(role);
  if (known != instance.known_role_agents.end()) return known->second;
  return std::nullopt;
}

}  // namespace

std::optional<ClaimRecord> resolve_claim(const ClaimSpec& claim,
                                         const Instance& instance,
                                         const Bindings& bindings) {
  if (!claim.resolvable) return std::nullopt;

  ClaimRecord record;
  record.kind = claim.kind;
  record.goal_index = claim.goal_index;
  record.instance = instance.info.label;
  record.by_agent = instance.info.agent;

  if (claim.kind == ClaimSpec::Kind::Secret) {
    Term value = substitute(claim.secret, bindings);
    if (!is_ground(value)) return std::nullopt;
    record.values.push_back(std::move(value));
    for (const std::string& party : claim.parties) {
      auto agent = resolve_role_agent(party, instance, bindings);
      if (!agent) return std::nullopt;
      record.parties.push_back(std::move(*agent));
    }
    return record;
  }

  auto toward = resolve_role_agent(claim.peer_role, instance, bindings);
  if (!toward) return std::nullopt;
  record.toward_agent = std::move(*toward);
  for (const Term& t : claim.on) {
    Term value = substitute(t, bindings);
    if (!is_ground(value)) return std::nullopt;
    record.values.push_back(std::move(value));
  }
  return record;
}

std::string claim_key(const ClaimRecord& claim) {
  std::string key;
  switch (claim.kind) {
    case ClaimSpec::Kind::Running: key = "R"; break;
    case ClaimSpec::Kind::Commit: key = "C"; break;
    case ClaimSpec::Kind::Secret: key = "S"; break;
  }
  key += std::to_string(claim.goal_index) + "|" + claim.instance + "|" +
         claim.by_agent + "|" + claim.toward_agent + "|";
  for (const Term& v : claim.values) key += v.repr() + ";";
  key += "|";
  for (const std::string& p : claim.parties) key += p + ";";
  return key;
}

}  // namespace apv::check
