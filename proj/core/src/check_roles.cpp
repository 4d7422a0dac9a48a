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

#include "apv/check/roles.hpp"

#include "apv/anb/printer.hpp"
#include "apv/dy/knowledge.hpp"

namespace apv::check {

namespace {

// Rewrites atoms whose names are in `vars` into variable atoms.
Term mark_variables(const Term& t, const std::set<std::string>& vars) {
  switch (t.kind()) {
    case TermKind::Atom:
      if (!t.is_variable() && vars.count(t.name())) {
        return Term::atom(t.name(), /*variable=*/true);
      }
      return t;
    case TermKind::Pair:
      return Term::pair(mark_variables(t.args()[0], vars),
                        mark_variables(t.args()[1], vars));
    case TermKind::SymEnc:
      return Term::sym_enc(mark_variables(t.args()[0], vars),
                           mark_variables(t.args()[1], vars));
    case TermKind::AsymEnc:
      return Term::asym_enc(mark_variables(t.args()[0], vars),
                            mark_variables(t.args()[1], vars));
    case TermKind::Sign:
      return Term::sign(mark_variables(t.args()[0], vars),
                        mark_variables(t.args()[1], vars));
    case TermKind::FunApp: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(mark_variables(a, vars));
      return Term::fun_app(t.name(), std::move(args), t.one_way());
    }
    case TermKind::Inv:
      return Term::inv(mark_variables(t.args()[0], vars));
  }
  return t;
}

// Turns variable atoms back into plain constants (for the symbolic
// executability knowledge base, where a bound variable stands for whatever
// ground value the run supplies).
Term unmark_variables(const Term& t) {
  switch (t.kind()) {
    case TermKind::Atom:
      return t.is_variable() ? Term::atom(t.name()) : t;
    case TermKind::Pair:
      return Term::pair(unmark_variables(t.args()[0]),
                        unmark_variables(t.args()[1]));
    case TermKind::SymEnc:
      return Term::sym_enc(unmark_variables(t.args()[0]),
                           unmark_variables(t.args()[1]));
    case TermKind::AsymEnc:
      return Term::asym_enc(unmark_variables(t.args()[0]),
                            unmark_variables(t.args()[1]));
    case TermKind::Sign:
      return Term::sign(unmark_variables(t.args()[0]),
                        unmark_variables(t.args()[1]));
    case TermKind::FunApp: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(unmark_variables(a));
      return Term::fun_app(t.name(), std::move(args), t.one_way());
    }
    case TermKind::Inv:
      return Term::inv(unmark_variables(t.args()[0]));
  }
  return t;
}

struct RoleWalk {
  std::set<std::string> known;  // identifiers the role can resolve
  std::set<std::string> vars;   // identifiers bound by receives
};

}  // namespace

std::map<std::string, RoleScript> project_roles(const ProtocolSpec& spec) {
  std::map<std::string, RoleScript> scripts;
  std::map<std::string, RoleWalk> walks;

  for (const std::string& role : spec.action_roles()) {
    RoleScript script;
    script.role = role;
    auto it = spec.knowledge.find(role);
    if (it != spec.knowledge.end()) script.initial_knowledge = it->second;
    RoleWalk walk;
    for (const Term& k : script.initial_knowledge) {
      for (const std::string& name : atom_names_of(k)) walk.known.insert(name);
    }
    scripts.emplace(role, std::move(script));
    walks.emplace(role, std::move(walk));
  }

  for (size_t idx = 0; idx < spec.actions.size(); ++idx) {
    const Action& action = spec.actions[idx];
    const std::set<std::string> payload_atoms = atom_names_of(action.payload);

    {  // sender side
      RoleScript& script = scripts.at(action.sender);
      RoleWalk& walk = walks.at(action.sender);
      Step step;
      step.dir = Step::Dir::Send;
      step.action_index = idx;
      step.peer_role = action.receiver;
      step.mode = action.mode;
      for (const std::string& name : payload_atoms) {
        if (walk.known.count(name)) continue;
        auto sort = lookup_sort(spec.declarations, name);
        if (sort == Sort::Number || sort == Sort::SymmetricKey) {
          step.fresh.push_back(name);
          script.fresh_atoms.insert(name);
          walk.known.insert(name);
        }
        // Other unknown identifiers stay as constants; the executability
        // check reports them.
      }
      step.payload = mark_variables(action.payload, walk.vars);
      script.steps.push_back(std::move(step));
    }

    {  // receiver side
      RoleScript& script = scripts.at(action.receiver);
      RoleWalk& walk = walks.at(action.receiver);
      Step step;
      step.dir = Step::Dir::Receive;
      step.action_index = idx;
      step.peer_role = action.sender;
      step.mode = action.mode;
      for (const std::string& name : payload_atoms) {
        if (!walk.known.count(name)) walk.vars.insert(name);
      }
      for (const std::string& name : payload_atoms) walk.known.insert(name);
      step.payload = mark_variables(action.payload, walk.vars);
      script.steps.push_back(std::move(step));
    }
  }

  // Claim placement. A claim is resolvable only when the role has learned
  // every identifier the claim mentions by the time it fires.
  auto resolvable = [&](const std::string& role,
                        const std::set<std::string>& names) {
    const RoleWalk& walk = walks.at(role);
    for (const std::string& n : names) {
      if (!walk.known.count(n)) return false;
    }
    return true;
  };

  for (size_t gi = 0; gi < spec.goals.size(); ++gi) {
    const Goal& goal = spec.goals[gi];
    if (goal.kind == Goal::Kind::Secrecy) {
      for (const std::string& party : goal.parties) {
        auto sit = scripts.find(party);
        if (sit == scripts.end() || sit->second.steps.empty()) continue;
        RoleScript& script = sit->second;
        ClaimSpec claim;
        claim.kind = ClaimSpec::Kind::Secret;
        claim.goal_index = gi;
        claim.secret = mark_variables(goal.term, walks.at(party).vars);
        claim.parties = goal.parties;
        std::set<std::string> mentioned = atom_names_of(goal.term);
        for (const std::string& p : goal.parties) mentioned.insert(p);
        claim.resolvable = resolvable(party, mentioned);
        script.steps.back().claims_after.push_back(std::move(claim));
      }
      continue;
    }

    // Agreement: Running fires at the peer's last send, Commit at the
    // claimer's last step.
    auto peer_it = scripts.find(goal.peer);
    if (peer_it != scripts.end()) {
      RoleScript& peer_script = peer_it->second;
      for (size_t si = peer_script.steps.size(); si-- > 0;) {
        if (peer_script.steps[si].dir != Step::Dir::Send) continue;
        ClaimSpec claim;
        claim.kind = ClaimSpec::Kind::Running;
        claim.goal_index = gi;
        claim.peer_role = goal.claimer;
        std::set<std::string> mentioned = {goal.claimer};
        for (const Term& t : goal.on) {
          claim.on.push_back(mark_variables(t, walks.at(goal.peer).vars));
          for (const std::string& n : atom_names_of(t)) mentioned.insert(n);
        }
        claim.resolvable = resolvable(goal.peer, mentioned);
        peer_script.steps[si].claims_after.push_back(std::move(claim));
        break;
      }
    }
    auto claimer_it = scripts.find(goal.claimer);
    if (claimer_it != scripts.end() && !claimer_it->second.steps.empty()) {
      RoleScript& claimer_script = claimer_it->second;
      ClaimSpec claim;
      claim.kind = ClaimSpec::Kind::Commit;
      claim.goal_index = gi;
      claim.peer_role = goal.peer;
      std::set<std::string> mentioned = {goal.peer};
      for (const Term& t : goal.on) {
        claim.on.push_back(mark_variables(t, walks.at(goal.claimer).vars));
        for (const std::string& n : atom_names_of(t)) mentioned.insert(n);
      }
      claim.resolvable = resolvable(goal.claimer, mentioned);
      claimer_script.steps.back().claims_after.push_back(std::move(claim));
    }
  }

  return scripts;
}

std::vector<Diagnostic> executability_check(const ProtocolSpec& spec) {
  std::vector<Diagnostic> out;
  const auto scripts = project_roles(spec);

  for (const auto& [role, script] : scripts) {
    std::set<Term> facts;
    for (const Term& k : script.initial_knowledge) facts.insert(k);
    dy::KnowledgeBase kb = dy::KnowledgeBase::from_facts(std::move(facts));

    for (size_t si = 0; si < script.steps.size(); ++si) {
      const Step& step = script.steps[si];
      if (step.dir == Step::Dir::Receive) {
        kb = kb.add_fact(unmark_variables(step.payload));
        continue;
      }
      for (const std::string& fresh : step.fresh) {
        kb = kb.add_fact(Term::atom(fresh));
      }
      Term payload = unmark_variables(step.payload);
      if (kb.derivable(payload)) continue;

      // Deepest underivable subterm with derivable children, for the message.
      Term missing = payload;
      bool descended = true;
      while (descended) {
        descended = false;
        for (const Term& arg : missing.args()) {
          if (!kb.derivable(arg)) {
            missing = arg;
            descended = true;
            break;
          }
        }
      }
      out.push_back(Diagnostic::error(
          SourceSpan{},
          "role " + role + " cannot construct message " +
              std::to_string(step.action_index + 1) + ": missing " +
              anb::print_term(missing),
          "not-executable"));
    }
  }
  return out;
}

}  // namespace apv::check
