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

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_map>

#include "apv/check/instantiate.hpp"

namespace apv::check {

Decls runtime_declarations(const ProtocolSpec& spec,
                           const std::vector<std::string>& agents) {
  Decls decls = spec.declarations;
  for (const std::string& agent : agents) decls.emplace(agent, Sort::Agent);
  decls.emplace("NI1", Sort::Number);
  decls.emplace("KI1", Sort::SymmetricKey);
  return decls;
}

namespace {

uint64_t fnv1a(const std::string& data, uint64_t seed) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Violation {
  size_t goal_index = 0;
  bool secrecy = true;
  Term secret;
  ClaimRecord commit;
  bool duplicate = false;
};

struct InstState {
  size_t pc = 0;
  Bindings bindings;
};

struct SearchState {
  std::vector<InstState> insts;
  dy::KnowledgeBase kb;
  std::vector<ClaimRecord> claims;
  std::vector<std::vector<Term>> genuine;  // per action index, chronological
};

class Engine {
 public:
  Engine(const ProtocolSpec& spec, const SearchConfig& config,
         SearchStats& stats)
      : spec_(spec),
        config_(config),
        stats_(stats),
        decls_(runtime_declarations(spec, config.agents)),
        scripts_(project_roles(spec)) {}

  // Explores one session combination; returns a trace on violation, sets
  // `aborted` when a budget stops the exploration.
  std::optional<AttackTrace> explore(
      const std::vector<SessionAssignment>& sessions, bool& truncated,
      bool& aborted) {
    inst_ = instantiate(spec_, scripts_, sessions, config_.dishonest,
                        config_.agents, /*seed=*/0);
    sessions_ = &sessions;
    truncated_ = false;
    aborted_ = false;
    visited_.clear();
    derivable_cache_.clear();
    path_.clear();

    SearchState init;
    init.insts.resize(inst_.instances.size());
    init.kb = dy::KnowledgeBase::from_facts(inst_.intruder_facts);
    init.genuine.resize(inst_.action_count);

    std::optional<AttackTrace> found;
    if (remember(init)) {
      note_state(init);
      auto violation = check_goals(init);
      if (violation) {
        found = build_trace(init, *violation);
      } else {
        found = dfs(init, 0);
      }
    }
    truncated = truncated_;
    aborted = aborted_;
    return found;
  }

 private:
  // --- bookkeeping ---------------------------------------------------------

  std::string state_key(const SearchState& state) const {
    std::string key;
    for (const InstState& is : state.insts) {
      key += std::to_string(is.pc) + "{";
      for (const auto& [name, term] : is.bindings) {
        key += name + "=" + term.repr() + ";";
      }
      key += "}";
    }
    key += "|";
    std::vector<std::string> claims;
    claims.reserve(state.claims.size());
    for (const ClaimRecord& c : state.claims) claims.push_back(claim_key(c));
    std::sort(claims.begin(), claims.end());
    for (const std::string& c : claims) key += c + "&";
    key += "|";
    for (const Term& t : state.kb.analyzed()) key += t.repr() + ",";
    return key;
  }

  bool remember(const SearchState& state) {
    std::string key = state_key(state);
    auto digest = std::make_pair(fnv1a(key, 14695981039346656037ull),
                                 fnv1a(key, 88172645463325252ull));
    return visited_.insert(digest).second;
  }

  void note_state(const SearchState& state) {
    ++stats_.states;
    if (config_.collect_detail) {
      for (const Term& t : state.kb.analyzed()) {
        stats_.intruder_terms_union.insert(t);
      }
    }
    bool all_done = true;
    for (size_t i = 0; i < state.insts.size(); ++i) {
      if (state.insts[i].pc < inst_.instances[i].steps.size()) all_done = false;
    }
    if (all_done && !state.insts.empty()) stats_.reached_all_completed = true;
  }

  bool derivable(const dy::KnowledgeBase& kb, const Term& goal) {
    auto key = std::make_pair(kb.uid(), goal.repr());
    auto it = derivable_cache_.find(key);
    if (it != derivable_cache_.end()) return it->second;
    bool out = kb.derivable(goal);
    derivable_cache_.emplace(std::move(key), out);
    return out;
  }

  // --- goal checking -------------------------------------------------------

  bool goal_enabled(size_t gi) const {
    return !config_.goal_filter || config_.goal_filter->count(gi);
  }

  bool honest(const std::string& agent) const {
    return agent != config_.dishonest;
  }

  std::optional<Violation> check_goals(const SearchState& state) {
    for (size_t gi = 0; gi < spec_.goals.size(); ++gi) {
      if (!goal_enabled(gi)) continue;
      const Goal& goal = spec_.goals[gi];
      if (goal.kind == Goal::Kind::Secrecy) {
        for (const ClaimRecord& c : state.claims) {
          if (c.kind != ClaimSpec::Kind::Secret || c.goal_index != gi) continue;
          bool all_honest = true;
          for (const std::string& p : c.parties) {
            if (!honest(p)) all_honest = false;
          }
          if (!all_honest) continue;
          if (derivable(state.kb, c.values[0])) {
            Violation v;
            v.goal_index = gi;
            v.secrecy = true;
            v.secret = c.values[0];
            return v;
          }
        }
        continue;
      }

      // Agreement: walk claims in firing order; a commit needs a matching
      // running fired before it (injective: a matching running not yet
      // consumed by an earlier commit).
      const bool injective = goal.kind == Goal::Kind::InjAgreement;
      std::map<std::string, size_t> available;  // match key -> unconsumed
      std::map<std::string, size_t> ever_seen;
      for (const ClaimRecord& c : state.claims) {
        if (c.goal_index != gi) continue;
        std::string values;
        for (const Term& v : c.values) values += v.repr() + ";";
        if (c.kind == ClaimSpec::Kind::Running) {
          std::string key = c.by_agent + "|" + c.toward_agent + "|" + values;
          ++available[key];
          ++ever_seen[key];
          continue;
        }
        if (c.kind != ClaimSpec::Kind::Commit) continue;
        if (!honest(c.toward_agent)) continue;  // vacuous toward the intruder
        std::string key = c.toward_agent + "|" + c.by_agent + "|" + values;
        if (injective) {
          auto avail = available.find(key);
          if (avail != available.end() && avail->second > 0) {
            --avail->second;
            continue;
          }
          Violation v;
          v.goal_index = gi;
          v.secrecy = false;
          v.commit = c;
          v.duplicate = ever_seen.count(key) && ever_seen[key] > 0;
          return v;
        }
        if (!ever_seen.count(key)) {
          Violation v;
          v.goal_index = gi;
          v.secrecy = false;
          v.commit = c;
          v.duplicate = false;
          return v;
        }
      }
    }
    return std::nullopt;
  }

  // --- transition generation -----------------------------------------------

  // Applies a send or a completed receive candidate; fires the step's claims
  // and appends the per-transition events onto `path_`.
  SearchState apply_step(const SearchState& state, size_t inst_index,
                         const Term& ground,
                         const std::optional<Bindings>& new_bindings,
                         size_t& events_pushed) {
    const Instance& inst = inst_.instances[inst_index];
    const Step& step = inst.steps[state.insts[inst_index].pc];

    SearchState next = state;
    InstState& is = next.insts[inst_index];
    if (new_bindings) is.bindings = *new_bindings;
    ++is.pc;

    TraceEvent event;
    event.instance = inst.info.label;
    event.action_index = step.action_index;
    event.mode = step.mode;
    event.term = ground;

    if (step.dir == Step::Dir::Send) {
      event.kind = TraceEvent::Kind::Send;
      next.genuine[step.action_index].push_back(ground);
      const std::string& receiver_agent =
          (*sessions_)[inst.info.session].at(step.peer_role);
      if (mode_readable(step.mode) || receiver_agent == config_.dishonest) {
        next.kb = next.kb.add_fact(ground);
      }
    } else {
      event.kind = TraceEvent::Kind::Deliver;
      if (config_.collect_detail) stats_.delivered_terms.insert(ground);
    }
    path_.push_back(std::move(event));
    events_pushed = 1;

    for (const ClaimSpec& claim : step.claims_after) {
      auto record = resolve_claim(claim, inst, is.bindings);
      if (!record) continue;
      next.claims.push_back(*record);
      TraceEvent claim_event;
      claim_event.kind = TraceEvent::Kind::Claim;
      claim_event.instance = inst.info.label;
      claim_event.action_index = step.action_index;
      claim_event.mode = step.mode;
      claim_event.claim = std::move(*record);
      path_.push_back(std::move(claim_event));
      ++events_pushed;
    }
    return next;
  }

  // Checks that every receive binding respects the variable's declared sort.
  bool bindings_well_sorted(const Bindings& bindings) {
    for (const auto& [name, term] : bindings) {
      auto declared = lookup_sort(decls_, name);
      if (!declared || *declared == Sort::Untyped ||
          *declared == Sort::Function) {
        continue;
      }
      try {
        if (term_sort(term, decls_) != *declared) return false;
      } catch (const UndeclaredIdentifierError&) {
        return false;
      }
    }
    return true;
  }

  // Candidate deliveries for a receive: genuine sends of the same action
  // (any channel; the network can always forward the real message, replays
  // permitted), plus, on injectable modes, any intruder-derivable instance
  // of the pattern.
  std::map<Term, Bindings> receive_candidates(const SearchState& state,
                                              size_t inst_index) {
    const Instance& inst = inst_.instances[inst_index];
    const InstState& is = state.insts[inst_index];
    const Step& step = inst.steps[is.pc];
    const Term pattern = substitute(step.payload, is.bindings);

    std::map<Term, Bindings> candidates;
    auto admit = [&](const Term& ground, const Bindings& bound) {
      if (!bindings_well_sorted(bound)) return;
      candidates.emplace(ground, bound);
    };

    for (const Term& sent : state.genuine[step.action_index]) {
      if (auto bound = match(pattern, sent, is.bindings)) admit(sent, *bound);
    }

    if (mode_injectable(step.mode)) {
      // Whole analyzed terms that structurally match the pattern (replay and
      // forwarding of material the intruder holds).
      for (const Term& known : state.kb.analyzed()) {
        if (auto bound = match(pattern, known, is.bindings)) {
          admit(known, *bound);
        }
      }
      // Pattern-directed composition: enumerate sort-respecting variable
      // instantiations, then let derivability decide.
      std::vector<std::string> vars;
      for (const std::string& v : variables_of(pattern)) vars.push_back(v);
      std::vector<std::vector<Term>> domains;
      for (const std::string& v : vars) {
        domains.push_back(variable_domain(state, v));
      }
      std::vector<size_t> pick(vars.size(), 0);
      bool more = true;
      if (!vars.empty()) {
        while (more) {
          Bindings bound = is.bindings;
          for (size_t i = 0; i < vars.size(); ++i) {
            bound[vars[i]] = domains[i].empty() ? Term() : domains[i][pick[i]];
          }
          bool complete = true;
          for (size_t i = 0; i < vars.size(); ++i) {
            if (domains[i].empty()) complete = false;
          }
          if (complete) {
            Term ground = substitute(pattern, bound);
            if (is_ground(ground) && !candidates.count(ground) &&
                derivable(state.kb, ground)) {
              admit(ground, bound);
            }
          }
          // advance odometer
          more = false;
          for (size_t i = vars.size(); i-- > 0;) {
            if (domains[i].empty()) continue;
            if (++pick[i] < domains[i].size()) {
              more = true;
              break;
            }
            pick[i] = 0;
          }
        }
      } else {
        // Fully ground pattern: a single derivability check.
        if (is_ground(pattern) && !candidates.count(pattern) &&
            derivable(state.kb, pattern)) {
          admit(pattern, is.bindings);
        }
      }
    }
    return candidates;
  }

  std::vector<Term> variable_domain(const SearchState& state,
                                    const std::string& var) {
    auto declared = lookup_sort(decls_, var);
    std::vector<Term> domain;
    if (declared == Sort::Agent) {
      for (const std::string& agent : config_.agents) {
        domain.push_back(Term::atom(agent));
      }
      return domain;
    }
    for (const Term& t : state.kb.analyzed()) {
      if (!declared || *declared == Sort::Untyped) {
        domain.push_back(t);
        continue;
      }
      if (t.kind() != TermKind::Atom && t.kind() != TermKind::FunApp) continue;
      try {
        if (term_sort(t, decls_) == *declared) domain.push_back(t);
      } catch (const UndeclaredIdentifierError&) {
      }
    }
    return domain;
  }

  // --- exploration ---------------------------------------------------------

  std::optional<AttackTrace> dfs(const SearchState& state, int depth) {
    if (aborted_) return std::nullopt;
    stats_.max_depth_reached = std::max(stats_.max_depth_reached, depth);
    if (depth >= config_.max_depth) {
      // Only a real pending transition makes the cut lossy.
      if (has_transition(state)) truncated_ = true;
      return std::nullopt;
    }

    for (size_t i = 0; i < inst_.instances.size(); ++i) {
      const Instance& inst = inst_.instances[i];
      const InstState& is = state.insts[i];
      if (is.pc >= inst.steps.size()) continue;
      const Step& step = inst.steps[is.pc];

      if (step.dir == Step::Dir::Send) {
        Term ground = substitute(step.payload, is.bindings);
        if (!is_ground(ground)) {
          throw std::logic_error(
              "unbound variable in send payload; run executability_check");
        }
        auto found = expand(state, i, ground, std::nullopt, depth);
        if (found || aborted_) return found;
        continue;
      }

      for (const auto& [ground, bound] : receive_candidates(state, i)) {
        auto found = expand(state, i, ground, bound, depth);
        if (found || aborted_) return found;
      }
    }
    return std::nullopt;
  }

  std::optional<AttackTrace> expand(const SearchState& state, size_t inst_index,
                                    const Term& ground,
                                    const std::optional<Bindings>& bound,
                                    int depth) {
    ++stats_.transitions;
    size_t pushed = 0;
    SearchState next = apply_step(state, inst_index, ground, bound, pushed);
    std::optional<AttackTrace> found;
    if (remember(next)) {
      if (stats_.states >= config_.max_states) {
        aborted_ = true;
      } else {
        note_state(next);
        if (auto violation = check_goals(next)) {
          found = build_trace(next, *violation);
        } else {
          found = dfs(next, depth + 1);
        }
      }
    }
    if (!found) path_.resize(path_.size() - pushed);
    return found;
  }

  bool has_transition(const SearchState& state) {
    for (size_t i = 0; i < inst_.instances.size(); ++i) {
      const InstState& is = state.insts[i];
      if (is.pc >= inst_.instances[i].steps.size()) continue;
      if (inst_.instances[i].steps[is.pc].dir == Step::Dir::Send) return true;
      if (!receive_candidates(state, i).empty()) return true;
    }
    return false;
  }

  AttackTrace build_trace(const SearchState& state, const Violation& violation) {
    AttackTrace trace;
    trace.protocol = spec_.name;
    trace.dishonest = config_.dishonest;
    trace.goal_index = violation.goal_index;
    trace.goal = spec_.goals[violation.goal_index];
    trace.sessions = *sessions_;
    for (const Instance& inst : inst_.instances) {
      trace.instances.push_back(inst.info);
    }
    trace.events = path_;
    trace.is_secrecy = violation.secrecy;
    if (violation.secrecy) {
      trace.secret = violation.secret;
      trace.derivation = state.kb.derive(violation.secret);
    } else {
      trace.commit = violation.commit;
      trace.duplicate = violation.duplicate;
    }
    return trace;
  }

  const ProtocolSpec& spec_;
  const SearchConfig& config_;
  SearchStats& stats_;
  Decls decls_;
  std::map<std::string, RoleScript> scripts_;

  Instantiation inst_;
  const std::vector<SessionAssignment>* sessions_ = nullptr;
  std::set<std::pair<uint64_t, uint64_t>> visited_;
  std::map<std::pair<uint64_t, std::string>, bool> derivable_cache_;
  std::vector<TraceEvent> path_;
  bool truncated_ = false;
  bool aborted_ = false;
};

// All injective role->agent assignments, in pool order per role.
std::vector<SessionAssignment> enumerate_assignments(
    const std::vector<std::string>& roles,
    const std::vector<std::string>& pool) {
  std::vector<SessionAssignment> out;
  SessionAssignment current;
  std::set<std::string> used;
  auto rec = [&](auto&& self, size_t role_index) -> void {
    if (role_index == roles.size()) {
      out.push_back(current);
      return;
    }
    for (const std::string& agent : pool) {
      if (used.count(agent)) continue;
      used.insert(agent);
      current[roles[role_index]] = agent;
      self(self, role_index + 1);
      current.erase(roles[role_index]);
      used.erase(agent);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

SearchOutcome search(const ProtocolSpec& spec, const SearchConfig& config) {
  if (config.max_sessions < 1) {
    throw std::invalid_argument("max_sessions must be at least 1");
  }
  if (config.max_sessions > 3 && !config.override_session_guard) {
    throw std::invalid_argument(
        "max_sessions above 3 needs the session guard override");
  }
  if (config.agents.empty()) {
    throw std::invalid_argument("agent pool is empty");
  }

  SearchOutcome outcome;
  Engine engine(spec, config, outcome.stats);

  std::vector<std::vector<SessionAssignment>> combos;
  if (config.explicit_sessions) {
    combos.push_back(*config.explicit_sessions);
  } else {
    const std::vector<SessionAssignment> assignments =
        enumerate_assignments(spec.action_roles(), config.agents);
    // Session order within a combination is irrelevant up to renaming, so
    // only non-decreasing index tuples are explored.
    for (int k = 1; k <= config.max_sessions; ++k) {
      std::vector<size_t> pick(static_cast<size_t>(k), 0);
      bool more = !assignments.empty();
      while (more) {
        std::vector<SessionAssignment> combo;
        for (size_t idx : pick) combo.push_back(assignments[idx]);
        combos.push_back(std::move(combo));
        more = false;
        for (size_t i = pick.size(); i-- > 0;) {
          if (pick[i] + 1 < assignments.size()) {
            ++pick[i];
            for (size_t j = i; j < pick.size(); ++j) pick[j] = pick[i];
            more = true;
            break;
          }
        }
      }
    }
  }

  bool truncated_any = false;
  for (const auto& combo : combos) {
    bool truncated = false;
    bool aborted = false;
    auto trace = engine.explore(combo, truncated, aborted);
    if (trace) {
      outcome.kind = SearchOutcome::Kind::Attack;
      outcome.trace = std::move(trace);
      outcome.message = "attack found";
      return outcome;
    }
    truncated_any = truncated_any || truncated;
    if (aborted) {
      outcome.kind = SearchOutcome::Kind::BudgetExceeded;
      outcome.message =
          "state budget exhausted after " + std::to_string(outcome.stats.states) +
          " states";
      return outcome;
    }
  }

  if (truncated_any) {
    outcome.kind = SearchOutcome::Kind::BudgetExceeded;
    outcome.message = "depth bound " + std::to_string(config.max_depth) +
                      " hit before exhaustion";
    return outcome;
  }
  outcome.kind = SearchOutcome::Kind::SafeAtBound;
  outcome.message = "no goal violated within the explored bound";
  return outcome;
}

}  // namespace apv::check
