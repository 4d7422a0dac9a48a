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

#include "apv/sim/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "apv/anb/printer.hpp"

namespace apv::sim {

ParticipantProcess compile_participant(const check::RoleScript& script,
                                       size_t session,
                                       const check::SessionAssignment& binding,
                                       unsigned seed) {
  ParticipantProcess process;
  auto agent_it = binding.find(script.role);
  const std::string agent =
      agent_it == binding.end() ? script.role : agent_it->second;
  process.instance =
      check::make_instance(script, session, binding, agent, seed);
  process.status = process.instance.steps.empty()
                       ? ParticipantProcess::Status::Completed
                       : ParticipantProcess::Status::Ready;
  return process;
}

SecurityMonitor make_monitor(const ProtocolSpec& spec,
                             const std::set<Term>& intruder_facts,
                             std::string dishonest) {
  SecurityMonitor monitor;
  monitor.spec = &spec;
  monitor.dishonest = std::move(dishonest);
  monitor.mirror = dy::KnowledgeBase::from_facts(intruder_facts);
  return monitor;
}

std::vector<Violation> monitor_check(SecurityMonitor& monitor, size_t step) {
  std::vector<Violation> delta;
  auto already = [&](const Violation& v) {
    for (const Violation& seen : monitor.violations) {
      if (seen.kind == v.kind && seen.goal_index == v.goal_index &&
          seen.term == v.term && seen.commit == v.commit) {
        return true;
      }
    }
    return false;
  };
  auto honest = [&](const std::string& agent) {
    return agent != monitor.dishonest;
  };

  const std::vector<Goal>& goals = monitor.spec->goals;
  for (size_t gi = 0; gi < goals.size(); ++gi) {
    const Goal& goal = goals[gi];
    if (goal.kind == Goal::Kind::Secrecy) {
      for (const check::ClaimRecord& c : monitor.claims) {
        if (c.kind != check::ClaimSpec::Kind::Secret || c.goal_index != gi) {
          continue;
        }
        bool all_honest = true;
        for (const std::string& p : c.parties) {
          if (!honest(p)) all_honest = false;
        }
        if (!all_honest) continue;
        if (!monitor.mirror.derivable(c.values[0])) continue;
        Violation v;
        v.kind = Violation::Kind::SecretLearned;
        v.goal_index = gi;
        v.term = c.values[0];
        v.step = step;
        if (!already(v)) delta.push_back(v);
      }
      continue;
    }

    const bool injective = goal.kind == Goal::Kind::InjAgreement;
    std::map<std::string, size_t> available;
    std::map<std::string, size_t> ever_seen;
    for (const check::ClaimRecord& c : monitor.claims) {
      if (c.goal_index != gi) continue;
      std::string values;
      for (const Term& t : c.values) values += t.repr() + ";";
      if (c.kind == check::ClaimSpec::Kind::Running) {
        std::string key = c.by_agent + "|" + c.toward_agent + "|" + values;
        ++available[key];
        ++ever_seen[key];
        continue;
      }
      if (c.kind != check::ClaimSpec::Kind::Commit) continue;
      if (!honest(c.toward_agent)) continue;
      std::string key = c.toward_agent + "|" + c.by_agent + "|" + values;
      Violation v;
      v.goal_index = gi;
      v.commit = c;
      v.step = step;
      if (injective) {
        auto avail = available.find(key);
        if (avail != available.end() && avail->second > 0) {
          --avail->second;
          continue;
        }
        v.kind = ever_seen.count(key) ? Violation::Kind::DuplicateCommit
                                      : Violation::Kind::CommitWithoutRunning;
      } else {
        if (ever_seen.count(key)) continue;
        v.kind = Violation::Kind::CommitWithoutRunning;
      }
      if (!already(v)) delta.push_back(v);
    }
  }

  for (const Violation& v : delta) monitor.violations.push_back(v);
  return delta;
}

const char* to_string(SimReport::Reason reason) {
  switch (reason) {
    case SimReport::Reason::None: return "none";
    case SimReport::Reason::ScriptStalled: return "script-stalled";
    case SimReport::Reason::RunCompletedClean: return "run-completed-clean";
    case SimReport::Reason::StepBudgetExhausted: return "step-budget-exhausted";
  }
  return "?";
}

namespace {

struct Envelope {
  std::string from;
  size_t action_index = 0;
  ChannelMode mode = ChannelMode::Plain;
  Term term;
  bool readable = true;
  bool consumed = false;
};

// Mode-aware routing state: every send leaves an envelope in the intruder
// mailbox (opaque when the channel is not readable); pending deliveries come
// from intruder Send directives or, on a passive hub, from forwarding each
// genuine send to its addressed instance.
struct Hub {
  bool passive = true;
  std::vector<std::deque<Envelope>> pending;  // per process, arrival order
  std::vector<Envelope> mailbox;
  std::vector<std::vector<Term>> genuine;  // per action index
};

class Runner {
 public:
  Runner(const ProtocolSpec& spec, std::vector<ParticipantProcess> processes,
         const testgen::IntruderScript& script,
         const std::vector<check::SessionAssignment>& sessions,
         SecurityMonitor monitor, size_t max_steps)
      : spec_(spec),
        processes_(std::move(processes)),
        script_(script),
        sessions_(sessions),
        monitor_(std::move(monitor)),
        max_steps_(max_steps) {
    hub_.passive = script_.directives.empty();
    hub_.pending.resize(processes_.size());
    hub_.genuine.resize(spec_.actions.size());
    for (size_t i = 0; i < processes_.size(); ++i) {
      index_of_[processes_[i].instance.info.label] = i;
    }
    for (const testgen::IntruderDirective& d : script_.directives) {
      if (d.kind == testgen::IntruderDirective::Kind::Record) continue;
      if (!index_of_.count(d.instance)) {
        throw ConfigError("intruder script references unknown instance '" +
                          d.instance + "'");
      }
    }
  }

  SimReport run() {
    while (true) {
      if (!monitor_.violations.empty()) break;
      if (steps_ >= max_steps_) {
        report_.reason = SimReport::Reason::StepBudgetExhausted;
        break;
      }
      if (step_intruder()) continue;
      if (step_process()) continue;
      bool everything_done = script_pc_ >= script_.directives.size();
      for (const ParticipantProcess& p : processes_) {
        if (p.pc < p.instance.steps.size()) everything_done = false;
      }
      report_.reason = everything_done ? SimReport::Reason::RunCompletedClean
                                       : SimReport::Reason::ScriptStalled;
      break;
    }

    report_.steps_executed = steps_;
    report_.all_violations = monitor_.violations;
    if (!monitor_.violations.empty()) {
      report_.verdict = SimReport::Verdict::ViolationReproduced;
      report_.reason = SimReport::Reason::None;
      report_.violation = monitor_.violations.front();
    }
    return std::move(report_);
  }

 private:
  void log(const std::string& actor, const std::string& kind,
           const std::string& detail) {
    report_.log.push_back(std::to_string(steps_) + "|" + actor + "|" + kind +
                          "|" + detail);
  }

  void log_claims(const std::vector<check::ClaimRecord>& claims) {
    for (const check::ClaimRecord& c : claims) {
      const char* kind = c.kind == check::ClaimSpec::Kind::Running  ? "running"
                         : c.kind == check::ClaimSpec::Kind::Commit ? "commit"
                                                                    : "secret-claim";
      std::string detail;
      for (const Term& v : c.values) {
        if (!detail.empty()) detail += ",";
        detail += anb::print_term_item(v);
      }
      log(c.instance, kind, detail);
    }
  }

  void run_monitor() {
    for (const Violation& v : monitor_check(monitor_, steps_)) {
      const char* kind = v.kind == Violation::Kind::SecretLearned
                             ? "secret-learned"
                         : v.kind == Violation::Kind::DuplicateCommit
                             ? "duplicate-commit"
                             : "commit-without-running";
      log("monitor", kind,
          v.kind == Violation::Kind::SecretLearned
              ? anb::print_term(v.term)
              : v.commit.by_agent + "->" + v.commit.toward_agent);
    }
  }

  bool step_intruder() {
    if (script_pc_ >= script_.directives.size()) return false;
    const testgen::IntruderDirective& d = script_.directives[script_pc_];
    switch (d.kind) {
      case testgen::IntruderDirective::Kind::Record: {
        ++steps_;
        ++script_pc_;
        log("intruder", "record", d.binding + "=" + anb::print_term(d.term));
        run_monitor();
        return true;
      }
      case testgen::IntruderDirective::Kind::WaitFor: {
        for (Envelope& env : hub_.mailbox) {
          if (env.consumed || env.from != d.instance) continue;
          // Opaque envelopes match on origin only; the intruder cannot
          // inspect what it cannot read.
          if (env.readable && env.term != d.term) continue;
          env.consumed = true;
          ++steps_;
          ++script_pc_;
          log("intruder", "waitfor", anb::print_term(d.term));
          run_monitor();
          return true;
        }
        return false;
      }
      case testgen::IntruderDirective::Kind::Send: {
        size_t target = index_of_.at(d.instance);
        Envelope env;
        env.from = "intruder";
        env.term = d.term;
        hub_.pending[target].push_back(std::move(env));
        ++steps_;
        ++script_pc_;
        log("intruder", "inject", anb::print_term(d.term));
        run_monitor();
        return true;
      }
    }
    return false;
  }

  const Decls& decls() {
    if (decls_.empty()) {
      std::set<std::string> agents;
      for (const check::SessionAssignment& s : sessions_) {
        for (const auto& [role, agent] : s) agents.insert(agent);
      }
      agents.insert(monitor_.dishonest);
      decls_ = check::runtime_declarations(
          spec_, std::vector<std::string>(agents.begin(), agents.end()));
    }
    return decls_;
  }

  // Exact pattern unification with well-sorted bindings; non-injectable
  // modes additionally require the term to be a genuine send of the same
  // action (the hub invariant).
  std::optional<Bindings> deliverable(const ParticipantProcess& process,
                                      const check::Step& step,
                                      const Envelope& env) {
    if (env.consumed) return std::nullopt;
    if (!mode_injectable(step.mode)) {
      bool genuine = false;
      for (const Term& sent : hub_.genuine[step.action_index]) {
        if (sent == env.term) genuine = true;
      }
      if (!genuine) return std::nullopt;
    }
    Term pattern = substitute(step.payload, process.bindings);
    auto bound = match(pattern, env.term, process.bindings);
    if (!bound) return std::nullopt;
    for (const auto& [name, term] : *bound) {
      auto declared = lookup_sort(decls(), name);
      if (!declared || *declared == Sort::Untyped ||
          *declared == Sort::Function) {
        continue;
      }
      try {
        if (term_sort(term, decls()) != *declared) return std::nullopt;
      } catch (const UndeclaredIdentifierError&) {
        return std::nullopt;
      }
    }
    return bound;
  }

  bool step_process() {
    for (size_t i = 0; i < processes_.size(); ++i) {
      ParticipantProcess& process = processes_[i];
      if (process.status == ParticipantProcess::Status::Stuck) continue;
      if (process.pc >= process.instance.steps.size()) {
        process.status = ParticipantProcess::Status::Completed;
        continue;
      }
      const check::Step& step = process.instance.steps[process.pc];

      if (step.dir == check::Step::Dir::Send) {
        execute_send(process, step);
        return true;
      }

      bool delivered = false;
      for (Envelope& env : hub_.pending[i]) {
        auto bound = deliverable(process, step, env);
        if (!bound) continue;
        env.consumed = true;
        process.bindings = std::move(*bound);
        ++process.pc;
        ++steps_;
        process.status = ParticipantProcess::Status::Ready;
        log(process.instance.info.label, "recv", anb::print_term(env.term));
        fire_claims(process, step);
        run_monitor();
        delivered = true;
        break;
      }
      if (delivered) return true;
      process.status = ParticipantProcess::Status::Blocked;
    }
    return false;
  }

  void execute_send(ParticipantProcess& process, const check::Step& step) {
    Term ground = substitute(step.payload, process.bindings);
    if (!is_ground(ground)) {
      process.status = ParticipantProcess::Status::Stuck;
      ++steps_;
      log(process.instance.info.label, "stuck", "unbound send payload");
      return;
    }
    ++process.pc;
    ++steps_;
    log(process.instance.info.label, "send", anb::print_term(ground));

    hub_.genuine[step.action_index].push_back(ground);

    Envelope env;
    env.from = process.instance.info.label;
    env.action_index = step.action_index;
    env.mode = step.mode;
    env.term = ground;
    env.readable = mode_readable(step.mode);
    hub_.mailbox.push_back(env);

    // Monitor mirror: readable traffic, plus payloads addressed to an
    // intruder-played endpoint.
    const check::SessionAssignment& assignment =
        sessions_[process.instance.info.session];
    auto receiver = assignment.find(step.peer_role);
    bool to_intruder = receiver != assignment.end() &&
                       receiver->second == monitor_.dishonest;
    if (env.readable || to_intruder) {
      monitor_.mirror = monitor_.mirror.add_fact(ground);
    }

    if (hub_.passive) {
      auto target = index_of_.find(check::instance_label(
          process.instance.info.session, step.peer_role));
      if (target != index_of_.end()) {
        hub_.pending[target->second].push_back(env);
      }
    }

    fire_claims(process, step);
    run_monitor();
  }

  void fire_claims(ParticipantProcess& process, const check::Step& step) {
    std::vector<check::ClaimRecord> fired;
    for (const check::ClaimSpec& claim : step.claims_after) {
      auto record =
          check::resolve_claim(claim, process.instance, process.bindings);
      if (!record) continue;
      monitor_.claims.push_back(*record);
      fired.push_back(std::move(*record));
    }
    log_claims(fired);
  }

  const ProtocolSpec& spec_;
  std::vector<ParticipantProcess> processes_;
  const testgen::IntruderScript& script_;
  const std::vector<check::SessionAssignment>& sessions_;
  SecurityMonitor monitor_;
  size_t max_steps_;

  Hub hub_;
  std::map<std::string, size_t> index_of_;
  Decls decls_;
  size_t script_pc_ = 0;
  size_t steps_ = 0;
  SimReport report_;
};

std::vector<ParticipantProcess> build_processes(
    const ProtocolSpec& spec,
    const std::vector<check::SessionAssignment>& sessions,
    const std::string& dishonest, unsigned seed,
    std::set<Term>* intruder_facts) {
  const auto scripts = check::project_roles(spec);
  std::set<std::string> agents;
  for (const check::SessionAssignment& s : sessions) {
    for (const auto& [role, agent] : s) agents.insert(agent);
  }
  agents.insert(dishonest);
  const check::Instantiation inst = check::instantiate(
      spec, scripts, sessions, dishonest,
      std::vector<std::string>(agents.begin(), agents.end()), seed);
  if (intruder_facts) *intruder_facts = inst.intruder_facts;

  std::vector<ParticipantProcess> processes;
  for (const check::Instance& instance : inst.instances) {
    ParticipantProcess process;
    process.instance = instance;
    process.status = instance.steps.empty()
                         ? ParticipantProcess::Status::Completed
                         : ParticipantProcess::Status::Ready;
    processes.push_back(std::move(process));
  }
  return processes;
}

}  // namespace

SimReport run(const ProtocolSpec& spec,
              std::vector<ParticipantProcess> processes,
              const testgen::IntruderScript& script,
              const std::vector<check::SessionAssignment>& sessions,
              SecurityMonitor monitor, size_t max_steps) {
  Runner runner(spec, std::move(processes), script, sessions,
                std::move(monitor), max_steps);
  return runner.run();
}

SimReport simulate(const ProtocolSpec& spec,
                   const testgen::AbstractTestCase& atc, unsigned seed,
                   size_t max_steps) {
  std::set<Term> intruder_facts;
  std::vector<ParticipantProcess> processes =
      build_processes(spec, atc.sessions, atc.dishonest, seed, &intruder_facts);
  SecurityMonitor monitor = make_monitor(spec, intruder_facts, atc.dishonest);
  testgen::IntruderScript script = atc_to_intruder_script(atc);
  return run(spec, std::move(processes), script, atc.sessions,
             std::move(monitor), max_steps);
}

SimReport simulate_honest(const ProtocolSpec& spec,
                          const std::vector<check::SessionAssignment>& sessions,
                          std::string dishonest, unsigned seed,
                          size_t max_steps) {
  std::set<Term> intruder_facts;
  std::vector<ParticipantProcess> processes =
      build_processes(spec, sessions, dishonest, seed, &intruder_facts);
  SecurityMonitor monitor = make_monitor(spec, intruder_facts, dishonest);
  testgen::IntruderScript script;
  return run(spec, std::move(processes), script, sessions, std::move(monitor),
             max_steps);
}

}  // namespace apv::sim
