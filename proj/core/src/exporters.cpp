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

#include "apv/exporters/export.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "apv/anb/printer.hpp"
#include "apv/check/roles.hpp"

namespace apv::exporters {

ExportArtifact export_anb(const ProtocolSpec& spec) {
  ExportArtifact artifact;
  artifact.format = ExportArtifact::Format::AnB;
  artifact.text = anb::pretty_print(spec);
  return artifact;
}

namespace {

// Long-term key material discovered in the term algebra: PublicKey-sorted
// functions become pk(ltk_F(..)) pairs, SymmetricKey-sorted functions become
// private shared-key functions, plain functions stay public symbols.
struct FunctionTable {
  std::map<std::string, size_t> public_key_fns;   // name -> arity
  std::map<std::string, size_t> symmetric_fns;    // name -> arity
  std::map<std::string, size_t> plain_fns;        // name -> arity
};

void collect_functions(const Term& t, const Decls& decls, FunctionTable& table,
                       std::vector<std::string>& warnings) {
  if (t.kind() == TermKind::FunApp) {
    auto sort = lookup_sort(decls, t.name());
    size_t arity = t.args().size();
    if (sort == Sort::PublicKey) {
      table.public_key_fns.emplace(t.name(), arity);
    } else if (sort == Sort::SymmetricKey) {
      table.symmetric_fns.emplace(t.name(), arity);
    } else {
      if (sort != Sort::Function) {
        warnings.push_back("function '" + t.name() +
                           "' has a non-function sort; exported as a public "
                           "symbol");
      }
      table.plain_fns.emplace(t.name(), arity);
    }
  }
  for (const Term& arg : t.args()) {
    collect_functions(arg, decls, table, warnings);
  }
}

// Per-role term rendering: known agent atoms are public variables, own
// fresh atoms are fresh variables, receive-bound atoms are message
// variables, all other atoms public string constants.
struct RoleView {
  const Decls* decls = nullptr;
  const FunctionTable* table = nullptr;
  std::set<std::string> fresh;
  std::vector<std::string>* warnings = nullptr;

  std::string render(const Term& t) const {
    switch (t.kind()) {
      case TermKind::Atom: {
        if (t.is_variable()) return t.name();
        if (fresh.count(t.name())) return "~" + t.name();
        auto sort = lookup_sort(*decls, t.name());
        if (sort == Sort::Agent) return "$" + t.name();
        return "'" + t.name() + "'";
      }
      case TermKind::Pair: {
        std::string out = "<";
        const Term* cursor = &t;
        while (cursor->kind() == TermKind::Pair) {
          out += render(cursor->args()[0]) + ", ";
          cursor = &cursor->args()[1];
        }
        out += render(*cursor) + ">";
        return out;
      }
      case TermKind::SymEnc:
        return "senc(" + render(t.args()[0]) + ", " + render(t.args()[1]) + ")";
      case TermKind::AsymEnc:
        return "aenc(" + render(t.args()[0]) + ", " + render(t.args()[1]) + ")";
      case TermKind::Sign:
        return "sign(" + render(t.args()[0]) + ", " + render(t.args()[1]) + ")";
      case TermKind::FunApp: {
        std::string args;
        for (size_t i = 0; i < t.args().size(); ++i) {
          if (i > 0) args += ", ";
          args += render(t.args()[i]);
        }
        if (table->public_key_fns.count(t.name())) {
          return "pk(ltk_" + t.name() + "(" + args + "))";
        }
        if (table->symmetric_fns.count(t.name())) {
          return "shk_" + t.name() + "(" + args + ")";
        }
        return t.name() + "(" + args + ")";
      }
      case TermKind::Inv: {
        const Term& of = t.args()[0];
        if (of.kind() == TermKind::FunApp &&
            table->public_key_fns.count(of.name())) {
          std::string args;
          for (size_t i = 0; i < of.args().size(); ++i) {
            if (i > 0) args += ", ";
            args += render(of.args()[i]);
          }
          return "ltk_" + of.name() + "(" + args + ")";
        }
        warnings->push_back(
            "inv(..) over a non-key-function term exported heuristically");
        return "ltk_unknown(" + render(of) + ")";
      }
    }
    return "?";
  }
};

std::string channel_fact_family(ChannelMode mode) {
  switch (mode) {
    case ChannelMode::Plain: return "";
    case ChannelMode::Authentic: return "AuthCh";
    case ChannelMode::Confidential: return "ConfCh";
    case ChannelMode::Secure: return "SecCh";
  }
  return "";
}

}  // namespace

ExportArtifact export_tamarin(const ProtocolSpec& spec) {
  ExportArtifact artifact;
  artifact.format = ExportArtifact::Format::TamarinTheory;
  std::vector<std::string>& warnings = artifact.warnings;

  FunctionTable table;
  for (const Action& action : spec.actions) {
    collect_functions(action.payload, spec.declarations, table, warnings);
  }
  for (const auto& [role, terms] : spec.knowledge) {
    for (const Term& t : terms) {
      collect_functions(t, spec.declarations, table, warnings);
    }
  }

  std::string out = "theory " + spec.name + "\nbegin\n\n";
  out +=
      "builtins: symmetric-encryption, asymmetric-encryption, signing, "
      "hashing\n";

  std::vector<std::string> function_decls;
  for (const auto& [name, arity] : table.public_key_fns) {
    function_decls.push_back("ltk_" + name + "/" + std::to_string(arity) +
                             " [private]");
  }
  for (const auto& [name, arity] : table.symmetric_fns) {
    function_decls.push_back("shk_" + name + "/" + std::to_string(arity) +
                             " [private]");
  }
  for (const auto& [name, arity] : table.plain_fns) {
    function_decls.push_back(name + "/" + std::to_string(arity));
  }
  if (!function_decls.empty()) {
    out += "\nfunctions: ";
    for (size_t i = 0; i < function_decls.size(); ++i) {
      if (i > 0) out += ", ";
      out += function_decls[i];
    }
    out += "\n";
  }

  if (!table.public_key_fns.empty()) {
    out += "\n/* Long-term key publication */\n";
    for (const auto& [name, arity] : table.public_key_fns) {
      if (arity != 1) {
        warnings.push_back("public-key function '" + name +
                           "' has arity " + std::to_string(arity) +
                           "; no publication rule emitted");
        continue;
      }
      out += "\nrule Publish_" + name + ":\n";
      out += "  [ ]\n  -->\n  [ Out(pk(ltk_" + name + "($A))) ]\n";
    }
  }

  const auto scripts = check::project_roles(spec);

  for (const auto& [role, script] : scripts) {
    RoleView view;
    view.decls = &spec.declarations;
    view.table = &table;
    view.fresh = script.fresh_atoms;
    view.warnings = &warnings;

    // State parameters: known agent identities, then acquired values in
    // acquisition order.
    std::vector<std::string> state;
    std::set<std::string> known_agents;
    for (const Term& k : script.initial_knowledge) {
      for (const std::string& name : atom_names_of(k)) {
        if (lookup_sort(spec.declarations, name) == Sort::Agent) {
          known_agents.insert(name);
        }
      }
    }
    for (const std::string& agent : known_agents) state.push_back("$" + agent);

    auto state_fact = [&](size_t index) {
      std::string fact = "St_" + role + "_" + std::to_string(index) + "(";
      for (size_t i = 0; i < state.size(); ++i) {
        if (i > 0) fact += ", ";
        fact += state[i];
      }
      return fact + ")";
    };

    out += "\n/* Role " + role + " */\n";
    out += "\nrule " + spec.name + "_" + role + "_0:\n";
    out += "  [ ]\n  -->\n  [ " + state_fact(0) + " ]\n";

    std::set<std::string> bound;
    for (size_t si = 0; si < script.steps.size(); ++si) {
      const check::Step& step = script.steps[si];
      std::string premises = state_fact(si);
      std::string message = view.render(step.payload);
      const std::string family = channel_fact_family(step.mode);
      const std::string action_no = std::to_string(step.action_index + 1);

      std::vector<std::string> actions;
      std::vector<std::string> conclusions;

      if (step.dir == check::Step::Dir::Send) {
        for (const std::string& fresh : step.fresh) {
          premises += ", Fr(~" + fresh + ")";
          state.push_back("~" + fresh);
        }
        if (family.empty()) {
          conclusions.push_back("Out(" + message + ")");
        } else {
          std::string fact = family + "_" + action_no;
          if (step.mode == ChannelMode::Confidential) {
            fact += "(" + message + ")";
          } else {
            fact += "($" + role + ", " + message + ")";
          }
          conclusions.push_back(fact);
          if (mode_readable(step.mode)) {
            conclusions.push_back("Out(" + message + ")");
          }
          warnings.push_back("action " + action_no + " (" +
                             mode_arrow(step.mode) +
                             ") encoded as fact family " + family + "_" +
                             action_no);
        }
      } else {
        // Newly bound variables extend the state.
        std::vector<std::string> fresh_vars;
        for (const std::string& var : variables_of(step.payload)) {
          if (bound.insert(var).second) fresh_vars.push_back(var);
        }
        for (const std::string& var : fresh_vars) state.push_back(var);
        if (family.empty()) {
          premises += ", In(" + message + ")";
        } else {
          std::string sender = step.peer_role;
          std::string sender_view =
              known_agents.count(sender) ? "$" + sender
              : bound.count(sender)      ? sender
                                         : "sender";
          std::string fact = family + "_" + action_no;
          if (step.mode == ChannelMode::Confidential) {
            fact += "(" + message + ")";
          } else {
            fact += "(" + sender_view + ", " + message + ")";
          }
          premises += ", " + fact;
        }
      }

      for (const check::ClaimSpec& claim : step.claims_after) {
        const std::string suffix = std::to_string(claim.goal_index + 1);
        auto role_view = [&](const std::string& r) -> std::string {
          if (known_agents.count(r)) return "$" + r;
          if (bound.count(r)) return r;
          warnings.push_back("claim participant '" + r +
                             "' is not resolvable in role " + role);
          return "'" + r + "'";
        };
        switch (claim.kind) {
          case check::ClaimSpec::Kind::Secret:
            actions.push_back("Secret_" + suffix + "(" +
                              view.render(claim.secret) + ")");
            break;
          case check::ClaimSpec::Kind::Running:
          case check::ClaimSpec::Kind::Commit: {
            std::string data = "<";
            for (size_t i = 0; i < claim.on.size(); ++i) {
              if (i > 0) data += ", ";
              data += view.render(claim.on[i]);
            }
            data += ">";
            if (claim.kind == check::ClaimSpec::Kind::Running) {
              actions.push_back("Running_" + suffix + "(" +
                                role_view(claim.peer_role) + ", $" + role +
                                ", " + data + ")");
            } else {
              actions.push_back("Commit_" + suffix + "($" + role + ", " +
                                role_view(claim.peer_role) + ", " + data + ")");
            }
            break;
          }
        }
      }

      conclusions.insert(conclusions.begin(), state_fact(si + 1));

      out += "\nrule " + spec.name + "_" + role + "_" +
             std::to_string(si + 1) + ":\n";
      out += "  [ " + premises + " ]\n";
      if (actions.empty()) {
        out += "  -->\n";
      } else {
        out += "  --[ ";
        for (size_t i = 0; i < actions.size(); ++i) {
          if (i > 0) out += ", ";
          out += actions[i];
        }
        out += " ]->\n";
      }
      out += "  [ ";
      for (size_t i = 0; i < conclusions.size(); ++i) {
        if (i > 0) out += ", ";
        out += conclusions[i];
      }
      out += " ]\n";
    }
  }

  if (spec.goals.empty()) {
    warnings.push_back("no lemmas emitted");
  } else {
    out += "\n/* Goals */\n";
    for (size_t gi = 0; gi < spec.goals.size(); ++gi) {
      const Goal& goal = spec.goals[gi];
      const std::string suffix = std::to_string(gi + 1);
      switch (goal.kind) {
        case Goal::Kind::Secrecy:
          out += "\nlemma secret_g" + suffix + ":\n";
          out += "  \"All x #i. Secret_" + suffix +
                 "(x) @ #i ==> not (Ex #j. K(x) @ #j)\"\n";
          break;
        case Goal::Kind::WeakAgreement:
          out += "\nlemma agree_g" + suffix + ":\n";
          out += "  \"All a b d #i. Commit_" + suffix +
                 "(a, b, d) @ #i\n   ==> (Ex #j. Running_" + suffix +
                 "(a, b, d) @ #j & #j < #i)\"\n";
          break;
        case Goal::Kind::InjAgreement:
          out += "\nlemma agree_inj_g" + suffix + ":\n";
          out += "  \"All a b d #i. Commit_" + suffix +
                 "(a, b, d) @ #i\n   ==> (Ex #j. Running_" + suffix +
                 "(a, b, d) @ #j & #j < #i)\n       & not (Ex a2 b2 #i2. "
                 "Commit_" +
                 suffix + "(a2, b2, d) @ #i2 & not (#i2 = #i))\"\n";
          break;
      }
    }
  }

  out += "\nend\n";
  artifact.text = std::move(out);
  return artifact;
}

std::vector<ExportArtifact> export_atc_bundle(
    const ProtocolSpec& spec, const testgen::AbstractTestCase& atc) {
  std::vector<ExportArtifact> bundle;
  bundle.push_back(export_anb(spec));
  ExportArtifact atc_artifact;
  atc_artifact.format = ExportArtifact::Format::AtcJson;
  atc_artifact.text = testgen::atc_to_json(atc);
  bundle.push_back(std::move(atc_artifact));
  return bundle;
}

}  // namespace apv::exporters
