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

#include "apv/anb/parser.hpp"

#include <cctype>
#include <set>

#include "apv/anb/lexer.hpp"

namespace apv::anb {

namespace {

const std::set<std::string> kSectionKeywords = {"Types", "Knowledge", "Actions",
                                                "Goals"};

const std::set<std::string> kReserved = {
    "Protocol", "Types",  "Knowledge", "Actions",       "Goals",
    "Agent",    "Number", "SymmetricKey", "PublicKey",  "Function",
    "inv",      "secret", "between",   "authenticates", "injectively",
    "on"};

// Thrown on unrecoverable grammar violations; the diagnostic has already
// been recorded when this is raised.
struct Bailout {};

class Parser {
 public:
  Parser(const std::string& source, std::vector<Diagnostic>& diags)
      : diags_(diags) {
    tokens_ = tokenize(source, diags_);
  }

  // --- token stream -------------------------------------------------------

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at(TokenKind kind) const { return peek().kind == kind; }
  bool at_ident(const std::string& text) const {
    return peek().kind == TokenKind::Ident && peek().text == text;
  }

  void error(SourceSpan span, std::string message, std::string code) {
    diags_.push_back(Diagnostic::error(span, std::move(message), std::move(code)));
  }
  void warn(SourceSpan span, std::string message, std::string code) {
    diags_.push_back(
        Diagnostic::warning(span, std::move(message), std::move(code)));
  }
  [[noreturn]] void fail(SourceSpan span, std::string message,
                         std::string code = "syntax-error") {
    error(span, std::move(message), std::move(code));
    throw Bailout{};
  }

  Token expect(TokenKind kind, const std::string& what) {
    if (!at(kind)) {
      fail(peek().span, "expected " + what + " but found '" +
                            (peek().kind == TokenKind::End ? "end of input"
                                                           : peek().text) +
                            "'");
    }
    return advance();
  }

  Token expect_keyword(const std::string& word) {
    if (!at_ident(word)) {
      fail(peek().span, "expected '" + word + "' but found '" + peek().text + "'");
    }
    return advance();
  }

  // --- identifiers ---------------------------------------------------------

  Token expect_plain_ident(const std::string& what) {
    Token tok = expect(TokenKind::Ident, what);
    if (kReserved.count(tok.text)) {
      fail(tok.span, "'" + tok.text + "' is a reserved word", "syntax-error");
    }
    if (tok.text.find('#') != std::string::npos) {
      fail(tok.span,
           "session-suffixed identifier '" + tok.text +
               "' is not allowed in protocol sources",
           "invalid-identifier");
    }
    return tok;
  }

  // --- terms ---------------------------------------------------------------

  void set_decls(const Decls* decls, bool allow_suffix) {
    decls_ = decls;
    allow_suffix_ = allow_suffix;
  }

  Term parse_term_full() {
    Term first = parse_term_basic();
    if (at(TokenKind::Comma)) {
      advance();
      return Term::pair(std::move(first), parse_term_full());
    }
    return first;
  }

  // List items keep their commas for the enclosing list; a pair in item
  // position must be parenthesized.
  Term parse_term_item() { return parse_term_basic(); }

  std::vector<Term> parse_term_list() {
    std::vector<Term> items;
    items.push_back(parse_term_item());
    while (at(TokenKind::Comma)) {
      advance();
      items.push_back(parse_term_item());
    }
    return items;
  }

  Term parse_term_basic() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::LParen: {
        advance();
        Term inner = parse_term_full();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::LBrace: {
        advance();
        Term payload = parse_term_full();
        expect(TokenKind::RBrace, "'}'");
        Token key_tok = peek();
        Term key = parse_term_basic();
        return dispatch_encryption(std::move(payload), std::move(key),
                                   key_tok.span);
      }
      case TokenKind::Ident:
        break;
      default:
        fail(tok.span, "expected a term but found '" +
                           (tok.kind == TokenKind::End ? "end of input"
                                                       : tok.text) +
                           "'");
    }

    if (tok.text == "inv") {
      advance();
      expect(TokenKind::LParen, "'(' after inv");
      Token arg_tok = peek();
      Term arg = parse_term_full();
      expect(TokenKind::RParen, "')'");
      if (auto sort = safe_sort(arg); sort && *sort != Sort::PublicKey) {
        error(arg_tok.span,
              "inv(..) expects a PublicKey-sorted term, got " +
                  std::string(to_string(*sort)),
              "invalid-inv");
      }
      return Term::inv(std::move(arg));
    }

    if (kReserved.count(tok.text)) {
      fail(tok.span, "unexpected keyword '" + tok.text + "' in term");
    }

    Token name = advance();
    if (!allow_suffix_ && name.text.find('#') != std::string::npos) {
      error(name.span,
            "session-suffixed identifier '" + name.text +
                "' is not allowed in protocol sources",
            "invalid-identifier");
    }

    if (at(TokenKind::LParen)) {
      advance();
      check_declared(name);
      std::vector<Term> args = parse_term_list();
      expect(TokenKind::RParen, "')'");
      return Term::fun_app(name.text, std::move(args), /*one_way=*/true);
    }

    check_declared(name);
    return Term::atom(name.text);
  }

  void check_declared(const Token& name) {
    if (decls_ && !lookup_sort(*decls_, name.text)) {
      error(name.span, "undeclared identifier '" + name.text + "'",
            "undeclared-identifier");
    }
  }

  std::optional<Sort> safe_sort(const Term& t) const {
    if (!decls_) return std::nullopt;
    try {
      return term_sort(t, *decls_);
    } catch (const UndeclaredIdentifierError&) {
      return std::nullopt;  // already reported at the atom
    }
  }

  // `{m}k` resolves to SymEnc, AsymEnc or Sign by the sort of the key.
  Term dispatch_encryption(Term payload, Term key, SourceSpan key_span) {
    if (key.kind() == TermKind::Inv) {
      return Term::sign(std::move(payload), std::move(key));
    }
    auto sort = safe_sort(key);
    if (sort == Sort::SymmetricKey) {
      return Term::sym_enc(std::move(payload), std::move(key));
    }
    if (sort == Sort::PublicKey) {
      return Term::asym_enc(std::move(payload), std::move(key));
    }
    if (sort) {
      error(key_span,
            "encryption key must have sort SymmetricKey or PublicKey, got " +
                std::string(to_string(*sort)),
            "invalid-key-sort");
    }
    return Term::sym_enc(std::move(payload), std::move(key));
  }

  // --- protocol sections ---------------------------------------------------

  ProtocolSpec parse_protocol_document() {
    ProtocolSpec spec;
    expect_keyword("Protocol");
    expect(TokenKind::Colon, "':'");
    spec.name = expect_plain_ident("protocol name").text;

    std::set<std::string> seen_sections;
    while (!at(TokenKind::End)) {
      const Token& tok = peek();
      if (tok.kind != TokenKind::Ident || !kSectionKeywords.count(tok.text)) {
        fail(tok.span, "expected a section keyword but found '" + tok.text + "'");
      }
      if (!seen_sections.insert(tok.text).second) {
        fail(tok.span, "duplicate '" + tok.text + "' section",
             "duplicate-declaration");
      }
      if (tok.text == "Types") {
        parse_types(spec);
      } else if (tok.text == "Knowledge") {
        require_types(spec, tok.span);
        parse_knowledge(spec);
      } else if (tok.text == "Actions") {
        require_types(spec, tok.span);
        parse_actions(spec);
      } else {
        require_types(spec, tok.span);
        parse_goals(spec);
      }
    }
    return spec;
  }

  void require_types(const ProtocolSpec& spec, SourceSpan span) {
    if (spec.declarations.empty()) {
      fail(span, "the Types section must precede sections that use terms");
    }
  }

  void parse_types(ProtocolSpec& spec) {
    expect_keyword("Types");
    expect(TokenKind::Colon, "':'");
    bool any = false;
    while (at(TokenKind::Ident) && sort_from_string(peek().text)) {
      Sort sort = *sort_from_string(advance().text);
      while (true) {
        Token name = expect_plain_ident("identifier");
        if (!spec.declarations.emplace(name.text, sort).second) {
          error(name.span, "duplicate declaration of '" + name.text + "'",
                "duplicate-declaration");
        }
        if (at(TokenKind::Comma)) {
          advance();
          continue;
        }
        break;
      }
      expect(TokenKind::Semicolon, "';'");
      any = true;
    }
    if (!any) fail(peek().span, "Types section declares nothing");
  }

  void parse_knowledge(ProtocolSpec& spec) {
    expect_keyword("Knowledge");
    expect(TokenKind::Colon, "':'");
    set_decls(&spec.declarations, /*allow_suffix=*/false);
    bool any = false;
    while (at(TokenKind::Ident) && !kSectionKeywords.count(peek().text) &&
           peek(1).kind == TokenKind::Colon) {
      Token role = expect_plain_ident("role name");
      expect(TokenKind::Colon, "':'");
      auto sort = lookup_sort(spec.declarations, role.text);
      if (!sort) {
        error(role.span, "undeclared identifier '" + role.text + "'",
              "undeclared-identifier");
      } else if (*sort != Sort::Agent) {
        error(role.span, "knowledge entry for non-Agent '" + role.text + "'",
              "invalid-knowledge-role");
      }
      std::vector<Term> terms = parse_term_list();
      expect(TokenKind::Semicolon, "';'");
      if (!spec.knowledge.emplace(role.text, std::move(terms)).second) {
        error(role.span, "duplicate knowledge entry for '" + role.text + "'",
              "duplicate-declaration");
      }
      any = true;
    }
    if (!any) fail(peek().span, "Knowledge section declares nothing");
  }

  void parse_actions(ProtocolSpec& spec) {
    expect_keyword("Actions");
    expect(TokenKind::Colon, "':'");
    set_decls(&spec.declarations, /*allow_suffix=*/false);
    while (at(TokenKind::Ident) && !kSectionKeywords.count(peek().text) &&
           peek(1).kind == TokenKind::Arrow) {
      Token sender = expect_plain_ident("sender role");
      Token arrow = expect(TokenKind::Arrow, "channel arrow");
      Token receiver = expect_plain_ident("receiver role");
      expect(TokenKind::Colon, "':'");
      Term payload = parse_term_full();

      Action action;
      action.sender = sender.text;
      action.receiver = receiver.text;
      action.mode = *mode_from_arrow(arrow.text);
      action.payload = std::move(payload);
      spec.actions.push_back(std::move(action));
      action_spans_.push_back(sender.span);

      for (const Token* tok : {&sender, &receiver}) {
        auto sort = lookup_sort(spec.declarations, tok->text);
        if (!sort) {
          error(tok->span, "undeclared identifier '" + tok->text + "'",
                "undeclared-identifier");
        } else if (*sort != Sort::Agent) {
          error(tok->span, "'" + tok->text + "' is not an Agent role",
                "invalid-role");
        } else if (std::islower(static_cast<unsigned char>(tok->text[0]))) {
          warn(tok->span,
               "role '" + tok->text + "' does not start with an uppercase letter",
               "role-case");
        }
      }
    }
    if (spec.actions.empty()) {
      fail(peek().span, "protocol has no actions", "no-actions");
    }
  }

  void parse_goals(ProtocolSpec& spec) {
    expect_keyword("Goals");
    expect(TokenKind::Colon, "':'");
    set_decls(&spec.declarations, /*allow_suffix=*/false);
    while (!at(TokenKind::End) &&
           !(at(TokenKind::Ident) && kSectionKeywords.count(peek().text))) {
      goal_spans_.push_back(peek().span);
      spec.goals.push_back(parse_goal(spec));
    }
    if (spec.goals.empty()) {
      fail(peek().span, "Goals section declares nothing", "unknown-goal-form");
    }
  }

  Goal parse_goal(ProtocolSpec& spec) {
    // Agreement goals start with `IDENT (injectively)? authenticates`.
    if (at(TokenKind::Ident) && !kReserved.count(peek().text)) {
      bool injective = peek(1).kind == TokenKind::Ident &&
                       peek(1).text == "injectively";
      bool agreement = injective || (peek(1).kind == TokenKind::Ident &&
                                     peek(1).text == "authenticates");
      if (agreement) {
        Token claimer = expect_plain_ident("claimer role");
        if (injective) expect_keyword("injectively");
        expect_keyword("authenticates");
        Token peer = expect_plain_ident("peer role");
        expect_keyword("on");
        std::vector<Term> on = parse_term_list();
        for (const Token* tok : {&claimer, &peer}) {
          auto sort = lookup_sort(spec.declarations, tok->text);
          if (!sort) {
            error(tok->span, "undeclared identifier '" + tok->text + "'",
                  "undeclared-identifier");
          } else if (*sort != Sort::Agent) {
            error(tok->span, "'" + tok->text + "' is not an Agent role",
                  "invalid-role");
          }
        }
        return injective
                   ? Goal::inj_agreement(claimer.text, peer.text, std::move(on))
                   : Goal::weak_agreement(claimer.text, peer.text,
                                          std::move(on));
      }
    }

    // Secrecy: term "secret" "between" identlist.
    SourceSpan start = peek().span;
    Term term = parse_term_full();
    if (!at_ident("secret")) {
      fail(start, "unrecognized goal form", "unknown-goal-form");
    }
    advance();
    expect_keyword("between");
    std::vector<std::string> parties;
    while (true) {
      Token party = expect_plain_ident("party role");
      auto sort = lookup_sort(spec.declarations, party.text);
      if (!sort) {
        error(party.span, "undeclared identifier '" + party.text + "'",
              "undeclared-identifier");
      } else if (*sort != Sort::Agent) {
        error(party.span, "'" + party.text + "' is not an Agent role",
              "invalid-role");
      }
      parties.push_back(party.text);
      if (at(TokenKind::Comma)) {
        advance();
        continue;
      }
      break;
    }
    return Goal::secrecy(std::move(term), std::move(parties));
  }

  // --- semantic validation -------------------------------------------------

  void validate(const ProtocolSpec& spec) {
    for (size_t i = 0; i < spec.actions.size(); ++i) {
      const Action& a = spec.actions[i];
      SourceSpan span = action_spans_[i];
      if (a.sender == a.receiver) {
        error(span, "sender equals receiver", "sender-equals-receiver");
      }
    }
    for (const std::string& role : spec.action_roles()) {
      if (!spec.knowledge.count(role)) {
        error(SourceSpan{},
              "role '" + role + "' appears in actions but has no knowledge entry",
              "missing-knowledge");
      }
    }
    for (size_t i = 0; i < spec.goals.size(); ++i) {
      const Goal& g = spec.goals[i];
      SourceSpan span = goal_spans_[i];
      if (g.kind == Goal::Kind::Secrecy) {
        bool occurs = false;
        for (const Action& a : spec.actions) {
          if (subterms(a.payload).count(g.term)) occurs = true;
        }
        if (!occurs) {
          warn(span, "secret term does not occur in any action payload",
               "goal-term-not-in-payload");
        }
        continue;
      }
      for (const Term& t : g.on) {
        bool occurs = false;
        for (const Action& a : spec.actions) {
          if (subterms(a.payload).count(t)) occurs = true;
        }
        if (!occurs) {
          error(span, "agreement term does not occur in any action payload",
                "goal-term-not-in-payload");
        }
      }
      bool peer_sends = false;
      bool claimer_acts = false;
      for (const Action& a : spec.actions) {
        if (a.sender == g.peer) peer_sends = true;
        if (a.sender == g.claimer || a.receiver == g.claimer)
          claimer_acts = true;
      }
      if (!peer_sends) {
        error(span, "agreement peer '" + g.peer + "' never sends",
              "agreement-peer-never-sends");
      }
      if (!claimer_acts) {
        error(span, "agreement claimer '" + g.claimer +
                        "' does not take part in the actions",
              "invalid-role");
      }
    }
    if (spec.goals.empty()) {
      warn(SourceSpan{}, "protocol declares no goals", "no-goals");
    }
  }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
  const Decls* decls_ = nullptr;
  bool allow_suffix_ = false;

  std::vector<SourceSpan> action_spans_;
  std::vector<SourceSpan> goal_spans_;
};

}  // namespace

ParseResult parse_protocol(const std::string& source) {
  ParseResult result;
  Parser parser(source, result.diagnostics);
  try {
    ProtocolSpec spec = parser.parse_protocol_document();
    if (spec.actions.empty()) {
      result.diagnostics.push_back(Diagnostic::error(
          SourceSpan{}, "protocol has no actions", "no-actions"));
    } else {
      parser.validate(spec);
    }
    if (!has_errors(result.diagnostics)) result.spec = std::move(spec);
  } catch (const Bailout&) {
    // diagnostics already recorded
  }
  return result;
}

TermParseResult parse_term(const std::string& source, const Decls& decls) {
  TermParseResult result;
  Parser parser(source, result.diagnostics);
  parser.set_decls(&decls, /*allow_suffix=*/true);
  try {
    Term term = parser.parse_term_full();
    if (!parser.peek().text.empty() ||
        parser.peek().kind != TokenKind::End) {
      parser.fail(parser.peek().span,
                  "trailing input after term: '" + parser.peek().text + "'");
    }
    if (!has_errors(result.diagnostics)) result.term = std::move(term);
  } catch (const Bailout&) {
  }
  return result;
}

}  // namespace apv::anb
