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

#include "apv/anb/lexer.hpp"

#include <cctype>

namespace apv::anb {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Cursor {
 public:
  explicit Cursor(std::string_view src) : src_(src) {}

  bool done() const { return pos_ >= src_.size(); }
  char peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }
  SourceSpan here(int length = 1) const { return {line_, column_, length}; }

 private:
  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source,
                            std::vector<Diagnostic>& diagnostics) {
  std::vector<Token> tokens;
  Cursor cur(source);

  while (!cur.done()) {
    char c = cur.peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      cur.advance();
      continue;
    }
    if (c == '#') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }

    SourceSpan start = cur.here();
    auto push = [&](TokenKind kind, std::string text) {
      start.length = static_cast<int>(text.size());
      tokens.push_back({kind, std::move(text), start});
    };

    if (is_ident_start(c)) {
      std::string text;
      while (!cur.done() && is_ident_char(cur.peek())) text += cur.advance();
      // Session suffix: '#s' digits, optionally '~' digits. Anything else
      // after '#' is a comment.
      if (cur.peek() == '#' && cur.peek(1) == 's' &&
          std::isdigit(static_cast<unsigned char>(cur.peek(2)))) {
        text += cur.advance();  // '#'
        text += cur.advance();  // 's'
        while (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
          text += cur.advance();
        }
        if (cur.peek() == '~' &&
            std::isdigit(static_cast<unsigned char>(cur.peek(1)))) {
          text += cur.advance();
          while (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
            text += cur.advance();
          }
        }
      }
      push(TokenKind::Ident, std::move(text));
      continue;
    }

    switch (c) {
      case ':': cur.advance(); push(TokenKind::Colon, ":"); continue;
      case ';': cur.advance(); push(TokenKind::Semicolon, ";"); continue;
      case ',': cur.advance(); push(TokenKind::Comma, ","); continue;
      case '{': cur.advance(); push(TokenKind::LBrace, "{"); continue;
      case '}': cur.advance(); push(TokenKind::RBrace, "}"); continue;
      case '(': cur.advance(); push(TokenKind::LParen, "("); continue;
      case ')': cur.advance(); push(TokenKind::RParen, ")"); continue;
      default: break;
    }

    if (c == '-' && cur.peek(1) == '>') {
      cur.advance();
      cur.advance();
      if (cur.peek() == '*') {
        cur.advance();
        push(TokenKind::Arrow, "->*");
      } else {
        push(TokenKind::Arrow, "->");
      }
      continue;
    }
    if (c == '*' && cur.peek(1) == '-' && cur.peek(2) == '>') {
      cur.advance();
      cur.advance();
      cur.advance();
      if (cur.peek() == '*') {
        cur.advance();
        push(TokenKind::Arrow, "*->*");
      } else {
        push(TokenKind::Arrow, "*->");
      }
      continue;
    }

    cur.advance();
    diagnostics.push_back(Diagnostic::error(
        start, std::string("unexpected character '") + c + "'",
        "syntax-error"));
    tokens.push_back({TokenKind::Invalid, std::string(1, c), start});
  }

  tokens.push_back({TokenKind::End, "", cur.here()});
  return tokens;
}

}  // namespace apv::anb
