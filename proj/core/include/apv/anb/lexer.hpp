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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "apv/diagnostics.hpp"

namespace apv::anb {

enum class TokenKind {
  Ident,
  Colon,
  Semicolon,
  Comma,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Arrow,  // ->, *->, ->*, *->*
  End,
  Invalid,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceSpan span;
};

// Tokenizes AnB surface syntax. `#` starts a line comment, except for the
// session suffix `#s<digits>[~<digits>]` glued to an identifier, which is
// kept as part of the identifier (ground runtime names like `NA#s1`).
std::vector<Token> tokenize(std::string_view source,
                            std::vector<Diagnostic>& diagnostics);

}  // namespace apv::anb
