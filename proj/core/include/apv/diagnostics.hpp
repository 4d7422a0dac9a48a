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
#include <vector>

namespace apv {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 1;

  bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
  enum class Severity { Error, Warning };

  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
  std::string code;  // stable identifier, e.g. "undeclared-identifier"

  static Diagnostic error(SourceSpan span, std::string message,
                          std::string code) {
    return {Severity::Error, span, std::move(message), std::move(code)};
  }
  static Diagnostic warning(SourceSpan span, std::string message,
                            std::string code) {
    return {Severity::Warning, span, std::move(message), std::move(code)};
  }
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags) {
    if (d.severity == Diagnostic::Severity::Error) return true;
  }
  return false;
}

// "<line>:<col>: error[code]: message", optionally ANSI-colored.
std::string format_diagnostic(const Diagnostic& d, bool color = false);

}  // namespace apv
