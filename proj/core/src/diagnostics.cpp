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

#include "apv/diagnostics.hpp"

namespace apv {

std::string format_diagnostic(const Diagnostic& d, bool color) {
  const bool is_error = d.severity == Diagnostic::Severity::Error;
  std::string severity = is_error ? "error" : "warning";
  std::string out = std::to_string(d.span.line) + ":" +
                    std::to_string(d.span.column) + ": ";
  if (color) out += is_error ? "\x1b[31m" : "\x1b[33m";
  out += severity;
  if (color) out += "\x1b[0m";
  out += "[" + d.code + "]: " + d.message;
  return out;
}

}  // namespace apv
