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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "apv/anb/parser.hpp"
#include "apv/protocol.hpp"

namespace apv::testing {

inline std::string corpus_path(const std::string& rel) {
  return std::string(APV_CORPUS_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline ProtocolSpec load_protocol(const std::string& corpus_file) {
  auto result = anb::parse_protocol(read_file(corpus_path(corpus_file)));
  if (!result.ok()) {
    throw std::runtime_error("corpus protocol " + corpus_file +
                             " does not parse");
  }
  return *result.spec;
}

inline const std::vector<std::string>& corpus_protocols() {
  static const std::vector<std::string> files = {
      "nspk.anb",       "nsl.anb",      "toy_secret.anb", "kdp.anb",
      "mode_plain.anb", "mode_auth.anb", "mode_conf.anb",  "mode_secure.anb"};
  return files;
}

}  // namespace apv::testing
