/*
 * Copyright 2026 the biertesim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BIERTE_ERRORS_HPP
#define BIERTE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bierte {

/// Malformed or inconsistent input document (topology or scenario file).
/// Carries the 1-based line number of the offending statement when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  explicit ConfigError(const std::string& msg) : ConfigError(0, msg) {}

  int line() const { return line_; }

 private:
  int line_;
};

/// Table compilation failure, e.g. an adjacency that cannot be protected.
class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulation abort, e.g. a run that does not reach quiescence.
class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bierte

#endif  // BIERTE_ERRORS_HPP
