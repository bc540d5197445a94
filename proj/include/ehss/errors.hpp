// Copyright 2026 The ehss-astw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EHSS_ERRORS_HPP_
#define EHSS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ehss {

/// A physical quantity left its admissible domain (e.g. a chamber volume
/// became non-positive).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed scenario, trace or command-line input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace ehss

#endif  // EHSS_ERRORS_HPP_
