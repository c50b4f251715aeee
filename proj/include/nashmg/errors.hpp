// Copyright 2026 The nashmg Authors
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

#ifndef NASHMG_ERRORS_HPP_
#define NASHMG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace nashmg {

// Error taxonomy shared with the C API and the CLI exit codes:
// config/schema problems map to exit code 2, numeric and instance
// invariant failures map to exit code 3.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nashmg

#endif  // NASHMG_ERRORS_HPP_
