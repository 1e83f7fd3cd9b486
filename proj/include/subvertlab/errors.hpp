// Copyright 2026 The subvertlab Authors
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

#ifndef SUBVERTLAB_ERRORS_HPP_
#define SUBVERTLAB_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subvertlab {

// Parameter combinations rejected up front (exit code 2 in the CLI).
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidHistory : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoExactPmf : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LengthMismatch : InvalidParameter {
  using InvalidParameter::InvalidParameter;
};

struct WrongDocumentCount : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScheduleMismatch : InvalidParameter {
  using InvalidParameter::InvalidParameter;
};

struct UnsupportedKind : InvalidParameter {
  using InvalidParameter::InvalidParameter;
};

struct SchemaMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A run observed a state that a correct construction can never reach
// (exit code 3 in the CLI).
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidParameter(what);
}

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline unsigned log2_exact(std::size_t v) {
  unsigned r = 0;
  while ((std::size_t{1} << r) < v) ++r;
  return r;
}

inline void require_power_of_two_ml(std::size_t ml) {
  if (!is_power_of_two(ml)) throw InvalidParameter("ml must be a power of two");
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_ERRORS_HPP_
