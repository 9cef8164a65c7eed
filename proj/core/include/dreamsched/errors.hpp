// Copyright 2026 The DreamSched Authors
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

#ifndef DREAMSCHED_ERRORS_HPP_
#define DREAMSCHED_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dreamsched {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A profile, schedule or config violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A call was made with out-of-contract arguments.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its work budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Filesystem access failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dreamsched

#endif  // DREAMSCHED_ERRORS_HPP_
