// Copyright 2026 The ldpres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ldpres {

// Base of every exception thrown by the library. Verification failures are
// not errors; they are returned as reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments outside an operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Hadamard order that none of the implemented constructions reach.
class UnsupportedOrderError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// A configured size cap (block count, point count) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant. Seeing one of these is a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ArgumentError(message);
}

}  // namespace ldpres
