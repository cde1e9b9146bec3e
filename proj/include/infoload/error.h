// Copyright 2026 The infoload Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INFOLOAD_ERROR_H_
#define INFOLOAD_ERROR_H_

#include <stdexcept>
#include <string>

namespace infoload {

// Base for every error raised by the library. Callers that only need a
// diagnostic can catch std::runtime_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data (log, graph, config) violates its format or invariants.
class InputError : public Error {
 public:
  using Error::Error;
};

// An operation's precondition does not hold for the given arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A user id or token that is not present in the indexed data.
class UnknownIdError : public Error {
 public:
  explicit UnknownIdError(const std::string& what_kind, const std::string& id)
      : Error("unknown " + what_kind + ": " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

// Numerical procedure failed (degenerate fit, optimizer did not converge).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace infoload

#endif  // INFOLOAD_ERROR_H_
