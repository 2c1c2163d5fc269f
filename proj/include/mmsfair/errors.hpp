// Copyright 2026 The mmsfair Authors
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

#ifndef MMSFAIR_ERRORS_HPP_
#define MMSFAIR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mmsfair {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index out of range, malformed allocation, violated precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed instance document. The message carries line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

// The requested exhaustive computation exceeds the configured size bound.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Operation is not defined for the instance's mode (goods/chores).
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

// A claimed MMS vector does not match the recomputed one.
class CertificateError : public Error {
 public:
  CertificateError(int agent, const std::string& what)
      : Error(what), agent_(agent) {}
  int agent() const { return agent_; }

 private:
  int agent_;
};

}  // namespace mmsfair

#endif  // MMSFAIR_ERRORS_HPP_
