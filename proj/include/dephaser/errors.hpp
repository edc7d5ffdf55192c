// Copyright 2026 The Dephaser Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace dephaser {

/// Base of all library errors. Every subclass signals an input that
/// violates a documented precondition, except SolverError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

class NotUnitaryError : public Error {
 public:
  using Error::Error;
};

class GramMismatchError : public Error {
 public:
  using Error::Error;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class InvalidChannelError : public Error {
 public:
  using Error::Error;
};

class InvalidCorrelationError : public Error {
 public:
  using Error::Error;
};

class InvalidSuperchannelError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to reach its stopping criterion.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace dephaser
