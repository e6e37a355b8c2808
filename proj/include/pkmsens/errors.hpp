// Copyright 2026 The pkmsens Authors.
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

#ifndef PKMSENS_ERRORS_HPP_
#define PKMSENS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pkmsens {

// Base class for every recoverable numerical or domain failure raised by the
// library. Precondition violations (bad arguments) use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested end-effector position cannot be reached by one of the legs.
class OutOfWorkspace : public Error {
 public:
  OutOfWorkspace(int leg, const std::string& what)
      : Error(what), leg_(leg) {}

  // 1-based leg index, or 0 when the failure is not attributable to one leg.
  int leg() const { return leg_; }

 private:
  int leg_;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// A 3x3 system whose condition number exceeds the accepted bound.
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

// The parallelogram normals matrix D is (numerically) singular.
class FlatParallelogram : public SingularConfiguration {
 public:
  using SingularConfiguration::SingularConfiguration;
};

class EmptyGrid : public Error {
 public:
  using Error::Error;
};

// Invalid configuration document or tolerance specification.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pkmsens

#endif  // PKMSENS_ERRORS_HPP_
