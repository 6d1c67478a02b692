// Copyright 2026 The stlcomm Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlcomm {

// Base for every error raised by the library. The CLI maps subclasses to exit
// codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input or a violated precondition.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  explicit ValidationError(const std::string& what) : Error(what) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t position, const std::string& what)
      : ValidationError("at " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// An external solver could not be run, produced unreadable output, or
// returned a solution that fails the model's constraints.
class ExternalSolverError : public Error {
 public:
  using Error::Error;
};

// The planning problem has no solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The solver stopped on a node or time limit without a usable plan.
class SolverLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace stlcomm
