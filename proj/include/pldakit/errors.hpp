// pldakit/errors.hpp

// Copyright 2026  pldakit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace pldakit {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (bad field, non-finite value, wrong column count).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Repeated key where uniqueness is required (utt_id, trial pair).
class DuplicateKeyError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent vector/matrix shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Zero-norm vector where a direction is required.
class DegenerateVectorError : public Error {
 public:
  using Error::Error;
};

/// Violated operation precondition (empty input, missing key, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (singular matrix, failed factorization).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace pldakit
