// Copyright 2026 The gfoq Authors
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

namespace gfoq {

/// Base for every error raised by the library. All derive from
/// std::runtime_error so callers that only care about the message can catch
/// one type.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside its mathematical domain (probability
/// outside [0,1], non-finite angle, zero shots, label not in {0,1}).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Vector or grid dimensions do not agree.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Not enough data to satisfy a request (empty batch, too few samples).
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Malformed IDX stream.
class FormatError : public Error {
  public:
    using Error::Error;
};

/// Bad experiment configuration; the message names the key.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Two run reports cannot be compared.
class ComparisonError : public Error {
  public:
    using Error::Error;
};

/// File system failure; the message carries the path.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace gfoq
