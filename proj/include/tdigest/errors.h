/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.  See the NOTICE file
 * distributed with this work for additional information
 * regarding copyright ownership.  The ASF licenses this file
 * to you under the Apache License, Version 2.0 (the
 * "License"); you may not use this file except in compliance
 * with the License.  You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing,
 * software distributed under the License is distributed on an
 * "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
 * KIND, either express or implied.  See the License for the
 * specific language governing permissions and limitations
 * under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace tdigest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (q outside
/// [0,1], non-positive compression, NaN probe).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid digest configuration (compression below the floor, zero buffer).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Rejected sample data: non-finite values or non-positive weights.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class EmptyDigestError : public Error {
 public:
  EmptyDigestError() : Error("empty digest") {}
};

/// Digests that cannot be combined (mixed scale kinds, output compression
/// above an input's compression).
class IncompatibleDigestsError : public Error {
 public:
  using Error::Error;
};

/// Raised by MeasureOverlap on a digest that did not retain sample ranges.
class NotInstrumentedError : public Error {
 public:
  NotInstrumentedError() : Error("digest not instrumented") {}
};

enum class FormatErrorKind {
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kNonMonotone,
  kBadField,
  kTrailingData,
  kNonIntegerWeights,
};

const char* FormatErrorKindName(FormatErrorKind kind);

class FormatError : public Error {
 public:
  FormatError(FormatErrorKind kind, const std::string& detail)
      : Error(std::string(FormatErrorKindName(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  FormatErrorKind kind() const { return kind_; }

 private:
  FormatErrorKind kind_;
};

}  // namespace tdigest
