// Copyright 2026 The kdq developers
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

/**
 * @file
 * Exception hierarchy. Every validation failure names the violated
 * invariant and carries the measured residual in the message.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace kdq {

/// Base class for all kdq errors. `kind()` is a stable machine-readable tag.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string &msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string &kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

/// Input validation failures (CLI exit code 2).
class ValidationError : public Error {
  public:
    using Error::Error;
};

struct NotHermitian : ValidationError {
    explicit NotHermitian(const std::string &msg) : ValidationError("NotHermitian", msg) {}
};
struct TraceNotOne : ValidationError {
    explicit TraceNotOne(const std::string &msg) : ValidationError("TraceNotOne", msg) {}
};
struct NotPSD : ValidationError {
    explicit NotPSD(const std::string &msg) : ValidationError("NotPSD", msg) {}
};
struct NotOrthonormal : ValidationError {
    explicit NotOrthonormal(const std::string &msg) : ValidationError("NotOrthonormal", msg) {}
};
struct NotPovm : ValidationError {
    explicit NotPovm(const std::string &msg) : ValidationError("NotPovm", msg) {}
};
struct DimensionMismatch : ValidationError {
    explicit DimensionMismatch(const std::string &msg) : ValidationError("DimensionMismatch", msg) {}
};
struct DimensionTooLarge : ValidationError {
    explicit DimensionTooLarge(const std::string &msg) : ValidationError("DimensionTooLarge", msg) {}
};
struct WrongDimension : ValidationError {
    explicit WrongDimension(const std::string &msg) : ValidationError("WrongDimension", msg) {}
};
struct InvalidPermutation : ValidationError {
    explicit InvalidPermutation(const std::string &msg) : ValidationError("InvalidPermutation", msg) {}
};
struct InvalidPartition : ValidationError {
    explicit InvalidPartition(const std::string &msg) : ValidationError("InvalidPartition", msg) {}
};
struct BadParamLength : ValidationError {
    explicit BadParamLength(const std::string &msg) : ValidationError("BadParamLength", msg) {}
};
struct SingularOverlap : ValidationError {
    explicit SingularOverlap(const std::string &msg) : ValidationError("SingularOverlap", msg) {}
};
struct ZeroPostselection : ValidationError {
    explicit ZeroPostselection(const std::string &msg) : ValidationError("ZeroPostselection", msg) {}
};
struct ParseError : ValidationError {
    explicit ParseError(const std::string &msg) : ValidationError("ParseError", msg) {}
};

/// No optimizer restart converged (CLI exit code 3).
struct OptimizerFailure : Error {
    explicit OptimizerFailure(const std::string &msg) : Error("OptimizerFailure", msg) {}
};

} // namespace kdq
