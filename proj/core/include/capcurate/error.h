// Copyright 2026 The capcurate Authors.
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

#ifndef CAPCURATE_ERROR_H_
#define CAPCURATE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace capcurate {

enum class ErrorCode {
  kMalformedSyntax,
  kMissingField,
  kUnknownFormatKey,
  kDuplicateFormatKey,
  kEmptyRecord,
  kShardMissing,
  kChecksumMismatch,
  kIoFailure,
  kSerializationFailure,
  kUnknownScheme,
  kEmptyCaption,
  kNoScorableRecords,
  kMissingSource,
  kProviderFailure,
  kTemplateError,
  kMissingAltText,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

struct Error {
  ErrorCode code;
  std::string message;

  std::string ToString() const;
  friend bool operator==(const Error&, const Error&) = default;
};

// Thrown for failures that abort an operation. Per-record problems inside a
// stream are reported as `Error` values instead.
class CurationError : public std::runtime_error {
 public:
  CurationError(ErrorCode code, const std::string& message);
  explicit CurationError(Error error);

  ErrorCode code() const { return code_; }
  Error error() const { return Error{code_, what()}; }

 private:
  ErrorCode code_;
};

// Value-or-error for operations whose failures are ordinary data
// (e.g. one malformed line in a shard).
template <typename T>
class Result {
 public:
  Result(T value) : state_(std::move(value)) {}  // NOLINT(runtime/explicit)
  Result(Error error) : state_(std::move(error)) {}  // NOLINT(runtime/explicit)

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    ThrowIfError();
    return std::get<T>(state_);
  }
  T& value() & {
    ThrowIfError();
    return std::get<T>(state_);
  }
  T&& value() && {
    ThrowIfError();
    return std::get<T>(std::move(state_));
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Error& error() const { return std::get<Error>(state_); }

 private:
  void ThrowIfError() const {
    if (!ok()) throw CurationError(std::get<Error>(state_));
  }

  std::variant<T, Error> state_;
};

}  // namespace capcurate

#endif  // CAPCURATE_ERROR_H_
