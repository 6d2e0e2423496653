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

#include "capcurate/error.h"

namespace capcurate {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedSyntax: return "MalformedSyntax";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kUnknownFormatKey: return "UnknownFormatKey";
    case ErrorCode::kDuplicateFormatKey: return "DuplicateFormatKey";
    case ErrorCode::kEmptyRecord: return "EmptyRecord";
    case ErrorCode::kShardMissing: return "ShardMissing";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kSerializationFailure: return "SerializationFailure";
    case ErrorCode::kUnknownScheme: return "UnknownScheme";
    case ErrorCode::kEmptyCaption: return "EmptyCaption";
    case ErrorCode::kNoScorableRecords: return "NoScorableRecords";
    case ErrorCode::kMissingSource: return "MissingSource";
    case ErrorCode::kProviderFailure: return "ProviderFailure";
    case ErrorCode::kTemplateError: return "TemplateError";
    case ErrorCode::kMissingAltText: return "MissingAltText";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string Error::ToString() const {
  std::string out(ErrorCodeName(code));
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

CurationError::CurationError(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

CurationError::CurationError(Error error)
    : std::runtime_error(std::move(error.message)), code_(error.code) {}

}  // namespace capcurate
