// Copyright 2026 The averc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AVERC_ERROR_HPP
#define AVERC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace averc {

// Base class for all library errors. Subclasses map onto CLI exit codes:
// ValidationError -> 1, TransportError -> 2, anything else -> 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

#define AVERC_DEFINE_VALIDATION_ERROR(Name)                    \
  class Name : public ValidationError {                        \
   public:                                                     \
    explicit Name(const std::string& msg = #Name)              \
        : ValidationError(std::string(#Name) + ": " + msg) {}  \
  }

AVERC_DEFINE_VALIDATION_ERROR(EmptyReference);
AVERC_DEFINE_VALIDATION_ERROR(EmptyList);
AVERC_DEFINE_VALIDATION_ERROR(LengthMismatch);
AVERC_DEFINE_VALIDATION_ERROR(InvalidShape);
AVERC_DEFINE_VALIDATION_ERROR(InvalidDuration);
AVERC_DEFINE_VALIDATION_ERROR(DegenerateWindow);
AVERC_DEFINE_VALIDATION_ERROR(FrameCountMismatch);
AVERC_DEFINE_VALIDATION_ERROR(DegenerateLabels);
AVERC_DEFINE_VALIDATION_ERROR(NonFiniteFeature);
AVERC_DEFINE_VALIDATION_ERROR(DimensionMismatch);
AVERC_DEFINE_VALIDATION_ERROR(MissingMasks);
AVERC_DEFINE_VALIDATION_ERROR(EmptyAnswer);
AVERC_DEFINE_VALIDATION_ERROR(DuplicateId);
AVERC_DEFINE_VALIDATION_ERROR(SchemaVersionUnsupported);
AVERC_DEFINE_VALIDATION_ERROR(UnknownBaseline);
AVERC_DEFINE_VALIDATION_ERROR(MissingSnr);
AVERC_DEFINE_VALIDATION_ERROR(IoFailure);

#undef AVERC_DEFINE_VALIDATION_ERROR

// Parse errors carry the line number and the field path that failed.
class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& field, const std::string& msg)
      : ValidationError("Parse: line " + std::to_string(line) + ", field '" +
                        field + "': " + msg),
        line_(line),
        field_(field) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

class MalformedResponse : public TransportError {
 public:
  explicit MalformedResponse(const std::string& msg)
      : TransportError("MalformedResponse: " + msg) {}
};

class AuthMissing : public TransportError {
 public:
  explicit AuthMissing(const std::string& msg)
      : TransportError("AuthMissing: " + msg) {}
};

}  // namespace averc

#endif  // AVERC_ERROR_HPP
