// Copyright 2026 The Authors.
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

#ifndef INTERP_CERT_ERRORS_H_
#define INTERP_CERT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace interp_cert {

// Root of every error raised by the library. Each concrete type names one
// failure condition so callers can catch precisely.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define INTERP_CERT_DEFINE_ERROR(Name)  \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

// metrics
INTERP_CERT_DEFINE_ERROR(ZeroBaselineError);
INTERP_CERT_DEFINE_ERROR(LossMismatchError);
INTERP_CERT_DEFINE_ERROR(EmptyInputError);
INTERP_CERT_DEFINE_ERROR(ContextMismatchError);

// models
INTERP_CERT_DEFINE_ERROR(RankDeficientError);
INTERP_CERT_DEFINE_ERROR(DimensionMismatchError);
INTERP_CERT_DEFINE_ERROR(InvalidTargetError);
INTERP_CERT_DEFINE_ERROR(RepresentationError);
INTERP_CERT_DEFINE_ERROR(EmptyPrototypeError);
INTERP_CERT_DEFINE_ERROR(SingleClassError);
INTERP_CERT_DEFINE_ERROR(EmptyTrainingError);
INTERP_CERT_DEFINE_ERROR(IncompatibleLossError);
INTERP_CERT_DEFINE_ERROR(InvalidInformationError);

// procedures
INTERP_CERT_DEFINE_ERROR(InvalidCountError);

// robustness
INTERP_CERT_DEFINE_ERROR(InsufficientClassError);
INTERP_CERT_DEFINE_ERROR(InvalidEpsilonError);

// data
INTERP_CERT_DEFINE_ERROR(MissingColumnError);
INTERP_CERT_DEFINE_ERROR(MagicMismatchError);
INTERP_CERT_DEFINE_ERROR(CountMismatchError);
INTERP_CERT_DEFINE_ERROR(TruncatedFileError);
INTERP_CERT_DEFINE_ERROR(EmptyPartError);
INTERP_CERT_DEFINE_ERROR(InvalidDatasetError);
INTERP_CERT_DEFINE_ERROR(IoError);

#undef INTERP_CERT_DEFINE_ERROR

// A CSV cell that failed to parse. Line numbers are 1-based and count the
// header as line 1; columns are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Run-spec validation failure. `field` is a JSON-pointer-like path such as
// "procedures/1/m".
class SpecValidationError : public Error {
 public:
  SpecValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace interp_cert

#endif  // INTERP_CERT_ERRORS_H_
