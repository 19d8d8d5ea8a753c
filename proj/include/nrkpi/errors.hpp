// Copyright 2026 The nrkpi Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace nrkpi {

/// Base error type. `name()` is the stable identifier printed by the CLI
/// ("error: <name>: <message>") and asserted by tests.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define NRKPI_DEFINE_ERROR(ClassName)                       \
  class ClassName : public Error {                          \
   public:                                                  \
    explicit ClassName(const std::string& message)          \
        : Error(#ClassName, message) {}                     \
  }

NRKPI_DEFINE_ERROR(MalformedHeader);
NRKPI_DEFINE_ERROR(RowParseError);
NRKPI_DEFINE_ERROR(EmptyTrace);
NRKPI_DEFINE_ERROR(SuffixError);
NRKPI_DEFINE_ERROR(ConfigError);
NRKPI_DEFINE_ERROR(TooFewSamples);
NRKPI_DEFINE_ERROR(SchemaMismatch);
NRKPI_DEFINE_ERROR(DegenerateTarget);
NRKPI_DEFINE_ERROR(LengthMismatch);
NRKPI_DEFINE_ERROR(FormatError);
NRKPI_DEFINE_ERROR(IoError);

#undef NRKPI_DEFINE_ERROR

}  // namespace nrkpi
