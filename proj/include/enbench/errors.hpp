//------------------------------------------------------------------------------
//
//   Copyright 2026 The enbench Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace enbench {

enum class ErrorCode
{
  InvalidConfig,
  InfeasibleAction,
  InvalidGrid,
  OutOfRange,
  UnknownItem,
  UnknownBidder,
  DuplicateBid,
  MismatchedAuction,
  TooManyItems,
  InstanceTooLarge,
  MissingPlaceholder,
  ParseFailure,
  AmbiguousAction,
  UnknownItemName,
  Exhausted,
  AuthFailure,
  Timeout,
  ScriptExhausted,
  EmptySeries,
  IoFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every domain failure in the library is reported as an Error carrying one of
/// the codes above; the C API maps these onto status values.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, std::string const &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message)
    , code_(code)
  {}

  ErrorCode code() const noexcept
  {
    return code_;
  }

private:
  ErrorCode code_;
};

/// ParseFailure raised by the TARJ parser names the first offending section.
class ParseError : public Error
{
public:
  ParseError(ErrorCode code, std::string section, std::string const &message)
    : Error(code, section + ": " + message)
    , section_(std::move(section))
  {}

  std::string const &section() const noexcept
  {
    return section_;
  }

private:
  std::string section_;
};

}  // namespace enbench
