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

#include "enbench/errors.hpp"
#include "enbench/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace enbench {

std::string_view to_string(ErrorCode code) noexcept
{
  switch (code)
  {
  case ErrorCode::InvalidConfig:
    return "InvalidConfig";
  case ErrorCode::InfeasibleAction:
    return "InfeasibleAction";
  case ErrorCode::InvalidGrid:
    return "InvalidGrid";
  case ErrorCode::OutOfRange:
    return "OutOfRange";
  case ErrorCode::UnknownItem:
    return "UnknownItem";
  case ErrorCode::UnknownBidder:
    return "UnknownBidder";
  case ErrorCode::DuplicateBid:
    return "DuplicateBid";
  case ErrorCode::MismatchedAuction:
    return "MismatchedAuction";
  case ErrorCode::TooManyItems:
    return "TooManyItems";
  case ErrorCode::InstanceTooLarge:
    return "InstanceTooLarge";
  case ErrorCode::MissingPlaceholder:
    return "MissingPlaceholder";
  case ErrorCode::ParseFailure:
    return "ParseFailure";
  case ErrorCode::AmbiguousAction:
    return "AmbiguousAction";
  case ErrorCode::UnknownItemName:
    return "UnknownItemName";
  case ErrorCode::Exhausted:
    return "Exhausted";
  case ErrorCode::AuthFailure:
    return "AuthFailure";
  case ErrorCode::Timeout:
    return "Timeout";
  case ErrorCode::ScriptExhausted:
    return "ScriptExhausted";
  case ErrorCode::EmptySeries:
    return "EmptySeries";
  case ErrorCode::IoFailure:
    return "IoFailure";
  }
  return "Unknown";
}

namespace {

std::string format_scaled(std::int64_t value, std::int64_t scale, int digits, bool trim)
{
  std::string out;
  if (value < 0)
  {
    out.push_back('-');
    value = -value;
  }
  out += std::to_string(value / scale);
  auto frac = value % scale;
  if (frac == 0)
  {
    return out;
  }
  std::string f = std::to_string(frac);
  f.insert(f.begin(), static_cast<std::size_t>(digits) - f.size(), '0');
  if (trim)
  {
    while (!f.empty() && f.back() == '0')
    {
      f.pop_back();
    }
  }
  return out + "." + f;
}

}  // namespace

std::string format_money(Money m)
{
  return format_scaled(m.cents, 100, 2, false);
}

std::string format_energy(Energy e)
{
  return format_scaled(e.wh, 1000, 3, true);
}

std::optional<Money> parse_money(std::string_view text)
{
  std::string digits;
  for (char c : text)
  {
    if (c == '$' || c == ',' || std::isspace(static_cast<unsigned char>(c)))
    {
      continue;
    }
    digits.push_back(c);
  }
  if (digits.empty())
  {
    return std::nullopt;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (digits[0] == '-' || digits[0] == '+')
  {
    negative = digits[0] == '-';
    pos      = 1;
  }
  std::int64_t whole = 0;
  std::int64_t frac  = 0;
  int frac_digits    = 0;
  bool seen_digit    = false;
  bool seen_point    = false;
  for (; pos < digits.size(); ++pos)
  {
    char const c = digits[pos];
    if (c == '.')
    {
      if (seen_point)
      {
        return std::nullopt;
      }
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
    {
      return std::nullopt;
    }
    seen_digit = true;
    if (seen_point)
    {
      if (++frac_digits > 2)
      {
        // "5.00" with extra zeros is still exact
        if (c != '0')
        {
          return std::nullopt;
        }
        continue;
      }
      frac = frac * 10 + (c - '0');
    }
    else
    {
      if (whole > (INT64_MAX / 1000))
      {
        return std::nullopt;
      }
      whole = whole * 10 + (c - '0');
    }
  }
  if (!seen_digit)
  {
    return std::nullopt;
  }
  if (frac_digits == 1)
  {
    frac *= 10;
  }
  auto cents = whole * 100 + frac;
  return Money{negative ? -cents : cents};
}

std::optional<Money> money_from_double(double units)
{
  if (!std::isfinite(units))
  {
    return std::nullopt;
  }
  double const scaled  = units * 100.0;
  double const rounded = std::round(scaled);
  if (std::fabs(scaled - rounded) > 1e-6)
  {
    return std::nullopt;
  }
  return Money{static_cast<std::int64_t>(rounded)};
}

std::optional<Energy> energy_from_kwh(double kwh)
{
  if (!std::isfinite(kwh))
  {
    return std::nullopt;
  }
  double const scaled  = kwh * 1000.0;
  double const rounded = std::round(scaled);
  if (std::fabs(scaled - rounded) > 1e-6)
  {
    return std::nullopt;
  }
  return Energy{static_cast<std::int64_t>(rounded)};
}

}  // namespace enbench
