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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace enbench {

/// Money in integer cents. All reward and price arithmetic stays exact.
struct Money
{
  std::int64_t cents = 0;

  static constexpr Money from_cents(std::int64_t c) noexcept
  {
    return Money{c};
  }
  static constexpr Money from_units(std::int64_t whole) noexcept
  {
    return Money{whole * 100};
  }

  constexpr double as_units() const noexcept
  {
    return static_cast<double>(cents) / 100.0;
  }

  constexpr auto operator<=>(Money const &) const = default;

  constexpr Money operator+(Money o) const noexcept
  {
    return Money{cents + o.cents};
  }
  constexpr Money operator-(Money o) const noexcept
  {
    return Money{cents - o.cents};
  }
  constexpr Money operator-() const noexcept
  {
    return Money{-cents};
  }
  constexpr Money &operator+=(Money o) noexcept
  {
    cents += o.cents;
    return *this;
  }
  constexpr Money &operator-=(Money o) noexcept
  {
    cents -= o.cents;
    return *this;
  }
};

/// Stored energy in integer watt-hours.
struct Energy
{
  std::int64_t wh = 0;

  static constexpr Energy from_wh(std::int64_t w) noexcept
  {
    return Energy{w};
  }
  static constexpr Energy from_kwh(std::int64_t k) noexcept
  {
    return Energy{k * 1000};
  }

  constexpr double as_kwh() const noexcept
  {
    return static_cast<double>(wh) / 1000.0;
  }

  constexpr auto operator<=>(Energy const &) const = default;

  constexpr Energy operator+(Energy o) const noexcept
  {
    return Energy{wh + o.wh};
  }
  constexpr Energy operator-(Energy o) const noexcept
  {
    return Energy{wh - o.wh};
  }
};

/// "4", "4.50", "-10": whole amounts print without decimals.
std::string format_money(Money m);

/// "5", "0.5", "2.25": kWh with trailing zeros trimmed.
std::string format_energy(Energy e);

/// Parses a decimal amount ("3", "3.5", "$4.25", "1,000") into cents.
/// Returns nullopt on malformed text or more than two decimals.
std::optional<Money> parse_money(std::string_view text);

/// Converts a JSON-style decimal in whole units to cents; nullopt when the
/// value is not a whole number of cents.
std::optional<Money> money_from_double(double units);

/// Converts kWh to Wh; nullopt when not a whole number of Wh.
std::optional<Energy> energy_from_kwh(double kwh);

}  // namespace enbench
