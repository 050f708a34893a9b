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

#include "enbench/rng.hpp"
#include "enbench/units.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

namespace enbench {

/// Discrete daily price distribution ($/kWh levels stored as cents per kWh).
struct PriceModel
{
  std::vector<Money>  levels{Money::from_units(10), Money::from_units(5)};
  std::vector<double> probabilities{0.5, 0.5};

  /// Throws InvalidConfig unless levels are positive, non-empty, distinct and
  /// probabilities sum to one within 1e-12.
  void validate() const;

  Money                      min_level() const;
  Money                      max_level() const;
  std::optional<std::size_t> level_index(Money price) const;
};

struct BatteryConfig
{
  Energy capacity    = Energy::from_kwh(10);
  Energy floor       = Energy::from_kwh(0);
  Energy step        = Energy::from_kwh(1);
  int    horizon     = 20;
  Energy initial_soc = Energy::from_kwh(5);

  /// Throws InvalidConfig (bounds) or InvalidGrid (capacity - floor not a
  /// multiple of step).
  void validate() const;

  std::size_t                grid_size() const;
  Energy                     soc_at(std::size_t index) const;
  std::optional<std::size_t> grid_index(Energy soc) const;
};

enum class DispatchAction
{
  Charge,
  Discharge,
  Hold,
  ServeLoad,
};

std::string_view              to_string(DispatchAction action) noexcept;
std::optional<DispatchAction> dispatch_action_from_string(std::string_view name) noexcept;

struct DayState
{
  int    day = 1;
  Money  price;
  Energy soc;
  bool   blackout = false;
};

struct Intervention
{
  std::set<int> blackout_days{10};

  bool is_blackout(int day) const
  {
    return blackout_days.count(day) != 0;
  }
  void validate(int horizon) const;
};

struct StepResult
{
  Energy next_soc;
  Money  reward;

  bool operator==(StepResult const &) const = default;
};

/// Validates a battery/price pairing: each level times the step must be a
/// whole number of cents.
void validate_pairing(BatteryConfig const &config, PriceModel const &model);

Money              sample_price(PriceModel const &model, Rng &rng);
std::vector<Money> sample_price_path(PriceModel const &model, int horizon, Rng &rng);

/// Grid revenue of moving `energy` at `price`: price * energy, exact.
Money trade_value(Money price, Energy energy);

bool       is_feasible(DayState const &state, DispatchAction action, BatteryConfig const &config);
StepResult step(DayState const &state, DispatchAction action, BatteryConfig const &config);

/// Unused stored energy is never compensated.
constexpr Money terminal_settlement(Energy /*final_soc*/) noexcept
{
  return Money{};
}

/// A complete battery scenario: what the environment needs for one run.
struct Scenario
{
  BatteryConfig battery;
  PriceModel    prices;
  Intervention  intervention;
  std::uint64_t seed = 0;

  void validate() const;
};

}  // namespace enbench
