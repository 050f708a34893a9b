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

#include "enbench/battery.hpp"
#include "enbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace enbench {

void PriceModel::validate() const
{
  if (levels.empty())
  {
    throw Error(ErrorCode::InvalidConfig, "price model needs at least one level");
  }
  if (levels.size() != probabilities.size())
  {
    throw Error(ErrorCode::InvalidConfig, "price levels and probabilities differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i)
  {
    if (levels[i].cents <= 0)
    {
      throw Error(ErrorCode::InvalidConfig, "price levels must be strictly positive");
    }
    if (!(probabilities[i] >= 0.0 && probabilities[i] <= 1.0))
    {
      throw Error(ErrorCode::InvalidConfig, "probabilities must lie in [0, 1]");
    }
    for (std::size_t j = 0; j < i; ++j)
    {
      if (levels[j] == levels[i])
      {
        throw Error(ErrorCode::InvalidConfig, "price levels must be distinct");
      }
    }
    total += probabilities[i];
  }
  if (std::fabs(total - 1.0) > 1e-12)
  {
    throw Error(ErrorCode::InvalidConfig, "probabilities must sum to 1");
  }
}

Money PriceModel::min_level() const
{
  return *std::min_element(levels.begin(), levels.end());
}

Money PriceModel::max_level() const
{
  return *std::max_element(levels.begin(), levels.end());
}

std::optional<std::size_t> PriceModel::level_index(Money price) const
{
  auto it = std::find(levels.begin(), levels.end(), price);
  if (it == levels.end())
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - levels.begin());
}

void BatteryConfig::validate() const
{
  if (step.wh <= 0)
  {
    throw Error(ErrorCode::InvalidConfig, "step must be positive");
  }
  if (horizon < 1)
  {
    throw Error(ErrorCode::InvalidConfig, "horizon must be at least one day");
  }
  if (floor.wh < 0 || floor > capacity)
  {
    throw Error(ErrorCode::InvalidConfig, "need 0 <= floor <= capacity");
  }
  if (initial_soc < floor || initial_soc > capacity)
  {
    throw Error(ErrorCode::InvalidConfig, "initial SoC outside [floor, capacity]");
  }
  if ((capacity - floor).wh % step.wh != 0)
  {
    throw Error(ErrorCode::InvalidGrid, "capacity - floor is not a multiple of step");
  }
  if ((initial_soc - floor).wh % step.wh != 0)
  {
    throw Error(ErrorCode::InvalidGrid, "initial SoC is not on the step grid");
  }
}

std::size_t BatteryConfig::grid_size() const
{
  return static_cast<std::size_t>((capacity - floor).wh / step.wh) + 1;
}

Energy BatteryConfig::soc_at(std::size_t index) const
{
  return Energy{floor.wh + static_cast<std::int64_t>(index) * step.wh};
}

std::optional<std::size_t> BatteryConfig::grid_index(Energy soc) const
{
  if (soc < floor || soc > capacity || (soc - floor).wh % step.wh != 0)
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>((soc - floor).wh / step.wh);
}

std::string_view to_string(DispatchAction action) noexcept
{
  switch (action)
  {
  case DispatchAction::Charge:
    return "Charge";
  case DispatchAction::Discharge:
    return "Discharge";
  case DispatchAction::Hold:
    return "Hold";
  case DispatchAction::ServeLoad:
    return "ServeLoad";
  }
  return "Hold";
}

std::optional<DispatchAction> dispatch_action_from_string(std::string_view name) noexcept
{
  for (auto a : {DispatchAction::Charge, DispatchAction::Discharge, DispatchAction::Hold,
                 DispatchAction::ServeLoad})
  {
    if (to_string(a) == name)
    {
      return a;
    }
  }
  return std::nullopt;
}

void Intervention::validate(int horizon) const
{
  for (int d : blackout_days)
  {
    if (d < 1 || d > horizon)
    {
      throw Error(ErrorCode::InvalidConfig,
                  "blackout day " + std::to_string(d) + " outside [1, horizon]");
    }
  }
}

void validate_pairing(BatteryConfig const &config, PriceModel const &model)
{
  for (auto level : model.levels)
  {
    if ((level.cents * config.step.wh) % 1000 != 0)
    {
      throw Error(ErrorCode::InvalidConfig,
                  "price level x step is not a whole number of cents");
    }
  }
}

Money sample_price(PriceModel const &model, Rng &rng)
{
  double const u   = uniform_unit(rng);
  double       acc = 0.0;
  for (std::size_t i = 0; i + 1 < model.levels.size(); ++i)
  {
    acc += model.probabilities[i];
    if (u < acc)
    {
      return model.levels[i];
    }
  }
  return model.levels.back();
}

std::vector<Money> sample_price_path(PriceModel const &model, int horizon, Rng &rng)
{
  std::vector<Money> path;
  path.reserve(static_cast<std::size_t>(horizon));
  for (int d = 0; d < horizon; ++d)
  {
    path.push_back(sample_price(model, rng));
  }
  return path;
}

Money trade_value(Money price, Energy energy)
{
  auto const product = price.cents * energy.wh;
  if (product % 1000 != 0)
  {
    throw Error(ErrorCode::InvalidConfig, "trade value is not a whole number of cents");
  }
  return Money{product / 1000};
}

bool is_feasible(DayState const &state, DispatchAction action, BatteryConfig const &config)
{
  switch (action)
  {
  case DispatchAction::Hold:
    return true;
  case DispatchAction::ServeLoad:
    return state.blackout;
  case DispatchAction::Charge:
    return !state.blackout && state.soc + config.step <= config.capacity;
  case DispatchAction::Discharge:
    return !state.blackout && state.soc - config.step >= config.floor;
  }
  return false;
}

StepResult step(DayState const &state, DispatchAction action, BatteryConfig const &config)
{
  if (state.soc < config.floor || state.soc > config.capacity)
  {
    throw Error(ErrorCode::OutOfRange, "SoC outside [floor, capacity]");
  }
  if (!is_feasible(state, action, config))
  {
    throw Error(ErrorCode::InfeasibleAction,
                std::string(to_string(action)) + " on day " + std::to_string(state.day) +
                    " at SoC " + format_energy(state.soc) + " kWh" +
                    (state.blackout ? " (blackout)" : ""));
  }
  switch (action)
  {
  case DispatchAction::Charge:
    return {state.soc + config.step, -trade_value(state.price, config.step)};
  case DispatchAction::Discharge:
    return {state.soc - config.step, trade_value(state.price, config.step)};
  case DispatchAction::ServeLoad:
    return {config.floor, Money{}};
  case DispatchAction::Hold:
    break;
  }
  return {state.soc, Money{}};
}

void Scenario::validate() const
{
  battery.validate();
  prices.validate();
  intervention.validate(battery.horizon);
  validate_pairing(battery, prices);
}

}  // namespace enbench
