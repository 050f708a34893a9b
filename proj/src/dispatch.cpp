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

#include "enbench/dispatch.hpp"
#include "enbench/errors.hpp"
#include "enbench/log.hpp"

#include <array>
#include <string>

namespace enbench {

ValueTable::ValueTable(int horizon, std::size_t grid_size)
  : horizon_(horizon)
  , grid_size_(grid_size)
  , values_(static_cast<std::size_t>(horizon + 1) * grid_size, 0.0)
{}

double ValueTable::at(int day, std::size_t soc_index) const
{
  if (day < 1 || day > horizon_ + 1 || soc_index >= grid_size_)
  {
    throw Error(ErrorCode::OutOfRange, "value table index");
  }
  return values_[static_cast<std::size_t>(day - 1) * grid_size_ + soc_index];
}

double &ValueTable::at(int day, std::size_t soc_index)
{
  if (day < 1 || day > horizon_ + 1 || soc_index >= grid_size_)
  {
    throw Error(ErrorCode::OutOfRange, "value table index");
  }
  return values_[static_cast<std::size_t>(day - 1) * grid_size_ + soc_index];
}

PolicyTable::PolicyTable(int horizon, std::size_t grid_size, std::size_t levels)
  : horizon_(horizon)
  , grid_size_(grid_size)
  , levels_(levels)
  , actions_(static_cast<std::size_t>(horizon) * grid_size * levels, DispatchAction::Hold)
{}

std::size_t PolicyTable::offset(int day, std::size_t soc_index, std::size_t level) const
{
  if (day < 1 || day > horizon_ || soc_index >= grid_size_ || level >= levels_)
  {
    throw Error(ErrorCode::OutOfRange, "policy table index");
  }
  return (static_cast<std::size_t>(day - 1) * grid_size_ + soc_index) * levels_ + level;
}

DispatchAction PolicyTable::at(int day, std::size_t soc_index, std::size_t level) const
{
  return actions_[offset(day, soc_index, level)];
}

DispatchAction &PolicyTable::at(int day, std::size_t soc_index, std::size_t level)
{
  return actions_[offset(day, soc_index, level)];
}

DpSolution solve_dp(BatteryConfig const &config, PriceModel const &model)
{
  config.validate();
  model.validate();
  validate_pairing(config, model);

  auto const n = config.grid_size();
  DpSolution sol{config, model, ValueTable(config.horizon, n),
                 PolicyTable(config.horizon, n, model.levels.size())};

  // Hold first so that it wins exact ties, then Discharge, then Charge.
  constexpr std::array<DispatchAction, 3> order{DispatchAction::Hold, DispatchAction::Discharge,
                                                DispatchAction::Charge};

  for (int t = config.horizon; t >= 1; --t)
  {
    for (std::size_t s = 0; s < n; ++s)
    {
      double expected = 0.0;
      for (std::size_t l = 0; l < model.levels.size(); ++l)
      {
        DayState const state{t, model.levels[l], config.soc_at(s), false};
        bool           have = false;
        double         best = 0.0;
        DispatchAction arg  = DispatchAction::Hold;
        for (auto action : order)
        {
          if (!is_feasible(state, action, config))
          {
            continue;
          }
          auto const   r    = step(state, action, config);
          double const cont = sol.values.at(t + 1, *config.grid_index(r.next_soc));
          double const q    = static_cast<double>(r.reward.cents) + cont;
          if (!have || q > best)
          {
            have = true;
            best = q;
            arg  = action;
          }
        }
        sol.policy.at(t, s, l) = arg;
        expected += model.probabilities[l] * best;
      }
      sol.values.at(t, s) = expected;
    }
  }
  return sol;
}

DispatchAction dp_action(DpSolution const &solution, int day, Energy soc, Money price)
{
  auto const idx = solution.config.grid_index(soc);
  if (!idx)
  {
    throw Error(ErrorCode::OutOfRange, "SoC " + format_energy(soc) + " kWh is off the grid");
  }
  auto const level = solution.prices.level_index(price);
  if (!level)
  {
    throw Error(ErrorCode::OutOfRange, "price " + format_money(price) + " is not a price level");
  }
  if (day < 1 || day > solution.config.horizon)
  {
    throw Error(ErrorCode::OutOfRange, "day " + std::to_string(day) + " outside horizon");
  }
  return solution.policy.at(day, *idx, *level);
}

DispatchAction greedy_action(Money price, Energy soc, BatteryConfig const &config,
                             PriceModel const &model)
{
  auto const lo = model.min_level();
  auto const hi = model.max_level();
  if (lo == hi)
  {
    return DispatchAction::Hold;
  }
  DayState const state{1, price, soc, false};
  if (price == lo && is_feasible(state, DispatchAction::Charge, config))
  {
    return DispatchAction::Charge;
  }
  if (price == hi && is_feasible(state, DispatchAction::Discharge, config))
  {
    return DispatchAction::Discharge;
  }
  return DispatchAction::Hold;
}

Trajectory simulate_policy(DispatchPolicy &policy, Scenario const &scenario,
                           std::span<Money const> price_path)
{
  auto const &config = scenario.battery;
  if (price_path.size() < static_cast<std::size_t>(config.horizon))
  {
    throw Error(ErrorCode::InvalidConfig, "price path shorter than the horizon");
  }

  Trajectory traj;
  traj.days.reserve(static_cast<std::size_t>(config.horizon));
  Energy soc = config.initial_soc;
  for (int day = 1; day <= config.horizon; ++day)
  {
    DayState const state{day, price_path[static_cast<std::size_t>(day - 1)], soc,
                         scenario.intervention.is_blackout(day)};

    DayRecord rec;
    rec.day        = day;
    rec.price      = state.price;
    rec.soc_before = soc;
    rec.blackout   = state.blackout;

    if (state.blackout && !policy.blackout_aware())
    {
      rec.requested = DispatchAction::Hold;
    }
    else
    {
      rec.requested = policy.decide(state);
    }
    rec.applied = rec.requested;
    if (!is_feasible(state, rec.applied, config))
    {
      log_message(LogLevel::Warning, "day " + std::to_string(day) + ": " +
                                         std::string(to_string(rec.requested)) +
                                         " infeasible, holding");
      rec.applied = DispatchAction::Hold;
      rec.coerced = true;
      ++traj.coerced_days;
    }
    auto const r  = step(state, rec.applied, config);
    rec.reward    = r.reward;
    rec.soc_after = r.next_soc;
    soc           = r.next_soc;
    traj.total_reward += r.reward;
    traj.days.push_back(rec);
    policy.observe(rec);
  }
  traj.total_reward += terminal_settlement(soc);
  return traj;
}

Trajectory simulate_policy(DispatchPolicy &policy, Scenario const &scenario, std::uint64_t seed)
{
  Rng  rng(seed);
  auto path = sample_price_path(scenario.prices, scenario.battery.horizon, rng);
  return simulate_policy(policy, scenario, path);
}

}  // namespace enbench
