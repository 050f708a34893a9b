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

#include "enbench/battery.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace enbench {

/// Optimal expected value V[t][s] for days t = 1..T+1, in cents. Entries are
/// expectations, so they may carry fractional cents; with dyadic
/// probabilities (0.5, 0.25, ...) every entry is exactly representable.
class ValueTable
{
public:
  ValueTable() = default;
  ValueTable(int horizon, std::size_t grid_size);

  int horizon() const noexcept
  {
    return horizon_;
  }
  std::size_t grid_size() const noexcept
  {
    return grid_size_;
  }

  /// day in [1, horizon + 1]
  double  at(int day, std::size_t soc_index) const;
  double &at(int day, std::size_t soc_index);

  std::vector<double> const &values() const noexcept
  {
    return values_;
  }

private:
  int                 horizon_   = 0;
  std::size_t         grid_size_ = 0;
  std::vector<double> values_;
};

/// Arg-max action per (day, SoC index, price level index).
class PolicyTable
{
public:
  PolicyTable() = default;
  PolicyTable(int horizon, std::size_t grid_size, std::size_t levels);

  int horizon() const noexcept
  {
    return horizon_;
  }
  std::size_t grid_size() const noexcept
  {
    return grid_size_;
  }
  std::size_t level_count() const noexcept
  {
    return levels_;
  }

  DispatchAction  at(int day, std::size_t soc_index, std::size_t level) const;
  DispatchAction &at(int day, std::size_t soc_index, std::size_t level);

  std::vector<DispatchAction> const &actions() const noexcept
  {
    return actions_;
  }

private:
  std::size_t offset(int day, std::size_t soc_index, std::size_t level) const;

  int                         horizon_   = 0;
  std::size_t                 grid_size_ = 0;
  std::size_t                 levels_    = 0;
  std::vector<DispatchAction> actions_;
};

struct DpSolution
{
  BatteryConfig config;
  PriceModel    prices;
  ValueTable    values;
  PolicyTable   policy;
};

/// Backward induction over the SoC grid with the price observed before the
/// action. Blackouts are not part of the model. Equal-Q ties resolve to
/// Hold, then Discharge, then Charge.
DpSolution solve_dp(BatteryConfig const &config, PriceModel const &model);

/// Stored arg-max; OutOfRange when day, SoC or price is off the table.
DispatchAction dp_action(DpSolution const &solution, int day, Energy soc, Money price);

/// Charge at the lowest level, discharge at the highest, otherwise hold. A
/// single-level model holds; infeasible moves degrade to Hold.
DispatchAction greedy_action(Money price, Energy soc, BatteryConfig const &config,
                             PriceModel const &model);

struct DayRecord
{
  int            day = 0;
  Money          price;
  Energy         soc_before;
  DispatchAction requested = DispatchAction::Hold;
  DispatchAction applied   = DispatchAction::Hold;
  Money          reward;
  Energy         soc_after;
  bool           blackout = false;
  bool           coerced  = false;

  bool operator==(DayRecord const &) const = default;
};

struct Trajectory
{
  std::vector<DayRecord> days;
  Money                  total_reward;
  int                    coerced_days = 0;

  bool operator==(Trajectory const &) const = default;
};

/// Something that picks a dispatch action each day.
class DispatchPolicy
{
public:
  virtual ~DispatchPolicy() = default;

  virtual DispatchAction decide(DayState const &state) = 0;

  /// Called after each day is settled.
  virtual void observe(DayRecord const & /*record*/)
  {}

  /// Blackout-unaware policies are held on blackout days without being asked.
  virtual bool blackout_aware() const
  {
    return false;
  }
};

/// Wraps a plain function as a blackout-unaware policy.
class FunctionPolicy : public DispatchPolicy
{
public:
  explicit FunctionPolicy(std::function<DispatchAction(DayState const &)> fn)
    : fn_(std::move(fn))
  {}

  DispatchAction decide(DayState const &state) override
  {
    return fn_(state);
  }

private:
  std::function<DispatchAction(DayState const &)> fn_;
};

/// Runs one trajectory over a fixed price path (one price per day). Infeasible
/// requests are coerced to Hold and logged.
Trajectory simulate_policy(DispatchPolicy &policy, Scenario const &scenario,
                           std::span<Money const> price_path);

/// Samples the price path from `seed` and simulates.
Trajectory simulate_policy(DispatchPolicy &policy, Scenario const &scenario, std::uint64_t seed);

}  // namespace enbench
