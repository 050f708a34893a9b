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
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace enbench;

namespace {

BatteryConfig small_config(int horizon, int capacity_kwh)
{
  BatteryConfig c;
  c.capacity    = Energy::from_kwh(capacity_kwh);
  c.floor       = Energy{};
  c.step        = Energy::from_kwh(1);
  c.horizon     = horizon;
  c.initial_soc = Energy{};
  return c;
}

PriceModel two_levels(std::int64_t hi, std::int64_t lo, double p_hi)
{
  return {{Money::from_units(hi), Money::from_units(lo)}, {p_hi, 1.0 - p_hi}};
}

}  // namespace

TEST(SolveDp, LastDayWithEnergySells)
{
  auto const sol = solve_dp(small_config(1, 3), two_levels(10, 5, 0.5));
  for (std::size_t s = 1; s <= 3; ++s)
  {
    EXPECT_EQ(sol.policy.at(1, s, 0), DispatchAction::Discharge);
    EXPECT_EQ(sol.policy.at(1, s, 1), DispatchAction::Discharge);
  }
  // Q of selling one step: expected price 7.50 per kWh.
  EXPECT_DOUBLE_EQ(sol.values.at(1, 2), 750.0);
}

TEST(SolveDp, EmptyBatteryOnLastDayHolds)
{
  auto const sol = solve_dp(small_config(1, 3), two_levels(10, 5, 0.5));
  EXPECT_EQ(sol.policy.at(1, 0, 0), DispatchAction::Hold);
  EXPECT_EQ(sol.policy.at(1, 0, 1), DispatchAction::Hold);
  EXPECT_DOUBLE_EQ(sol.values.at(1, 0), 0.0);
}

TEST(SolveDp, TerminalValuesAreZero)
{
  auto const sol = solve_dp(small_config(3, 2), two_levels(10, 5, 0.5));
  for (std::size_t s = 0; s <= 2; ++s)
  {
    EXPECT_EQ(sol.values.at(4, s), 0.0);
  }
}

TEST(SolveDp, MatchesTreeOracleOnThreeDayExample)
{
  auto const          sol = solve_dp(small_config(3, 2), two_levels(10, 5, 0.5));
  oracle::TreeProblem p{3, 2, {1000, 500}, {1, 1}, 2};
  EXPECT_EQ(sol.values.at(1, 0) * oracle::tree_scale(p), oracle::tree_value(p, 0));
}

// Every small instance, every starting SoC, compared exactly.
TEST(SolveDp, MatchesTreeOracleExhaustively)
{
  int checked = 0;
  for (int T = 1; T <= 4; ++T)
  {
    for (int cap = 1; cap <= 3; ++cap)
    {
      for (auto [hi, lo] : {std::pair{10, 5}, std::pair{7, 3}, std::pair{12, 11}})
      {
        for (int w = 1; w <= 3; ++w)
        {
          auto const sol = solve_dp(small_config(T, cap), two_levels(hi, lo, w / 4.0));
          oracle::TreeProblem p{T, cap, {hi * 100, lo * 100}, {w, 4 - w}, 4};
          for (int s0 = 0; s0 <= cap; ++s0)
          {
            double const scaled = sol.values.at(1, static_cast<std::size_t>(s0)) *
                                  static_cast<double>(oracle::tree_scale(p));
            ASSERT_EQ(scaled, static_cast<double>(oracle::tree_value(p, s0)))
                << "T=" << T << " cap=" << cap << " prices " << hi << "/" << lo << " w=" << w
                << " s0=" << s0;
            ++checked;
          }
        }
      }
    }
  }
  EXPECT_EQ(checked, 4 * (2 + 3 + 4) * 3 * 3);
}

TEST(DpAction, LastDayDischargesWheneverPossible)
{
  auto const sol = solve_dp(BatteryConfig{}, PriceModel{});
  for (std::int64_t soc = 1; soc <= 10; ++soc)
  {
    EXPECT_EQ(dp_action(sol, 20, Energy::from_kwh(soc), Money::from_units(5)),
              DispatchAction::Discharge);
    EXPECT_EQ(dp_action(sol, 20, Energy::from_kwh(soc), Money::from_units(10)),
              DispatchAction::Discharge);
  }
}

TEST(DpAction, EarlyLowPriceWithEmptyBatteryCharges)
{
  auto const sol = solve_dp(BatteryConfig{}, PriceModel{});
  EXPECT_EQ(dp_action(sol, 1, Energy{}, Money::from_units(5)), DispatchAction::Charge);
  // The same reading on the oracle-sized problem: charging at the low price
  // on day 1 of 4 beats holding.
  auto const small = solve_dp(small_config(4, 3), two_levels(10, 5, 0.5));
  EXPECT_EQ(dp_action(small, 1, Energy{}, Money::from_units(5)), DispatchAction::Charge);
  oracle::TreeProblem p{4, 3, {1000, 500}, {1, 1}, 2};
  EXPECT_GT(oracle::tree_value(p, 0), 0);
}

TEST(DpAction, OffTableInputsAreOutOfRange)
{
  auto const sol = solve_dp(BatteryConfig{}, PriceModel{});
  for (auto fn : std::initializer_list<std::function<void()>>{
           [&] { dp_action(sol, 1, Energy::from_kwh(11), Money::from_units(5)); },
           [&] { dp_action(sol, 1, Energy::from_wh(500), Money::from_units(5)); },
           [&] { dp_action(sol, 0, Energy{}, Money::from_units(5)); },
           [&] { dp_action(sol, 21, Energy{}, Money::from_units(5)); },
           [&] { dp_action(sol, 1, Energy{}, Money::from_units(6)); }})
  {
    try
    {
      fn();
      ADD_FAILURE() << "expected OutOfRange";
    }
    catch (Error const &e)
    {
      EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
  }
}

TEST(Greedy, ChargesLowDischargesHighHoldsOtherwise)
{
  BatteryConfig const c;
  PriceModel const    m;
  EXPECT_EQ(greedy_action(Money::from_units(5), Energy::from_kwh(3), c, m), DispatchAction::Charge);
  EXPECT_EQ(greedy_action(Money::from_units(10), Energy{}, c, m), DispatchAction::Hold);
  EXPECT_EQ(greedy_action(Money::from_units(10), Energy::from_kwh(1), c, m),
            DispatchAction::Discharge);
  EXPECT_EQ(greedy_action(Money::from_units(5), Energy::from_kwh(10), c, m), DispatchAction::Hold);
}

TEST(Simulate, SingleLevelGreedyHoldsAllHorizon)
{
  Scenario sc;
  sc.prices               = {{Money::from_units(7)}, {1.0}};
  sc.battery.horizon      = 5;
  sc.battery.initial_soc  = Energy{};
  sc.intervention.blackout_days.clear();
  FunctionPolicy greedy([&](DayState const &s) {
    return greedy_action(s.price, s.soc, sc.battery, sc.prices);
  });
  auto const t = simulate_policy(greedy, sc, 3);
  ASSERT_EQ(t.days.size(), 5U);
  for (auto const &d : t.days)
  {
    EXPECT_EQ(d.applied, DispatchAction::Hold);
  }
  EXPECT_EQ(t.total_reward, Money{});
}

TEST(Simulate, SameSeedSameTrajectory)
{
  Scenario       sc;
  FunctionPolicy greedy([&](DayState const &s) {
    return greedy_action(s.price, s.soc, sc.battery, sc.prices);
  });
  EXPECT_EQ(simulate_policy(greedy, sc, 11), simulate_policy(greedy, sc, 11));
}

TEST(Simulate, InfeasibleRequestsAreCoercedToHold)
{
  Scenario sc;
  sc.intervention.blackout_days.clear();
  sc.battery.initial_soc = Energy::from_kwh(10);
  FunctionPolicy always_charge([](DayState const &) { return DispatchAction::Charge; });
  auto const     t = simulate_policy(always_charge, sc, 1);
  EXPECT_EQ(t.coerced_days, 20);
  EXPECT_EQ(t.days.front().requested, DispatchAction::Charge);
  EXPECT_EQ(t.days.front().applied, DispatchAction::Hold);
  EXPECT_TRUE(t.days.front().coerced);
}

TEST(Simulate, BlackoutUnawarePoliciesHoldOnBlackoutDays)
{
  Scenario       sc;  // blackout on day 10
  bool           asked_on_blackout = false;
  FunctionPolicy policy([&](DayState const &s) {
    asked_on_blackout = asked_on_blackout || s.blackout;
    return DispatchAction::Discharge;
  });
  auto const t = simulate_policy(policy, sc, 5);
  EXPECT_FALSE(asked_on_blackout);
  EXPECT_TRUE(t.days[9].blackout);
  EXPECT_EQ(t.days[9].applied, DispatchAction::Hold);
  EXPECT_EQ(t.days[9].soc_after, t.days[9].soc_before);
}

TEST(Simulate, DpBeatsGreedyOnAverage)
{
  Scenario sc;
  sc.intervention.blackout_days.clear();
  auto const     sol = solve_dp(sc.battery, sc.prices);
  FunctionPolicy dp([&](DayState const &s) { return dp_action(sol, s.day, s.soc, s.price); });
  FunctionPolicy greedy([&](DayState const &s) {
    return greedy_action(s.price, s.soc, sc.battery, sc.prices);
  });
  std::int64_t dp_sum = 0, greedy_sum = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed)
  {
    dp_sum += simulate_policy(dp, sc, seed).total_reward.cents;
    greedy_sum += simulate_policy(greedy, sc, seed).total_reward.cents;
  }
  EXPECT_GE(dp_sum, greedy_sum);
}
