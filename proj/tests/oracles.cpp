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

#include "oracles.hpp"

#include "enbench/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace oracle {
namespace {

std::int64_t ipow(std::int64_t base, int exp)
{
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i)
  {
    r *= base;
  }
  return r;
}

// Value of being at day t with SoC s having just observed price level i,
// scaled by denominator^(horizon - t).
std::int64_t node(TreeProblem const &p, int t, int s, std::size_t i)
{
  std::int64_t const scale = ipow(p.denominator, p.horizon - t);
  std::int64_t const price = p.price_cents[i];
  std::int64_t       best  = INT64_MIN;
  for (int move : {-1, 0, +1})  // -1 sell, 0 hold, +1 buy
  {
    int const next = s + move;
    if (next < 0 || next > p.capacity)
    {
      continue;
    }
    std::int64_t v = -move * price * scale;
    if (t < p.horizon)
    {
      for (std::size_t j = 0; j < p.price_cents.size(); ++j)
      {
        v += p.weights[j] * node(p, t + 1, next, j);
      }
    }
    best = std::max(best, v);
  }
  return best;
}

struct SaaState
{
  std::vector<std::int64_t> price;
  std::vector<int>          winner;
};

std::set<int> demand(SaaBidder const &b, int id, SaaState const &s,
                     std::vector<std::int64_t> const &increment)
{
  std::size_t const K          = s.price.size();
  std::int64_t      best_surp  = INT64_MIN;
  std::set<int>     best;
  std::vector<int>  best_list;
  for (unsigned mask = 0; mask < (1U << K); ++mask)
  {
    std::set<int>    subset;
    std::vector<int> list;
    std::int64_t     cost = 0;
    for (std::size_t k = 0; k < K; ++k)
    {
      if (mask & (1U << k))
      {
        subset.insert(static_cast<int>(k));
        list.push_back(static_cast<int>(k));
        cost += s.winner[k] == id ? s.price[k] : s.price[k] + increment[k];
      }
    }
    std::int64_t const surp = b.values.at(subset) - cost;
    bool const better = surp > best_surp ||
                        (surp == best_surp && (list.size() > best_list.size() ||
                                               (list.size() == best_list.size() && list < best_list)));
    if (better)
    {
      best_surp = surp;
      best      = subset;
      best_list = list;
    }
  }
  return best;
}

void explore(std::vector<SaaBidder> const &bidders, std::vector<std::int64_t> const &increment,
             SaaState const &s, int round, int max_rounds, std::set<SaaOutcome> &out)
{
  std::size_t const K = s.price.size();
  // bids[k] = list of (bidder, amount)
  std::vector<std::vector<std::pair<int, std::int64_t>>> bids(K);
  for (std::size_t n = 0; n < bidders.size(); ++n)
  {
    int const id = static_cast<int>(n) + 1;
    for (int k : demand(bidders[n], id, s, increment))
    {
      if (s.winner[k] != id)
      {
        bids[k].push_back({id, s.price[k] + increment[k]});
      }
    }
  }
  // Every combination of tie outcomes.
  std::vector<std::vector<int>> choices(K);
  std::vector<std::int64_t>     top(K, 0);
  for (std::size_t k = 0; k < K; ++k)
  {
    for (auto const &[id, amt] : bids[k])
    {
      top[k] = std::max(top[k], amt);
    }
    for (auto const &[id, amt] : bids[k])
    {
      if (amt == top[k] && amt > s.price[k])
      {
        choices[k].push_back(id);
      }
    }
    if (choices[k].empty())
    {
      choices[k].push_back(0);  // standing unchanged
    }
  }
  std::vector<std::size_t> pick(K, 0);
  while (true)
  {
    SaaState next    = s;
    bool     changed = false;
    for (std::size_t k = 0; k < K; ++k)
    {
      int const w = choices[k][pick[k]];
      if (w != 0)
      {
        next.price[k]  = top[k];
        next.winner[k] = w;
        changed        = true;
      }
    }
    if (!changed || round == max_rounds)
    {
      out.insert({next.winner, next.price, round});
    }
    else
    {
      explore(bidders, increment, next, round + 1, max_rounds, out);
    }
    std::size_t k = 0;
    for (; k < K; ++k)
    {
      if (++pick[k] < choices[k].size())
      {
        break;
      }
      pick[k] = 0;
    }
    if (k == K)
    {
      break;
    }
  }
}

}  // namespace

std::int64_t tree_scale(TreeProblem const &p)
{
  return ipow(p.denominator, p.horizon);
}

std::int64_t tree_value(TreeProblem const &p, int initial_soc)
{
  std::int64_t v = 0;
  for (std::size_t i = 0; i < p.price_cents.size(); ++i)
  {
    v += p.weights[i] * node(p, 1, initial_soc, i);
  }
  return v;
}

std::int64_t best_additive_surplus(std::vector<std::int64_t> const &values,
                                   std::vector<std::int64_t> const &minimums)
{
  std::int64_t best = 0;
  for (unsigned mask = 0; mask < (1U << values.size()); ++mask)
  {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < values.size(); ++k)
    {
      if (mask & (1U << k))
      {
        s += values[k] - minimums[k];
      }
    }
    best = std::max(best, s);
  }
  return best;
}

std::set<SaaOutcome> saa_all_outcomes(std::vector<SaaBidder> const &bidders,
                                      std::vector<std::int64_t> const &start,
                                      std::vector<std::int64_t> const &increment, int max_rounds)
{
  std::set<SaaOutcome> out;
  SaaState             s{start, std::vector<int>(start.size(), 0)};
  explore(bidders, increment, s, 1, max_rounds, out);
  return out;
}

std::vector<SaaBidder> table1_bidders()
{
  // Values in cents: bidder 1 A 4, B 6, AB 10; bidder 2 A 8, B 4, AB 12.
  SaaBidder b1{{{{}, 0}, {{0}, 400}, {{1}, 600}, {{0, 1}, 1000}}};
  SaaBidder b2{{{{}, 0}, {{0}, 800}, {{1}, 400}, {{0, 1}, 1200}}};
  return {b1, b2};
}

}  // namespace oracle

namespace fixtures {

using namespace enbench;

ValuationProfile table1_profile(int bidder)
{
  ValuationProfile p;
  if (bidder == 1)
  {
    p.item_values = {{"A", Money::from_units(4)}, {"B", Money::from_units(6)}};
    p.bundle_overrides[{"A", "B"}] = Money::from_units(10);
  }
  else
  {
    p.item_values = {{"A", Money::from_units(8)}, {"B", Money::from_units(4)}};
    p.bundle_overrides[{"A", "B"}] = Money::from_units(12);
  }
  return p;
}

std::string battery_icl_prompt()
{
  MemoryStore memory("Day", 20);
  memory.append({8, "Prices were high, so I sold one unit.", "price $10/kWh, action Discharge, reward $10, SoC 8 -> 7 kWh"});
  memory.append({9, "Kept my charge; I want a reserve.", "price $5/kWh, action Hold, reward $0, SoC 7 -> 7 kWh"});
  DayState day;
  day.day      = 10;
  day.price    = Money::from_units(10);
  day.soc      = Energy::from_kwh(7);
  day.blackout = true;
  auto const icl = builtin_icl_examples();
  return build_battery_prompt(builtin_persona("Thinker"), day, memory, &icl, BatteryConfig{},
                              PriceModel{});
}

std::string auction_prompt(ObjectiveKind kind)
{
  auto state =
      AuctionState::open({{"A", Money{}, Money::from_units(1)}, {"B", Money{}, Money::from_units(1)}},
                         {BidderId{1}, BidderId{2}});
  state.round       = 2;
  state.standing[0] = {Money::from_units(2), BidderId{2}};
  state.standing[1] = {Money::from_units(2), BidderId{1}};
  MemoryStore memory("Round", 0);
  memory.append({1, "Demanded both products at the opening price.", "bid A 1, B 1; now high bidder on B"});
  memory.append({2, "Lost A to bidder 2, still holding B.", "bid A 2; now high bidder on B"});
  return build_auction_prompt(AuctionObjective::builtin(kind), make_view(state, BidderId{1}),
                              memory, table1_profile(1));
}

std::vector<Golden> golden_prompts()
{
  return {{"prompt_battery_icl.txt", battery_icl_prompt()},
          {"prompt_saa_rule_centric.txt", auction_prompt(ObjectiveKind::RuleCentric)},
          {"prompt_saa_myopic_profit.txt", auction_prompt(ObjectiveKind::MyopicProfit)},
          {"prompt_saa_strategic_outcome.txt", auction_prompt(ObjectiveKind::StrategicOutcome)}};
}

std::filesystem::path golden_dir()
{
  return std::filesystem::path(ENBENCH_TEST_DIR) / "golden";
}

std::string read_file(std::filesystem::path const &path)
{
  std::ifstream      in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string battery_reply(std::string const &action)
{
  return "Thoughts: Looking at the price and my charge.\nAction: " + action +
         "\nReflection: Consistent with my goals.\nJournal: Remember today's choice.";
}

}  // namespace fixtures
