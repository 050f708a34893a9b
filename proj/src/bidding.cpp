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

#include "enbench/bidding.hpp"
#include "enbench/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

namespace enbench {

void ValuationProfile::validate() const
{
  for (auto const &[name, value] : item_values)
  {
    if (value.cents < 0)
    {
      throw Error(ErrorCode::InvalidConfig, "negative value for " + name);
    }
  }
  for (auto const &[items, value] : bundle_overrides)
  {
    if (items.size() < 2)
    {
      throw Error(ErrorCode::InvalidConfig, "bundle overrides need at least two items");
    }
    if (value.cents < 0)
    {
      throw Error(ErrorCode::InvalidConfig, "negative bundle value");
    }
    for (auto const &name : items)
    {
      if (item_values.count(name) == 0)
      {
        throw Error(ErrorCode::UnknownItem, name + " in bundle override");
      }
    }
  }
}

Money bundle_value(ValuationProfile const &profile, std::set<std::string> const &subset)
{
  Money sum;
  for (auto const &name : subset)
  {
    auto it = profile.item_values.find(name);
    if (it == profile.item_values.end())
    {
      throw Error(ErrorCode::UnknownItem, name);
    }
    sum += it->second;
  }
  if (auto it = profile.bundle_overrides.find(subset); it != profile.bundle_overrides.end())
  {
    return it->second;
  }
  return sum;
}

namespace {

std::vector<std::size_t> mask_indices(std::uint32_t mask, std::size_t k)
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i)
  {
    if ((mask >> i) & 1U)
    {
      out.push_back(i);
    }
  }
  return out;
}

/// True when candidate (surplus, indices) beats the incumbent.
bool better(Money s, std::vector<std::size_t> const &idx, Money best_s,
            std::vector<std::size_t> const &best_idx, ZeroSurplusPolicy policy)
{
  if (s != best_s)
  {
    return s > best_s;
  }
  if (idx.size() != best_idx.size())
  {
    return policy == ZeroSurplusPolicy::Include ? idx.size() > best_idx.size()
                                                : idx.size() < best_idx.size();
  }
  return std::lexicographical_compare(idx.begin(), idx.end(), best_idx.begin(), best_idx.end());
}

std::set<std::string> names_of(BidderView const &view, std::vector<std::size_t> const &idx)
{
  std::set<std::string> out;
  for (auto i : idx)
  {
    out.insert(view.items[i].name);
  }
  return out;
}

}  // namespace

ChosenBundle straightforward_bundle(ValuationProfile const &profile, BidderView const &view,
                                    ZeroSurplusPolicy policy)
{
  auto const k = view.items.size();
  if (k > kMaxExhaustiveItems)
  {
    throw Error(ErrorCode::TooManyItems, std::to_string(k) + " items");
  }

  Money                    best_surplus;  // the empty bundle
  std::vector<std::size_t> best_idx;
  for (std::uint32_t mask = 1; mask < (1U << k); ++mask)
  {
    auto  idx     = mask_indices(mask, k);
    Money surplus = bundle_value(profile, names_of(view, idx));
    for (auto i : idx)
    {
      surplus -= view.items[i].min_bid;
    }
    if (better(surplus, idx, best_surplus, best_idx, policy))
    {
      best_surplus = surplus;
      best_idx     = std::move(idx);
    }
  }

  ChosenBundle out;
  out.expected_surplus = best_surplus;
  for (auto i : best_idx)
  {
    out.items.push_back(view.items[i].name);
  }
  return out;
}

std::vector<Bid> straightforward_bids(ChosenBundle const &bundle, BidderView const &view)
{
  std::vector<Bid> bids;
  for (auto const &name : bundle.items)
  {
    auto const *item = view.find(name);
    if (item == nullptr)
    {
      throw Error(ErrorCode::UnknownItem, name);
    }
    if (item->high_bidder && *item->high_bidder == view.bidder)
    {
      continue;
    }
    bids.push_back({view.bidder, name, item->min_bid});
  }
  return bids;
}

BruteForceResult optimal_bundle_brute(ValuationProfile const &profile, BidderView const &view,
                                      Money bid_grid_step, Money bid_cap)
{
  auto const k = view.items.size();
  if (k > 3 || bid_grid_step.cents <= 0 || bid_cap.cents / bid_grid_step.cents > 50)
  {
    throw Error(ErrorCode::InstanceTooLarge, "brute force is limited to 3 items and 50 grid steps");
  }

  // Candidate bids per item, ascending.
  std::vector<std::vector<Money>> grid(k);
  for (std::size_t i = 0; i < k; ++i)
  {
    auto const r = view.items[i].min_bid;
    if (r <= bid_cap)
    {
      grid[i].push_back(r);
    }
    for (std::int64_t c = 0; c <= bid_cap.cents; c += bid_grid_step.cents)
    {
      if (c > r.cents)
      {
        grid[i].push_back(Money{c});
      }
    }
  }

  BruteForceResult         best;
  std::vector<std::size_t> best_idx;
  for (std::uint32_t mask = 1; mask < (1U << k); ++mask)
  {
    auto idx = mask_indices(mask, k);
    bool ok  = std::all_of(idx.begin(), idx.end(), [&](auto i) { return !grid[i].empty(); });
    if (!ok)
    {
      continue;
    }
    Money const value = bundle_value(profile, names_of(view, idx));

    std::vector<std::size_t> choice(idx.size(), 0);
    std::function<void(std::size_t, Money)> visit = [&](std::size_t pos, Money paid) {
      if (pos == idx.size())
      {
        Money const surplus = value - paid;
        if (better(surplus, idx, best.surplus, best_idx, ZeroSurplusPolicy::Include))
        {
          best.surplus = surplus;
          best_idx     = idx;
          best.items.clear();
          best.bids.clear();
          for (std::size_t j = 0; j < idx.size(); ++j)
          {
            auto const &item = view.items[idx[j]];
            best.items.push_back(item.name);
            best.bids.push_back({view.bidder, item.name, grid[idx[j]][choice[j]]});
          }
        }
        return;
      }
      for (std::size_t g = 0; g < grid[idx[pos]].size(); ++g)
      {
        choice[pos] = g;
        visit(pos + 1, paid + grid[idx[pos]][g]);
      }
    };
    visit(0, Money{});
  }
  return best;
}

StraightforwardAgent::StraightforwardAgent(BidderId id, ValuationProfile profile,
                                           ZeroSurplusPolicy policy)
  : id_(id)
  , profile_(std::move(profile))
  , policy_(policy)
{
  profile_.validate();
}

AgentDecision StraightforwardAgent::decide(BidderView const &view)
{
  auto bundle = straightforward_bundle(profile_, view, policy_);
  return {straightforward_bids(bundle, view), {}};
}

}  // namespace enbench
