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

#include "enbench/auction.hpp"
#include "enbench/units.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace enbench {

/// Private valuations of one bidder: per-item values plus optional explicit
/// bundle values (keys with two or more items).
struct ValuationProfile
{
  std::map<std::string, Money>           item_values;
  std::map<std::set<std::string>, Money> bundle_overrides;

  void validate() const;
};

/// Explicit bundle value if present, else the sum of item values; {} is 0.
Money bundle_value(ValuationProfile const &profile, std::set<std::string> const &subset);

/// How equal-surplus bundles are ranked. Include prefers larger bundles (so
/// zero-surplus items are demanded); Exclude prefers smaller ones.
enum class ZeroSurplusPolicy
{
  Include,
  Exclude,
};

struct ChosenBundle
{
  std::vector<std::string> items;  // in auction item order
  Money                    expected_surplus;

  bool operator==(ChosenBundle const &) const = default;
};

constexpr std::size_t kMaxExhaustiveItems = 20;

/// Surplus-maximising bundle at the view's minimum bids, by exhaustive
/// enumeration of all subsets. Ties go by cardinality (per `policy`), then to
/// the lexicographically smallest item-index list. Throws TooManyItems above
/// kMaxExhaustiveItems.
ChosenBundle straightforward_bundle(ValuationProfile const &profile, BidderView const &view,
                                    ZeroSurplusPolicy policy = ZeroSurplusPolicy::Include);

/// Minimum bids on every bundle item the bidder does not already hold.
std::vector<Bid> straightforward_bids(ChosenBundle const &bundle, BidderView const &view);

struct BruteForceResult
{
  std::vector<std::string> items;
  std::vector<Bid>         bids;
  Money                    surplus;
};

/// Reference solver for the joint bundle-and-bid problem: tries every subset
/// and every bid vector on the grid {r_k} u {j * step : r_k <= j * step <= cap}.
/// Throws InstanceTooLarge for more than 3 items or more than 50 grid steps.
BruteForceResult optimal_bundle_brute(ValuationProfile const &profile, BidderView const &view,
                                      Money bid_grid_step, Money bid_cap);

/// The straightforward bidding baseline as an auction participant.
class StraightforwardAgent : public BiddingAgent
{
public:
  StraightforwardAgent(BidderId id, ValuationProfile profile,
                       ZeroSurplusPolicy policy = ZeroSurplusPolicy::Include);

  BidderId id() const override
  {
    return id_;
  }
  AgentDecision decide(BidderView const &view) override;

private:
  BidderId          id_;
  ValuationProfile  profile_;
  ZeroSurplusPolicy policy_;
};

}  // namespace enbench
