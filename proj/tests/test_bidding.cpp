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
#include "oracles.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>

using namespace enbench;

namespace {

AuctionState table1_state()
{
  return AuctionState::open({{"A", Money{}, Money::from_units(1)}, {"B", Money{}, Money::from_units(1)}},
                            {BidderId{1}, BidderId{2}});
}

ErrorCode code_of(auto &&fn)
{
  try
  {
    fn();
  }
  catch (Error const &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoFailure;
}

}  // namespace

TEST(BundleValue, OverridesWinOverSums)
{
  auto const p1 = fixtures::table1_profile(1);
  EXPECT_EQ(bundle_value(p1, {}), Money{});
  EXPECT_EQ(bundle_value(p1, {"A"}), Money::from_units(4));
  EXPECT_EQ(bundle_value(p1, {"B"}), Money::from_units(6));
  EXPECT_EQ(bundle_value(p1, {"A", "B"}), Money::from_units(10));
  auto const p2 = fixtures::table1_profile(2);
  EXPECT_EQ(bundle_value(p2, {"A", "B"}), Money::from_units(12));
  ValuationProfile additive{{{"A", Money::from_units(2)}, {"B", Money::from_units(3)}}, {}};
  EXPECT_EQ(bundle_value(additive, {"A", "B"}), Money::from_units(5));
  EXPECT_EQ(code_of([&] { bundle_value(additive, {"Z"}); }), ErrorCode::UnknownItem);
}

TEST(ValuationProfile, ValidationRejectsBadTables)
{
  ValuationProfile neg{{{"A", Money{-1}}}, {}};
  EXPECT_EQ(code_of([&] { neg.validate(); }), ErrorCode::InvalidConfig);
  ValuationProfile single{{{"A", Money{1}}}, {{{"A"}, Money{1}}}};
  EXPECT_EQ(code_of([&] { single.validate(); }), ErrorCode::InvalidConfig);
  ValuationProfile unknown{{{"A", Money{1}}}, {{{"A", "Q"}, Money{1}}}};
  EXPECT_EQ(code_of([&] { unknown.validate(); }), ErrorCode::UnknownItem);
}

TEST(StraightforwardBundle, OpeningRoundDemandsBothItems)
{
  auto const s = table1_state();
  // Bidder 1 at minimums 1/1: A 3, B 5, AB 8.
  auto const b1 = straightforward_bundle(fixtures::table1_profile(1), make_view(s, BidderId{1}));
  EXPECT_EQ(b1.items, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(b1.expected_surplus, Money::from_units(8));
  // Bidder 2: A 7, B 3, AB 10.
  auto const b2 = straightforward_bundle(fixtures::table1_profile(2), make_view(s, BidderId{2}));
  EXPECT_EQ(b2.items, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(b2.expected_surplus, Money::from_units(10));
}

TEST(StraightforwardBundle, HeldItemsAreCostedAtTheStandingPrice)
{
  auto s        = table1_state();
  s.standing[0] = {Money::from_units(5), BidderId{2}};
  s.standing[1] = {Money::from_units(3), BidderId{1}};
  // Bidder 1: A costs 6 (value 4), B costs 3 (value 6), AB 9 (value 10).
  auto const b = straightforward_bundle(fixtures::table1_profile(1), make_view(s, BidderId{1}));
  EXPECT_EQ(b.items, (std::vector<std::string>{"B"}));
  EXPECT_EQ(b.expected_surplus, Money::from_units(3));
  EXPECT_TRUE(straightforward_bids(b, make_view(s, BidderId{1})).empty());
}

TEST(StraightforwardBundle, ZeroSurplusPolicyDecidesTies)
{
  auto             s = table1_state();
  ValuationProfile p{{{"A", Money::from_units(1)}, {"B", Money::from_units(0)}}, {}};
  auto const       v = make_view(s, BidderId{1});
  EXPECT_EQ(straightforward_bundle(p, v, ZeroSurplusPolicy::Include).items,
            (std::vector<std::string>{"A"}));
  EXPECT_TRUE(straightforward_bundle(p, v, ZeroSurplusPolicy::Exclude).items.empty());
}

TEST(StraightforwardBundle, EqualSurplusSameSizeGoesToEarlierItems)
{
  auto             s = table1_state();
  ValuationProfile p{{{"A", Money::from_units(3)}, {"B", Money::from_units(3)}},
                     {{{"A", "B"}, Money::from_units(3)}}};
  // A and B each give 2; AB gives 1.
  auto const b = straightforward_bundle(p, make_view(s, BidderId{1}));
  EXPECT_EQ(b.items, (std::vector<std::string>{"A"}));
}

TEST(StraightforwardBids, MinimumBidsOnUnheldBundleItems)
{
  auto s        = table1_state();
  s.standing[1] = {Money::from_units(2), BidderId{1}};
  auto const v  = make_view(s, BidderId{1});
  auto const bids = straightforward_bids({{"A", "B"}, Money{}}, v);
  ASSERT_EQ(bids.size(), 1U);
  EXPECT_EQ(bids[0], (Bid{BidderId{1}, "A", Money::from_units(1)}));
}

TEST(StraightforwardBundle, TooManyItemsIsRefused)
{
  std::vector<Item> items;
  for (int k = 0; k < 21; ++k)
  {
    items.push_back({"I" + std::to_string(k), Money{}, Money::from_units(1)});
  }
  auto const s = AuctionState::open(items, {BidderId{1}});
  EXPECT_EQ(code_of([&] { straightforward_bundle(ValuationProfile{}, make_view(s, BidderId{1})); }),
            ErrorCode::TooManyItems);
}

TEST(BruteForce, AgreesWithStraightforwardOnTable1Opening)
{
  auto const s = table1_state();
  auto const r = optimal_bundle_brute(fixtures::table1_profile(2), make_view(s, BidderId{2}),
                                      Money::from_units(1), Money::from_units(12));
  EXPECT_EQ(r.surplus, Money::from_units(10));
  EXPECT_EQ(r.items, (std::vector<std::string>{"A", "B"}));
}

TEST(BruteForce, RefusesLargeInstances)
{
  auto const s = table1_state();
  EXPECT_EQ(code_of([&] {
              optimal_bundle_brute(fixtures::table1_profile(1), make_view(s, BidderId{1}),
                                   Money{1}, Money::from_units(10));
            }),
            ErrorCode::InstanceTooLarge);
}

TEST(StraightforwardAgent, BidsItsBundleAtMinimums)
{
  StraightforwardAgent agent(BidderId{1}, fixtures::table1_profile(1));
  auto const           d = agent.decide(make_view(table1_state(), BidderId{1}));
  ASSERT_EQ(d.bids.size(), 2U);
  EXPECT_EQ(d.bids[0], (Bid{BidderId{1}, "A", Money::from_units(1)}));
  EXPECT_EQ(d.bids[1], (Bid{BidderId{1}, "B", Money::from_units(1)}));
}

TEST(StraightforwardProperty, AdditiveValuationsReachTheOptimum)
{
  auto const rep = props::straightforward_optimality(300, 5);
  EXPECT_TRUE(rep.ok) << rep.detail;
  EXPECT_EQ(rep.cases, 300);
}

// Demand shrinks (weakly) as every price rises.
TEST(StraightforwardProperty, DemandIsMonotoneInPrices)
{
  Rng rng(8);
  for (int c = 0; c < 300; ++c)
  {
    ValuationProfile p;
    for (char const *name : {"A", "B", "C"})
    {
      p.item_values[name] = Money::from_units(static_cast<std::int64_t>(uniform_index(rng, 10)));
    }
    auto s = AuctionState::open({{"A", Money{}, Money::from_units(1)},
                                 {"B", Money{}, Money::from_units(1)},
                                 {"C", Money{}, Money::from_units(1)}},
                                {BidderId{1}});
    std::size_t last = 4;
    for (int r = 0; r < 12; ++r)
    {
      auto const b = straightforward_bundle(p, make_view(s, BidderId{1}));
      ASSERT_LE(b.items.size(), last);
      ASSERT_GE(b.expected_surplus, Money{});
      last = b.items.size();
      for (auto &st : s.standing)
      {
        st.price += Money::from_units(1);
      }
    }
  }
}
