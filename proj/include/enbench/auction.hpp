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
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace enbench {

/// Bidder identity; bidders are numbered from 1 as in the bidder roster.
enum class BidderId : int
{
};

constexpr int value_of(BidderId id) noexcept
{
  return static_cast<int>(id);
}

std::string to_string(BidderId id);

struct Item
{
  std::string name;
  Money       start_price;
  Money       increment = Money::from_units(1);
};

struct Standing
{
  Money                   price;
  std::optional<BidderId> bidder;

  bool operator==(Standing const &) const = default;
};

struct Bid
{
  BidderId    bidder{};
  std::string item;
  Money       amount;

  bool operator==(Bid const &) const = default;
};

enum class RejectReason
{
  BelowMinimum,
};

struct RejectedBid
{
  Bid          bid;
  RejectReason reason = RejectReason::BelowMinimum;
  Money        minimum;

  bool operator==(RejectedBid const &) const = default;
};

struct ItemOutcome
{
  std::string           item;
  std::vector<Bid>      accepted;
  std::vector<RejectedBid> rejected;
  Standing              before;
  Standing              after;
  bool                  tie_broken = false;
  std::vector<BidderId> tie_losers;

  bool operator==(ItemOutcome const &) const = default;
};

struct RoundResult
{
  int                      round = 0;
  std::vector<ItemOutcome> items;
  bool                     changed = false;

  bool operator==(RoundResult const &) const = default;
};

/// The public state of a simultaneous ascending auction.
struct AuctionState
{
  std::vector<Item>        items;
  std::vector<BidderId>    bidders;
  int                      round = 0;
  std::vector<Standing>    standing;
  std::vector<RoundResult> history;

  /// Round 0 state: every item at its start price with no high bidder.
  static AuctionState open(std::vector<Item> items, std::vector<BidderId> bidders);

  std::size_t item_index(std::string const &name) const;
  bool        has_bidder(BidderId id) const;
};

/// Minimum valid bid: the standing price for the incumbent, price plus the
/// increment for everybody else (including everybody while no incumbent exists).
Money min_bid_price(AuctionState const &state, BidderId bidder, std::string const &item);

struct ViewItem
{
  std::string             name;
  Money                   price;
  std::optional<BidderId> high_bidder;
  Money                   increment;
  Money                   min_bid;
};

/// What one bidder sees before submitting sealed bids.
struct BidderView
{
  BidderId              bidder{};
  int                   round = 0;  // the round about to be bid
  std::vector<ViewItem> items;

  ViewItem const *find(std::string const &name) const;
};

BidderView make_view(AuctionState const &state, BidderId bidder);

struct ClearResult
{
  AuctionState state;
  RoundResult  result;
};

/// Clears one round of sealed bids. Throws DuplicateBid, UnknownItem or
/// UnknownBidder; below-minimum bids are rejected and recorded, never fatal.
ClearResult clear_round(AuctionState const &state, std::vector<Bid> const &bids, Rng &rng);

/// True iff every item's price and high bidder are unchanged.
bool is_terminated(AuctionState const &previous, AuctionState const &current);

/// One bidder's decision for a round.
struct AgentDecision
{
  std::vector<Bid> bids;
  /// JSON-serialisable per-round record (TARJ fields, incidents); empty for
  /// scripted baselines.
  std::string      record_json;
};

class BiddingAgent
{
public:
  virtual ~BiddingAgent() = default;

  virtual BidderId      id() const                        = 0;
  virtual AgentDecision decide(BidderView const &view)     = 0;
  virtual void          observe(BidderView const & /*view*/, RoundResult const & /*result*/)
  {}
};

struct AuctionOutcome
{
  AuctionState                          final_state;
  std::vector<std::vector<std::string>> agent_records;  // [round][agent]
  int                                   rounds_used          = 0;
  bool                                  terminated_naturally = false;

  std::optional<BidderId> winner(std::string const &item) const;
  Money                   price(std::string const &item) const;
};

constexpr int kDefaultMaxRounds = 100;

/// Drives rounds until nothing changes or `max_rounds` is reached. Agents are
/// asked in roster order but all see the pre-round state only.
AuctionOutcome run_auction(std::vector<std::unique_ptr<BiddingAgent>> &agents,
                           std::vector<Item> const &items, int max_rounds, Rng &rng);

}  // namespace enbench
