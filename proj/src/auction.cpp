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

#include "enbench/auction.hpp"
#include "enbench/errors.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace enbench {

std::string to_string(BidderId id)
{
  return std::to_string(value_of(id));
}

AuctionState AuctionState::open(std::vector<Item> items, std::vector<BidderId> bidders)
{
  if (items.empty())
  {
    throw Error(ErrorCode::InvalidConfig, "an auction needs at least one item");
  }
  std::set<std::string> names;
  for (auto const &item : items)
  {
    if (item.increment.cents <= 0)
    {
      throw Error(ErrorCode::InvalidConfig, "increment for " + item.name + " must be positive");
    }
    if (item.start_price.cents < 0)
    {
      throw Error(ErrorCode::InvalidConfig, "start price for " + item.name + " is negative");
    }
    if (!names.insert(item.name).second)
    {
      throw Error(ErrorCode::InvalidConfig, "duplicate item name " + item.name);
    }
  }
  std::set<BidderId> ids(bidders.begin(), bidders.end());
  if (ids.size() != bidders.size())
  {
    throw Error(ErrorCode::InvalidConfig, "duplicate bidder id");
  }

  AuctionState state;
  state.items   = std::move(items);
  state.bidders = std::move(bidders);
  for (auto const &item : state.items)
  {
    state.standing.push_back({item.start_price, std::nullopt});
  }
  return state;
}

std::size_t AuctionState::item_index(std::string const &name) const
{
  for (std::size_t k = 0; k < items.size(); ++k)
  {
    if (items[k].name == name)
    {
      return k;
    }
  }
  throw Error(ErrorCode::UnknownItem, name);
}

bool AuctionState::has_bidder(BidderId id) const
{
  return std::find(bidders.begin(), bidders.end(), id) != bidders.end();
}

namespace {

Money min_bid_at(AuctionState const &state, BidderId bidder, std::size_t k)
{
  auto const &s = state.standing[k];
  if (s.bidder && *s.bidder == bidder)
  {
    return s.price;
  }
  return s.price + state.items[k].increment;
}

}  // namespace

Money min_bid_price(AuctionState const &state, BidderId bidder, std::string const &item)
{
  return min_bid_at(state, bidder, state.item_index(item));
}

ViewItem const *BidderView::find(std::string const &name) const
{
  for (auto const &it : items)
  {
    if (it.name == name)
    {
      return &it;
    }
  }
  return nullptr;
}

BidderView make_view(AuctionState const &state, BidderId bidder)
{
  BidderView view;
  view.bidder = bidder;
  view.round  = state.round + 1;
  for (std::size_t k = 0; k < state.items.size(); ++k)
  {
    view.items.push_back({state.items[k].name, state.standing[k].price, state.standing[k].bidder,
                          state.items[k].increment, min_bid_at(state, bidder, k)});
  }
  return view;
}

ClearResult clear_round(AuctionState const &state, std::vector<Bid> const &bids, Rng &rng)
{
  std::vector<std::vector<Bid>>                  per_item(state.items.size());
  std::set<std::pair<BidderId, std::size_t>> seen;
  for (auto const &bid : bids)
  {
    if (!state.has_bidder(bid.bidder))
    {
      throw Error(ErrorCode::UnknownBidder, to_string(bid.bidder));
    }
    auto const k = state.item_index(bid.item);
    if (!seen.insert({bid.bidder, k}).second)
    {
      throw Error(ErrorCode::DuplicateBid,
                  "bidder " + to_string(bid.bidder) + " on " + bid.item);
    }
    per_item[k].push_back(bid);
  }

  ClearResult out{state, {}};
  out.state.round += 1;
  out.result.round = out.state.round;

  for (std::size_t k = 0; k < state.items.size(); ++k)
  {
    ItemOutcome io;
    io.item   = state.items[k].name;
    io.before = state.standing[k];
    io.after  = state.standing[k];

    for (auto const &bid : per_item[k])
    {
      auto const minimum = min_bid_at(state, bid.bidder, k);
      if (bid.amount < minimum)
      {
        io.rejected.push_back({bid, RejectReason::BelowMinimum, minimum});
      }
      else
      {
        io.accepted.push_back(bid);
      }
    }

    if (!io.accepted.empty())
    {
      Money top = io.accepted.front().amount;
      for (auto const &b : io.accepted)
      {
        top = std::max(top, b.amount);
      }
      // Only the incumbent may bid exactly the standing price; that keeps
      // the standing as it is.
      if (top > io.before.price)
      {
        std::vector<BidderId> tied;
        for (auto const &b : io.accepted)
        {
          if (b.amount == top)
          {
            tied.push_back(b.bidder);
          }
        }
        std::size_t pick = 0;
        if (tied.size() > 1)
        {
          pick          = uniform_index(rng, tied.size());
          io.tie_broken = true;
          for (std::size_t i = 0; i < tied.size(); ++i)
          {
            if (i != pick)
            {
              io.tie_losers.push_back(tied[i]);
            }
          }
        }
        io.after = {top, tied[pick]};
      }
    }

    out.state.standing[k] = io.after;
    if (io.after != io.before)
    {
      out.result.changed = true;
    }
    out.result.items.push_back(std::move(io));
  }

  out.state.history.push_back(out.result);
  return out;
}

bool is_terminated(AuctionState const &previous, AuctionState const &current)
{
  if (previous.items.size() != current.items.size() ||
      previous.standing.size() != current.standing.size())
  {
    throw Error(ErrorCode::MismatchedAuction, "item sets differ");
  }
  for (std::size_t k = 0; k < previous.items.size(); ++k)
  {
    if (previous.items[k].name != current.items[k].name)
    {
      throw Error(ErrorCode::MismatchedAuction, "item sets differ");
    }
  }
  return previous.standing == current.standing;
}

std::optional<BidderId> AuctionOutcome::winner(std::string const &item) const
{
  return final_state.standing[final_state.item_index(item)].bidder;
}

Money AuctionOutcome::price(std::string const &item) const
{
  return final_state.standing[final_state.item_index(item)].price;
}

AuctionOutcome run_auction(std::vector<std::unique_ptr<BiddingAgent>> &agents,
                           std::vector<Item> const &items, int max_rounds, Rng &rng)
{
  if (agents.empty())
  {
    throw Error(ErrorCode::InvalidConfig, "an auction needs at least one agent");
  }
  if (max_rounds < 1)
  {
    throw Error(ErrorCode::InvalidConfig, "max_rounds must be at least 1");
  }
  std::vector<BidderId> roster;
  for (auto const &a : agents)
  {
    roster.push_back(a->id());
  }

  AuctionOutcome outcome;
  AuctionState   state = AuctionState::open(items, roster);

  for (int r = 1; r <= max_rounds; ++r)
  {
    std::vector<BidderView> views;
    views.reserve(agents.size());
    for (auto const &a : agents)
    {
      views.push_back(make_view(state, a->id()));
    }

    std::vector<Bid>         bids;
    std::vector<std::string> records;
    for (std::size_t i = 0; i < agents.size(); ++i)
    {
      auto decision = agents[i]->decide(views[i]);
      for (auto &b : decision.bids)
      {
        b.bidder = agents[i]->id();
        bids.push_back(std::move(b));
      }
      records.push_back(std::move(decision.record_json));
    }

    auto cleared = clear_round(state, bids, rng);
    for (std::size_t i = 0; i < agents.size(); ++i)
    {
      agents[i]->observe(views[i], cleared.result);
    }
    outcome.agent_records.push_back(std::move(records));

    bool const done = is_terminated(state, cleared.state);
    state           = std::move(cleared.state);
    outcome.rounds_used = r;
    if (done)
    {
      outcome.terminated_naturally = true;
      break;
    }
  }
  outcome.final_state = std::move(state);
  return outcome;
}

}  // namespace enbench
