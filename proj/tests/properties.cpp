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

#include "properties.hpp"

#include "oracles.hpp"

#include "enbench/auction.hpp"
#include "enbench/bidding.hpp"
#include "enbench/errors.hpp"
#include "enbench/rng.hpp"
#include "enbench/tarj.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

namespace props {

using namespace enbench;

namespace {

std::int64_t pick(Rng &rng, std::int64_t lo, std::int64_t hi)
{
  return lo + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::size_t>(hi - lo + 1)));
}

bool coin(Rng &rng, int num, int den)
{
  return static_cast<int>(uniform_index(rng, static_cast<std::size_t>(den))) < num;
}

std::string item_name(std::size_t k)
{
  return std::string(1, static_cast<char>('A' + k));
}

std::string where(int c, int round, std::string const &item)
{
  std::ostringstream ss;
  ss << "case " << c << " round " << round << " item " << item << ": ";
  return ss.str();
}

}  // namespace

Report mechanism_invariants(int auctions, std::uint64_t seed)
{
  Report rep;
  Rng    gen(seed);
  for (int c = 0; c < auctions; ++c)
  {
    ++rep.cases;
    std::size_t const      n_items   = static_cast<std::size_t>(pick(gen, 1, 4));
    int const              n_bidders = static_cast<int>(pick(gen, 1, 5));
    std::vector<Item>      items;
    std::vector<BidderId>  roster;
    for (std::size_t k = 0; k < n_items; ++k)
    {
      items.push_back({item_name(k), Money{pick(gen, 0, 20) * 25}, Money{pick(gen, 1, 4) * 25}});
    }
    for (int b = 1; b <= n_bidders; ++b)
    {
      roster.push_back(BidderId{b});
    }
    auto state = AuctionState::open(items, roster);
    Rng  ties(gen());
    int const rounds = static_cast<int>(pick(gen, 1, 25));
    for (int r = 1; r <= rounds; ++r)
    {
      std::vector<Bid> bids;
      for (auto id : roster)
      {
        for (std::size_t k = 0; k < n_items; ++k)
        {
          if (!coin(gen, 3, 5))
          {
            continue;
          }
          auto const &s       = state.standing[k];
          Money       minimum = s.bidder == id ? s.price : s.price + items[k].increment;
          std::int64_t steps  = pick(gen, -1, 2);
          Money        amount{std::max<std::int64_t>(0, minimum.cents + steps * items[k].increment.cents +
                                                        (coin(gen, 1, 6) ? pick(gen, -3, 3) : 0))};
          bids.push_back({id, items[k].name, amount});
        }
      }
      auto const cleared = clear_round(state, bids, ties);
      auto const &res    = cleared.result;
      if (res.round != state.round + 1)
      {
        rep.fail(where(c, r, "-") + "round counter did not advance");
      }
      if (is_terminated(state, cleared.state) == res.changed)
      {
        rep.fail(where(c, r, "-") + "termination disagrees with change flag");
      }
      for (std::size_t k = 0; k < n_items; ++k)
      {
        auto const &io     = res.items[k];
        auto const &before = state.standing[k];
        auto const &after  = cleared.state.standing[k];
        auto const  at     = where(c, r, items[k].name);
        if (io.before != before || io.after != after)
        {
          rep.fail(at + "outcome record does not match the state");
        }
        if (after.price < before.price)
        {
          rep.fail(at + "price fell");
        }
        if (before.bidder && !after.bidder)
        {
          rep.fail(at + "high bidder vanished");
        }
        std::int64_t top = -1;
        std::vector<BidderId> at_top;
        std::size_t submitted = 0;
        for (auto const &b : bids)
        {
          if (b.item != items[k].name)
          {
            continue;
          }
          ++submitted;
          Money const minimum =
              before.bidder == b.bidder ? before.price : before.price + items[k].increment;
          bool const accepted = std::find(io.accepted.begin(), io.accepted.end(), b) != io.accepted.end();
          bool const rejected = std::any_of(io.rejected.begin(), io.rejected.end(),
                                            [&](RejectedBid const &rb) { return rb.bid == b; });
          if (accepted == rejected)
          {
            rep.fail(at + "bid neither or both accepted and rejected");
          }
          if (accepted != (b.amount >= minimum))
          {
            rep.fail(at + "minimum-bid rule violated");
          }
          if (accepted)
          {
            if (b.amount.cents > top)
            {
              top = b.amount.cents;
              at_top.clear();
            }
            if (b.amount.cents == top)
            {
              at_top.push_back(b.bidder);
            }
          }
        }
        if (submitted != io.accepted.size() + io.rejected.size())
        {
          rep.fail(at + "bids lost");
        }
        if (top <= before.price.cents)
        {
          if (after != before)
          {
            rep.fail(at + "standing changed without a higher valid bid");
          }
        }
        else
        {
          if (after.price.cents != top ||
              std::find(at_top.begin(), at_top.end(), *after.bidder) == at_top.end())
          {
            rep.fail(at + "winner is not a highest valid bidder");
          }
          if (io.tie_broken != (at_top.size() > 1))
          {
            rep.fail(at + "tie flag wrong");
          }
        }
      }
      state = cleared.state;
    }
  }
  return rep;
}

Report tie_fairness(int bidders, int trials, std::uint64_t seed)
{
  Report                rep;
  std::vector<BidderId> roster;
  for (int b = 1; b <= bidders; ++b)
  {
    roster.push_back(BidderId{b});
  }
  auto const       state = AuctionState::open({{"A", Money{}, Money::from_units(1)}}, roster);
  std::vector<Bid> bids;
  for (auto id : roster)
  {
    bids.push_back({id, "A", Money::from_units(1)});
  }
  std::vector<int> wins(static_cast<std::size_t>(bidders), 0);
  Rng              rng(seed);
  for (int t = 0; t < trials; ++t)
  {
    auto const out = clear_round(state, bids, rng);
    ++wins[static_cast<std::size_t>(value_of(*out.state.standing[0].bidder) - 1)];
    ++rep.cases;
  }
  double const tol    = 3.0 * std::sqrt(1.0 / (4.0 * trials));
  double const target = 1.0 / bidders;
  std::ostringstream ss;
  ss << "m=" << bidders << " n=" << trials << " freq";
  for (int b = 0; b < bidders; ++b)
  {
    double const f = static_cast<double>(wins[static_cast<std::size_t>(b)]) / trials;
    ss << " " << f;
    if (std::abs(f - target) > tol)
    {
      rep.ok = false;
    }
  }
  ss << " tol " << tol;
  rep.detail = ss.str();
  return rep;
}

Report straightforward_optimality(int instances, std::uint64_t seed)
{
  Report rep;
  Rng    gen(seed);
  for (int c = 0; c < instances; ++c)
  {
    ++rep.cases;
    std::size_t const K = static_cast<std::size_t>(pick(gen, 1, 3));
    std::vector<Item> items;
    for (std::size_t k = 0; k < K; ++k)
    {
      items.push_back({item_name(k), Money::from_units(pick(gen, 0, 6)), Money::from_units(1)});
    }
    auto state = AuctionState::open(items, {BidderId{1}, BidderId{2}});
    std::vector<bool> held(K, false);
    for (std::size_t k = 0; k < K; ++k)
    {
      auto const who = uniform_index(gen, 3);  // none, self, other
      if (who != 0)
      {
        state.standing[k] = {items[k].start_price + Money::from_units(pick(gen, 1, 4)),
                             BidderId{static_cast<int>(who)}};
        held[k]           = who == 1;
      }
    }
    auto const view = make_view(state, BidderId{1});

    ValuationProfile          profile;
    std::vector<std::int64_t> values, minimums;
    for (std::size_t k = 0; k < K; ++k)
    {
      values.push_back(pick(gen, 0, 14) * 100);
      auto const &s = state.standing[k];
      minimums.push_back(held[k] ? s.price.cents : s.price.cents + items[k].increment.cents);
      profile.item_values[items[k].name] = Money{values.back()};
    }
    std::int64_t const best = oracle::best_additive_surplus(values, minimums);
    std::string const  at   = "instance " + std::to_string(c) + ": ";

    auto const bundle = straightforward_bundle(profile, view, ZeroSurplusPolicy::Include);
    if (bundle.expected_surplus.cents != best)
    {
      rep.fail(at + "straightforward surplus " + std::to_string(bundle.expected_surplus.cents) +
               " != oracle " + std::to_string(best));
    }
    std::vector<std::string> include_set, exclude_set;
    for (std::size_t k = 0; k < K; ++k)
    {
      if (values[k] >= minimums[k])
      {
        include_set.push_back(items[k].name);
      }
      if (values[k] > minimums[k])
      {
        exclude_set.push_back(items[k].name);
      }
    }
    if (bundle.items != include_set)
    {
      rep.fail(at + "bundle is not every item worth its minimum");
    }
    if (straightforward_bundle(profile, view, ZeroSurplusPolicy::Exclude).items != exclude_set)
    {
      rep.fail(at + "exclude policy kept a zero-surplus item");
    }

    auto const bids = straightforward_bids(bundle, view);
    std::size_t expected_bids = 0;
    for (std::size_t k = 0; k < K; ++k)
    {
      bool const in_bundle =
          std::find(bundle.items.begin(), bundle.items.end(), items[k].name) != bundle.items.end();
      auto const it = std::find_if(bids.begin(), bids.end(),
                                   [&](Bid const &b) { return b.item == items[k].name; });
      if (in_bundle && !held[k])
      {
        ++expected_bids;
        if (it == bids.end() || it->amount.cents != minimums[k] || it->bidder != BidderId{1})
        {
          rep.fail(at + "bid on " + items[k].name + " is not the minimum");
        }
      }
      else if (it != bids.end())
      {
        rep.fail(at + "unexpected bid on " + items[k].name);
      }
    }
    if (bids.size() != expected_bids)
    {
      rep.fail(at + "wrong number of bids");
    }

    auto const brute = optimal_bundle_brute(profile, view, Money::from_units(1), Money::from_units(20));
    if (brute.surplus.cents != best)
    {
      rep.fail(at + "brute-force surplus " + std::to_string(brute.surplus.cents) + " != oracle " +
               std::to_string(best));
    }
  }
  return rep;
}

namespace {

constexpr std::array<char const *, 24> kWords{
    "price",  "high",   "low",    "today",  "energy", "market", "reserve", "plan",
    "wait",   "value",  "bundle", "profit", "storage", "grid",  "cheap",   "costly",
    "steady", "signal", "later",  "recent", "trend",  "unit",   "margin",  "careful"};

std::string sentence(Rng &rng)
{
  std::string s;
  auto const  n = pick(rng, 1, 8);
  for (int i = 0; i < n; ++i)
  {
    if (i > 0)
    {
      s += coin(rng, 1, 8) ? ", " : " ";
    }
    s += kWords[uniform_index(rng, kWords.size())];
  }
  if (coin(rng, 1, 2))
  {
    s += ".";
  }
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string text_block(Rng &rng)
{
  std::string s = sentence(rng);
  if (coin(rng, 1, 4))
  {
    s += "\n" + sentence(rng);
  }
  return s;
}

struct ActionPhrase
{
  char const    *text;
  DispatchAction action;
};

constexpr std::array<ActionPhrase, 8> kActions{{
    {"Charge one unit", DispatchAction::Charge},
    {"Buy energy now", DispatchAction::Charge},
    {"Discharge one step", DispatchAction::Discharge},
    {"Sell a unit at this price", DispatchAction::Discharge},
    {"Hold", DispatchAction::Hold},
    {"Do nothing today", DispatchAction::Hold},
    {"Fully discharge to cover the home", DispatchAction::ServeLoad},
    {"Serve the household load", DispatchAction::ServeLoad},
}};

std::string label_variant(Rng &rng, std::string const &label)
{
  std::string l = label;
  switch (uniform_index(rng, 3))
  {
    case 0:
      break;
    case 1:
      std::transform(l.begin(), l.end(), l.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
      break;
    default:
      std::transform(l.begin(), l.end(), l.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  }
  switch (uniform_index(rng, 4))
  {
    case 0:
      return l + ":";
    case 1:
      return "**" + l + ":**";
    case 2:
      return "**" + l + "**:";
    default:
      return "## " + l + " :";
  }
}

}  // namespace

Report tarj_round_trip(int texts, std::uint64_t seed)
{
  Report                         rep;
  Rng                            gen(seed);
  std::vector<std::string> const items{"Product A", "Product B", "Product C"};
  for (int c = 0; c < texts; ++c)
  {
    ++rep.cases;
    TarjMode const mode = coin(gen, 1, 2) ? TarjMode::Battery : TarjMode::Auction;
    std::size_t const K = static_cast<std::size_t>(pick(gen, 1, 3));
    std::span<std::string const> item_span(items.data(), K);

    TarjRecord rec;
    rec.thoughts   = text_block(gen);
    rec.reflection = text_block(gen);
    rec.journal    = text_block(gen);
    if (mode == TarjMode::Battery)
    {
      auto const &a     = kActions[uniform_index(gen, kActions.size())];
      rec.action_text   = a.text;
      rec.parsed_action = a.action;
    }
    else
    {
      rec.action_text = sentence(gen);
      for (std::size_t k = 0; k < K; ++k)
      {
        if (coin(gen, 1, 2))
        {
          rec.chosen_subset.push_back(items[k]);
        }
        std::optional<Money> amount;
        if (coin(gen, 2, 3))
        {
          amount = Money{coin(gen, 1, 2) ? pick(gen, 0, 30) * 100 : pick(gen, 0, 3000)};
        }
        rec.bids.emplace_back(items[k], amount);
      }
    }
    std::string const at = "text " + std::to_string(c) + ": ";

    auto const canonical = render_tarj(rec, mode);
    try
    {
      if (parse_tarj(canonical, mode, item_span) != rec)
      {
        rep.fail(at + "canonical rendering did not round-trip:\n" + canonical);
        continue;
      }
    }
    catch (Error const &e)
    {
      rep.fail(at + "canonical rendering failed to parse: " + e.what() + "\n" + canonical);
      continue;
    }

    // Same content, different surface: label styles, order, blank lines.
    std::vector<std::pair<std::string, std::string>> sections{
        {"Thoughts", rec.thoughts}, {"Reflection", rec.reflection}, {"Journal", rec.journal}};
    std::string action_block = label_variant(gen, "Action") + " " + rec.action_text + "\n";
    if (mode == TarjMode::Auction)
    {
      std::string subset;
      for (std::size_t i = 0; i < rec.chosen_subset.size(); ++i)
      {
        subset += (i == 0 ? "" : ", ") + rec.chosen_subset[i];
      }
      if (subset.empty())
      {
        subset = "none";
      }
      action_block += label_variant(gen, coin(gen, 1, 2) ? "ChosenSubset" : "Chosen Subset") + " " +
                      subset + "\n";
      for (auto const &[item, amount] : rec.bids)
      {
        std::string const value =
            amount ? (coin(gen, 1, 2) ? "$" : "") + format_money(*amount) : std::string("none");
        action_block += (coin(gen, 1, 3) ? "- " : "") + item + ": " + value + "\n";
      }
    }
    std::vector<std::string> blocks;
    for (auto const &[label, body] : sections)
    {
      blocks.push_back(label_variant(gen, label) + " " + body + "\n");
    }
    blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(uniform_index(gen, 4)), action_block);
    if (coin(gen, 1, 2))
    {
      std::shuffle(blocks.begin(), blocks.end(), gen);
    }
    std::string variant;
    for (auto const &b : blocks)
    {
      variant += b;
      if (coin(gen, 1, 3))
      {
        variant += "\n";
      }
    }
    try
    {
      auto parsed            = parse_tarj(variant, mode, item_span);
      parsed.canonical_order = rec.canonical_order;
      if (parsed != rec)
      {
        rep.fail(at + "variant parsed to different fields:\n" + variant);
      }
    }
    catch (Error const &e)
    {
      rep.fail(at + "variant failed to parse: " + e.what() + "\n" + variant);
    }
  }
  return rep;
}

Report tarj_totality(int texts, std::uint64_t seed)
{
  Report                         rep;
  Rng                            gen(seed);
  std::vector<std::string> const items{"A", "B"};
  std::string const              alphabet = "abcAB:*#-_ \n$.,0123456789ThoughtsActionJournal";
  for (int c = 0; c < texts; ++c)
  {
    ++rep.cases;
    std::string text;
    if (coin(gen, 1, 2))
    {
      auto const n = pick(gen, 0, 200);
      for (int i = 0; i < n; ++i)
      {
        text.push_back(coin(gen, 1, 10) ? static_cast<char>(pick(gen, 0, 255))
                                        : alphabet[uniform_index(gen, alphabet.size())]);
      }
    }
    else
    {
      text = "Thoughts: x\nAction: Hold\nChosenSubset: A\nA: 3\nB: none\nReflection: y\nJournal: z\n";
      auto const edits = pick(gen, 1, 6);
      for (int e = 0; e < edits && !text.empty(); ++e)
      {
        auto const pos = uniform_index(gen, text.size());
        switch (uniform_index(gen, 3))
        {
          case 0:
            text.erase(pos, static_cast<std::size_t>(pick(gen, 1, 12)));
            break;
          case 1:
            text.insert(pos, 1, alphabet[uniform_index(gen, alphabet.size())]);
            break;
          default:
            text[pos] = alphabet[uniform_index(gen, alphabet.size())];
        }
      }
    }
    for (auto mode : {TarjMode::Battery, TarjMode::Auction})
    {
      try
      {
        (void)parse_tarj(text, mode, items);
      }
      catch (ParseError const &)
      {
      }
      catch (std::exception const &e)
      {
        rep.fail("text " + std::to_string(c) + " raised a non-parse error: " + e.what());
      }
    }
  }
  return rep;
}

}  // namespace props
