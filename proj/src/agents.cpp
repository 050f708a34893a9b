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

#include "enbench/agents.hpp"
#include "enbench/log.hpp"
#include "enbench/config.hpp"

#include <algorithm>

namespace enbench {
namespace {

nlohmann::json tarj_json(TarjRecord const &r, TarjMode mode)
{
  nlohmann::json j = {{"thoughts", r.thoughts},
                      {"action", r.action_text},
                      {"reflection", r.reflection},
                      {"journal", r.journal},
                      {"canonical_order", r.canonical_order}};
  if (mode == TarjMode::Battery)
  {
    j["parsed_action"] = r.parsed_action ? nlohmann::json(std::string(to_string(*r.parsed_action)))
                                         : nlohmann::json(nullptr);
  }
  else
  {
    j["chosen_subset"] = r.chosen_subset;
    nlohmann::json bids = nlohmann::json::object();
    for (auto const &[item, amount] : r.bids)
    {
      bids[item] = amount ? money_json(*amount) : nlohmann::json(nullptr);
    }
    j["bids"] = std::move(bids);
  }
  return j;
}

std::string standing_text(Standing const &s, BidderId me)
{
  if (!s.bidder)
  {
    return format_money(s.price) + " (no high bidder)";
  }
  return format_money(s.price) +
         (*s.bidder == me ? std::string(" (you)") : " (bidder " + to_string(*s.bidder) + ")");
}

}  // namespace

nlohmann::json LlmStep::to_json(TarjMode mode) const
{
  return {{"index", index},
          {"attempts", attempts},
          {"defaulted", defaulted},
          {"errors", errors},
          {"tarj", record ? tarj_json(*record, mode) : nlohmann::json(nullptr)}};
}

LlmStep query_tarj(LlmClient &client, std::string const &prompt, TarjMode mode,
                   std::span<std::string const> items, int index)
{
  LlmStep out;
  out.index = index;
  for (int attempt = 1; attempt <= kParseAttempts; ++attempt)
  {
    out.attempts = attempt;
    std::string const text =
        client.complete(attempt == 1 ? prompt : prompt + format_reminder(out.errors.back()));
    try
    {
      out.record = parse_tarj(text, mode, items);
      return out;
    }
    catch (ParseError const &e)
    {
      out.errors.emplace_back(e.what());
    }
  }
  out.defaulted = true;
  return out;
}

LlmBatteryAgent::LlmBatteryAgent(std::shared_ptr<LlmClient> client, Persona persona,
                                 std::optional<IclExampleSet> icl, BatteryConfig config,
                                 PriceModel prices, std::size_t memory_window)
  : client_(std::move(client))
  , persona_(std::move(persona))
  , icl_(std::move(icl))
  , config_(config)
  , prices_(std::move(prices))
  , memory_("Day", memory_window)
{
  persona_.validate();
  if (icl_)
  {
    icl_->validate();
  }
}

DispatchAction LlmBatteryAgent::decide(DayState const &state)
{
  auto const prompt = build_battery_prompt(persona_, state, memory_, icl_ ? &*icl_ : nullptr,
                                           config_, prices_);
  auto step = query_tarj(*client_, prompt, TarjMode::Battery, {}, state.day);
  auto const action =
      step.defaulted ? DispatchAction::Hold : step.record->parsed_action.value_or(DispatchAction::Hold);
  if (step.defaulted)
  {
    log_message(LogLevel::Warning, persona_.name + " day " + std::to_string(state.day) +
                                       ": no parseable response after " +
                                       std::to_string(kParseAttempts) + " attempts, holding");
  }
  steps_.push_back(std::move(step));
  return action;
}

void LlmBatteryAgent::observe(DayRecord const &record)
{
  if (steps_.empty() || steps_.back().index != record.day || !steps_.back().record)
  {
    return;
  }
  memory_ = update_memory(std::move(memory_), *steps_.back().record, record.day, day_summary(record));
}

int LlmBatteryAgent::incidents() const noexcept
{
  return static_cast<int>(
      std::count_if(steps_.begin(), steps_.end(), [](LlmStep const &s) { return s.defaulted; }));
}

std::string day_summary(DayRecord const &r)
{
  std::string out = "price $" + format_money(r.price) + "/kWh" + (r.blackout ? ", blackout" : "") +
                    ", action " + std::string(to_string(r.applied));
  if (r.coerced)
  {
    out += " (requested " + std::string(to_string(r.requested)) + ", not allowed)";
  }
  out += ", reward $" + format_money(r.reward) + ", SoC " + format_energy(r.soc_before) + " -> " +
         format_energy(r.soc_after) + " kWh";
  return out;
}

LlmAuctionAgent::LlmAuctionAgent(BidderId id, std::shared_ptr<LlmClient> client,
                                 AuctionObjective objective, ValuationProfile valuations,
                                 std::size_t memory_window)
  : id_(id)
  , client_(std::move(client))
  , objective_(std::move(objective))
  , valuations_(std::move(valuations))
  , memory_("Round", memory_window)
{
  objective_.validate();
  valuations_.validate();
}

AgentDecision LlmAuctionAgent::decide(BidderView const &view)
{
  std::vector<std::string> names;
  for (auto const &it : view.items)
  {
    names.push_back(it.name);
  }
  auto const prompt = build_auction_prompt(objective_, view, memory_, valuations_);
  auto       step   = query_tarj(*client_, prompt, TarjMode::Auction, names, view.round);

  AgentDecision decision;
  if (step.defaulted)
  {
    log_message(LogLevel::Warning, "bidder " + to_string(id_) + " round " +
                                       std::to_string(view.round) +
                                       ": no parseable response, submitting no bids");
  }
  else
  {
    for (auto const &[item, amount] : step.record->bids)
    {
      if (amount && amount->cents >= 0)
      {
        decision.bids.push_back(Bid{id_, item, *amount});
      }
    }
  }
  auto j = step.to_json(TarjMode::Auction);
  j["bidder"] = value_of(id_);
  decision.record_json = j.dump();
  steps_.push_back(std::move(step));
  return decision;
}

void LlmAuctionAgent::observe(BidderView const &view, RoundResult const &result)
{
  if (steps_.empty() || steps_.back().index != view.round || !steps_.back().record)
  {
    return;
  }
  auto const &record = *steps_.back().record;
  memory_ = update_memory(std::move(memory_), record, result.round,
                          round_summary(id_, &record, result));
}

int LlmAuctionAgent::incidents() const noexcept
{
  return static_cast<int>(
      std::count_if(steps_.begin(), steps_.end(), [](LlmStep const &s) { return s.defaulted; }));
}

std::string round_summary(BidderId bidder, TarjRecord const *record, RoundResult const &result)
{
  std::string out = "you bid ";
  if (record != nullptr)
  {
    for (std::size_t i = 0; i < record->bids.size(); ++i)
    {
      auto const &[item, amount] = record->bids[i];
      out += (i == 0 ? "" : ", ") + item + ": " + (amount ? format_money(*amount) : "none");
    }
  }
  else
  {
    out += "nothing";
  }
  out += "; after clearing ";
  for (std::size_t i = 0; i < result.items.size(); ++i)
  {
    auto const &o = result.items[i];
    out += (i == 0 ? "" : ", ") + o.item + ": " + standing_text(o.after, bidder);
    for (auto const &rej : o.rejected)
    {
      if (rej.bid.bidder == bidder)
      {
        out += " [your bid " + format_money(rej.bid.amount) + " was below the minimum " +
               format_money(rej.minimum) + "]";
      }
    }
    if (o.tie_broken)
    {
      out += " [tie broken at random]";
    }
  }
  return out;
}

}  // namespace enbench
