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
#include "enbench/bidding.hpp"
#include "enbench/dispatch.hpp"
#include "enbench/llm.hpp"
#include "enbench/memory.hpp"
#include "enbench/prompts.hpp"
#include "enbench/tarj.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace enbench {

/// Total attempts per decision: the first prompt plus two re-prompts.
constexpr int kParseAttempts = 3;

/// What came of asking the model for one decision.
struct LlmStep
{
  int                       index    = 0;  // day or round
  int                       attempts = 0;
  bool                      defaulted = false;
  std::vector<std::string>  errors;
  std::optional<TarjRecord> record;

  nlohmann::json to_json(TarjMode mode) const;
};

/// Ask, parse, and re-prompt with a format reminder until a response parses
/// or kParseAttempts is spent. Transport errors from the client propagate.
LlmStep query_tarj(LlmClient &client, std::string const &prompt, TarjMode mode,
                   std::span<std::string const> items, int index);

/// LLM-backed household battery operator. Unlike the scripted baselines it
/// sees blackout days and may answer them with ServeLoad.
class LlmBatteryAgent : public DispatchPolicy
{
public:
  LlmBatteryAgent(std::shared_ptr<LlmClient> client, Persona persona,
                  std::optional<IclExampleSet> icl, BatteryConfig config, PriceModel prices,
                  std::size_t memory_window = 20);

  DispatchAction decide(DayState const &state) override;
  void           observe(DayRecord const &record) override;
  bool           blackout_aware() const override
  {
    return true;
  }

  std::vector<LlmStep> const &steps() const noexcept
  {
    return steps_;
  }
  MemoryStore const &memory() const noexcept
  {
    return memory_;
  }
  int incidents() const noexcept;

private:
  std::shared_ptr<LlmClient>   client_;
  Persona                      persona_;
  std::optional<IclExampleSet> icl_;
  BatteryConfig                config_;
  PriceModel                   prices_;
  MemoryStore                  memory_;
  std::vector<LlmStep>         steps_;
};

/// One-line memory summary of a settled day.
std::string day_summary(DayRecord const &record);

/// LLM-backed SAA bidder driven by one of the objective templates.
class LlmAuctionAgent : public BiddingAgent
{
public:
  LlmAuctionAgent(BidderId id, std::shared_ptr<LlmClient> client, AuctionObjective objective,
                  ValuationProfile valuations, std::size_t memory_window = 0);

  BidderId id() const override
  {
    return id_;
  }
  AgentDecision decide(BidderView const &view) override;
  void          observe(BidderView const &view, RoundResult const &result) override;

  std::vector<LlmStep> const &steps() const noexcept
  {
    return steps_;
  }
  MemoryStore const &memory() const noexcept
  {
    return memory_;
  }
  int incidents() const noexcept;

private:
  BidderId                   id_;
  std::shared_ptr<LlmClient> client_;
  AuctionObjective           objective_;
  ValuationProfile           valuations_;
  MemoryStore                memory_;
  std::vector<LlmStep>       steps_;
};

/// One-line memory summary of a cleared round from one bidder's side.
std::string round_summary(BidderId bidder, TarjRecord const *record, RoundResult const &result);

}  // namespace enbench
