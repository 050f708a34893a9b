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
#include "enbench/battery.hpp"
#include "enbench/bidding.hpp"
#include "enbench/memory.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enbench {

/// Substitutes `{name}` placeholders; `{{` and `}}` are literal braces.
/// Throws MissingPlaceholder when the template names a key the map lacks,
/// or the map carries a key the template never uses.
std::string render_template(std::string_view tmpl,
                            std::map<std::string, std::string> const &values);

/// Placeholder names used by a template, in first-appearance order.
std::vector<std::string> template_placeholders(std::string_view tmpl);

// Built-in prompt assets.
std::string_view builtin_battery_template();
std::string_view builtin_battery_icl_template();
std::string_view builtin_blackout_notice();

struct Persona
{
  std::string name;
  std::string description;

  void validate() const;
};

/// Thinker, Realist and Feeler with shipped approximate descriptions.
Persona builtin_persona(std::string const &name);

enum class ObjectiveKind
{
  RuleCentric,
  MyopicProfit,
  StrategicOutcome,
};

std::string_view             to_string(ObjectiveKind kind) noexcept;
std::optional<ObjectiveKind> objective_kind_from_string(std::string_view name) noexcept;

struct AuctionObjective
{
  ObjectiveKind kind = ObjectiveKind::MyopicProfit;
  std::string   prompt_template;

  static AuctionObjective builtin(ObjectiveKind kind);

  /// Throws MissingPlaceholder unless every auction placeholder is present.
  void validate() const;
};

/// Labelled example responses injected into the battery prompt.
struct IclExampleSet
{
  std::string              source;
  std::vector<std::string> examples;

  /// Throws ParseError if any example is not a well-formed battery TARJ.
  void validate() const;
};

std::string build_battery_prompt(Persona const &persona, DayState const &day,
                                 MemoryStore const &memory, IclExampleSet const *icl,
                                 BatteryConfig const &config, PriceModel const &prices);

std::string build_auction_prompt(AuctionObjective const &objective, BidderView const &view,
                                 MemoryStore const &memory, ValuationProfile const &valuations);

/// Valuation table in the prompt convention: items by name, bundles keyed
/// by a list of item names.
std::string valuation_text(ValuationProfile const &valuations,
                           std::vector<std::string> const &item_order);

/// Appended to a prompt after an unparseable response.
std::string format_reminder(std::string const &error);

}  // namespace enbench
