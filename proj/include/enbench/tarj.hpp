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

#include "enbench/battery.hpp"
#include "enbench/units.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace enbench {

enum class TarjMode
{
  Battery,
  Auction,
};

/// One parsed Thought-Action-Reflection-Journal response.
struct TarjRecord
{
  std::string thoughts;
  std::string action_text;
  std::string reflection;
  std::string journal;
  /// Sections appeared as Thoughts, Action, [ChosenSubset], Reflection, Journal.
  bool        canonical_order = true;

  // battery mode
  std::optional<DispatchAction> parsed_action;

  // auction mode; both in auction item order
  std::vector<std::string>                                   chosen_subset;
  std::vector<std::pair<std::string, std::optional<Money>>> bids;

  bool operator==(TarjRecord const &) const = default;
};

/// Maps free-text battery actions onto DispatchAction by keyword:
/// charge/buy, discharge/sell, nothing/hold, and "fully discharge"/"serve"
/// for serving load. Throws ParseError (ParseFailure) when nothing matches
/// and ParseError (AmbiguousAction) on conflicting keywords.
DispatchAction parse_battery_action(std::string_view text);

/// Parses a TARJ response. Labels are case-insensitive and may be wrapped in
/// markdown emphasis; sections may come in any order. In auction mode each
/// item needs a bid line "<item>: <amount|none>" after Action or
/// ChosenSubset. Throws ParseError naming the first offending section.
TarjRecord parse_tarj(std::string_view text, TarjMode mode,
                      std::span<std::string const> items = {});

/// Canonical text for a record; parse_tarj(render_tarj(r)) reproduces r.
std::string render_tarj(TarjRecord const &record, TarjMode mode);

}  // namespace enbench
