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

#include "enbench/errors.hpp"
#include "enbench/prompts.hpp"
#include "prompt_assets.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

namespace enbench {
namespace {

bool is_ident(std::string_view s)
{
  if (s.empty())
  {
    return false;
  }
  for (char c : s)
  {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
    {
      return false;
    }
  }
  return true;
}

template <typename OnText, typename OnField>
void scan_template(std::string_view tmpl, OnText on_text, OnField on_field)
{
  std::size_t i = 0;
  while (i < tmpl.size())
  {
    char const c = tmpl[i];
    if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{')
    {
      on_text("{");
      i += 2;
      continue;
    }
    if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}')
    {
      on_text("}");
      i += 2;
      continue;
    }
    if (c == '{')
    {
      auto const close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos && is_ident(tmpl.substr(i + 1, close - i - 1)))
      {
        on_field(tmpl.substr(i + 1, close - i - 1));
        i = close + 1;
        continue;
      }
    }
    on_text(tmpl.substr(i, 1));
    ++i;
  }
}

std::string percent(double p)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", p * 100.0);
  std::string s(buf);
  while (s.back() == '0')
  {
    s.pop_back();
  }
  if (s.back() == '.')
  {
    s.pop_back();
  }
  return s + "%";
}

std::string per_kwh(Money m)
{
  return "$" + format_money(m) + "/kWh";
}

std::string price_levels_text(PriceModel const &prices)
{
  auto const n = prices.levels.size();
  if (n == 1)
  {
    return "always " + per_kwh(prices.levels[0]);
  }
  bool equal = true;
  for (auto p : prices.probabilities)
  {
    equal = equal && p == prices.probabilities[0];
  }
  std::string out;
  if (equal)
  {
    out = n == 2 ? "either " : "one of ";
    for (std::size_t i = 0; i < n; ++i)
    {
      out += (i == 0 ? "" : (i + 1 == n ? " or " : ", ")) + per_kwh(prices.levels[i]);
    }
    out += n == 2 ? ", with a " + percent(prices.probabilities[0]) + " chance for each value"
                  : ", each equally likely";
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    out += (i == 0 ? "" : (i + 1 == n ? " or " : ", ")) + per_kwh(prices.levels[i]) +
           " with a " + percent(prices.probabilities[i]) + " chance";
  }
  return out;
}

std::string or_none(std::string s)
{
  return s.empty() ? std::string("None yet.") : s;
}

std::string quoted(std::string const &s)
{
  return "\"" + s + "\"";
}

}  // namespace

std::string render_template(std::string_view tmpl,
                            std::map<std::string, std::string> const &values)
{
  std::string           out;
  std::set<std::string> used;
  scan_template(
      tmpl, [&](std::string_view text) { out += text; },
      [&](std::string_view field) {
        auto it = values.find(std::string(field));
        if (it == values.end())
        {
          throw Error(ErrorCode::MissingPlaceholder, "no value for {" + std::string(field) + "}");
        }
        used.insert(it->first);
        out += it->second;
      });
  for (auto const &[key, value] : values)
  {
    if (used.count(key) == 0)
    {
      throw Error(ErrorCode::MissingPlaceholder, "template never uses {" + key + "}");
    }
  }
  return out;
}

std::vector<std::string> template_placeholders(std::string_view tmpl)
{
  std::vector<std::string> out;
  scan_template(
      tmpl, [](std::string_view) {},
      [&](std::string_view field) {
        std::string f(field);
        if (std::find(out.begin(), out.end(), f) == out.end())
        {
          out.push_back(std::move(f));
        }
      });
  return out;
}

std::string_view builtin_battery_template()
{
  return assets::battery();
}

std::string_view builtin_battery_icl_template()
{
  return assets::battery_icl();
}

std::string_view builtin_blackout_notice()
{
  return assets::battery_blackout_notice();
}

void Persona::validate() const
{
  if (description.empty())
  {
    throw Error(ErrorCode::InvalidConfig, "persona " + name + " has an empty description");
  }
}

Persona builtin_persona(std::string const &name)
{
  // Approximate descriptions; the original persona texts are not published.
  if (name == "Thinker")
  {
    return {name, "You are analytical and profit-focused. You reason carefully about prices "
                  "and timing, and you want to earn as much as possible by buying energy "
                  "when it is cheap and selling it when it is expensive."};
  }
  if (name == "Realist")
  {
    return {name, "You are practical and balanced. You like to earn money from price "
                  "differences, but you also keep a sensible amount of energy in the "
                  "battery in case something unexpected happens."};
  }
  if (name == "Feeler")
  {
    return {name, "You care most about comfort and a sense of security at home. Having "
                  "backup energy available for your household matters more to you than "
                  "squeezing out extra profit."};
  }
  throw Error(ErrorCode::InvalidConfig, "no built-in persona named " + name);
}

std::string_view to_string(ObjectiveKind kind) noexcept
{
  switch (kind)
  {
  case ObjectiveKind::RuleCentric:
    return "rule-centric";
  case ObjectiveKind::MyopicProfit:
    return "myopic-profit";
  case ObjectiveKind::StrategicOutcome:
    return "strategic-outcome";
  }
  return "myopic-profit";
}

std::optional<ObjectiveKind> objective_kind_from_string(std::string_view name) noexcept
{
  for (auto k :
       {ObjectiveKind::RuleCentric, ObjectiveKind::MyopicProfit, ObjectiveKind::StrategicOutcome})
  {
    if (to_string(k) == name)
    {
      return k;
    }
  }
  return std::nullopt;
}

AuctionObjective AuctionObjective::builtin(ObjectiveKind kind)
{
  switch (kind)
  {
  case ObjectiveKind::RuleCentric:
    return {kind, std::string(assets::saa_rule_centric())};
  case ObjectiveKind::MyopicProfit:
    return {kind, std::string(assets::saa_myopic_profit())};
  case ObjectiveKind::StrategicOutcome:
    return {kind, std::string(assets::saa_strategic_outcome())};
  }
  return {kind, std::string(assets::saa_myopic_profit())};
}

void AuctionObjective::validate() const
{
  auto const present = template_placeholders(prompt_template);
  for (auto const *name : {"bidder", "products_str", "prices", "high_bidders", "min_inc",
                           "history_text", "journal_text", "val_json_str", "bid_lines"})
  {
    if (std::find(present.begin(), present.end(), name) == present.end())
    {
      throw Error(ErrorCode::MissingPlaceholder,
                  std::string(to_string(kind)) + " template lacks {" + name + "}");
    }
  }
}

void IclExampleSet::validate() const
{
  for (auto const &ex : examples)
  {
    parse_tarj(ex, TarjMode::Battery);
  }
}

std::string build_battery_prompt(Persona const &persona, DayState const &day,
                                 MemoryStore const &memory, IclExampleSet const *icl,
                                 BatteryConfig const &config, PriceModel const &prices)
{
  std::string icl_block;
  if (icl != nullptr && !icl->examples.empty())
  {
    std::string examples;
    for (std::size_t i = 0; i < icl->examples.size(); ++i)
    {
      if (i > 0)
      {
        examples += "\n\n";
      }
      examples += "Example " + std::to_string(i + 1) + ":\n";
      auto const &ex = icl->examples[i];
      auto        e  = ex.find_last_not_of(" \t\r\n");
      examples += ex.substr(0, e == std::string::npos ? 0 : e + 1);
    }
    icl_block = render_template(builtin_battery_icl_template(), {{"example_responses", examples}});
  }

  auto const step = format_energy(config.step);
  std::string options;
  if (day.blackout)
  {
    options = "- Fully discharge the battery to serve household demand\n"
              "- Do nothing (keep the stored energy)";
  }
  else
  {
    options = "- Charge the battery by " + step + " kWh (buy energy)\n" +
              "- Discharge the battery by " + step + " kWh (sell energy)\n" + "- Do nothing";
  }

  return render_template(
      builtin_battery_template(),
      {
          {"persona_name", persona.name},
          {"persona_description", persona.description},
          {"horizon", std::to_string(config.horizon)},
          {"step", step},
          {"capacity", format_energy(config.capacity)},
          {"price_levels", price_levels_text(prices)},
          {"icl_block", icl_block},
          {"day", std::to_string(day.day)},
          {"price", format_money(day.price)},
          {"soc", format_energy(day.soc)},
          {"blackout_notice", day.blackout ? std::string(builtin_blackout_notice()) : ""},
          {"history_text", or_none(memory.history_text())},
          {"journal_text", or_none(memory.journal_text())},
          {"action_options", options},
      });
}

std::string valuation_text(ValuationProfile const &valuations,
                           std::vector<std::string> const &item_order)
{
  std::string out = "{";
  bool        first = true;
  for (auto const &name : item_order)
  {
    auto it = valuations.item_values.find(name);
    if (it == valuations.item_values.end())
    {
      continue;
    }
    out += (first ? "" : ", ") + quoted(name) + ": " + format_money(it->second);
    first = false;
  }
  for (auto const &[items, value] : valuations.bundle_overrides)
  {
    std::string key = "[";
    bool        kf  = true;
    for (auto const &name : item_order)
    {
      if (items.count(name) != 0)
      {
        key += (kf ? "" : ", ") + quoted(name);
        kf = false;
      }
    }
    key += "]";
    out += (first ? "" : ", ") + key + ": " + format_money(value);
    first = false;
  }
  return out + "}";
}

std::string build_auction_prompt(AuctionObjective const &objective, BidderView const &view,
                                 MemoryStore const &memory, ValuationProfile const &valuations)
{
  std::vector<std::string> order;
  std::string              products, prices, high, inc, bid_lines;
  for (std::size_t i = 0; i < view.items.size(); ++i)
  {
    auto const &it  = view.items[i];
    auto const  sep = std::string(i == 0 ? "" : ", ");
    order.push_back(it.name);
    products += sep + it.name;
    prices += sep + it.name + ": " + format_money(it.price);
    high += sep + it.name + ": " +
            (it.high_bidder ? "bidder " + to_string(*it.high_bidder) : std::string("none"));
    inc += sep + it.name + ": " + format_money(it.increment);
    bid_lines += (i == 0 ? "" : "\n") + it.name + ": <your bid for " + it.name + ", at least " +
                 format_money(it.min_bid) + ", or none>";
  }

  return render_template(objective.prompt_template,
                         {
                             {"bidder", to_string(view.bidder)},
                             {"products_str", products},
                             {"prices", prices},
                             {"high_bidders", high},
                             {"min_inc", inc},
                             {"history_text", or_none(memory.history_text())},
                             {"journal_text", or_none(memory.journal_text())},
                             {"val_json_str", valuation_text(valuations, order)},
                             {"bid_lines", bid_lines},
                         });
}

std::string format_reminder(std::string const &error)
{
  return "\n\nYOUR PREVIOUS RESPONSE COULD NOT BE PARSED (" + error +
         "). Answer again using exactly the TARJ OUTPUT FORMAT (STRICT) above, with each "
         "field label at the start of its own line.";
}

}  // namespace enbench
