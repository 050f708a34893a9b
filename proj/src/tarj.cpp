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
#include "enbench/tarj.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

namespace enbench {
namespace {

enum class Section
{
  None,
  Thoughts,
  Action,
  ChosenSubset,
  Reflection,
  Journal,
};

constexpr std::string_view section_name(Section s)
{
  switch (s)
  {
  case Section::Thoughts:
    return "Thoughts";
  case Section::Action:
    return "Action";
  case Section::ChosenSubset:
    return "ChosenSubset";
  case Section::Reflection:
    return "Reflection";
  case Section::Journal:
    return "Journal";
  case Section::None:
    break;
  }
  return "None";
}

struct Alias
{
  std::string_view text;
  Section          section;
};

// Longer aliases first so "thoughts" wins over "thought".
constexpr std::array<Alias, 7> kAliases{{
    {"chosen subset", Section::ChosenSubset},
    {"chosensubset", Section::ChosenSubset},
    {"reflection", Section::Reflection},
    {"thoughts", Section::Thoughts},
    {"thought", Section::Thoughts},
    {"journal", Section::Journal},
    {"action", Section::Action},
}};

std::string lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s)
{
  auto const *ws = " \t\r\n";
  auto const  b  = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
  {
    return {};
  }
  auto const e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string_view strip_markup(std::string_view s)
{
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '*' || s[i] == '#' ||
                          s[i] == '_' || s[i] == '>'))
  {
    ++i;
  }
  return s.substr(i);
}

/// If `line` starts with `label` (case-insensitive) followed by optional
/// emphasis and a colon, returns the remainder after the colon.
std::optional<std::string_view> match_label(std::string_view line, std::string_view label)
{
  if (line.size() < label.size() || lower(line.substr(0, label.size())) != label)
  {
    return std::nullopt;
  }
  std::size_t i = label.size();
  while (i < line.size() && (line[i] == '*' || line[i] == '_' || line[i] == ' '))
  {
    ++i;
  }
  if (i >= line.size() || line[i] != ':')
  {
    return std::nullopt;
  }
  ++i;
  auto rest = line.substr(i);
  while (!rest.empty() && (rest.front() == '*' || rest.front() == '_' || rest.front() == ' '))
  {
    rest.remove_prefix(1);
  }
  return rest;
}

std::vector<std::string_view> split_lines(std::string_view text)
{
  std::vector<std::string_view> lines;
  std::size_t                   start = 0;
  while (start <= text.size())
  {
    auto const nl = text.find('\n', start);
    if (nl == std::string_view::npos)
    {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> words_of(std::string_view text)
{
  std::vector<std::string> words;
  std::string              cur;
  for (char c : text)
  {
    if (std::isalnum(static_cast<unsigned char>(c)))
    {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    else if (!cur.empty())
    {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty())
  {
    words.push_back(std::move(cur));
  }
  return words;
}

bool starts_with(std::string_view s, std::string_view p)
{
  return s.substr(0, p.size()) == p;
}

std::optional<std::string> canonical_item(std::string_view name,
                                          std::span<std::string const> items)
{
  auto const key = lower(trim(name));
  for (auto const &item : items)
  {
    if (lower(item) == key)
    {
      return item;
    }
  }
  return std::nullopt;
}

}  // namespace

DispatchAction parse_battery_action(std::string_view text)
{
  auto const words     = words_of(text);
  bool       serve     = false;
  bool       charge    = false;
  bool       discharge = false;
  bool       hold      = false;
  for (std::size_t i = 0; i < words.size(); ++i)
  {
    auto const &w = words[i];
    if (starts_with(w, "serv"))
    {
      serve = true;
    }
    else if (starts_with(w, "discharg"))
    {
      discharge = true;
      if (i > 0 && (words[i - 1] == "fully" || words[i - 1] == "full"))
      {
        serve = true;
      }
    }
    else if (starts_with(w, "charg") || starts_with(w, "recharg") || w == "buy" ||
             w == "buying" || w == "bought")
    {
      charge = true;
    }
    else if (w == "sell" || w == "selling" || w == "sold")
    {
      discharge = true;
    }
    else if (w == "nothing" || starts_with(w, "hold"))
    {
      hold = true;
    }
  }

  if (serve)
  {
    if (charge)
    {
      throw ParseError(ErrorCode::AmbiguousAction, "Action",
                       "serving load conflicts with charging");
    }
    return DispatchAction::ServeLoad;
  }
  int const kinds = int{charge} + int{discharge} + int{hold};
  if (kinds == 0)
  {
    throw ParseError(ErrorCode::ParseFailure, "Action", "no recognisable action keyword");
  }
  if (kinds > 1)
  {
    throw ParseError(ErrorCode::AmbiguousAction, "Action", "conflicting action keywords");
  }
  if (charge)
  {
    return DispatchAction::Charge;
  }
  if (discharge)
  {
    return DispatchAction::Discharge;
  }
  return DispatchAction::Hold;
}

TarjRecord parse_tarj(std::string_view text, TarjMode mode, std::span<std::string const> items)
{
  std::map<Section, std::vector<std::string_view>> content;
  std::vector<Section>                             order;
  std::map<std::string, std::optional<Money>>      bids;
  Section                                          current = Section::None;

  for (auto raw : split_lines(text))
  {
    auto const line = strip_markup(raw);

    bool labelled = false;
    for (auto const &alias : kAliases)
    {
      if (auto rest = match_label(line, alias.text))
      {
        if (content.count(alias.section) != 0)
        {
          throw ParseError(ErrorCode::ParseFailure, std::string(section_name(alias.section)),
                           "section appears twice");
        }
        current = alias.section;
        order.push_back(current);
        content[current].push_back(*rest);
        labelled = true;
        break;
      }
    }
    if (labelled)
    {
      continue;
    }

    if (mode == TarjMode::Auction &&
        (current == Section::Action || current == Section::ChosenSubset))
    {
      auto candidate = line;
      if (starts_with(candidate, "- "))
      {
        candidate.remove_prefix(2);
      }
      bool matched = false;
      for (auto const &item : items)
      {
        if (auto rest = match_label(candidate, lower(item)))
        {
          auto const value = trim(*rest);
          auto const lv    = lower(value);
          if (lv == "none" || lv == "none.")
          {
            bids[item] = std::nullopt;
          }
          else if (auto amount = parse_money(value); amount && amount->cents >= 0)
          {
            bids[item] = *amount;
          }
          else
          {
            throw ParseError(ErrorCode::ParseFailure, "Bids",
                             "bad amount for " + item + ": '" + std::string(value) + "'");
          }
          matched = true;
          break;
        }
      }
      if (matched)
      {
        continue;
      }
    }

    if (current != Section::None)
    {
      content[current].push_back(raw);
    }
  }

  std::vector<Section> required{Section::Thoughts, Section::Action};
  if (mode == TarjMode::Auction)
  {
    required.push_back(Section::ChosenSubset);
  }
  required.push_back(Section::Reflection);
  required.push_back(Section::Journal);
  for (auto s : required)
  {
    if (content.count(s) == 0)
    {
      throw ParseError(ErrorCode::ParseFailure, std::string(section_name(s)), "section missing");
    }
  }

  auto joined = [&](Section s) {
    std::string out;
    for (auto const &l : content[s])
    {
      if (!out.empty())
      {
        out.push_back('\n');
      }
      out += l;
    }
    return std::string(trim(out));
  };

  TarjRecord rec;
  rec.thoughts        = joined(Section::Thoughts);
  rec.action_text     = joined(Section::Action);
  rec.reflection      = joined(Section::Reflection);
  rec.journal         = joined(Section::Journal);
  rec.canonical_order = order == required;

  if (mode == TarjMode::Battery)
  {
    rec.parsed_action = parse_battery_action(rec.action_text);
    return rec;
  }

  auto subset_text = joined(Section::ChosenSubset);
  auto lowered     = lower(subset_text);
  if (!(lowered.empty() || lowered == "none" || lowered == "nothing" || lowered == "{}" ||
        lowered == "[]"))
  {
    std::vector<std::string> names;
    std::string_view         rest = subset_text;
    while (true)
    {
      auto const comma = rest.find(',');
      auto       part  = trim(rest.substr(0, comma));
      while (!part.empty() && (part.front() == '[' || part.front() == '{' ||
                               part.front() == '"' || part.front() == '\''))
      {
        part.remove_prefix(1);
      }
      while (!part.empty() && (part.back() == ']' || part.back() == '}' || part.back() == '"' ||
                               part.back() == '\'' || part.back() == '.'))
      {
        part.remove_suffix(1);
      }
      if (!part.empty())
      {
        auto canon = canonical_item(part, items);
        if (!canon)
        {
          throw ParseError(ErrorCode::UnknownItemName, "ChosenSubset", std::string(part));
        }
        names.push_back(*canon);
      }
      if (comma == std::string_view::npos)
      {
        break;
      }
      rest = rest.substr(comma + 1);
    }
    for (auto const &item : items)
    {
      if (std::find(names.begin(), names.end(), item) != names.end())
      {
        rec.chosen_subset.push_back(item);
      }
    }
  }

  for (auto const &item : items)
  {
    auto it = bids.find(item);
    if (it == bids.end())
    {
      throw ParseError(ErrorCode::ParseFailure, "Bids", "no bid line for " + item);
    }
    rec.bids.emplace_back(item, it->second);
  }
  return rec;
}

std::string render_tarj(TarjRecord const &record, TarjMode mode)
{
  std::string out;
  out += "Thoughts: " + record.thoughts + "\n";
  out += "Action: " + record.action_text + "\n";
  if (mode == TarjMode::Auction)
  {
    out += "ChosenSubset: ";
    for (std::size_t i = 0; i < record.chosen_subset.size(); ++i)
    {
      out += (i == 0 ? "" : ", ") + record.chosen_subset[i];
    }
    out += "\n";
    for (auto const &[item, amount] : record.bids)
    {
      out += item + ": " + (amount ? format_money(*amount) : std::string("none")) + "\n";
    }
  }
  out += "Reflection: " + record.reflection + "\n";
  out += "Journal: " + record.journal + "\n";
  return out;
}

}  // namespace enbench
