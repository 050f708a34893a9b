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

#include "enbench/config.hpp"
#include "enbench/rng.hpp"
#include "prompt_assets.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace enbench {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void bad(std::string const &msg)
{
  throw Error(ErrorCode::InvalidConfig, msg);
}

void check_keys(json const &j, std::set<std::string> const &allowed, std::string const &what)
{
  if (!j.is_object())
  {
    bad(what + " must be a JSON object");
  }
  for (auto const &[key, value] : j.items())
  {
    if (allowed.count(key) == 0)
    {
      bad("unknown key \"" + key + "\" in " + what);
    }
  }
}

Money money_value(json const &j, std::string const &what)
{
  if (j.is_number())
  {
    if (auto m = money_from_double(j.get<double>()))
    {
      return *m;
    }
    bad(what + " must be a whole number of cents");
  }
  if (j.is_string())
  {
    if (auto m = parse_money(j.get<std::string>()))
    {
      return *m;
    }
  }
  bad(what + " must be a money amount");
}

Energy energy_value(json const &j, std::string const &what)
{
  if (j.is_number())
  {
    if (auto e = energy_from_kwh(j.get<double>()))
    {
      return *e;
    }
    bad(what + " must be a whole number of Wh");
  }
  bad(what + " must be a number of kWh");
}

template <typename T>
T get_or(json const &j, char const *key, T fallback)
{
  auto it = j.find(key);
  if (it == j.end() || it->is_null())
  {
    return fallback;
  }
  try
  {
    return it->get<T>();
  }
  catch (json::exception const &)
  {
    bad(std::string("\"") + key + "\" has the wrong type");
  }
}

std::uint64_t seed_value(json const &j, char const *key, std::uint64_t fallback)
{
  auto it = j.find(key);
  if (it == j.end() || it->is_null())
  {
    return fallback;
  }
  if (it->is_number_unsigned() || (it->is_number_integer() && it->get<std::int64_t>() >= 0))
  {
    return it->get<std::uint64_t>();
  }
  bad(std::string("\"") + key + "\" must be a non-negative integer");
}

/// A value that may be inline or a path to a JSON file.
json inline_or_file(json const &j, fs::path const &base_dir, fs::path *resolved = nullptr)
{
  if (j.is_string())
  {
    fs::path p = j.get<std::string>();
    if (p.is_relative())
    {
      p = base_dir / p;
    }
    if (resolved != nullptr)
    {
      *resolved = p;
    }
    return load_json_file(p);
  }
  return j;
}

fs::path resolve_path(std::string const &p, fs::path const &base_dir)
{
  fs::path path = p;
  return path.is_relative() ? base_dir / path : path;
}

std::string hex16(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ScriptEntry script_entry(json const &j)
{
  ScriptEntry e;
  if (j.is_string())
  {
    e.text = j.get<std::string>();
    return e;
  }
  if (j.is_object())
  {
    check_keys(j, {"text", "error"}, "script entry");
    if (j.contains("text"))
    {
      e.text = j["text"].get<std::string>();
    }
    if (j.contains("error"))
    {
      auto const name = j["error"].get<std::string>();
      e.failure       = failure_kind_from_string(name);
      if (!e.failure)
      {
        bad("unknown scripted failure \"" + name + "\"");
      }
    }
    if (e.text.has_value() == e.failure.has_value())
    {
      bad("script entry needs exactly one of \"text\" or \"error\"");
    }
    return e;
  }
  bad("script entries are strings or {\"text\"|\"error\"} objects");
}

ScriptBody script_body(json const &j, std::set<std::string> extra)
{
  extra.insert({"responses", "cycle", "keyed", "fallback"});
  check_keys(j, extra, "script");
  ScriptBody b;
  b.cycle = get_or(j, "cycle", false);
  if (j.contains("responses"))
  {
    for (auto const &r : j["responses"])
    {
      b.responses.push_back(script_entry(r));
    }
  }
  if (j.contains("keyed"))
  {
    if (j.contains("responses"))
    {
      bad("a script body is either ordered (\"responses\") or keyed, not both");
    }
    b.keyed = true;
    for (auto const &[hash, entry] : j["keyed"].items())
    {
      b.by_hash.emplace(hash, script_entry(entry));
    }
  }
  if (j.contains("fallback"))
  {
    b.fallback = script_entry(j["fallback"]);
    b.keyed    = !j.contains("responses");
  }
  return b;
}

Persona persona_value(json const &j)
{
  if (j.is_string())
  {
    return builtin_persona(j.get<std::string>());
  }
  check_keys(j, {"name", "description"}, "persona");
  Persona p{get_or<std::string>(j, "name", "Custom"), get_or<std::string>(j, "description", "")};
  p.validate();
  return p;
}

std::optional<IclExampleSet> icl_value(json const &j, fs::path const &base_dir)
{
  if (j.is_null())
  {
    return std::nullopt;
  }
  if (j.is_string() && j.get<std::string>() == "builtin")
  {
    return builtin_icl_examples();
  }
  return icl_from_json(inline_or_file(j, base_dir));
}

json icl_json(IclExampleSet const &icl)
{
  return {{"source", icl.source}, {"examples", icl.examples}};
}

json valuation_json(ValuationProfile const &p)
{
  json items = json::object();
  for (auto const &[name, v] : p.item_values)
  {
    items[name] = money_json(v);
  }
  json bundles = json::array();
  for (auto const &[set, v] : p.bundle_overrides)
  {
    bundles.push_back({{"items", std::vector<std::string>(set.begin(), set.end())},
                       {"value", money_json(v)}});
  }
  return {{"items", std::move(items)}, {"bundles", std::move(bundles)}};
}

AuctionBidderSpec bidder_spec(json const &j, BidderId id, fs::path const &base_dir)
{
  check_keys(j, {"id", "kind", "objective", "template", "template_hash", "zero_surplus"},
             "bidder binding");
  AuctionBidderSpec spec;
  spec.id         = id;
  auto const kind = get_or<std::string>(j, "kind", "straightforward");
  if (kind == "straightforward")
  {
    spec.kind = AuctionBidderSpec::Kind::Straightforward;
  }
  else if (kind == "llm")
  {
    spec.kind       = AuctionBidderSpec::Kind::Llm;
    auto const name = get_or<std::string>(j, "objective", "myopic-profit");
    auto const obj  = objective_kind_from_string(name);
    if (!obj)
    {
      bad("unknown objective \"" + name + "\"");
    }
    spec.objective = AuctionObjective::builtin(*obj);
    if (j.contains("template"))
    {
      auto const    path = resolve_path(j["template"].get<std::string>(), base_dir);
      std::ifstream in(path, std::ios::binary);
      if (!in)
      {
        throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      spec.objective->prompt_template = ss.str();
    }
    if (j.contains("template_hash"))
    {
      auto const &t = spec.objective->prompt_template;
      if (j["template_hash"].get<std::string>() != hex16(fnv1a64(t.data(), t.size())))
      {
        bad("bidder " + to_string(id) + " was recorded with a different prompt template");
      }
    }
  }
  else
  {
    bad("unknown bidder kind \"" + kind + "\"");
  }
  auto const zs = get_or<std::string>(j, "zero_surplus", "include");
  if (zs == "include")
  {
    spec.zero_surplus = ZeroSurplusPolicy::Include;
  }
  else if (zs == "exclude")
  {
    spec.zero_surplus = ZeroSurplusPolicy::Exclude;
  }
  else
  {
    bad("zero_surplus must be \"include\" or \"exclude\"");
  }
  return spec;
}

}  // namespace

json money_json(Money m)
{
  if (m.cents % 100 == 0)
  {
    return m.cents / 100;
  }
  return m.as_units();
}

json energy_json(Energy e)
{
  if (e.wh % 1000 == 0)
  {
    return e.wh / 1000;
  }
  return e.as_kwh();
}

json load_json_file(fs::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  }
  try
  {
    return json::parse(in);
  }
  catch (json::parse_error const &e)
  {
    bad(path.string() + ": " + e.what());
  }
}

Scenario scenario_from_json(json const &j)
{
  check_keys(j, {"prices", "battery", "blackout_days", "seed", "description"}, "scenario");
  Scenario s;
  if (j.contains("prices"))
  {
    auto const &p = j["prices"];
    check_keys(p, {"levels", "probabilities"}, "prices");
    s.prices.levels.clear();
    for (auto const &l : p.at("levels"))
    {
      s.prices.levels.push_back(money_value(l, "price level"));
    }
    s.prices.probabilities = p.at("probabilities").get<std::vector<double>>();
  }
  if (j.contains("battery"))
  {
    auto const &b = j["battery"];
    check_keys(b, {"capacity_kwh", "floor_kwh", "step_kwh", "horizon_days", "initial_soc_kwh"},
               "battery");
    if (b.contains("capacity_kwh"))
    {
      s.battery.capacity = energy_value(b["capacity_kwh"], "capacity_kwh");
    }
    if (b.contains("floor_kwh"))
    {
      s.battery.floor = energy_value(b["floor_kwh"], "floor_kwh");
    }
    if (b.contains("step_kwh"))
    {
      s.battery.step = energy_value(b["step_kwh"], "step_kwh");
    }
    if (b.contains("initial_soc_kwh"))
    {
      s.battery.initial_soc = energy_value(b["initial_soc_kwh"], "initial_soc_kwh");
    }
    s.battery.horizon = get_or(b, "horizon_days", s.battery.horizon);
  }
  if (j.contains("blackout_days"))
  {
    s.intervention.blackout_days = j["blackout_days"].get<std::set<int>>();
  }
  s.seed = seed_value(j, "seed", 0);
  s.validate();
  return s;
}

json scenario_to_json(Scenario const &s)
{
  json levels = json::array();
  for (auto l : s.prices.levels)
  {
    levels.push_back(money_json(l));
  }
  return {{"prices", {{"levels", levels}, {"probabilities", s.prices.probabilities}}},
          {"battery",
           {{"capacity_kwh", energy_json(s.battery.capacity)},
            {"floor_kwh", energy_json(s.battery.floor)},
            {"step_kwh", energy_json(s.battery.step)},
            {"horizon_days", s.battery.horizon},
            {"initial_soc_kwh", energy_json(s.battery.initial_soc)}}},
          {"blackout_days", s.intervention.blackout_days},
          {"seed", s.seed}};
}

ValuationTable valuations_from_json(json const &j)
{
  if (!j.is_object() || j.empty())
  {
    bad("valuations must be a non-empty object keyed by bidder id");
  }
  ValuationTable out;
  for (auto const &[key, body] : j.items())
  {
    int id = 0;
    try
    {
      std::size_t used = 0;
      id               = std::stoi(key, &used);
      if (used != key.size() || id < 1)
      {
        throw std::invalid_argument(key);
      }
    }
    catch (std::exception const &)
    {
      bad("valuation key \"" + key + "\" is not a bidder id");
    }
    check_keys(body, {"items", "bundles"}, "valuation for bidder " + key);
    ValuationProfile p;
    for (auto const &[name, v] : body.at("items").items())
    {
      p.item_values.emplace(name, money_value(v, "value of " + name));
    }
    if (body.contains("bundles"))
    {
      for (auto const &b : body["bundles"])
      {
        check_keys(b, {"items", "value"}, "bundle");
        auto const names = b.at("items").get<std::vector<std::string>>();
        std::set<std::string> set(names.begin(), names.end());
        if (set.size() != names.size())
        {
          bad("bundle lists an item twice");
        }
        if (!p.bundle_overrides.emplace(set, money_value(b.at("value"), "bundle value")).second)
        {
          bad("bundle given twice for bidder " + key);
        }
      }
    }
    p.validate();
    out.emplace(BidderId{id}, std::move(p));
  }
  return out;
}

void AuctionConfig::validate() const
{
  auto const state = AuctionState::open(items, bidders);
  if (bidders.empty() || items.empty())
  {
    bad("an auction needs at least one item and one bidder");
  }
  if (max_rounds < 1)
  {
    bad("max_rounds must be at least 1");
  }
  for (auto b : bidders)
  {
    auto it = valuations.find(b);
    if (it == valuations.end())
    {
      bad("no valuation for bidder " + to_string(b));
    }
    for (auto const &[name, v] : it->second.item_values)
    {
      state.item_index(name);
    }
    for (auto const &item : items)
    {
      if (it->second.item_values.count(item.name) == 0)
      {
        bad("bidder " + to_string(b) + " has no value for " + item.name);
      }
    }
    for (auto const &[set, v] : it->second.bundle_overrides)
    {
      for (auto const &name : set)
      {
        state.item_index(name);
      }
    }
  }
}

AuctionConfig auction_config_from_json(json const &j, fs::path const &base_dir)
{
  check_keys(j, {"items", "bidders", "valuations", "max_rounds", "seed", "description"},
             "auction config");
  AuctionConfig c;
  for (auto const &it : j.at("items"))
  {
    check_keys(it, {"name", "start_price", "increment"}, "item");
    Item item;
    item.name = it.at("name").get<std::string>();
    if (it.contains("start_price"))
    {
      item.start_price = money_value(it["start_price"], "start_price");
    }
    if (it.contains("increment"))
    {
      item.increment = money_value(it["increment"], "increment");
    }
    c.items.push_back(std::move(item));
  }
  c.valuations = valuations_from_json(inline_or_file(j.at("valuations"), base_dir));
  if (j.contains("bidders"))
  {
    for (int id : j["bidders"].get<std::vector<int>>())
    {
      c.bidders.push_back(BidderId{id});
    }
  }
  else
  {
    for (auto const &[id, p] : c.valuations)
    {
      c.bidders.push_back(id);
    }
  }
  c.max_rounds = get_or(j, "max_rounds", kDefaultMaxRounds);
  c.seed       = seed_value(j, "seed", 0);
  c.validate();
  return c;
}

ModelConfig model_config_from_json(json const &j)
{
  static std::set<std::string> const secrets{"api_key", "apikey", "key", "token",
                                             "authorization", "secret", "password"};
  for (auto const &[key, value] : j.items())
  {
    std::string lower = key;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (secrets.count(lower) != 0)
    {
      bad("credentials belong in the environment; name the variable with \"api_key_env\"");
    }
  }
  check_keys(j,
             {"endpoint", "model", "temperature", "max_tokens", "timeout_ms", "max_retries",
              "api_key_env", "system_prompt", "requests_per_minute", "initial_backoff_ms",
              "backoff_factor", "max_backoff_ms"},
             "model config");
  ModelConfig m;
  m.endpoint            = get_or(j, "endpoint", m.endpoint);
  m.model               = get_or(j, "model", m.model);
  m.temperature         = get_or(j, "temperature", m.temperature);
  m.max_tokens          = get_or(j, "max_tokens", m.max_tokens);
  m.timeout             = std::chrono::milliseconds(get_or<std::int64_t>(j, "timeout_ms", m.timeout.count()));
  m.max_retries         = get_or(j, "max_retries", m.max_retries);
  m.api_key_env         = get_or(j, "api_key_env", m.api_key_env);
  m.system_prompt       = get_or(j, "system_prompt", m.system_prompt);
  m.requests_per_minute = get_or(j, "requests_per_minute", m.requests_per_minute);
  m.initial_backoff     = std::chrono::milliseconds(
      get_or<std::int64_t>(j, "initial_backoff_ms", m.initial_backoff.count()));
  m.backoff_factor = get_or(j, "backoff_factor", m.backoff_factor);
  m.max_backoff =
      std::chrono::milliseconds(get_or<std::int64_t>(j, "max_backoff_ms", m.max_backoff.count()));
  m.validate();
  return m;
}

json model_config_to_json(ModelConfig const &m)
{
  return {{"endpoint", m.endpoint},
          {"model", m.model},
          {"temperature", m.temperature},
          {"max_tokens", m.max_tokens},
          {"timeout_ms", m.timeout.count()},
          {"max_retries", m.max_retries},
          {"api_key_env", m.api_key_env},
          {"system_prompt", m.system_prompt},
          {"requests_per_minute", m.requests_per_minute},
          {"initial_backoff_ms", m.initial_backoff.count()},
          {"backoff_factor", m.backoff_factor},
          {"max_backoff_ms", m.max_backoff.count()}};
}

IclExampleSet icl_from_json(json const &j)
{
  check_keys(j, {"source", "examples"}, "ICL example set");
  IclExampleSet set{get_or<std::string>(j, "source", ""),
                    j.at("examples").get<std::vector<std::string>>()};
  set.validate();
  return set;
}

IclExampleSet builtin_icl_examples()
{
  return icl_from_json(json::parse(assets::icl_blackout_examples()));
}

std::shared_ptr<ScriptedBackend> ScriptBody::make_backend() const
{
  if (keyed)
  {
    return ScriptedBackend::keyed(by_hash, fallback);
  }
  return ScriptedBackend::ordered(responses, cycle, fallback);
}

ScriptBody const &ScriptFile::resolve(int run, std::string const &label) const
{
  std::vector<std::string> keys{label};
  std::stringstream        ss(label);
  for (std::string part; std::getline(ss, part, '/');)
  {
    if (part != label)
    {
      keys.push_back(part);
    }
  }
  auto lookup = [&](std::map<std::string, ScriptBody> const &m) -> ScriptBody const * {
    for (auto const &k : keys)
    {
      if (auto it = m.find(k); it != m.end())
      {
        return &it->second;
      }
    }
    return nullptr;
  };
  if (auto ra = run_agents.find(run); ra != run_agents.end())
  {
    if (auto const *b = lookup(ra->second))
    {
      return *b;
    }
  }
  if (auto r = runs.find(run); r != runs.end())
  {
    return r->second;
  }
  if (auto const *b = lookup(agents))
  {
    return *b;
  }
  return base;
}

ScriptFile script_from_json(json const &j)
{
  ScriptFile f;
  f.base = script_body(j, {"agents", "runs", "description"});
  if (j.contains("agents"))
  {
    for (auto const &[label, body] : j["agents"].items())
    {
      f.agents.emplace(label, script_body(body, {}));
    }
  }
  if (j.contains("runs"))
  {
    for (auto const &[key, body] : j["runs"].items())
    {
      int run = 0;
      try
      {
        run = std::stoi(key);
      }
      catch (std::exception const &)
      {
        bad("script run key \"" + key + "\" is not a run index");
      }
      f.runs.emplace(run, script_body(body, {"agents"}));
      if (body.contains("agents"))
      {
        for (auto const &[label, ab] : body["agents"].items())
        {
          f.run_agents[run].emplace(label, script_body(ab, {}));
        }
      }
    }
  }
  return f;
}

json dp_solution_to_json(DpSolution const &sol)
{
  auto const &cfg = sol.config;
  json        socs = json::array();
  for (std::size_t i = 0; i < cfg.grid_size(); ++i)
  {
    socs.push_back(energy_json(cfg.soc_at(i)));
  }
  json levels = json::array();
  for (auto l : sol.prices.levels)
  {
    levels.push_back(money_json(l));
  }
  json actions = json::array();
  for (auto a : sol.policy.actions())
  {
    actions.push_back(std::string(to_string(a)));
  }
  return {
      {"grid",
       {{"floor_kwh", energy_json(cfg.floor)},
        {"capacity_kwh", energy_json(cfg.capacity)},
        {"step_kwh", energy_json(cfg.step)},
        {"size", cfg.grid_size()},
        {"soc_kwh", socs}}},
      {"horizon_days", cfg.horizon},
      {"initial_soc_kwh", energy_json(cfg.initial_soc)},
      {"prices", {{"levels", levels}, {"probabilities", sol.prices.probabilities}}},
      {"value_table",
       {{"units", "cents"},
        {"shape", {cfg.horizon + 1, cfg.grid_size()}},
        {"index", {"day (1..horizon+1)", "soc"}},
        {"values", sol.values.values()}}},
      {"policy_table",
       {{"shape", {cfg.horizon, cfg.grid_size(), sol.prices.levels.size()}},
        {"index", {"day (1..horizon)", "soc", "price level"}},
        {"actions", actions}}},
  };
}

std::string_view to_string(ExperimentKind kind) noexcept
{
  return kind == ExperimentKind::Battery ? "battery" : "auction";
}

std::string_view to_string(BackendKind kind) noexcept
{
  switch (kind)
  {
  case BackendKind::Live:
    return "live";
  case BackendKind::Scripted:
    return "scripted";
  case BackendKind::Replay:
    return "replay";
  }
  return "scripted";
}

std::optional<BackendKind> backend_kind_from_string(std::string_view name) noexcept
{
  for (auto k : {BackendKind::Live, BackendKind::Scripted, BackendKind::Replay})
  {
    if (to_string(k) == name)
    {
      return k;
    }
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const
{
  if (runs < 1)
  {
    bad("runs must be at least 1");
  }
  if (parallelism < 1)
  {
    bad("parallelism must be at least 1");
  }
  model.validate();
  std::set<std::string> names;
  if (kind == ExperimentKind::Battery)
  {
    scenario.validate();
    if (battery_agents.empty() || battery_conditions.empty())
    {
      bad("a battery experiment needs at least one agent and one condition");
    }
    for (auto const &a : battery_agents)
    {
      if (a.name.empty() || a.name.find('/') != std::string::npos || !names.insert(a.name).second)
      {
        bad("agent names must be unique, non-empty and free of '/': \"" + a.name + "\"");
      }
      if (a.kind == BatteryAgentSpec::Kind::Llm)
      {
        a.persona.validate();
      }
    }
    names.clear();
    for (auto const &c : battery_conditions)
    {
      if (c.name.empty() || c.name.find('/') != std::string::npos || !names.insert(c.name).second)
      {
        bad("condition names must be unique, non-empty and free of '/': \"" + c.name + "\"");
      }
      c.intervention.validate(scenario.battery.horizon);
      if (c.icl)
      {
        c.icl->validate();
      }
    }
  }
  else
  {
    auction.validate();
    if (auction_conditions.empty())
    {
      bad("an auction experiment needs at least one condition");
    }
    for (auto const &c : auction_conditions)
    {
      if (c.name.empty() || c.name.find('/') != std::string::npos || !names.insert(c.name).second)
      {
        bad("condition names must be unique, non-empty and free of '/': \"" + c.name + "\"");
      }
      if (c.bidders.size() != auction.bidders.size())
      {
        bad("condition " + c.name + " must bind every bidder exactly once");
      }
      for (auto const &b : c.bidders)
      {
        if (std::find(auction.bidders.begin(), auction.bidders.end(), b.id) ==
            auction.bidders.end())
        {
          bad("condition " + c.name + " binds unknown bidder " + to_string(b.id));
        }
        if (b.objective)
        {
          b.objective->validate();
        }
      }
    }
  }
  if (needs_backend())
  {
    if (backend.kind == BackendKind::Scripted && backend.script.empty())
    {
      bad("the scripted backend needs a script file");
    }
    if (backend.kind == BackendKind::Replay && backend.replay_dir.empty())
    {
      bad("the replay backend needs a recorded output directory");
    }
  }
}

bool ExperimentConfig::needs_backend() const
{
  if (kind == ExperimentKind::Battery)
  {
    return std::any_of(battery_agents.begin(), battery_agents.end(), [](auto const &a) {
      return a.kind == BatteryAgentSpec::Kind::Llm;
    });
  }
  return std::any_of(auction_conditions.begin(), auction_conditions.end(), [](auto const &c) {
    return std::any_of(c.bidders.begin(), c.bidders.end(), [](auto const &b) {
      return b.kind == AuctionBidderSpec::Kind::Llm;
    });
  });
}

json ExperimentConfig::to_json() const
{
  json j = {{"kind", std::string(enbench::to_string(kind))},
            {"runs", runs},
            {"seed", seed},
            {"memory_window", memory_window},
            {"transcript_clock", wall_clock ? "wall" : "logical"}};
  if (needs_backend())
  {
    json b = {{"kind", std::string(enbench::to_string(backend.kind))}};
    if (backend.kind == BackendKind::Scripted)
    {
      b["script"] = backend.script.generic_string();
    }
    if (backend.kind == BackendKind::Replay)
    {
      b["replay_dir"] = backend.replay_dir.generic_string();
    }
    j["backend"] = std::move(b);
    j["model"]   = model_config_to_json(model);
  }
  if (kind == ExperimentKind::Battery)
  {
    j["scenario"] = scenario_to_json(scenario);
    json agents   = json::array();
    for (auto const &a : battery_agents)
    {
      json aj = {{"name", a.name}};
      switch (a.kind)
      {
      case BatteryAgentSpec::Kind::Llm:
        aj["kind"]    = "llm";
        aj["persona"] = {{"name", a.persona.name}, {"description", a.persona.description}};
        break;
      case BatteryAgentSpec::Kind::Dp:
        aj["kind"] = "dp";
        break;
      case BatteryAgentSpec::Kind::Greedy:
        aj["kind"] = "greedy";
        break;
      }
      agents.push_back(std::move(aj));
    }
    j["agents"]       = std::move(agents);
    json conditions   = json::array();
    for (auto const &c : battery_conditions)
    {
      conditions.push_back({{"name", c.name},
                            {"icl", c.icl ? icl_json(*c.icl) : json(nullptr)},
                            {"blackout_days", c.intervention.blackout_days}});
    }
    j["conditions"] = std::move(conditions);
  }
  else
  {
    json items = json::array();
    for (auto const &it : auction.items)
    {
      items.push_back({{"name", it.name},
                       {"start_price", money_json(it.start_price)},
                       {"increment", money_json(it.increment)}});
    }
    json vals = json::object();
    for (auto const &[id, p] : auction.valuations)
    {
      vals[to_string(id)] = valuation_json(p);
    }
    std::vector<int> bidders;
    for (auto b : auction.bidders)
    {
      bidders.push_back(value_of(b));
    }
    j["auction"] = {{"items", items},
                    {"bidders", bidders},
                    {"valuations", vals},
                    {"max_rounds", auction.max_rounds},
                    {"seed", auction.seed}};
    json conditions = json::array();
    for (auto const &c : auction_conditions)
    {
      json bj = json::array();
      for (auto const &b : c.bidders)
      {
        json one = {{"id", value_of(b.id)},
                    {"kind", b.kind == AuctionBidderSpec::Kind::Llm ? "llm" : "straightforward"},
                    {"zero_surplus",
                     b.zero_surplus == ZeroSurplusPolicy::Include ? "include" : "exclude"}};
        if (b.objective)
        {
          one["objective"] = std::string(enbench::to_string(b.objective->kind));
          auto const &t    = b.objective->prompt_template;
          one["template_hash"] = hex16(fnv1a64(t.data(), t.size()));
        }
        bj.push_back(std::move(one));
      }
      conditions.push_back({{"name", c.name}, {"bidders", std::move(bj)}});
    }
    j["conditions"] = std::move(conditions);
  }
  return j;
}

std::string ExperimentConfig::hash() const
{
  auto j = to_json();
  // Where the replies come from is not part of what is being measured.
  j.erase("backend");
  auto const text = j.dump();
  return hex16(fnv1a64(text.data(), text.size()));
}

ExperimentConfig experiment_from_json(json const &j, fs::path const &base_dir)
{
  if (!j.is_object())
  {
    bad("experiment config must be a JSON object");
  }
  ExperimentConfig cfg;
  if (!j.contains("kind"))
  {
    // A bare auction config: straightforward bidders, one condition.
    cfg.kind    = ExperimentKind::Auction;
    cfg.auction = auction_config_from_json(j, base_dir);
    cfg.runs    = 30;
    cfg.seed    = cfg.auction.seed;
    cfg.memory_window = 0;
    AuctionCondition c{"straightforward", {}};
    for (auto b : cfg.auction.bidders)
    {
      AuctionBidderSpec spec;
      spec.id = b;
      c.bidders.push_back(spec);
    }
    cfg.auction_conditions.push_back(std::move(c));
    cfg.validate();
    return cfg;
  }

  check_keys(j,
             {"kind", "description", "runs", "seed", "parallelism", "backend", "model",
              "transcript_clock", "memory_window", "scenario", "agents", "conditions", "auction"},
             "experiment config");
  auto const kind = j["kind"].get<std::string>();
  if (kind == "battery")
  {
    cfg.kind = ExperimentKind::Battery;
    cfg.runs = 40;
  }
  else if (kind == "auction")
  {
    cfg.kind = ExperimentKind::Auction;
    cfg.runs = 30;
  }
  else
  {
    bad("experiment kind must be \"battery\" or \"auction\"");
  }
  cfg.runs          = get_or(j, "runs", cfg.runs);
  cfg.seed          = seed_value(j, "seed", 0);
  cfg.parallelism   = get_or(j, "parallelism", 1);
  cfg.memory_window = get_or<std::size_t>(j, "memory_window",
                                          cfg.kind == ExperimentKind::Battery ? 20 : 0);
  auto const clock  = get_or<std::string>(j, "transcript_clock", "logical");
  if (clock != "logical" && clock != "wall")
  {
    bad("transcript_clock must be \"logical\" or \"wall\"");
  }
  cfg.wall_clock = clock == "wall";

  if (j.contains("model"))
  {
    cfg.model = model_config_from_json(inline_or_file(j["model"], base_dir));
  }
  if (j.contains("backend"))
  {
    auto const &b = j["backend"];
    check_keys(b, {"kind", "script", "replay_dir"}, "backend");
    auto const name = get_or<std::string>(b, "kind", "scripted");
    auto const bk   = backend_kind_from_string(name);
    if (!bk)
    {
      bad("backend kind must be live, scripted or replay");
    }
    cfg.backend.kind = *bk;
    if (b.contains("script"))
    {
      cfg.backend.script = resolve_path(b["script"].get<std::string>(), base_dir);
    }
    if (b.contains("replay_dir"))
    {
      cfg.backend.replay_dir = resolve_path(b["replay_dir"].get<std::string>(), base_dir);
    }
  }

  if (cfg.kind == ExperimentKind::Battery)
  {
    if (j.contains("scenario"))
    {
      cfg.scenario = scenario_from_json(inline_or_file(j["scenario"], base_dir));
    }
    for (auto const &a : j.value("agents", json::array()))
    {
      check_keys(a, {"name", "kind", "persona"}, "battery agent");
      BatteryAgentSpec spec;
      auto const       k = get_or<std::string>(a, "kind", "llm");
      if (k == "llm")
      {
        spec.kind    = BatteryAgentSpec::Kind::Llm;
        spec.persona = persona_value(a.at("persona"));
        spec.name    = get_or(a, "name", spec.persona.name);
      }
      else if (k == "dp")
      {
        spec.kind = BatteryAgentSpec::Kind::Dp;
        spec.name = get_or<std::string>(a, "name", "DP");
      }
      else if (k == "greedy")
      {
        spec.kind = BatteryAgentSpec::Kind::Greedy;
        spec.name = get_or<std::string>(a, "name", "Greedy");
      }
      else
      {
        bad("unknown battery agent kind \"" + k + "\"");
      }
      cfg.battery_agents.push_back(std::move(spec));
    }
    if (j.contains("conditions"))
    {
      for (auto const &c : j["conditions"])
      {
        check_keys(c, {"name", "icl", "blackout_days"}, "condition");
        BatteryCondition cond;
        cond.name         = c.at("name").get<std::string>();
        cond.icl          = icl_value(c.value("icl", json(nullptr)), base_dir);
        cond.intervention = cfg.scenario.intervention;
        if (c.contains("blackout_days"))
        {
          cond.intervention.blackout_days = c["blackout_days"].get<std::set<int>>();
        }
        cfg.battery_conditions.push_back(std::move(cond));
      }
    }
    else
    {
      cfg.battery_conditions.push_back({"baseline", std::nullopt, cfg.scenario.intervention});
    }
  }
  else
  {
    if (!j.contains("auction"))
    {
      bad("an auction experiment needs an \"auction\" config");
    }
    fs::path   resolved;
    auto const aj   = inline_or_file(j["auction"], base_dir, &resolved);
    cfg.auction     = auction_config_from_json(
        aj, resolved.empty() ? base_dir : resolved.parent_path());
    auto const conds = j.value("conditions", json::array({{{"name", "straightforward"}}}));
    for (auto const &c : conds)
    {
      check_keys(c, {"name", "bidders"}, "condition");
      AuctionCondition cond;
      cond.name          = c.at("name").get<std::string>();
      auto const binding = c.value("bidders", json::object());
      if (binding.is_object())
      {
        for (auto b : cfg.auction.bidders)
        {
          cond.bidders.push_back(bidder_spec(binding, b, base_dir));
        }
      }
      else
      {
        std::set<int> seen;
        for (auto const &one : binding)
        {
          int const id = one.at("id").get<int>();
          if (!seen.insert(id).second)
          {
            bad("condition " + cond.name + " binds bidder " + std::to_string(id) + " twice");
          }
          cond.bidders.push_back(bidder_spec(one, BidderId{id}, base_dir));
        }
      }
      cfg.auction_conditions.push_back(std::move(cond));
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(fs::path const &path)
{
  return experiment_from_json(load_json_file(path), path.parent_path());
}

ExperimentConfig default_battery_experiment()
{
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Battery;
  cfg.runs = 40;
  for (auto const *name : {"Thinker", "Realist", "Feeler"})
  {
    cfg.battery_agents.push_back({name, BatteryAgentSpec::Kind::Llm, builtin_persona(name)});
  }
  cfg.battery_agents.push_back({"DP", BatteryAgentSpec::Kind::Dp, {}});
  cfg.battery_agents.push_back({"Greedy", BatteryAgentSpec::Kind::Greedy, {}});
  cfg.battery_conditions.push_back({"no-ICL", std::nullopt, cfg.scenario.intervention});
  cfg.battery_conditions.push_back({"ICL-blackout", builtin_icl_examples(), cfg.scenario.intervention});
  return cfg;
}

std::string_view to_string(ConfigKind kind) noexcept
{
  switch (kind)
  {
  case ConfigKind::Experiment:
    return "experiment";
  case ConfigKind::Scenario:
    return "scenario";
  case ConfigKind::Auction:
    return "auction";
  case ConfigKind::Valuations:
    return "valuations";
  case ConfigKind::Model:
    return "model";
  case ConfigKind::Script:
    return "script";
  case ConfigKind::Icl:
    return "icl";
  }
  return "experiment";
}

std::optional<ConfigKind> config_kind_from_string(std::string_view name) noexcept
{
  for (auto k : {ConfigKind::Experiment, ConfigKind::Scenario, ConfigKind::Auction,
                 ConfigKind::Valuations, ConfigKind::Model, ConfigKind::Script, ConfigKind::Icl})
  {
    if (to_string(k) == name)
    {
      return k;
    }
  }
  return std::nullopt;
}

ConfigKind detect_config_kind(json const &j)
{
  if (!j.is_object())
  {
    bad("config must be a JSON object");
  }
  if (j.contains("kind"))
  {
    return ConfigKind::Experiment;
  }
  if (j.contains("items") && j["items"].is_array())
  {
    return ConfigKind::Auction;
  }
  if (j.contains("examples"))
  {
    return ConfigKind::Icl;
  }
  if (j.contains("responses") || j.contains("keyed") || j.contains("fallback") ||
      j.contains("agents") || j.contains("runs"))
  {
    return ConfigKind::Script;
  }
  if (j.contains("endpoint") || j.contains("model") || j.contains("api_key_env"))
  {
    return ConfigKind::Model;
  }
  if (j.contains("battery") || j.contains("prices") || j.contains("blackout_days"))
  {
    return ConfigKind::Scenario;
  }
  if (!j.empty() && std::all_of(j.begin(), j.end(), [](json const &v) {
        return v.is_object() && v.contains("items");
      }))
  {
    return ConfigKind::Valuations;
  }
  bad("cannot tell what kind of config this is");
}

ConfigKind validate_config_file(fs::path const &path, std::optional<ConfigKind> kind)
{
  auto const j    = load_json_file(path);
  auto const base = path.parent_path();
  auto const k    = kind.value_or(detect_config_kind(j));
  switch (k)
  {
  case ConfigKind::Experiment: {
    auto const cfg = experiment_from_json(j, base);
    if (cfg.needs_backend() && cfg.backend.kind == BackendKind::Scripted)
    {
      script_from_json(load_json_file(cfg.backend.script));
    }
    break;
  }
  case ConfigKind::Scenario:
    scenario_from_json(j);
    break;
  case ConfigKind::Auction:
    auction_config_from_json(j, base);
    break;
  case ConfigKind::Valuations:
    valuations_from_json(j);
    break;
  case ConfigKind::Model:
    model_config_from_json(j);
    break;
  case ConfigKind::Script:
    script_from_json(j);
    break;
  case ConfigKind::Icl:
    icl_from_json(j);
    break;
  }
  return k;
}

}  // namespace enbench
