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
#include "enbench/dispatch.hpp"
#include "enbench/llm.hpp"
#include "enbench/prompts.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace enbench {

/// Reads and parses a JSON file. IoFailure when unreadable, InvalidConfig
/// when malformed.
nlohmann::json load_json_file(std::filesystem::path const &path);

/// Whole amounts as integers, anything else as a decimal number.
nlohmann::json money_json(Money m);
nlohmann::json energy_json(Energy e);

Scenario       scenario_from_json(nlohmann::json const &j);
nlohmann::json scenario_to_json(Scenario const &scenario);

using ValuationTable = std::map<BidderId, ValuationProfile>;

/// {"<bidder>": {"items": {name: value}, "bundles": [{"items": [...], "value": v}]}}
ValuationTable valuations_from_json(nlohmann::json const &j);

struct AuctionConfig
{
  std::vector<Item>     items;
  std::vector<BidderId> bidders;
  ValuationTable        valuations;
  int                   max_rounds = kDefaultMaxRounds;
  std::uint64_t         seed       = 0;

  void validate() const;
};

/// `valuations` may be inline or a path relative to `base_dir`.
AuctionConfig auction_config_from_json(nlohmann::json const &j,
                                       std::filesystem::path const &base_dir = {});

/// Rejects anything that looks like an inline secret.
ModelConfig    model_config_from_json(nlohmann::json const &j);
nlohmann::json model_config_to_json(ModelConfig const &config);

IclExampleSet icl_from_json(nlohmann::json const &j);
/// The ICL set shipped with the library.
IclExampleSet builtin_icl_examples();

/// One script body: an ordered list of replies, or replies keyed by prompt hash.
struct ScriptBody
{
  bool                               keyed = false;
  bool                               cycle = false;
  std::vector<ScriptEntry>           responses;
  std::map<std::string, ScriptEntry> by_hash;
  std::optional<ScriptEntry>         fallback;

  std::shared_ptr<ScriptedBackend> make_backend() const;
};

/// Scripted-backend file. Every (run, agent) pair gets a fresh backend from
/// the most specific body: runs[r].agents[label], runs[r], agents[label],
/// then the top level.
struct ScriptFile
{
  ScriptBody                                          base;
  std::map<std::string, ScriptBody>                   agents;
  std::map<int, ScriptBody>                           runs;
  std::map<int, std::map<std::string, ScriptBody>>    run_agents;

  /// Labels match exactly, or on any '/'-separated component.
  ScriptBody const &resolve(int run, std::string const &label) const;
};

ScriptFile script_from_json(nlohmann::json const &j);

/// Battery dispatch table export: grid spec plus row-major arrays.
nlohmann::json dp_solution_to_json(DpSolution const &solution);

enum class ExperimentKind
{
  Battery,
  Auction,
};

std::string_view to_string(ExperimentKind kind) noexcept;

enum class BackendKind
{
  Live,
  Scripted,
  Replay,
};

std::string_view           to_string(BackendKind kind) noexcept;
std::optional<BackendKind> backend_kind_from_string(std::string_view name) noexcept;

struct BackendSpec
{
  BackendKind           kind = BackendKind::Scripted;
  std::filesystem::path script;      // scripted
  std::filesystem::path replay_dir;  // replay: a previous output directory
};

struct BatteryAgentSpec
{
  enum class Kind
  {
    Llm,
    Dp,
    Greedy,
  };

  std::string name;
  Kind        kind = Kind::Llm;
  Persona     persona;  // Llm only
};

struct BatteryCondition
{
  std::string                  name;
  std::optional<IclExampleSet> icl;
  Intervention                 intervention;
};

struct AuctionBidderSpec
{
  enum class Kind
  {
    Straightforward,
    Llm,
  };

  BidderId                        id{};
  Kind                            kind = Kind::Straightforward;
  ZeroSurplusPolicy               zero_surplus = ZeroSurplusPolicy::Include;
  std::optional<AuctionObjective> objective;  // Llm only
};

struct AuctionCondition
{
  std::string                    name;
  std::vector<AuctionBidderSpec> bidders;
};

struct ExperimentConfig
{
  ExperimentKind kind        = ExperimentKind::Battery;
  int            runs        = 40;
  std::uint64_t  seed        = 0;
  int            parallelism = 1;
  BackendSpec    backend;
  ModelConfig    model;
  bool           wall_clock    = false;
  std::size_t    memory_window = 20;

  Scenario                      scenario;
  std::vector<BatteryAgentSpec> battery_agents;
  std::vector<BatteryCondition> battery_conditions;

  AuctionConfig                 auction;
  std::vector<AuctionCondition> auction_conditions;

  void validate() const;
  bool needs_backend() const;

  /// Resolved configuration with every default filled in. Parallelism is
  /// left out: it never changes results.
  nlohmann::json to_json() const;
  /// 16 hex digits over to_json() without the backend block, so a replay
  /// hashes the same as the session it replays.
  std::string hash() const;
};

/// Parses an experiment file. Relative paths resolve against `base_dir`. A
/// bare auction config (no "kind") becomes a straightforward-bidder auction
/// experiment.
ExperimentConfig experiment_from_json(nlohmann::json const &j,
                                      std::filesystem::path const &base_dir = {});
ExperimentConfig load_experiment(std::filesystem::path const &path);

/// Default battery experiment: three personas plus DP and greedy, with
/// and without the built-in ICL set, blackout on day 10.
ExperimentConfig default_battery_experiment();

enum class ConfigKind
{
  Experiment,
  Scenario,
  Auction,
  Valuations,
  Model,
  Script,
  Icl,
};

std::string_view          to_string(ConfigKind kind) noexcept;
std::optional<ConfigKind> config_kind_from_string(std::string_view name) noexcept;

/// Guesses what a config document is from its keys.
ConfigKind detect_config_kind(nlohmann::json const &j);

/// Loads and fully validates a config file. Returns its kind.
ConfigKind validate_config_file(std::filesystem::path const &path,
                                std::optional<ConfigKind> kind = std::nullopt);

}  // namespace enbench
