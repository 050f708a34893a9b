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

#include "enbench/agents.hpp"
#include "enbench/auction.hpp"
#include "enbench/config.hpp"
#include "enbench/dispatch.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace enbench {

/// Integer running sums. Merging two accumulators is exact, so aggregates
/// of split run sets equal the aggregate of the whole.
struct Accumulator
{
  std::int64_t n     = 0;
  std::int64_t sum   = 0;
  std::int64_t sumsq = 0;

  void add(std::int64_t x) noexcept
  {
    ++n;
    sum += x;
    sumsq += x * x;
  }
  void merge(Accumulator const &o) noexcept
  {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }

  std::optional<double> mean() const noexcept;
  /// Sample standard deviation; absent below two samples.
  std::optional<double> sd() const noexcept;

  bool operator==(Accumulator const &) const = default;
};

/// One agent under one condition in the battery experiment. SoC is tracked
/// in Wh after each day's action; reward is accumulated cents through the day.
struct BatteryCell
{
  std::string              agent;
  std::string              condition;
  std::vector<Accumulator> soc_wh;
  std::vector<Accumulator> reward_cents;
  int                      runs         = 0;
  int                      flagged_runs = 0;  // runs with parse-failure defaults
  int                      incidents    = 0;
  int                      coerced_days = 0;

  bool operator==(BatteryCell const &) const = default;
};

/// One agent-type condition in the auction experiment. Per-round arrays run
/// to the longest auction; shorter runs simply contribute nothing (n < runs).
struct AuctionCell
{
  std::string                           condition;
  std::vector<std::string>              items;
  std::vector<std::vector<Accumulator>> price_cents;  // [round][item], standing price after the round
  std::vector<Accumulator>              final_price_cents;
  std::vector<std::map<int, int>>       allocation;  // per item: bidder (0 = none) -> runs
  Accumulator                           rounds_used;
  int                                   runs                 = 0;
  int                                   natural_terminations = 0;
  int                                   flagged_runs         = 0;
  int                                   incidents            = 0;

  bool operator==(AuctionCell const &) const = default;
};

struct SeriesMetadata
{
  ExperimentKind             kind = ExperimentKind::Battery;
  std::uint64_t              master_seed = 0;
  std::vector<std::uint64_t> run_seeds;
  std::vector<int>           failed_runs;
  std::string                config_hash;
  std::string                git_revision;

  bool operator==(SeriesMetadata const &) const = default;
};

struct AggregateSeries
{
  SeriesMetadata           meta;
  int                      horizon = 0;
  std::vector<BatteryCell> battery;
  std::vector<AuctionCell> auction;

  /// No cell saw a single completed run.
  bool empty() const noexcept;

  /// Adds another series over the same cells (e.g. a second batch of runs).
  void merge(AggregateSeries const &other);

  nlohmann::json         to_json() const;
  static AggregateSeries from_json(nlohmann::json const &j);
  std::string            to_csv() const;

  bool operator==(AggregateSeries const &) const = default;
};

enum class ExportFormat
{
  Csv,
  Json,
};

std::optional<ExportFormat> export_format_from_string(std::string_view name) noexcept;

/// Writes the series. EmptySeries when nothing was aggregated, IoFailure
/// when the file cannot be written. Output is byte-stable.
void export_series(AggregateSeries const &series, ExportFormat format,
                   std::filesystem::path const &path);

struct BatteryRunCell
{
  std::string          agent;
  std::string          condition;
  Trajectory           trajectory;
  std::vector<LlmStep> steps;  // LLM agents only
  int                  incidents = 0;
};

struct BatteryRun
{
  int                         index = 0;
  std::uint64_t               seed  = 0;
  std::vector<Money>          prices;
  std::vector<BatteryRunCell> cells;
  std::string                 transcript;  // JSON lines
  std::optional<std::string>  error;
  double                      elapsed_ms = 0.0;

  /// One JSON object per (cell, day).
  std::string trajectory_jsonl() const;
};

struct AuctionRunCell
{
  std::string    condition;
  AuctionOutcome outcome;
  int            incidents = 0;
};

struct AuctionRun
{
  int                         index = 0;
  std::uint64_t               seed  = 0;
  std::vector<AuctionRunCell> cells;
  std::string                 transcript;
  std::optional<std::string>  error;
  double                      elapsed_ms = 0.0;

  /// One JSON object per (condition, round), then one outcome line per condition.
  std::string trajectory_jsonl() const;
};

struct RunOptions
{
  /// When set, runs/<i>/..., aggregate.csv, aggregate.json and manifest.json
  /// are written here.
  std::optional<std::filesystem::path> out_dir;
  /// Called from worker threads as runs complete.
  std::function<void(int index, bool ok)> on_run_done;
};

struct BatteryExperimentResult
{
  std::vector<BatteryRun> runs;
  AggregateSeries         series;
};

struct AuctionExperimentResult
{
  std::vector<AuctionRun> runs;
  AggregateSeries         series;
};

/// Price path for one run: depends only on (master seed, run index), so all
/// agents and conditions in a run face the same prices.
std::vector<Money> run_price_path(PriceModel const &model, int horizon, std::uint64_t master_seed,
                                  int run_index);

BatteryExperimentResult run_battery_experiment(ExperimentConfig const &config,
                                               RunOptions const &options = {});
AuctionExperimentResult run_auction_experiment(ExperimentConfig const &config,
                                               RunOptions const &options = {});

AggregateSeries aggregate_battery(ExperimentConfig const &config,
                                  std::vector<BatteryRun> const &runs);
AggregateSeries aggregate_auction(ExperimentConfig const &config,
                                  std::vector<AuctionRun> const &runs);

/// Revision the library was built from.
std::string_view git_revision() noexcept;

}  // namespace enbench
