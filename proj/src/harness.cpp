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

#include "enbench/harness.hpp"
#include "enbench/log.hpp"
#include "enbench/rng.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <mutex>
#include <thread>

#ifndef ENBENCH_GIT_REVISION
#define ENBENCH_GIT_REVISION "unknown"
#endif

namespace enbench {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string number_text(double v)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string opt_text(std::optional<double> v)
{
  return v ? number_text(*v) : std::string();
}

json opt_json(std::optional<double> v)
{
  return v ? json(*v) : json(nullptr);
}

std::optional<double> scaled(std::optional<double> v, double divisor)
{
  if (!v)
  {
    return std::nullopt;
  }
  return *v / divisor;
}

json acc_json(Accumulator const &a)
{
  return {{"n", a.n}, {"sum", a.sum}, {"sumsq", a.sumsq}};
}

Accumulator acc_from(json const &j)
{
  return {j.at("n").get<std::int64_t>(), j.at("sum").get<std::int64_t>(),
          j.at("sumsq").get<std::int64_t>()};
}

void write_text(fs::path const &path, std::string const &text)
{
  std::error_code ec;
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  }
  out << text;
  out.flush();
  if (!out)
  {
    throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
  }
}

std::string iso_now()
{
  auto const t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm    tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json standing_json(Standing const &s)
{
  return {{"price", money_json(s.price)},
          {"high_bidder", s.bidder ? json(value_of(*s.bidder)) : json(nullptr)}};
}

json round_json(RoundResult const &r)
{
  json items = json::array();
  for (auto const &o : r.items)
  {
    json accepted = json::array();
    for (auto const &b : o.accepted)
    {
      accepted.push_back({{"bidder", value_of(b.bidder)}, {"amount", money_json(b.amount)}});
    }
    json rejected = json::array();
    for (auto const &rb : o.rejected)
    {
      rejected.push_back({{"bidder", value_of(rb.bid.bidder)},
                          {"amount", money_json(rb.bid.amount)},
                          {"minimum", money_json(rb.minimum)},
                          {"reason", "BelowMinimum"}});
    }
    std::vector<int> losers;
    for (auto l : o.tie_losers)
    {
      losers.push_back(value_of(l));
    }
    items.push_back({{"item", o.item},
                     {"accepted", std::move(accepted)},
                     {"rejected", std::move(rejected)},
                     {"before", standing_json(o.before)},
                     {"after", standing_json(o.after)},
                     {"tie_broken", o.tie_broken},
                     {"tie_losers", losers}});
  }
  return {{"round", r.round}, {"items", std::move(items)}, {"changed", r.changed}};
}

/// Everything a run needs to build LLM clients.
class ClientFactory
{
public:
  explicit ClientFactory(ExperimentConfig const &cfg)
    : cfg_(cfg)
  {
    if (!cfg.needs_backend())
    {
      return;
    }
    switch (cfg.backend.kind)
    {
    case BackendKind::Scripted:
      script_ = script_from_json(load_json_file(cfg.backend.script));
      break;
    case BackendKind::Live:
      live_ = std::make_shared<HttpBackend>(cfg.model);
      if (cfg.model.requests_per_minute > 0)
      {
        limiter_ = std::make_shared<RateLimiter>(cfg.model.requests_per_minute);
      }
      break;
    case BackendKind::Replay:
      break;
    }
  }

  /// Per-run state: one transcript and one clock shared by the run's clients.
  struct RunScope
  {
    int                          run = 0;
    std::shared_ptr<Transcript>  transcript = std::make_shared<Transcript>();
    std::shared_ptr<Clock>       clock;
    std::shared_ptr<ChatBackend> replay;
  };

  RunScope open_run(int run) const
  {
    RunScope scope;
    scope.run = run;
    if (cfg_.wall_clock)
    {
      scope.clock = std::make_shared<WallClock>();
    }
    else
    {
      scope.clock = std::make_shared<LogicalClock>();
    }
    if (cfg_.needs_backend() && cfg_.backend.kind == BackendKind::Replay)
    {
      scope.replay = ReplayBackend::from_file(cfg_.backend.replay_dir / "runs" /
                                              std::to_string(run) / "transcript.jsonl");
    }
    return scope;
  }

  std::shared_ptr<LlmClient> client(RunScope const &scope, std::string const &label) const
  {
    std::shared_ptr<ChatBackend> backend;
    switch (cfg_.backend.kind)
    {
    case BackendKind::Scripted:
      backend = script_->resolve(scope.run, label).make_backend();
      break;
    case BackendKind::Live:
      backend = live_;
      break;
    case BackendKind::Replay:
      backend = scope.replay;
      break;
    }
    ClientDeps deps;
    deps.transcript = scope.transcript;
    deps.clock      = scope.clock;
    if (cfg_.backend.kind == BackendKind::Live)
    {
      deps.limiter = limiter_;
      deps.sleeper = real_sleeper();
    }
    else
    {
      // Offline backends answer instantly; waiting between retries buys nothing.
      deps.sleeper = [](std::chrono::milliseconds) {};
    }
    return std::make_shared<LlmClient>(cfg_.model, std::move(backend), label, std::move(deps));
  }

private:
  ExperimentConfig const      &cfg_;
  std::optional<ScriptFile>    script_;
  std::shared_ptr<ChatBackend> live_;
  std::shared_ptr<RateLimiter> limiter_;
};

/// Runs body(i) for i in [0, n) on up to `parallelism` threads.
void run_pool(int n, int parallelism, std::function<void(int)> const &body)
{
  int const workers = std::max(1, std::min(parallelism, n));
  if (workers == 1)
  {
    for (int i = 0; i < n; ++i)
    {
      body(i);
    }
    return;
  }
  std::atomic<int>         next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
  {
    threads.emplace_back([&] {
      for (int i = next++; i < n; i = next++)
      {
        body(i);
      }
    });
  }
  for (auto &t : threads)
  {
    t.join();
  }
}

double elapsed_ms_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

SeriesMetadata series_meta(ExperimentConfig const &cfg)
{
  SeriesMetadata m;
  m.kind         = cfg.kind;
  m.master_seed  = cfg.seed;
  m.config_hash  = cfg.hash();
  m.git_revision = std::string(git_revision());
  return m;
}

template <typename Run>
json manifest_json(ExperimentConfig const &cfg, std::vector<Run> const &runs,
                   std::string const &started, std::string const &finished, double total_ms)
{
  json rj = json::array();
  for (auto const &r : runs)
  {
    int incidents = 0;
    for (auto const &c : r.cells)
    {
      incidents += c.incidents;
    }
    rj.push_back({{"index", r.index},
                  {"seed", r.seed},
                  {"status", r.error ? "failed" : "ok"},
                  {"error", r.error ? json(*r.error) : json(nullptr)},
                  {"incidents", incidents},
                  {"elapsed_ms", r.elapsed_ms}});
  }
  return {{"kind", std::string(to_string(cfg.kind))},
          {"config_hash", cfg.hash()},
          {"master_seed", cfg.seed},
          {"git_revision", std::string(git_revision())},
          {"parallelism", cfg.parallelism},
          {"started_at", started},
          {"finished_at", finished},
          {"elapsed_ms", total_ms},
          {"runs", std::move(rj)},
          {"effective_config", cfg.to_json()}};
}

template <typename Run>
void write_outputs(fs::path const &out, ExperimentConfig const &cfg, std::vector<Run> const &runs,
                   AggregateSeries const &series, std::string const &started, double total_ms)
{
  for (auto const &r : runs)
  {
    auto const dir = out / "runs" / std::to_string(r.index);
    write_text(dir / "trajectory.jsonl", r.trajectory_jsonl());
    write_text(dir / "transcript.jsonl", r.transcript);
  }
  if (!series.empty())
  {
    export_series(series, ExportFormat::Csv, out / "aggregate.csv");
    export_series(series, ExportFormat::Json, out / "aggregate.json");
  }
  else
  {
    log_message(LogLevel::Error, "every run failed; no aggregate written");
  }
  write_text(out / "manifest.json",
             manifest_json(cfg, runs, started, iso_now(), total_ms).dump(2) + "\n");
}

}  // namespace

std::optional<double> Accumulator::mean() const noexcept
{
  if (n == 0)
  {
    return std::nullopt;
  }
  return static_cast<double>(sum) / static_cast<double>(n);
}

std::optional<double> Accumulator::sd() const noexcept
{
  if (n < 2)
  {
    return std::nullopt;
  }
  // n * sumsq - sum^2 is exact in integers before the single division.
  long double const num = static_cast<long double>(n) * static_cast<long double>(sumsq) -
                          static_cast<long double>(sum) * static_cast<long double>(sum);
  long double const var = num / (static_cast<long double>(n) * static_cast<long double>(n - 1));
  return static_cast<double>(std::sqrt(std::max<long double>(0.0L, var)));
}

bool AggregateSeries::empty() const noexcept
{
  for (auto const &c : battery)
  {
    if (c.runs > 0)
    {
      return false;
    }
  }
  for (auto const &c : auction)
  {
    if (c.runs > 0)
    {
      return false;
    }
  }
  return true;
}

namespace {

void merge_accs(std::vector<Accumulator> &into, std::vector<Accumulator> const &from)
{
  if (into.size() < from.size())
  {
    into.resize(from.size());
  }
  for (std::size_t i = 0; i < from.size(); ++i)
  {
    into[i].merge(from[i]);
  }
}

}  // namespace

void AggregateSeries::merge(AggregateSeries const &other)
{
  if (other.meta.kind != meta.kind || other.battery.size() != battery.size() ||
      other.auction.size() != auction.size() || other.horizon != horizon)
  {
    throw Error(ErrorCode::InvalidConfig, "cannot merge series with different shapes");
  }
  meta.run_seeds.insert(meta.run_seeds.end(), other.meta.run_seeds.begin(),
                        other.meta.run_seeds.end());
  meta.failed_runs.insert(meta.failed_runs.end(), other.meta.failed_runs.begin(),
                          other.meta.failed_runs.end());
  for (std::size_t i = 0; i < battery.size(); ++i)
  {
    auto       &a = battery[i];
    auto const &b = other.battery[i];
    if (a.agent != b.agent || a.condition != b.condition)
    {
      throw Error(ErrorCode::InvalidConfig, "cannot merge series with different cells");
    }
    merge_accs(a.soc_wh, b.soc_wh);
    merge_accs(a.reward_cents, b.reward_cents);
    a.runs += b.runs;
    a.flagged_runs += b.flagged_runs;
    a.incidents += b.incidents;
    a.coerced_days += b.coerced_days;
  }
  for (std::size_t i = 0; i < auction.size(); ++i)
  {
    auto       &a = auction[i];
    auto const &b = other.auction[i];
    if (a.condition != b.condition || a.items != b.items)
    {
      throw Error(ErrorCode::InvalidConfig, "cannot merge series with different cells");
    }
    if (a.price_cents.size() < b.price_cents.size())
    {
      a.price_cents.resize(b.price_cents.size(), std::vector<Accumulator>(a.items.size()));
    }
    for (std::size_t r = 0; r < b.price_cents.size(); ++r)
    {
      merge_accs(a.price_cents[r], b.price_cents[r]);
    }
    merge_accs(a.final_price_cents, b.final_price_cents);
    for (std::size_t k = 0; k < b.allocation.size(); ++k)
    {
      for (auto const &[bidder, count] : b.allocation[k])
      {
        a.allocation[k][bidder] += count;
      }
    }
    a.rounds_used.merge(b.rounds_used);
    a.runs += b.runs;
    a.natural_terminations += b.natural_terminations;
    a.flagged_runs += b.flagged_runs;
    a.incidents += b.incidents;
  }
}

json AggregateSeries::to_json() const
{
  json meta_j = {{"master_seed", meta.master_seed},
                 {"run_seeds", meta.run_seeds},
                 {"failed_runs", meta.failed_runs},
                 {"config_hash", meta.config_hash},
                 {"git_revision", meta.git_revision}};
  json cells = json::array();
  if (meta.kind == ExperimentKind::Battery)
  {
    for (auto const &c : battery)
    {
      json days = json::array();
      for (std::size_t d = 0; d < c.soc_wh.size(); ++d)
      {
        auto const &s = c.soc_wh[d];
        auto const &r = c.reward_cents[d];
        days.push_back({{"day", d + 1},
                        {"n", s.n},
                        {"mean_soc", opt_json(scaled(s.mean(), 1000.0))},
                        {"sd_soc", opt_json(scaled(s.sd(), 1000.0))},
                        {"mean_reward", opt_json(scaled(r.mean(), 100.0))},
                        {"sd_reward", opt_json(scaled(r.sd(), 100.0))},
                        {"soc_wh", acc_json(s)},
                        {"reward_cents", acc_json(r)}});
      }
      cells.push_back({{"agent", c.agent},
                       {"condition", c.condition},
                       {"runs", c.runs},
                       {"flagged_runs", c.flagged_runs},
                       {"incidents", c.incidents},
                       {"coerced_days", c.coerced_days},
                       {"days", std::move(days)}});
    }
  }
  else
  {
    for (auto const &c : auction)
    {
      json rounds = json::array();
      for (std::size_t r = 0; r < c.price_cents.size(); ++r)
      {
        json items = json::array();
        for (std::size_t k = 0; k < c.items.size(); ++k)
        {
          auto const &a = c.price_cents[r][k];
          items.push_back({{"item", c.items[k]},
                           {"n", a.n},
                           {"mean_bid", opt_json(scaled(a.mean(), 100.0))},
                           {"sd_bid", opt_json(scaled(a.sd(), 100.0))},
                           {"price_cents", acc_json(a)}});
        }
        rounds.push_back({{"round", r + 1}, {"items", std::move(items)}});
      }
      json finals = json::array();
      json alloc  = json::object();
      for (std::size_t k = 0; k < c.items.size(); ++k)
      {
        auto const &a = c.final_price_cents[k];
        finals.push_back({{"item", c.items[k]},
                          {"mean", opt_json(scaled(a.mean(), 100.0))},
                          {"sd", opt_json(scaled(a.sd(), 100.0))},
                          {"price_cents", acc_json(a)}});
        json counts = json::object();
        for (auto const &[bidder, n] : c.allocation[k])
        {
          counts[bidder == 0 ? std::string("none") : std::to_string(bidder)] = n;
        }
        alloc[c.items[k]] = std::move(counts);
      }
      cells.push_back({{"condition", c.condition},
                       {"items", c.items},
                       {"runs", c.runs},
                       {"natural_terminations", c.natural_terminations},
                       {"flagged_runs", c.flagged_runs},
                       {"incidents", c.incidents},
                       {"rounds_used",
                        {{"mean", opt_json(c.rounds_used.mean())},
                         {"sd", opt_json(c.rounds_used.sd())},
                         {"acc", acc_json(c.rounds_used)}}},
                       {"final_prices", std::move(finals)},
                       {"allocation", std::move(alloc)},
                       {"rounds", std::move(rounds)}});
    }
  }
  return {{"kind", std::string(enbench::to_string(meta.kind))},
          {"horizon_days", horizon},
          {"metadata", std::move(meta_j)},
          {"cells", std::move(cells)}};
}

AggregateSeries AggregateSeries::from_json(json const &j)
{
  try
  {
    AggregateSeries s;
    auto const      kind = j.at("kind").get<std::string>();
    if (kind != "battery" && kind != "auction")
    {
      throw Error(ErrorCode::InvalidConfig, "unknown series kind " + kind);
    }
    s.meta.kind         = kind == "battery" ? ExperimentKind::Battery : ExperimentKind::Auction;
    s.horizon           = j.at("horizon_days").get<int>();
    auto const &m       = j.at("metadata");
    s.meta.master_seed  = m.at("master_seed").get<std::uint64_t>();
    s.meta.run_seeds    = m.at("run_seeds").get<std::vector<std::uint64_t>>();
    s.meta.failed_runs  = m.at("failed_runs").get<std::vector<int>>();
    s.meta.config_hash  = m.at("config_hash").get<std::string>();
    s.meta.git_revision = m.at("git_revision").get<std::string>();
    for (auto const &cj : j.at("cells"))
    {
      if (s.meta.kind == ExperimentKind::Battery)
      {
        BatteryCell c;
        c.agent        = cj.at("agent").get<std::string>();
        c.condition    = cj.at("condition").get<std::string>();
        c.runs         = cj.at("runs").get<int>();
        c.flagged_runs = cj.at("flagged_runs").get<int>();
        c.incidents    = cj.at("incidents").get<int>();
        c.coerced_days = cj.at("coerced_days").get<int>();
        for (auto const &d : cj.at("days"))
        {
          c.soc_wh.push_back(acc_from(d.at("soc_wh")));
          c.reward_cents.push_back(acc_from(d.at("reward_cents")));
        }
        s.battery.push_back(std::move(c));
      }
      else
      {
        AuctionCell c;
        c.condition            = cj.at("condition").get<std::string>();
        c.items                = cj.at("items").get<std::vector<std::string>>();
        c.runs                 = cj.at("runs").get<int>();
        c.natural_terminations = cj.at("natural_terminations").get<int>();
        c.flagged_runs         = cj.at("flagged_runs").get<int>();
        c.incidents            = cj.at("incidents").get<int>();
        c.rounds_used          = acc_from(cj.at("rounds_used").at("acc"));
        for (auto const &f : cj.at("final_prices"))
        {
          c.final_price_cents.push_back(acc_from(f.at("price_cents")));
        }
        for (auto const &item : c.items)
        {
          std::map<int, int> counts;
          for (auto const &[who, n] : cj.at("allocation").at(item).items())
          {
            counts[who == "none" ? 0 : std::stoi(who)] = n.get<int>();
          }
          c.allocation.push_back(std::move(counts));
        }
        for (auto const &r : cj.at("rounds"))
        {
          std::vector<Accumulator> row;
          for (auto const &it : r.at("items"))
          {
            row.push_back(acc_from(it.at("price_cents")));
          }
          c.price_cents.push_back(std::move(row));
        }
        s.auction.push_back(std::move(c));
      }
    }
    return s;
  }
  catch (json::exception const &e)
  {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed aggregate: ") + e.what());
  }
}

std::string AggregateSeries::to_csv() const
{
  std::string out;
  if (meta.kind == ExperimentKind::Battery)
  {
    out = "day,persona,condition,mean_soc,sd_soc,mean_reward\n";
    for (auto const &c : battery)
    {
      for (std::size_t d = 0; d < c.soc_wh.size(); ++d)
      {
        out += std::to_string(d + 1) + "," + c.agent + "," + c.condition + "," +
               opt_text(scaled(c.soc_wh[d].mean(), 1000.0)) + "," +
               opt_text(scaled(c.soc_wh[d].sd(), 1000.0)) + "," +
               opt_text(scaled(c.reward_cents[d].mean(), 100.0)) + "\n";
      }
    }
    return out;
  }
  out = "round,item,agent_type,mean_bid,sd_bid\n";
  for (auto const &c : auction)
  {
    for (std::size_t r = 0; r < c.price_cents.size(); ++r)
    {
      for (std::size_t k = 0; k < c.items.size(); ++k)
      {
        auto const &a = c.price_cents[r][k];
        out += std::to_string(r + 1) + "," + c.items[k] + "," + c.condition + "," +
               opt_text(scaled(a.mean(), 100.0)) + "," + opt_text(scaled(a.sd(), 100.0)) + "\n";
      }
    }
  }
  return out;
}

std::optional<ExportFormat> export_format_from_string(std::string_view name) noexcept
{
  if (name == "csv")
  {
    return ExportFormat::Csv;
  }
  if (name == "json")
  {
    return ExportFormat::Json;
  }
  return std::nullopt;
}

void export_series(AggregateSeries const &series, ExportFormat format, fs::path const &path)
{
  if (series.empty())
  {
    throw Error(ErrorCode::EmptySeries, "no completed runs to export");
  }
  write_text(path, format == ExportFormat::Csv ? series.to_csv() : series.to_json().dump(2) + "\n");
}

std::string BatteryRun::trajectory_jsonl() const
{
  std::string out;
  for (auto const &c : cells)
  {
    Money cumulative;
    for (auto const &d : c.trajectory.days)
    {
      cumulative += d.reward;
      json llm = nullptr;
      for (auto const &s : c.steps)
      {
        if (s.index == d.day)
        {
          llm = s.to_json(TarjMode::Battery);
        }
      }
      json line = {{"agent", c.agent},
                   {"condition", c.condition},
                   {"day", d.day},
                   {"price", money_json(d.price)},
                   {"soc_before", energy_json(d.soc_before)},
                   {"action", std::string(to_string(d.requested))},
                   {"applied", std::string(to_string(d.applied))},
                   {"reward", money_json(d.reward)},
                   {"cumulative_reward", money_json(cumulative)},
                   {"soc_after", energy_json(d.soc_after)},
                   {"blackout", d.blackout},
                   {"coerced", d.coerced},
                   {"llm", std::move(llm)}};
      out += line.dump() + "\n";
    }
  }
  return out;
}

std::string AuctionRun::trajectory_jsonl() const
{
  std::string out;
  for (auto const &c : cells)
  {
    auto const &o = c.outcome;
    for (std::size_t r = 0; r < o.final_state.history.size(); ++r)
    {
      json line      = round_json(o.final_state.history[r]);
      json records   = json::array();
      if (r < o.agent_records.size())
      {
        for (auto const &rec : o.agent_records[r])
        {
          records.push_back(rec.empty() ? json(nullptr) : json::parse(rec));
        }
      }
      json full = {{"condition", c.condition}};
      full.update(line);
      full["agents"] = std::move(records);
      out += full.dump() + "\n";
    }
    json alloc  = json::object();
    json prices = json::object();
    for (auto const &item : o.final_state.items)
    {
      auto w             = o.winner(item.name);
      alloc[item.name]   = w ? json(value_of(*w)) : json(nullptr);
      prices[item.name]  = money_json(o.price(item.name));
    }
    json summary = {{"condition", c.condition},
                    {"outcome",
                     {{"allocation", std::move(alloc)},
                      {"prices", std::move(prices)},
                      {"rounds_used", o.rounds_used},
                      {"terminated_naturally", o.terminated_naturally}}}};
    out += summary.dump() + "\n";
  }
  return out;
}

std::vector<Money> run_price_path(PriceModel const &model, int horizon, std::uint64_t master_seed,
                                  int run_index)
{
  Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(run_index)));
  return sample_price_path(model, horizon, rng);
}

AggregateSeries aggregate_battery(ExperimentConfig const &cfg, std::vector<BatteryRun> const &runs)
{
  AggregateSeries s;
  s.meta    = series_meta(cfg);
  s.horizon = cfg.scenario.battery.horizon;
  auto const T = static_cast<std::size_t>(s.horizon);
  for (auto const &cond : cfg.battery_conditions)
  {
    for (auto const &agent : cfg.battery_agents)
    {
      BatteryCell c;
      c.agent     = agent.name;
      c.condition = cond.name;
      c.soc_wh.resize(T);
      c.reward_cents.resize(T);
      s.battery.push_back(std::move(c));
    }
  }
  for (auto const &run : runs)
  {
    s.meta.run_seeds.push_back(run.seed);
    if (run.error)
    {
      s.meta.failed_runs.push_back(run.index);
      continue;
    }
    for (std::size_t i = 0; i < s.battery.size(); ++i)
    {
      auto       &cell = s.battery[i];
      auto const &rc   = run.cells.at(i);
      Money       cumulative;
      for (std::size_t d = 0; d < T && d < rc.trajectory.days.size(); ++d)
      {
        auto const &day = rc.trajectory.days[d];
        cumulative += day.reward;
        cell.soc_wh[d].add(day.soc_after.wh);
        cell.reward_cents[d].add(cumulative.cents);
      }
      ++cell.runs;
      cell.incidents += rc.incidents;
      cell.flagged_runs += rc.incidents > 0 ? 1 : 0;
      cell.coerced_days += rc.trajectory.coerced_days;
    }
  }
  return s;
}

AggregateSeries aggregate_auction(ExperimentConfig const &cfg, std::vector<AuctionRun> const &runs)
{
  AggregateSeries s;
  s.meta = series_meta(cfg);
  std::vector<std::string> items;
  for (auto const &it : cfg.auction.items)
  {
    items.push_back(it.name);
  }
  for (auto const &cond : cfg.auction_conditions)
  {
    AuctionCell c;
    c.condition = cond.name;
    c.items     = items;
    c.final_price_cents.resize(items.size());
    c.allocation.resize(items.size());
    s.auction.push_back(std::move(c));
  }
  for (auto const &run : runs)
  {
    s.meta.run_seeds.push_back(run.seed);
    if (run.error)
    {
      s.meta.failed_runs.push_back(run.index);
      continue;
    }
    for (std::size_t i = 0; i < s.auction.size(); ++i)
    {
      auto       &cell    = s.auction[i];
      auto const &rc      = run.cells.at(i);
      auto const &history = rc.outcome.final_state.history;
      if (cell.price_cents.size() < history.size())
      {
        cell.price_cents.resize(history.size(), std::vector<Accumulator>(items.size()));
      }
      for (std::size_t r = 0; r < history.size(); ++r)
      {
        for (std::size_t k = 0; k < items.size(); ++k)
        {
          cell.price_cents[r][k].add(history[r].items[k].after.price.cents);
        }
      }
      for (std::size_t k = 0; k < items.size(); ++k)
      {
        cell.final_price_cents[k].add(rc.outcome.price(items[k]).cents);
        auto const w = rc.outcome.winner(items[k]);
        ++cell.allocation[k][w ? value_of(*w) : 0];
      }
      cell.rounds_used.add(rc.outcome.rounds_used);
      ++cell.runs;
      cell.natural_terminations += rc.outcome.terminated_naturally ? 1 : 0;
      cell.incidents += rc.incidents;
      cell.flagged_runs += rc.incidents > 0 ? 1 : 0;
    }
  }
  return s;
}

BatteryExperimentResult run_battery_experiment(ExperimentConfig const &cfg,
                                               RunOptions const &options)
{
  if (cfg.kind != ExperimentKind::Battery)
  {
    throw Error(ErrorCode::InvalidConfig, "not a battery experiment");
  }
  cfg.validate();
  auto const started   = iso_now();
  auto const t0        = std::chrono::steady_clock::now();
  auto const &scenario = cfg.scenario;

  std::optional<DpSolution> dp;
  if (std::any_of(cfg.battery_agents.begin(), cfg.battery_agents.end(),
                  [](auto const &a) { return a.kind == BatteryAgentSpec::Kind::Dp; }))
  {
    dp = solve_dp(scenario.battery, scenario.prices);
  }
  ClientFactory factory(cfg);

  BatteryExperimentResult result;
  result.runs.resize(static_cast<std::size_t>(cfg.runs));

  run_pool(cfg.runs, cfg.parallelism, [&](int r) {
    auto const start = std::chrono::steady_clock::now();
    BatteryRun run;
    run.index  = r;
    run.seed   = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    run.prices = run_price_path(scenario.prices, scenario.battery.horizon, cfg.seed, r);
    ClientFactory::RunScope scope;
    try
    {
      scope = factory.open_run(r);
      for (auto const &cond : cfg.battery_conditions)
      {
        Scenario sc     = scenario;
        sc.intervention = cond.intervention;
        for (auto const &agent : cfg.battery_agents)
        {
          BatteryRunCell cell;
          cell.agent     = agent.name;
          cell.condition = cond.name;
          switch (agent.kind)
          {
          case BatteryAgentSpec::Kind::Llm: {
            LlmBatteryAgent llm(factory.client(scope, agent.name + "/" + cond.name),
                                agent.persona, cond.icl, sc.battery, sc.prices, cfg.memory_window);
            cell.trajectory = simulate_policy(llm, sc, run.prices);
            cell.steps      = llm.steps();
            cell.incidents  = llm.incidents();
            break;
          }
          case BatteryAgentSpec::Kind::Dp: {
            FunctionPolicy policy(
                [&](DayState const &s) { return dp_action(*dp, s.day, s.soc, s.price); });
            cell.trajectory = simulate_policy(policy, sc, run.prices);
            break;
          }
          case BatteryAgentSpec::Kind::Greedy: {
            FunctionPolicy policy([&](DayState const &s) {
              return greedy_action(s.price, s.soc, sc.battery, sc.prices);
            });
            cell.trajectory = simulate_policy(policy, sc, run.prices);
            break;
          }
          }
          run.cells.push_back(std::move(cell));
        }
      }
    }
    catch (std::exception const &e)
    {
      run.error = e.what();
      run.cells.clear();
      log_message(LogLevel::Error, "run " + std::to_string(r) + " failed: " + e.what());
    }
    run.transcript = scope.transcript->jsonl();
    run.elapsed_ms = elapsed_ms_since(start);
    bool const ok  = !run.error;
    result.runs[static_cast<std::size_t>(r)] = std::move(run);
    if (options.on_run_done)
    {
      options.on_run_done(r, ok);
    }
  });

  result.series = aggregate_battery(cfg, result.runs);
  if (options.out_dir)
  {
    write_outputs(*options.out_dir, cfg, result.runs, result.series, started,
                  elapsed_ms_since(t0));
  }
  return result;
}

AuctionExperimentResult run_auction_experiment(ExperimentConfig const &cfg,
                                               RunOptions const &options)
{
  if (cfg.kind != ExperimentKind::Auction)
  {
    throw Error(ErrorCode::InvalidConfig, "not an auction experiment");
  }
  cfg.validate();
  auto const    started = iso_now();
  auto const    t0      = std::chrono::steady_clock::now();
  ClientFactory factory(cfg);

  AuctionExperimentResult result;
  result.runs.resize(static_cast<std::size_t>(cfg.runs));

  run_pool(cfg.runs, cfg.parallelism, [&](int r) {
    auto const start = std::chrono::steady_clock::now();
    AuctionRun run;
    run.index  = r;
    run.seed   = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    ClientFactory::RunScope scope;
    try
    {
      scope = factory.open_run(r);
      for (std::size_t ci = 0; ci < cfg.auction_conditions.size(); ++ci)
      {
        auto const                                &cond = cfg.auction_conditions[ci];
        std::vector<std::unique_ptr<BiddingAgent>> agents;
        std::vector<LlmAuctionAgent *>             llms;
        for (auto id : cfg.auction.bidders)
        {
          auto const &spec = *std::find_if(cond.bidders.begin(), cond.bidders.end(),
                                           [&](auto const &b) { return b.id == id; });
          auto const &vals = cfg.auction.valuations.at(id);
          if (spec.kind == AuctionBidderSpec::Kind::Llm)
          {
            auto agent = std::make_unique<LlmAuctionAgent>(
                id, factory.client(scope, cond.name + "/bidder " + to_string(id)), *spec.objective,
                vals, cfg.memory_window);
            llms.push_back(agent.get());
            agents.push_back(std::move(agent));
          }
          else
          {
            agents.push_back(std::make_unique<StraightforwardAgent>(id, vals, spec.zero_surplus));
          }
        }
        Rng rng(derive_seed(run.seed, ci + 1));
        AuctionRunCell cell;
        cell.condition = cond.name;
        cell.outcome   = run_auction(agents, cfg.auction.items, cfg.auction.max_rounds, rng);
        for (auto const *l : llms)
        {
          cell.incidents += l->incidents();
        }
        run.cells.push_back(std::move(cell));
      }
    }
    catch (std::exception const &e)
    {
      run.error = e.what();
      run.cells.clear();
      log_message(LogLevel::Error, "run " + std::to_string(r) + " failed: " + e.what());
    }
    run.transcript = scope.transcript->jsonl();
    run.elapsed_ms = elapsed_ms_since(start);
    bool const ok  = !run.error;
    result.runs[static_cast<std::size_t>(r)] = std::move(run);
    if (options.on_run_done)
    {
      options.on_run_done(r, ok);
    }
  });

  result.series = aggregate_auction(cfg, result.runs);
  if (options.out_dir)
  {
    write_outputs(*options.out_dir, cfg, result.runs, result.series, started,
                  elapsed_ms_since(t0));
  }
  return result;
}

std::string_view git_revision() noexcept
{
  return ENBENCH_GIT_REVISION;
}

}  // namespace enbench
