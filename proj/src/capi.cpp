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

#include "enbench/enbench.h"

#include "enbench/config.hpp"
#include "enbench/dispatch.hpp"
#include "enbench/errors.hpp"
#include "enbench/harness.hpp"
#include "enbench/log.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

struct enb_scenario
{
  enbench::Scenario scenario;
};

struct enb_dp
{
  enbench::DpSolution solution;
};

struct enb_experiment
{
  enbench::ExperimentConfig config;
};

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

thread_local std::string g_last_error;

enb_status status_of(enbench::ErrorCode code) noexcept
{
  return static_cast<enb_status>(static_cast<int>(code) + 1);
}

enb_status fail(enb_status status, std::string message)
{
  g_last_error = std::move(message);
  return status;
}

struct InvalidArgument : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

void require(bool cond, char const *what)
{
  if (!cond)
  {
    throw InvalidArgument(what);
  }
}

/// Runs body, turning exceptions into status codes.
template <typename F>
enb_status call(F &&body) noexcept
{
  try
  {
    body();
    g_last_error.clear();
    return ENB_OK;
  }
  catch (InvalidArgument const &e)
  {
    return fail(ENB_INVALID_ARGUMENT, e.what());
  }
  catch (enbench::Error const &e)
  {
    return fail(status_of(e.code()), e.what());
  }
  catch (json::exception const &e)
  {
    return fail(ENB_INVALID_CONFIG, e.what());
  }
  catch (std::bad_alloc const &)
  {
    return fail(ENB_INTERNAL, "out of memory");
  }
  catch (std::exception const &e)
  {
    return fail(ENB_INTERNAL, e.what());
  }
  catch (...)
  {
    return fail(ENB_INTERNAL, "unknown failure");
  }
}

char *dup_string(std::string const &s)
{
  auto *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (p == nullptr)
  {
    throw std::bad_alloc();
  }
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::size_t grid_index(enbench::DpSolution const &s, std::int64_t soc_wh)
{
  auto const idx = s.config.grid_index(enbench::Energy::from_wh(soc_wh));
  if (!idx)
  {
    throw enbench::Error(enbench::ErrorCode::OutOfRange,
                         "SoC " + std::to_string(soc_wh) + " Wh is not on the grid");
  }
  return *idx;
}

std::string read_file(fs::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw enbench::Error(enbench::ErrorCode::IoFailure, "cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::mutex g_log_mutex;
enb_log_fn g_log_fn   = nullptr;
void      *g_log_user = nullptr;

}  // namespace

extern "C" {

char const *enb_version(void)
{
  return "0.1.0";
}

char const *enb_git_revision(void)
{
  static std::string const rev(enbench::git_revision());
  return rev.c_str();
}

char const *enb_status_name(enb_status status)
{
  switch (status)
  {
  case ENB_OK:
    return "Ok";
  case ENB_INVALID_ARGUMENT:
    return "InvalidArgument";
  case ENB_INTERNAL:
    return "Internal";
  default:
    break;
  }
  int const code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(enbench::ErrorCode::IoFailure))
  {
    static thread_local std::string name;
    name = std::string(enbench::to_string(static_cast<enbench::ErrorCode>(code)));
    return name.c_str();
  }
  return "Unknown";
}

char const *enb_last_error(void)
{
  return g_last_error.c_str();
}

void enb_string_free(char *s)
{
  std::free(s);
}

void enb_set_log_callback(enb_log_fn fn, void *user)
{
  {
    std::lock_guard lock(g_log_mutex);
    g_log_fn   = fn;
    g_log_user = user;
  }
  if (fn == nullptr)
  {
    enbench::set_log_sink(nullptr);
    return;
  }
  enbench::set_log_sink([](enbench::LogLevel level, std::string const &message) {
    std::lock_guard lock(g_log_mutex);
    if (g_log_fn != nullptr)
    {
      g_log_fn(static_cast<enb_log_level>(static_cast<int>(level)), message.c_str(), g_log_user);
    }
  });
}

enb_status enb_scenario_default(enb_scenario **out)
{
  return call([&] {
    require(out != nullptr, "out is null");
    *out = new enb_scenario{enbench::Scenario{}};
  });
}

enb_status enb_scenario_load(char const *path, enb_scenario **out)
{
  return call([&] {
    require(path != nullptr && out != nullptr, "path or out is null");
    auto s = enbench::scenario_from_json(enbench::load_json_file(path));
    *out   = new enb_scenario{std::move(s)};
  });
}

enb_status enb_scenario_from_json(char const *text, enb_scenario **out)
{
  return call([&] {
    require(text != nullptr && out != nullptr, "json or out is null");
    auto s = enbench::scenario_from_json(json::parse(text));
    *out   = new enb_scenario{std::move(s)};
  });
}

enb_status enb_scenario_horizon(enb_scenario const *scenario, int *out_days)
{
  return call([&] {
    require(scenario != nullptr && out_days != nullptr, "scenario or out is null");
    *out_days = scenario->scenario.battery.horizon;
  });
}

void enb_scenario_free(enb_scenario *scenario)
{
  delete scenario;
}

enb_status enb_dp_solve(enb_scenario const *scenario, enb_dp **out)
{
  return call([&] {
    require(scenario != nullptr && out != nullptr, "scenario or out is null");
    auto s = enbench::solve_dp(scenario->scenario.battery, scenario->scenario.prices);
    *out   = new enb_dp{std::move(s)};
  });
}

enb_status enb_dp_value(enb_dp const *dp, int day, int64_t soc_wh, double *out_cents)
{
  return call([&] {
    require(dp != nullptr && out_cents != nullptr, "dp or out is null");
    *out_cents = dp->solution.values.at(day, grid_index(dp->solution, soc_wh));
  });
}

enb_status enb_dp_action(enb_dp const *dp, int day, int64_t soc_wh, int64_t price_cents,
                         enb_action *out_action)
{
  return call([&] {
    require(dp != nullptr && out_action != nullptr, "dp or out is null");
    auto const a = enbench::dp_action(dp->solution, day, enbench::Energy::from_wh(soc_wh),
                                      enbench::Money{price_cents});
    *out_action  = static_cast<enb_action>(static_cast<int>(a));
  });
}

enb_status enb_dp_to_json(enb_dp const *dp, char **out_json)
{
  return call([&] {
    require(dp != nullptr && out_json != nullptr, "dp or out is null");
    *out_json = dup_string(enbench::dp_solution_to_json(dp->solution).dump(2));
  });
}

enb_status enb_dp_write(enb_dp const *dp, char const *dir)
{
  return call([&] {
    require(dp != nullptr && dir != nullptr, "dp or dir is null");
    auto const full = enbench::dp_solution_to_json(dp->solution);
    json       value_doc  = full;
    json       policy_doc = full;
    value_doc.erase("policy_table");
    policy_doc.erase("value_table");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
    {
      throw enbench::Error(enbench::ErrorCode::IoFailure,
                           std::string("cannot create ") + dir + ": " + ec.message());
    }
    for (auto const &[name, doc] : {std::pair{"value_table.json", &value_doc},
                                    std::pair{"policy_table.json", &policy_doc}})
    {
      auto const    path = fs::path(dir) / name;
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      f << doc->dump(2) << "\n";
      if (!f)
      {
        throw enbench::Error(enbench::ErrorCode::IoFailure, "cannot write " + path.string());
      }
    }
  });
}

void enb_dp_free(enb_dp *dp)
{
  delete dp;
}

enb_status enb_experiment_load(char const *path, enb_experiment **out)
{
  return call([&] {
    require(path != nullptr && out != nullptr, "path or out is null");
    auto cfg = enbench::load_experiment(path);
    *out     = new enb_experiment{std::move(cfg)};
  });
}

enb_status enb_experiment_from_json(char const *text, char const *base_dir, enb_experiment **out)
{
  return call([&] {
    require(text != nullptr && out != nullptr, "json or out is null");
    auto cfg = enbench::experiment_from_json(json::parse(text),
                                             base_dir ? fs::path(base_dir) : fs::path());
    *out     = new enb_experiment{std::move(cfg)};
  });
}

enb_status enb_experiment_from_recording(char const *dir, enb_experiment **out)
{
  return call([&] {
    require(dir != nullptr && out != nullptr, "dir or out is null");
    auto const manifest = enbench::load_json_file(fs::path(dir) / "manifest.json");
    if (!manifest.contains("effective_config"))
    {
      throw enbench::Error(enbench::ErrorCode::InvalidConfig,
                           "manifest has no effective_config");
    }
    auto cfg = enbench::experiment_from_json(manifest.at("effective_config"), dir);
    if (manifest.contains("parallelism"))
    {
      cfg.parallelism = manifest.at("parallelism").get<int>();
    }
    if (cfg.needs_backend())
    {
      cfg.backend.kind       = enbench::BackendKind::Replay;
      cfg.backend.replay_dir = dir;
    }
    *out = new enb_experiment{std::move(cfg)};
  });
}

enb_status enb_experiment_default_battery(enb_experiment **out)
{
  return call([&] {
    require(out != nullptr, "out is null");
    *out = new enb_experiment{enbench::default_battery_experiment()};
  });
}

void enb_experiment_free(enb_experiment *experiment)
{
  delete experiment;
}

enb_status enb_experiment_kind_of(enb_experiment const *experiment, enb_experiment_kind *out)
{
  return call([&] {
    require(experiment != nullptr && out != nullptr, "experiment or out is null");
    *out = experiment->config.kind == enbench::ExperimentKind::Battery ? ENB_EXPERIMENT_BATTERY
                                                                       : ENB_EXPERIMENT_AUCTION;
  });
}

enb_status enb_experiment_set_seed(enb_experiment *experiment, uint64_t seed)
{
  return call([&] {
    require(experiment != nullptr, "experiment is null");
    experiment->config.seed = seed;
  });
}

enb_status enb_experiment_set_runs(enb_experiment *experiment, int runs)
{
  return call([&] {
    require(experiment != nullptr, "experiment is null");
    require(runs >= 1, "runs must be at least 1");
    experiment->config.runs = runs;
  });
}

enb_status enb_experiment_set_parallelism(enb_experiment *experiment, int parallelism)
{
  return call([&] {
    require(experiment != nullptr, "experiment is null");
    require(parallelism >= 1, "parallelism must be at least 1");
    experiment->config.parallelism = parallelism;
  });
}

enb_status enb_experiment_set_backend(enb_experiment *experiment, char const *kind,
                                      char const *source)
{
  return call([&] {
    require(experiment != nullptr && kind != nullptr, "experiment or kind is null");
    auto const k = enbench::backend_kind_from_string(kind);
    require(k.has_value(), "backend must be live, scripted or replay");
    auto &b = experiment->config.backend;
    b.kind  = *k;
    if (source != nullptr)
    {
      if (*k == enbench::BackendKind::Scripted)
      {
        b.script = source;
      }
      else if (*k == enbench::BackendKind::Replay)
      {
        b.replay_dir = source;
      }
    }
  });
}

int enb_experiment_needs_backend(enb_experiment const *experiment)
{
  return experiment != nullptr && experiment->config.needs_backend() ? 1 : 0;
}

enb_status enb_experiment_validate(enb_experiment const *experiment)
{
  return call([&] {
    require(experiment != nullptr, "experiment is null");
    experiment->config.validate();
  });
}

enb_status enb_experiment_effective_config(enb_experiment const *experiment, char **out_json)
{
  return call([&] {
    require(experiment != nullptr && out_json != nullptr, "experiment or out is null");
    *out_json = dup_string(experiment->config.to_json().dump(2));
  });
}

enb_status enb_experiment_run(enb_experiment const *experiment, char const *out_dir,
                              enb_progress_fn progress, void *user, int *out_failed_runs)
{
  return call([&] {
    require(experiment != nullptr, "experiment is null");
    enbench::RunOptions options;
    if (out_dir != nullptr)
    {
      options.out_dir = fs::path(out_dir);
    }
    if (progress != nullptr)
    {
      options.on_run_done = [progress, user](int index, bool ok) {
        progress(index, ok ? 1 : 0, user);
      };
    }
    std::size_t failed = 0;
    if (experiment->config.kind == enbench::ExperimentKind::Battery)
    {
      failed = enbench::run_battery_experiment(experiment->config, options).series.meta
                   .failed_runs.size();
    }
    else
    {
      failed = enbench::run_auction_experiment(experiment->config, options).series.meta
                   .failed_runs.size();
    }
    if (out_failed_runs != nullptr)
    {
      *out_failed_runs = static_cast<int>(failed);
    }
  });
}

enb_status enb_validate_config(char const *path, char const *kind, char const **out_kind)
{
  return call([&] {
    require(path != nullptr, "path is null");
    std::optional<enbench::ConfigKind> k;
    if (kind != nullptr)
    {
      k = enbench::config_kind_from_string(kind);
      require(k.has_value(), "unknown config kind");
    }
    auto const found = enbench::validate_config_file(path, k);
    if (out_kind != nullptr)
    {
      *out_kind = enbench::to_string(found).data();
    }
  });
}

enb_status enb_export_aggregate(char const *aggregate_json, char const *format,
                                char const *out_path)
{
  return call([&] {
    require(aggregate_json != nullptr && format != nullptr && out_path != nullptr,
            "argument is null");
    auto const fmt = enbench::export_format_from_string(format);
    require(fmt.has_value(), "format must be csv or json");
    auto const series =
        enbench::AggregateSeries::from_json(enbench::load_json_file(aggregate_json));
    enbench::export_series(series, *fmt, out_path);
  });
}

enb_status enb_compare_outputs(char const *dir_a, char const *dir_b, int *out_equal,
                               char **out_report)
{
  return call([&] {
    require(dir_a != nullptr && dir_b != nullptr && out_equal != nullptr, "argument is null");
    fs::path const     a(dir_a);
    fs::path const     b(dir_b);
    std::ostringstream report;
    int                differences = 0;
    auto               note = [&](std::string const &what) {
      if (++differences <= 20)
      {
        report << what << "\n";
      }
    };
    auto compare_file = [&](fs::path const &rel) {
      bool const ha = fs::exists(a / rel);
      bool const hb = fs::exists(b / rel);
      if (ha != hb)
      {
        note(rel.generic_string() + ": present in only one directory");
        return;
      }
      if (ha && read_file(a / rel) != read_file(b / rel))
      {
        note(rel.generic_string() + ": differs");
      }
    };
    if (!fs::is_directory(a / "runs") || !fs::is_directory(b / "runs"))
    {
      throw enbench::Error(enbench::ErrorCode::IoFailure, "both directories need a runs/ folder");
    }
    std::set<std::string> runs;
    for (auto const *root : {&a, &b})
    {
      for (auto const &entry : fs::directory_iterator(*root / "runs"))
      {
        runs.insert(entry.path().filename().string());
      }
    }
    for (auto const &r : runs)
    {
      compare_file(fs::path("runs") / r / "trajectory.jsonl");
    }
    // Aggregates carry the same metadata, so compare them whole.
    compare_file("aggregate.json");
    *out_equal = differences == 0 ? 1 : 0;
    if (out_report != nullptr)
    {
      *out_report = dup_string(report.str());
    }
  });
}

}  // extern "C"
