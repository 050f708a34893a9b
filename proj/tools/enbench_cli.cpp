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

// Command-line driver. Talks to the library only through enbench.h.

#include "enbench/enbench.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk     = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage  = 2;

struct UsageError
{
  std::string message;
};

int report(enb_status status, char const *doing)
{
  std::string const detail = enb_last_error();
  std::cerr << "error: " << doing << ": "
            << (detail.empty() ? std::string(enb_status_name(status)) : detail) << "\n";
  return status == ENB_INVALID_ARGUMENT ? kExitUsage : kExitDomain;
}

void log_to_stderr(enb_log_level level, char const *message, void *)
{
  static char const *const names[] = {"info", "warning", "error"};
  std::fprintf(stderr, "%s: %s\n", names[level], message);
}

void progress_to_stderr(int run, int ok, void *total)
{
  std::fprintf(stderr, "run %d/%d %s\n", run + 1, *static_cast<int *>(total),
               ok ? "done" : "FAILED");
}

struct RunFlags
{
  std::string                  config;
  std::optional<std::uint64_t> seed;
  std::string                  out;
  std::string                  backend;
  std::optional<int>           runs;
  std::string                  script;
  std::optional<int>           parallelism;
};

void add_run_flags(CLI::App *cmd, RunFlags &f, bool config_required)
{
  auto *c = cmd->add_option("--config", f.config, "Experiment config (JSON)")
                ->check(CLI::ExistingFile);
  if (config_required)
  {
    c->required();
  }
  cmd->add_option("--seed", f.seed, "Master seed (overrides the config)");
  cmd->add_option("--out", f.out, "Output directory")->required();
  cmd->add_option("--backend", f.backend, "Language-model backend")
      ->check(CLI::IsMember({"live", "scripted", "replay"}));
  cmd->add_option("--runs", f.runs, "Monte Carlo runs (overrides the config)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--script", f.script, "Script file for the scripted backend")
      ->check(CLI::ExistingFile);
  cmd->add_option("--parallelism", f.parallelism, "Concurrent runs")->check(CLI::PositiveNumber);
}

class Experiment
{
public:
  ~Experiment()
  {
    enb_experiment_free(handle_);
  }
  enb_experiment **out()
  {
    return &handle_;
  }
  enb_experiment *get() const
  {
    return handle_;
  }

private:
  enb_experiment *handle_ = nullptr;
};

/// Loads the config and applies flag overrides: flags win over the file.
int prepare(RunFlags const &f, Experiment &exp, enb_experiment_kind expected)
{
  enb_status st = f.config.empty() ? enb_experiment_default_battery(exp.out())
                                   : enb_experiment_load(f.config.c_str(), exp.out());
  if (st != ENB_OK)
  {
    return report(st, "loading config");
  }
  enb_experiment_kind kind{};
  enb_experiment_kind_of(exp.get(), &kind);
  if (kind != expected)
  {
    throw UsageError{"--config describes a " +
                     std::string(kind == ENB_EXPERIMENT_BATTERY ? "battery" : "auction") +
                     " experiment"};
  }
  if (f.seed)
  {
    enb_experiment_set_seed(exp.get(), *f.seed);
  }
  if (f.runs)
  {
    enb_experiment_set_runs(exp.get(), *f.runs);
  }
  if (f.parallelism)
  {
    enb_experiment_set_parallelism(exp.get(), *f.parallelism);
  }
  if (f.backend == "scripted" && f.script.empty())
  {
    throw UsageError{"--backend scripted needs --script PATH"};
  }
  if (f.backend == "replay")
  {
    throw UsageError{"--backend replay is driven by the replay subcommand"};
  }
  if (!f.script.empty() && !f.backend.empty() && f.backend != "scripted")
  {
    throw UsageError{"--script only applies to --backend scripted"};
  }
  if (!f.backend.empty() || !f.script.empty())
  {
    std::string const kind_name = f.backend.empty() ? "scripted" : f.backend;
    st = enb_experiment_set_backend(exp.get(), kind_name.c_str(),
                                    f.script.empty() ? nullptr : f.script.c_str());
    if (st != ENB_OK)
    {
      return report(st, "selecting backend");
    }
  }
  st = enb_experiment_validate(exp.get());
  if (st != ENB_OK)
  {
    return report(st, "validating config");
  }
  return kExitOk;
}

int run_experiment(Experiment const &exp, std::string const &out, int runs)
{
  int        failed = 0;
  enb_status st     = enb_experiment_run(exp.get(), out.c_str(), progress_to_stderr, &runs, &failed);
  if (st != ENB_OK)
  {
    return report(st, "running experiment");
  }
  if (failed > 0)
  {
    std::cerr << failed << " of " << runs << " runs failed; see " << out << "/manifest.json\n";
    return kExitDomain;
  }
  std::cerr << "wrote " << out << "\n";
  return kExitOk;
}

int experiment_runs(Experiment const &exp)
{
  char *text = nullptr;
  if (enb_experiment_effective_config(exp.get(), &text) != ENB_OK)
  {
    return 0;
  }
  std::string const s(text);
  enb_string_free(text);
  auto const pos = s.find("\"runs\":");
  return pos == std::string::npos ? 0 : std::stoi(s.substr(pos + 7));
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Energy-market agent benchmark: battery dispatch and simultaneous ascending "
               "auctions.",
               "enbench-cli"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(enb_version()));

  std::string dp_config;
  std::string dp_out;
  auto       *dp = app.add_subcommand("dp-solve", "Solve the battery dynamic program");
  dp->add_option("--config", dp_config, "Scenario config (JSON); defaults to the built-in one")
      ->check(CLI::ExistingFile);
  dp->add_option("--out", dp_out, "Directory for value_table.json and policy_table.json")
      ->required();

  RunFlags battery_flags;
  auto    *battery = app.add_subcommand("battery-run", "Run a battery dispatch experiment");
  add_run_flags(battery, battery_flags, false);

  RunFlags auction_flags;
  auto    *auction = app.add_subcommand("auction-run", "Run a simultaneous ascending auction experiment");
  add_run_flags(auction, auction_flags, true);

  std::vector<std::string> validate_paths;
  std::string              validate_kind;
  auto *validate = app.add_subcommand("validate-config", "Check config files without running");
  validate->add_option("--config,configs", validate_paths, "Config files")
      ->required()
      ->check(CLI::ExistingFile);
  validate->add_option("--kind", validate_kind, "Expected kind; detected when omitted")
      ->check(CLI::IsMember(
          {"experiment", "scenario", "auction", "valuations", "model", "script", "icl"}));

  std::string export_from;
  std::string export_format;
  std::string export_out;
  auto       *exp_cmd = app.add_subcommand("export", "Re-export an aggregate.json");
  exp_cmd->add_option("--from", export_from, "aggregate.json from a previous run")
      ->required()
      ->check(CLI::ExistingFile);
  exp_cmd->add_option("--format", export_format, "Output format")
      ->required()
      ->check(CLI::IsMember({"csv", "json"}));
  exp_cmd->add_option("--out", export_out, "Output file")->required();

  std::string replay_from;
  std::string replay_out;
  std::optional<int> replay_parallelism;
  auto *replay = app.add_subcommand("replay", "Re-run a recorded output directory from its transcripts");
  replay->add_option("--from", replay_from, "Output directory of the recorded session")
      ->required()
      ->check(CLI::ExistingDirectory);
  replay->add_option("--out", replay_out, "Output directory for the replay")->required();
  replay->add_option("--parallelism", replay_parallelism, "Concurrent runs")
      ->check(CLI::PositiveNumber);

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::CallForVersion const &e)
  {
    return app.exit(e);
  }
  catch (CLI::ParseError const &e)
  {
    std::cerr << "usage error: " << e.what() << "\n\n";
    auto const chosen = app.get_subcommands();
    std::cerr << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitUsage;
  }

  enb_set_log_callback(log_to_stderr, nullptr);

  try
  {
    if (*dp)
    {
      enb_scenario *scenario = nullptr;
      enb_status    st       = dp_config.empty() ? enb_scenario_default(&scenario)
                                                 : enb_scenario_load(dp_config.c_str(), &scenario);
      if (st != ENB_OK)
      {
        return report(st, "loading scenario");
      }
      enb_dp *solution = nullptr;
      st               = enb_dp_solve(scenario, &solution);
      enb_scenario_free(scenario);
      if (st != ENB_OK)
      {
        return report(st, "solving");
      }
      st = enb_dp_write(solution, dp_out.c_str());
      enb_dp_free(solution);
      if (st != ENB_OK)
      {
        return report(st, "writing tables");
      }
      std::cerr << "wrote " << dp_out << "\n";
      return kExitOk;
    }

    if (*battery || *auction)
    {
      bool const  is_battery = static_cast<bool>(*battery);
      auto const &flags      = is_battery ? battery_flags : auction_flags;
      Experiment  exp;
      if (int const rc = prepare(flags, exp,
                                 is_battery ? ENB_EXPERIMENT_BATTERY : ENB_EXPERIMENT_AUCTION);
          rc != kExitOk)
      {
        return rc;
      }
      return run_experiment(exp, flags.out, experiment_runs(exp));
    }

    if (*validate)
    {
      int rc = kExitOk;
      for (auto const &path : validate_paths)
      {
        char const *kind = nullptr;
        enb_status  st   = enb_validate_config(
            path.c_str(), validate_kind.empty() ? nullptr : validate_kind.c_str(), &kind);
        if (st != ENB_OK)
        {
          std::cerr << path << ": INVALID: " << enb_last_error() << "\n";
          rc = kExitDomain;
        }
        else
        {
          std::cerr << path << ": ok (" << kind << ")\n";
        }
      }
      return rc;
    }

    if (*exp_cmd)
    {
      enb_status st =
          enb_export_aggregate(export_from.c_str(), export_format.c_str(), export_out.c_str());
      if (st != ENB_OK)
      {
        return report(st, "exporting");
      }
      std::cerr << "wrote " << export_out << "\n";
      return kExitOk;
    }

    if (*replay)
    {
      Experiment exp;
      enb_status st = enb_experiment_from_recording(replay_from.c_str(), exp.out());
      if (st != ENB_OK)
      {
        return report(st, "loading recording");
      }
      if (replay_parallelism)
      {
        enb_experiment_set_parallelism(exp.get(), *replay_parallelism);
      }
      if (int const rc = run_experiment(exp, replay_out, experiment_runs(exp)); rc != kExitOk)
      {
        return rc;
      }
      int   equal  = 0;
      char *report_text = nullptr;
      st = enb_compare_outputs(replay_from.c_str(), replay_out.c_str(), &equal, &report_text);
      if (st != ENB_OK)
      {
        return report(st, "comparing outputs");
      }
      std::string const diff = report_text ? report_text : "";
      enb_string_free(report_text);
      if (!equal)
      {
        std::cerr << "replay diverged from the recording:\n" << diff;
        return kExitDomain;
      }
      std::cerr << "replay matches the recording\n";
      return kExitOk;
    }
  }
  catch (UsageError const &e)
  {
    std::cerr << "usage error: " << e.message << "\n\n";
    std::cerr << app.get_subcommands().front()->help();
    return kExitUsage;
  }
  return kExitUsage;
}
