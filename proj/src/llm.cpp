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

#include "enbench/llm.hpp"
#include "enbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace enbench {

void ModelConfig::validate() const
{
  if (timeout.count() <= 0)
  {
    throw Error(ErrorCode::InvalidConfig, "timeout must be positive");
  }
  if (max_retries < 0)
  {
    throw Error(ErrorCode::InvalidConfig, "max_retries must be >= 0");
  }
  if (max_tokens <= 0)
  {
    throw Error(ErrorCode::InvalidConfig, "max_tokens must be positive");
  }
  if (initial_backoff.count() < 0 || max_backoff.count() < 0 || backoff_factor < 1.0)
  {
    throw Error(ErrorCode::InvalidConfig, "backoff settings out of range");
  }
}

std::string_view to_string(FailureKind kind) noexcept
{
  switch (kind)
  {
  case FailureKind::Transport:
    return "transport";
  case FailureKind::RateLimited:
    return "rate_limited";
  case FailureKind::Auth:
    return "auth";
  case FailureKind::Timeout:
    return "timeout";
  }
  return "transport";
}

std::optional<FailureKind> failure_kind_from_string(std::string_view name) noexcept
{
  for (auto k :
       {FailureKind::Transport, FailureKind::RateLimited, FailureKind::Auth, FailureKind::Timeout})
  {
    if (to_string(k) == name)
    {
      return k;
    }
  }
  return std::nullopt;
}

std::string prompt_hash(std::string const &system, std::string const &user)
{
  std::string joined = system;
  joined.push_back('\0');
  joined += user;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(joined.data(), joined.size())));
  return buf;
}

namespace {

BackendReply reply_from(ScriptEntry const &entry)
{
  if (entry.failure)
  {
    return BackendReply::fail(*entry.failure, "scripted");
  }
  if (entry.text)
  {
    return BackendReply::ok(*entry.text);
  }
  throw Error(ErrorCode::ScriptExhausted, "recorded call had no reply");
}

}  // namespace

std::shared_ptr<ScriptedBackend> ScriptedBackend::ordered(std::vector<ScriptEntry> entries,
                                                          bool cycle,
                                                          std::optional<ScriptEntry> fallback)
{
  std::shared_ptr<ScriptedBackend> b(new ScriptedBackend());
  b->ordered_  = std::move(entries);
  b->cycle_    = cycle;
  b->fallback_ = std::move(fallback);
  return b;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::keyed(std::map<std::string, ScriptEntry> entries,
                                                        std::optional<ScriptEntry> fallback)
{
  std::shared_ptr<ScriptedBackend> b(new ScriptedBackend());
  b->keyed_    = true;
  b->by_key_   = std::move(entries);
  b->fallback_ = std::move(fallback);
  return b;
}

BackendReply ScriptedBackend::send(ChatRequest const &request, std::string const & /*label*/)
{
  std::lock_guard<std::mutex> lock(mutex_);
  if (keyed_)
  {
    auto it = by_key_.find(prompt_hash(request.system, request.user));
    if (it != by_key_.end())
    {
      return reply_from(it->second);
    }
    if (fallback_)
    {
      return reply_from(*fallback_);
    }
    throw Error(ErrorCode::ScriptExhausted, "no scripted response for this prompt");
  }
  if (next_ >= ordered_.size())
  {
    if (fallback_ && !cycle_)
    {
      return reply_from(*fallback_);
    }
    if (!cycle_ || ordered_.empty())
    {
      throw Error(ErrorCode::ScriptExhausted,
                  "script ran out after " + std::to_string(ordered_.size()) + " responses");
    }
    next_ = 0;
  }
  return reply_from(ordered_[next_++]);
}

ReplayBackend::ReplayBackend(std::vector<nlohmann::json> const &exchanges)
{
  for (auto const &ex : exchanges)
  {
    ScriptEntry entry;
    if (ex.contains("response") && ex["response"].is_string())
    {
      entry.text = ex["response"].get<std::string>();
    }
    else if (ex.contains("error") && ex["error"].is_string())
    {
      auto const err = ex["error"].get<std::string>();
      entry.failure  = failure_kind_from_string(err.substr(0, err.find(':')));
    }
    auto key = std::make_pair(ex.value("agent", std::string{}), ex.value("prompt_hash", std::string{}));
    queues_[key].push_back(std::move(entry));
  }
}

std::shared_ptr<ReplayBackend> ReplayBackend::from_file(std::filesystem::path const &transcript)
{
  std::ifstream in(transcript);
  if (!in)
  {
    throw Error(ErrorCode::IoFailure, "cannot read " + transcript.string());
  }
  std::vector<nlohmann::json> lines;
  std::string                 line;
  while (std::getline(in, line))
  {
    if (!line.empty())
    {
      lines.push_back(nlohmann::json::parse(line));
    }
  }
  return std::make_shared<ReplayBackend>(lines);
}

BackendReply ReplayBackend::send(ChatRequest const &request, std::string const &label)
{
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = queues_.find({label, prompt_hash(request.system, request.user)});
  if (it == queues_.end() || it->second.empty())
  {
    throw Error(ErrorCode::ScriptExhausted, "no recorded reply for " + label + " at this prompt");
  }
  auto entry = std::move(it->second.front());
  it->second.pop_front();
  return reply_from(entry);
}

double WallClock::now_seconds()
{
  using namespace std::chrono;
  return duration<double>(system_clock::now().time_since_epoch()).count();
}

double WallClock::elapsed_ms(double since_s)
{
  return (now_seconds() - since_s) * 1000.0;
}

double LogicalClock::now_seconds()
{
  std::lock_guard<std::mutex> lock(mutex_);
  return static_cast<double>(ticks_++);
}

Sleeper real_sleeper()
{
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

RateLimiter::RateLimiter(double requests_per_minute, double burst, std::function<double()> now,
                         Sleeper sleeper)
  : rate_per_second_(requests_per_minute / 60.0)
  , burst_(std::max(1.0, burst))
  , tokens_(std::max(1.0, burst))
  , now_(std::move(now))
  , sleep_(std::move(sleeper))
{
  if (!now_)
  {
    now_ = [] {
      using namespace std::chrono;
      return duration<double>(steady_clock::now().time_since_epoch()).count();
    };
  }
  if (!sleep_)
  {
    sleep_ = real_sleeper();
  }
  last_ = now_();
}

void RateLimiter::acquire()
{
  if (rate_per_second_ <= 0.0)
  {
    return;
  }
  while (true)
  {
    double wait_s = 0.0;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      double const t = now_();
      tokens_        = std::min(burst_, tokens_ + (t - last_) * rate_per_second_);
      last_          = t;
      if (tokens_ >= 1.0)
      {
        tokens_ -= 1.0;
        return;
      }
      wait_s = (1.0 - tokens_) / rate_per_second_;
    }
    sleep_(std::chrono::milliseconds(static_cast<long long>(std::ceil(wait_s * 1000.0))));
  }
}

nlohmann::json ChatExchange::to_json() const
{
  nlohmann::json messages = nlohmann::json::array();
  if (!system.empty())
  {
    messages.push_back({{"role", "system"}, {"content", system}});
  }
  messages.push_back({{"role", "user"}, {"content", user}});

  nlohmann::json j;
  j["id"]          = id;
  j["agent"]       = agent;
  j["attempt"]     = attempt;
  j["timestamp"]   = timestamp;
  j["latency_ms"]  = latency_ms;
  j["model"]       = model;
  j["messages"]    = std::move(messages);
  j["prompt_hash"] = prompt_hash;
  j["response"]    = response ? nlohmann::json(*response) : nlohmann::json(nullptr);
  j["error"]       = error ? nlohmann::json(*error) : nlohmann::json(nullptr);
  if (prompt_tokens || completion_tokens)
  {
    j["usage"] = {{"prompt_tokens", prompt_tokens.value_or(0)},
                  {"completion_tokens", completion_tokens.value_or(0)}};
  }
  return j;
}

std::uint64_t Transcript::append(ChatExchange exchange)
{
  std::lock_guard<std::mutex> lock(mutex_);
  exchange.id = log_.size() + 1;
  log_.push_back(std::move(exchange));
  return log_.back().id;
}

std::vector<ChatExchange> Transcript::exchanges() const
{
  std::lock_guard<std::mutex> lock(mutex_);
  return log_;
}

std::size_t Transcript::size() const
{
  std::lock_guard<std::mutex> lock(mutex_);
  return log_.size();
}

std::string Transcript::jsonl() const
{
  std::lock_guard<std::mutex> lock(mutex_);
  std::string out;
  for (auto const &ex : log_)
  {
    out += ex.to_json().dump() + "\n";
  }
  return out;
}

void Transcript::write(std::filesystem::path const &path) const
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  }
  out << jsonl();
}

LlmClient::LlmClient(ModelConfig config, std::shared_ptr<ChatBackend> backend,
                     std::string agent_label, ClientDeps deps)
  : config_(std::move(config))
  , backend_(std::move(backend))
  , label_(std::move(agent_label))
  , deps_(std::move(deps))
{
  config_.validate();
  if (!deps_.transcript)
  {
    deps_.transcript = std::make_shared<Transcript>();
  }
  if (!deps_.clock)
  {
    deps_.clock = std::make_shared<LogicalClock>();
  }
  if (!deps_.sleeper)
  {
    deps_.sleeper = real_sleeper();
  }
}

std::string LlmClient::complete(std::string const &prompt)
{
  ChatRequest const request{config_.system_prompt, prompt,           config_.model,
                            config_.temperature,   config_.max_tokens, config_.timeout};

  ChatExchange base;
  base.agent       = label_;
  base.model       = config_.model;
  base.system      = request.system;
  base.user        = request.user;
  base.prompt_hash = prompt_hash(request.system, request.user);

  int const   attempts = config_.max_retries + 1;
  FailureKind last     = FailureKind::Transport;
  std::uint64_t last_id = 0;
  for (int attempt = 1; attempt <= attempts; ++attempt)
  {
    if (deps_.limiter)
    {
      deps_.limiter->acquire();
    }
    ChatExchange ex = base;
    ex.attempt      = attempt;
    ex.timestamp    = deps_.clock->now_seconds();

    BackendReply reply;
    try
    {
      reply = backend_->send(request, label_);
    }
    catch (Error const &e)
    {
      ex.latency_ms = deps_.clock->elapsed_ms(ex.timestamp);
      ex.error      = std::string(to_string(e.code())) + ": " + e.what();
      deps_.transcript->append(std::move(ex));
      throw;
    }
    ex.latency_ms        = deps_.clock->elapsed_ms(ex.timestamp);
    ex.prompt_tokens     = reply.prompt_tokens;
    ex.completion_tokens = reply.completion_tokens;

    if (reply.text)
    {
      ex.response = *reply.text;
      deps_.transcript->append(std::move(ex));
      return *reply.text;
    }

    last     = reply.failure.value_or(FailureKind::Transport);
    ex.error = std::string(to_string(last)) + (reply.detail.empty() ? "" : ": " + reply.detail);
    last_id  = deps_.transcript->append(std::move(ex));

    if (last == FailureKind::Auth)
    {
      throw LlmError(ErrorCode::AuthFailure, "endpoint rejected the credential", last_id);
    }
    if (attempt < attempts)
    {
      double const delay =
          std::min(static_cast<double>(config_.max_backoff.count()),
                   static_cast<double>(config_.initial_backoff.count()) *
                       std::pow(config_.backoff_factor, attempt - 1));
      deps_.sleeper(std::chrono::milliseconds(static_cast<long long>(delay)));
    }
  }
  if (last == FailureKind::Timeout)
  {
    throw LlmError(ErrorCode::Timeout, "request timed out " + std::to_string(attempts) + " times",
                   last_id);
  }
  throw LlmError(ErrorCode::Exhausted, std::to_string(attempts) + " attempts failed", last_id);
}

}  // namespace enbench
