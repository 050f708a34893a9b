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

#include "enbench/errors.hpp"

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace enbench {

/// Model endpoint settings. The credential is the *name* of an environment
/// variable; its value is read at request time and never stored.
struct ModelConfig
{
  std::string               endpoint    = "https://api.openai.com/v1/chat/completions";
  std::string               model       = "gpt-5-mini";
  double                    temperature = 1.0;
  int                       max_tokens  = 1024;
  std::chrono::milliseconds timeout{60000};
  int                       max_retries = 3;
  std::string               api_key_env = "OPENAI_API_KEY";
  std::string               system_prompt;
  double                    requests_per_minute = 60.0;  // <= 0 disables limiting
  std::chrono::milliseconds initial_backoff{1000};
  double                    backoff_factor = 2.0;
  std::chrono::milliseconds max_backoff{30000};

  void validate() const;
};

struct ChatRequest
{
  std::string               system;
  std::string               user;
  std::string               model;
  double                    temperature = 1.0;
  int                       max_tokens  = 1024;
  std::chrono::milliseconds timeout{60000};
};

enum class FailureKind
{
  Transport,
  RateLimited,
  Auth,
  Timeout,
};

std::string_view           to_string(FailureKind kind) noexcept;
std::optional<FailureKind> failure_kind_from_string(std::string_view name) noexcept;

struct BackendReply
{
  std::optional<std::string> text;
  std::optional<FailureKind> failure;
  std::string                detail;
  std::optional<int>         prompt_tokens;
  std::optional<int>         completion_tokens;

  static BackendReply ok(std::string text)
  {
    BackendReply r;
    r.text = std::move(text);
    return r;
  }
  static BackendReply fail(FailureKind kind, std::string detail = {})
  {
    BackendReply r;
    r.failure = kind;
    r.detail  = std::move(detail);
    return r;
  }
};

/// Transport behind the client. `label` identifies the calling agent.
class ChatBackend
{
public:
  virtual ~ChatBackend() = default;

  virtual BackendReply send(ChatRequest const &request, std::string const &label) = 0;
};

/// Stable key for a prompt: FNV-1a over system + '\0' + user, as 16 hex digits.
std::string prompt_hash(std::string const &system, std::string const &user);

/// One scripted reply: text, or an injected failure.
struct ScriptEntry
{
  std::optional<std::string> text;
  std::optional<FailureKind> failure;
};

/// Replays canned responses. Ordered mode hands them out in sequence
/// (optionally cycling); keyed mode looks them up by prompt_hash.
class ScriptedBackend : public ChatBackend
{
public:
  /// Replies in order; once they run out, the fallback answers every
  /// request (or, with `cycle`, the list starts over).
  static std::shared_ptr<ScriptedBackend> ordered(std::vector<ScriptEntry> entries,
                                                  bool cycle = false,
                                                  std::optional<ScriptEntry> fallback = {});
  static std::shared_ptr<ScriptedBackend> keyed(std::map<std::string, ScriptEntry> entries,
                                                std::optional<ScriptEntry> fallback = {});

  /// Throws ScriptExhausted when nothing is left (or no key matches).
  BackendReply send(ChatRequest const &request, std::string const &label) override;

private:
  ScriptedBackend() = default;

  std::mutex                         mutex_;
  bool                               keyed_ = false;
  bool                               cycle_ = false;
  std::vector<ScriptEntry>           ordered_;
  std::size_t                        next_ = 0;
  std::map<std::string, ScriptEntry> by_key_;
  std::optional<ScriptEntry>         fallback_;
};

/// Replays a recorded transcript: each (agent label, prompt hash) gets its
/// recorded replies back in the original order, failures included.
class ReplayBackend : public ChatBackend
{
public:
  explicit ReplayBackend(std::vector<nlohmann::json> const &exchanges);
  static std::shared_ptr<ReplayBackend> from_file(std::filesystem::path const &transcript);

  BackendReply send(ChatRequest const &request, std::string const &label) override;

private:
  std::mutex                                                      mutex_;
  std::map<std::pair<std::string, std::string>, std::deque<ScriptEntry>> queues_;
};

/// Chat-completion over HTTP(S): POST {"model", "messages", "temperature",
/// "max_tokens"}, read choices[0].message.content.
class HttpBackend : public ChatBackend
{
public:
  explicit HttpBackend(ModelConfig config);

  BackendReply send(ChatRequest const &request, std::string const &label) override;

private:
  ModelConfig config_;
};

/// Timestamp source for transcripts.
class Clock
{
public:
  virtual ~Clock()                          = default;
  virtual double now_seconds()              = 0;
  virtual double elapsed_ms(double since_s) = 0;
};

class WallClock : public Clock
{
public:
  double now_seconds() override;
  double elapsed_ms(double since_s) override;
};

/// Timestamps 0, 1, 2, ... and zero latency, so transcripts stay
/// byte-reproducible.
class LogicalClock : public Clock
{
public:
  double now_seconds() override;
  double elapsed_ms(double /*since_s*/) override
  {
    return 0.0;
  }

private:
  std::mutex    mutex_;
  std::uint64_t ticks_ = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

Sleeper real_sleeper();

/// Token bucket shared by every client talking to one endpoint.
class RateLimiter
{
public:
  RateLimiter(double requests_per_minute, double burst = 1.0,
              std::function<double()> now = {}, Sleeper sleeper = {});

  void acquire();

private:
  std::mutex              mutex_;
  double                  rate_per_second_;
  double                  burst_;
  double                  tokens_;
  double                  last_ = 0.0;
  std::function<double()> now_;
  Sleeper                 sleep_;
};

struct ChatExchange
{
  std::uint64_t              id      = 0;
  std::string                agent;
  int                        attempt = 1;
  double                     timestamp  = 0.0;
  double                     latency_ms = 0.0;
  std::string                model;
  std::string                system;
  std::string                user;
  std::string                prompt_hash;
  std::optional<std::string> response;
  std::optional<std::string> error;
  std::optional<int>         prompt_tokens;
  std::optional<int>         completion_tokens;

  nlohmann::json to_json() const;
};

/// Append-only, thread-safe log of every attempt.
class Transcript
{
public:
  std::uint64_t append(ChatExchange exchange);

  std::vector<ChatExchange> exchanges() const;
  std::size_t               size() const;
  std::string               jsonl() const;
  void                      write(std::filesystem::path const &path) const;

private:
  mutable std::mutex        mutex_;
  std::vector<ChatExchange> log_;
};

/// Raised by LlmClient::complete; carries the id of the last logged attempt.
class LlmError : public Error
{
public:
  LlmError(ErrorCode code, std::string const &message, std::uint64_t exchange_id)
    : Error(code, message + " (exchange " + std::to_string(exchange_id) + ")")
    , exchange_id_(exchange_id)
  {}

  std::uint64_t exchange_id() const noexcept
  {
    return exchange_id_;
  }

private:
  std::uint64_t exchange_id_;
};

struct ClientDeps
{
  std::shared_ptr<Transcript>  transcript;
  std::shared_ptr<RateLimiter> limiter;  // optional
  std::shared_ptr<Clock>       clock;    // defaults to LogicalClock
  Sleeper                      sleeper;  // defaults to real_sleeper()
};

class LlmClient
{
public:
  LlmClient(ModelConfig config, std::shared_ptr<ChatBackend> backend, std::string agent_label,
            ClientDeps deps);

  /// Sends one prompt. Transport failures, rate limiting and timeouts are
  /// retried with exponential backoff; authentication failures are not.
  /// Throws LlmError (Exhausted, Timeout, AuthFailure) or ScriptExhausted.
  std::string complete(std::string const &prompt);

  ModelConfig const &config() const noexcept
  {
    return config_;
  }

private:
  ModelConfig                  config_;
  std::shared_ptr<ChatBackend> backend_;
  std::string                  label_;
  ClientDeps                   deps_;
};

}  // namespace enbench
