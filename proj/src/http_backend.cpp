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

#include <httplib.h>

#include <cstdlib>

namespace enbench {
namespace {

struct Endpoint
{
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(std::string const &url)
{
  auto const scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
  {
    throw Error(ErrorCode::InvalidConfig, "endpoint must be an absolute URL: " + url);
  }
  auto const path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos)
  {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpBackend::HttpBackend(ModelConfig config)
  : config_(std::move(config))
{
  config_.validate();
  auto const ep = split_endpoint(config_.endpoint);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (ep.origin.rfind("https://", 0) == 0)
  {
    throw Error(ErrorCode::InvalidConfig, "this build has no TLS support for " + ep.origin);
  }
#endif
}

BackendReply HttpBackend::send(ChatRequest const &request, std::string const & /*label*/)
{
  auto const ep = split_endpoint(config_.endpoint);

  httplib::Client client(ep.origin);
  auto const      secs  = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  auto const      usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config_.api_key_env.empty())
  {
    if (char const *key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0')
    {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  nlohmann::json messages = nlohmann::json::array();
  if (!request.system.empty())
  {
    messages.push_back({{"role", "system"}, {"content", request.system}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user}});
  nlohmann::json body = {{"model", request.model},
                         {"messages", std::move(messages)},
                         {"temperature", request.temperature},
                         {"max_tokens", request.max_tokens}};

  auto res = client.Post(ep.path, headers, body.dump(), "application/json");
  if (!res)
  {
    auto const err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
    {
      return BackendReply::fail(FailureKind::Timeout, httplib::to_string(err));
    }
    return BackendReply::fail(FailureKind::Transport, httplib::to_string(err));
  }

  int const status = res->status;
  if (status == 401 || status == 403)
  {
    return BackendReply::fail(FailureKind::Auth, "HTTP " + std::to_string(status));
  }
  if (status == 429)
  {
    return BackendReply::fail(FailureKind::RateLimited, "HTTP 429");
  }
  if (status == 408 || status == 504)
  {
    return BackendReply::fail(FailureKind::Timeout, "HTTP " + std::to_string(status));
  }
  if (status < 200 || status >= 300)
  {
    return BackendReply::fail(FailureKind::Transport, "HTTP " + std::to_string(status));
  }

  auto parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded())
  {
    return BackendReply::fail(FailureKind::Transport, "response body is not JSON");
  }
  try
  {
    auto reply = BackendReply::ok(
        parsed.at("choices").at(0).at("message").at("content").get<std::string>());
    if (auto u = parsed.find("usage"); u != parsed.end() && u->is_object())
    {
      if (u->contains("prompt_tokens"))
      {
        reply.prompt_tokens = (*u)["prompt_tokens"].get<int>();
      }
      if (u->contains("completion_tokens"))
      {
        reply.completion_tokens = (*u)["completion_tokens"].get<int>();
      }
    }
    return reply;
  }
  catch (nlohmann::json::exception const &e)
  {
    return BackendReply::fail(FailureKind::Transport, std::string("unexpected body: ") + e.what());
  }
}

}  // namespace enbench
