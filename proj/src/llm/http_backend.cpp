#include <httplib.h>

#include <chrono>
#include <thread>

#include "http_client.hpp"
#include "tabqa/error.hpp"

namespace tabqa::llm {

using nlohmann::json;

namespace detail {

namespace {

struct ParsedUrl {
  std::string scheme_host_port;
  std::string prefix;
};

ParsedUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::Config, "endpoint URL needs a scheme: '" + url + "'");
  }
  auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  if (path_start != std::string::npos) out.prefix = url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

}  // namespace

json post_json(const Endpoint& endpoint, const std::string& path, const json& body) {
  ParsedUrl url = split_url(endpoint.base_url);
  httplib::Client client(url.scheme_host_port);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout).count();
  client.set_connection_timeout(std::max<long>(1, std::min<long>(seconds, 10)), 0);
  client.set_read_timeout(std::max<long>(1, seconds), 0);
  client.set_write_timeout(std::max<long>(1, seconds), 0);

  httplib::Headers headers;
  if (!endpoint.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.api_key);
  }
  const std::string payload = body.dump();
  const std::string full_path = url.prefix + path;

  const int attempts = std::max(1, endpoint.retry.max_attempts);
  auto backoff = endpoint.retry.initial_backoff;
  ErrorKind last_kind = ErrorKind::EndpointUnreachable;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    auto res = client.Post(full_path, headers, payload, "application/json");
    if (!res) {
      last_kind = ErrorKind::EndpointUnreachable;
      last_error = httplib::to_string(res.error());
    } else if (res->status == 429) {
      last_kind = ErrorKind::RateLimited;
      last_error = "HTTP 429";
    } else if (res->status >= 500) {
      last_kind = ErrorKind::EndpointUnreachable;
      last_error = "HTTP " + std::to_string(res->status);
    } else if (res->status >= 400) {
      throw Error(ErrorKind::Io, "HTTP " + std::to_string(res->status) + " from " +
                                     endpoint.base_url + full_path + ": " + res->body);
    } else {
      try {
        return json::parse(res->body);
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Io, std::string("invalid JSON reply: ") + e.what());
      }
    }
    if (attempt < attempts) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(backoff.count() * endpoint.retry.multiplier));
    }
  }
  throw Error(last_kind, endpoint.base_url + full_path + " failed after " +
                             std::to_string(attempts) + " attempts: " + last_error);
}

}  // namespace detail

HttpGateway::HttpGateway(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}

ChatResponse HttpGateway::complete(const ChatRequest& request) {
  request.validate();
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body = {{"model", request.model},
               {"messages", messages},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  if (request.seed) body["seed"] = *request.seed;

  auto start = std::chrono::steady_clock::now();
  json reply = detail::post_json(endpoint_, "/v1/chat/completions", body);
  auto elapsed = std::chrono::steady_clock::now() - start;

  ChatResponse out;
  try {
    const json& choice = reply.at("choices").at(0);
    const json& content = choice.at("message").at("content");
    if (!content.is_string()) throw Error(ErrorKind::Io, "completion has no text content");
    out.content = content.get<std::string>();
    if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
      out.finish_reason = choice["finish_reason"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("unexpected completion payload: ") + e.what());
  }
  out.latency_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
  return out;
}

}  // namespace tabqa::llm
