#pragma once

#include <string>

#include <json.hpp>

#include "tabqa/llm/gateway.hpp"

namespace tabqa::llm::detail {

/// POSTs `body` to `endpoint.base_url + path` and returns the parsed JSON
/// reply, applying the endpoint's retry policy to transient failures.
nlohmann::json post_json(const Endpoint& endpoint, const std::string& path,
                         const nlohmann::json& body);

}  // namespace tabqa::llm::detail
