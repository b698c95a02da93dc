#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tabqa/llm/gateway.hpp"
#include "tabqa/model.hpp"

namespace tabqa::llm {

/// A configured model for one pipeline role.
struct ModelRole {
  std::shared_ptr<Gateway> gateway;
  std::string model;
  std::optional<std::int64_t> seed;
  double temperature = 0.0;
  int max_tokens = 2048;
};

/// Sends `prompt` as a single user message and returns the completion text.
/// When `transcript` is given the exchange is appended to it, including
/// failed calls; gateway errors are rethrown.
std::string ask(const ModelRole& role, std::string_view tag, std::string prompt,
                Transcript* transcript);

}  // namespace tabqa::llm
