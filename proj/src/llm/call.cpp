#include "tabqa/llm/call.hpp"

#include "tabqa/error.hpp"

namespace tabqa::llm {

std::string ask(const ModelRole& role, std::string_view tag, std::string prompt,
                Transcript* transcript) {
  if (!role.gateway) throw Error(ErrorKind::Config, "no gateway configured for " + std::string(tag));
  ChatRequest request = user_request(role.model, prompt);
  request.seed = role.seed;
  request.temperature = role.temperature;
  request.max_tokens = role.max_tokens;
  try {
    std::string content = role.gateway->complete(request).content;
    if (transcript) transcript->push_back({std::string(tag), std::move(prompt), content, std::nullopt});
    return content;
  } catch (const std::exception& e) {
    if (transcript) transcript->push_back({std::string(tag), std::move(prompt), std::nullopt, e.what()});
    throw;
  }
}

}  // namespace tabqa::llm
