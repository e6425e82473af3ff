#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "stride/llm/backend.hpp"

namespace stride::llm {

/// Client for OpenAI-compatible chat-completion endpoints. One request per
/// slot with messages [system, user]; the reply is read from
/// choices[0].message.content.
class HttpChatBackend final : public GeneratorBackend
{
public:
  /// Throws BackendSetupError on a malformed endpoint or an empty key.
  HttpChatBackend(HttpSettings settings, std::string api_key, bool debug = false);

  std::vector<GenerationResult> generate(const PromptBundle& prompt, int k) override;

  nlohmann::json request_body(const PromptBundle& prompt) const;

private:
  GenerationResult request(const std::string& body) const;

  HttpSettings settings_;
  std::string api_key_;
  bool debug_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

/// Reads STRIDE_API_KEY; throws BackendSetupError when unset or empty.
std::string api_key_from_environment();

}  // namespace stride::llm
