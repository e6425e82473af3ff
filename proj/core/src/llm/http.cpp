#include "stride/llm/http.hpp"

#include <chrono>
#include <cstdlib>
#include <regex>

#include "httplib.h"
#include "stride/common/parallel.hpp"

namespace stride::llm {

std::string api_key_from_environment()
{
  const char* key = std::getenv(kApiKeyVariable);
  if (key == nullptr || *key == '\0') {
    throw BackendSetupError(std::string("the http backend needs an API key in the ") + kApiKeyVariable +
                            " environment variable");
  }
  return key;
}

HttpChatBackend::HttpChatBackend(HttpSettings settings, std::string api_key, bool debug)
    : settings_(std::move(settings)), api_key_(std::move(api_key)), debug_(debug)
{
  if (api_key_.empty()) throw BackendSetupError("empty API key");
  static const std::regex url(R"(^(https?://[^/\s]+)(/\S*)?$)");
  std::smatch m;
  if (!std::regex_match(settings_.endpoint, m, url)) {
    throw BackendSetupError("backend.http.endpoint: not an http(s) URL: '" + settings_.endpoint + "'");
  }
  origin_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
}

nlohmann::json HttpChatBackend::request_body(const PromptBundle& prompt) const
{
  return {
      {"model", settings_.model},
      {"messages",
       nlohmann::json::array({{{"role", "system"}, {"content", prompt.system}}, {{"role", "user"}, {"content", prompt.user}}})},
      {"temperature", settings_.temperature},
  };
}

GenerationResult HttpChatBackend::request(const std::string& body) const
{
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(settings_.timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_bearer_token_auth(api_key_);

  const auto res = client.Post(path_, body, "application/json");
  if (!res) return GenerationResult::failed("", "request failed: " + httplib::to_string(res.error()), elapsed());
  if (res->status != 200) {
    return GenerationResult::failed(res->body, "http status " + std::to_string(res->status), elapsed());
  }
  try {
    const auto j = nlohmann::json::parse(res->body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) return GenerationResult::failed(res->body, "message content is not a string", elapsed());
    return GenerationResult::extracted(content.get<std::string>(), dsl::Origin::llm, elapsed());
  } catch (const nlohmann::json::exception& e) {
    return GenerationResult::failed(res->body, std::string("malformed chat response: ") + e.what(), elapsed());
  }
}

std::vector<GenerationResult> HttpChatBackend::generate(const PromptBundle& prompt, int k)
{
  std::vector<GenerationResult> out(static_cast<std::size_t>(std::max(k, 0)));
  const std::string body = request_body(prompt).dump();
  const unsigned workers = std::min<unsigned>(settings_.concurrency, static_cast<unsigned>(out.size()));
  parallel_for(out.size(), std::max(workers, 1u), [&](std::size_t i) {
    try {
      out[i] = request(body);
    } catch (const std::exception& e) {
      out[i] = GenerationResult::failed("", std::string("request failed: ") + e.what(), 0.0);
    }
    if (debug_) out[i].request_body = body;
  });
  return out;
}

}  // namespace stride::llm
