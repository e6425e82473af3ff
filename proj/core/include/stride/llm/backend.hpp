#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stride/dsl/ast.hpp"
#include "stride/llm/prompts.hpp"

namespace stride::llm {

/// Contents of the first fenced block (```rwd, ``` or any info string),
/// trimmed. Empty optional when there is no complete non-empty block.
std::optional<std::string> extract_code_block(std::string_view response);

struct GenerationResult
{
  std::string raw_response;
  std::optional<dsl::RewardSource> source;
  std::string failure;  // set iff source is empty
  double latency_seconds = 0.0;
  std::string request_body;  // http backend, debug only

  bool ok() const { return source.has_value(); }

  static GenerationResult extracted(std::string raw, dsl::Origin origin, double latency);
  static GenerationResult failed(std::string raw, std::string why, double latency);
};

/// Setup problem that must stop a run before any work (bad settings,
/// missing credentials).
class BackendSetupError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class BackendKind
{
  http_chat,
  scripted,
};

std::string_view to_string(BackendKind k);
BackendKind backend_kind_from_string(std::string_view s);

inline constexpr const char* kApiKeyVariable = "STRIDE_API_KEY";

struct HttpSettings
{
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  double temperature = 1.0;
  double timeout_seconds = 120.0;
  unsigned concurrency = 4;

  bool operator==(const HttpSettings&) const = default;
};

struct MutationRates
{
  double swap = 0.3;
  double perturb = 0.4;
  double add_drop = 0.2;
  double substitute = 0.1;

  bool operator==(const MutationRates&) const = default;
};

struct ScriptedSettings
{
  std::uint64_t seed = 0;  // 0: derived from the run's master seed
  std::vector<std::string> pool;  // empty: default_pool()
  MutationRates rates;

  bool operator==(const ScriptedSettings&) const = default;
};

struct BackendConfig
{
  BackendKind kind = BackendKind::scripted;
  HttpSettings http;
  ScriptedSettings scripted;
  bool debug = false;  // keep request bodies in results

  bool operator==(const BackendConfig&) const = default;
};

nlohmann::json to_json(const BackendConfig& c);
BackendConfig backend_config_from_json(const nlohmann::json& j, const std::string& path);

class GeneratorBackend
{
public:
  virtual ~GeneratorBackend() = default;

  /// Exactly k results in slot order. Failures are values, never exceptions.
  virtual std::vector<GenerationResult> generate(const PromptBundle& prompt, int k) = 0;
};

/// Throws BackendSetupError, e.g. when the http backend has no API key.
/// `variables` are the observation names the scripted backend may
/// substitute; `run_seed` seeds it when its own seed is 0.
std::unique_ptr<GeneratorBackend> make_backend(const BackendConfig& config, const std::vector<std::string>& variables,
                                               std::uint64_t run_seed);

}  // namespace stride::llm
