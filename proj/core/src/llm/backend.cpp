#include "stride/llm/backend.hpp"

#include <cctype>

#include "stride/common/json_reader.hpp"
#include "stride/common/seed.hpp"
#include "stride/llm/http.hpp"
#include "stride/llm/scripted.hpp"

namespace stride::llm {

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Offset of the first line at or after `from` whose first non-blank
// characters are ```, or npos.
std::size_t find_fence_line(std::string_view text, std::size_t from, std::size_t& fence_at)
{
  std::size_t line = from;
  while (line < text.size()) {
    std::size_t i = line;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (text.compare(i, 3, "```") == 0) {
      fence_at = i;
      return line;
    }
    const std::size_t nl = text.find('\n', line);
    if (nl == std::string_view::npos) break;
    line = nl + 1;
  }
  return std::string_view::npos;
}

}  // namespace

std::optional<std::string> extract_code_block(std::string_view response)
{
  std::size_t fence = 0;
  if (find_fence_line(response, 0, fence) == std::string_view::npos) return std::nullopt;
  const std::size_t body = response.find('\n', fence);
  if (body == std::string_view::npos) return std::nullopt;

  std::size_t close_fence = 0;
  const std::size_t close = find_fence_line(response, body + 1, close_fence);
  if (close == std::string_view::npos) return std::nullopt;
  const std::string_view content = trim(response.substr(body + 1, close - (body + 1)));
  if (content.empty()) return std::nullopt;
  return std::string(content);
}

GenerationResult GenerationResult::extracted(std::string raw, dsl::Origin origin, double latency)
{
  GenerationResult r;
  if (auto code = extract_code_block(raw)) {
    r.source.emplace(std::move(*code), origin);
  } else {
    r.failure = "no fenced code block in the response";
  }
  r.raw_response = std::move(raw);
  r.latency_seconds = latency;
  return r;
}

GenerationResult GenerationResult::failed(std::string raw, std::string why, double latency)
{
  GenerationResult r;
  r.raw_response = std::move(raw);
  r.failure = std::move(why);
  r.latency_seconds = latency;
  return r;
}

std::string_view to_string(BackendKind k)
{
  return k == BackendKind::http_chat ? "http" : "scripted";
}

BackendKind backend_kind_from_string(std::string_view s)
{
  if (s == "http" || s == "http_chat") return BackendKind::http_chat;
  if (s == "scripted") return BackendKind::scripted;
  throw std::invalid_argument("unknown backend kind '" + std::string(s) + "' (expected http or scripted)");
}

nlohmann::json to_json(const BackendConfig& c)
{
  return {
      {"kind", to_string(c.kind)},
      {"debug", c.debug},
      {"http",
       {{"endpoint", c.http.endpoint},
        {"model", c.http.model},
        {"temperature", c.http.temperature},
        {"timeout_seconds", c.http.timeout_seconds},
        {"concurrency", c.http.concurrency}}},
      {"scripted",
       {{"seed", c.scripted.seed},
        {"pool", c.scripted.pool},
        {"rates",
         {{"swap", c.scripted.rates.swap},
          {"perturb", c.scripted.rates.perturb},
          {"add_drop", c.scripted.rates.add_drop},
          {"substitute", c.scripted.rates.substitute}}}}},
  };
}

BackendConfig backend_config_from_json(const nlohmann::json& j, const std::string& path)
{
  BackendConfig c;
  ObjectReader r(j, path);
  std::string kind = std::string(to_string(c.kind));
  r.get("kind", kind);
  try {
    c.kind = backend_kind_from_string(kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(r.path_of("kind") + ": " + e.what());
  }
  r.get("debug", c.debug);
  if (const auto* h = r.child("http")) {
    ObjectReader hr(*h, r.path_of("http"));
    hr.get("endpoint", c.http.endpoint);
    hr.get("model", c.http.model);
    hr.get("temperature", c.http.temperature);
    hr.get("timeout_seconds", c.http.timeout_seconds);
    hr.get("concurrency", c.http.concurrency);
    hr.finish();
    if (!(c.http.timeout_seconds > 0.0)) throw ConfigError(hr.path_of("timeout_seconds") + ": must be > 0");
    if (!(c.http.temperature >= 0.0)) throw ConfigError(hr.path_of("temperature") + ": must be >= 0");
    if (c.http.concurrency == 0) throw ConfigError(hr.path_of("concurrency") + ": must be >= 1");
  }
  if (const auto* s = r.child("scripted")) {
    ObjectReader sr(*s, r.path_of("scripted"));
    sr.get("seed", c.scripted.seed);
    sr.get("pool", c.scripted.pool);
    if (const auto* rates = sr.child("rates")) {
      ObjectReader rr(*rates, sr.path_of("rates"));
      rr.get("swap", c.scripted.rates.swap);
      rr.get("perturb", c.scripted.rates.perturb);
      rr.get("add_drop", c.scripted.rates.add_drop);
      rr.get("substitute", c.scripted.rates.substitute);
      rr.finish();
      const auto& m = c.scripted.rates;
      if (m.swap < 0 || m.perturb < 0 || m.add_drop < 0 || m.substitute < 0 ||
          !(m.swap + m.perturb + m.add_drop + m.substitute > 0)) {
        throw ConfigError(sr.path_of("rates") + ": rates must be >= 0 with a positive sum");
      }
    }
    sr.finish();
    for (const auto& p : c.scripted.pool) {
      if (trim(p).empty()) throw ConfigError(sr.path_of("pool") + ": entries must not be empty");
    }
  }
  r.finish();
  return c;
}

std::unique_ptr<GeneratorBackend> make_backend(const BackendConfig& config, const std::vector<std::string>& variables,
                                               std::uint64_t run_seed)
{
  if (config.kind == BackendKind::http_chat) {
    return std::make_unique<HttpChatBackend>(config.http, api_key_from_environment(), config.debug);
  }
  ScriptedSettings s = config.scripted;
  if (s.seed == 0) s.seed = derive_seed(run_seed, "scripted");
  return std::make_unique<ScriptedBackend>(std::move(s), variables);
}

}  // namespace stride::llm
