#include "stride/search/record.hpp"

#include "stride/common/io.hpp"

namespace stride::search {

namespace {

constexpr std::string_view kStatusNames[] = {"extraction_failed", "parse_failed", "validation_failed", "runtime_failed",
                                             "trained"};

nlohmann::json to_json(const Incumbent& i)
{
  return {{"id", i.id}, {"iteration", i.iteration}, {"index", i.index}, {"fitness", i.fitness}};
}

Incumbent incumbent_from_json(const nlohmann::json& j)
{
  Incumbent i;
  i.id = j.at("id").get<std::string>();
  i.iteration = j.at("iteration").get<int>();
  i.index = j.at("index").get<int>();
  i.fitness = j.at("fitness").get<double>();
  return i;
}

nlohmann::json optional_json(const std::optional<Incumbent>& i)
{
  return i ? to_json(*i) : nlohmann::json(nullptr);
}

std::optional<Incumbent> optional_incumbent(const nlohmann::json& j)
{
  if (j.is_null()) return std::nullopt;
  return incumbent_from_json(j);
}

nlohmann::json to_json(const IterationRecord& it)
{
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : it.candidates) candidates.push_back(to_json(c));
  return {
      {"iteration", it.iteration},
      {"prompt", {{"system", it.prompt.system}, {"user", it.prompt.user}, {"template_version", it.prompt.template_version}}},
      {"candidates", candidates},
      {"best_id", it.best_id},
      {"best_fitness", it.best_fitness},
      {"executable_rate", it.executable_rate},
      {"global_best", optional_json(it.global_best)},
      {"wall_clock_seconds", it.wall_clock_seconds},
  };
}

IterationRecord iteration_from_json(const nlohmann::json& j)
{
  IterationRecord it;
  it.iteration = j.at("iteration").get<int>();
  const auto& p = j.at("prompt");
  it.prompt.system = p.at("system").get<std::string>();
  it.prompt.user = p.at("user").get<std::string>();
  it.prompt.template_version = p.at("template_version").get<std::string>();
  for (const auto& c : j.at("candidates")) it.candidates.push_back(candidate_from_json(c));
  it.best_id = j.at("best_id").get<std::string>();
  it.best_fitness = j.at("best_fitness").get<double>();
  it.executable_rate = j.at("executable_rate").get<double>();
  it.global_best = optional_incumbent(j.at("global_best"));
  it.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  return it;
}

void strip_in_place(nlohmann::json& j)
{
  if (j.is_object()) {
    j.erase("wall_clock_seconds");
    j.erase("latency_seconds");
    for (auto& [key, value] : j.items()) strip_in_place(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_in_place(value);
  }
}

}  // namespace

std::string_view to_string(CandidateStatus s)
{
  return kStatusNames[static_cast<std::size_t>(s)];
}

CandidateStatus candidate_status_from_string(std::string_view s)
{
  for (std::size_t i = 0; i < std::size(kStatusNames); ++i) {
    if (kStatusNames[i] == s) return static_cast<CandidateStatus>(i);
  }
  throw std::invalid_argument("unknown candidate status '" + std::string(s) + "'");
}

bool Candidate::operator==(const Candidate& other) const
{
  return to_json(*this) == to_json(other);
}

const Candidate* RunRecord::find(const std::string& id) const
{
  for (const auto& it : iterations) {
    for (const auto& c : it.candidates) {
      if (c.id == id) return &c;
    }
  }
  return nullptr;
}

bool RunRecord::operator==(const RunRecord& other) const
{
  return to_json(*this) == to_json(other);
}

nlohmann::json to_json(const Candidate& c)
{
  nlohmann::json j = {
      {"id", c.id},
      {"iteration", c.iteration},
      {"index", c.index},
      {"source", c.source ? nlohmann::json(c.source->text()) : nlohmann::json(nullptr)},
      {"origin", c.source ? nlohmann::json(dsl::to_string(c.source->origin())) : nlohmann::json(nullptr)},
      {"canonical", c.canonical},
      {"status", to_string(c.status)},
      {"diagnostics", c.diagnostics},
      {"report", c.report ? trainer::to_json(*c.report, false) : nlohmann::json(nullptr)},
      {"evaluation", c.evaluation},
      {"fitness", c.fitness},
      {"raw_response", c.raw_response},
      {"latency_seconds", c.latency_seconds},
  };
  if (!c.request_body.empty()) j["request_body"] = c.request_body;
  return j;
}

Candidate candidate_from_json(const nlohmann::json& j)
{
  Candidate c;
  c.id = j.at("id").get<std::string>();
  c.iteration = j.at("iteration").get<int>();
  c.index = j.at("index").get<int>();
  if (!j.at("source").is_null()) {
    c.source.emplace(j.at("source").get<std::string>(), dsl::origin_from_string(j.at("origin").get<std::string>()));
  }
  c.canonical = j.at("canonical").get<std::string>();
  c.status = candidate_status_from_string(j.at("status").get<std::string>());
  c.diagnostics = j.at("diagnostics").get<std::string>();
  if (!j.at("report").is_null()) c.report = trainer::train_report_from_json(j.at("report"));
  c.evaluation = j.at("evaluation").get<std::vector<double>>();
  c.fitness = j.at("fitness").get<double>();
  c.raw_response = j.at("raw_response").get<std::string>();
  c.request_body = j.value("request_body", std::string());
  c.latency_seconds = j.value("latency_seconds", 0.0);
  return c;
}

nlohmann::json to_json(const RunRecord& r)
{
  nlohmann::json iterations = nlohmann::json::array();
  for (const auto& it : r.iterations) iterations.push_back(to_json(it));
  return {
      {"schema_version", r.schema_version},
      {"run_id", r.run_id},
      {"tool_version", r.tool_version},
      {"config", r.config},
      {"descriptor", r.descriptor.to_json()},
      {"iterations", iterations},
      {"best", optional_json(r.best)},
      {"best_source", r.best_source},
      {"best_policy", r.best_policy ? trainer::to_json(*r.best_policy) : nlohmann::json(nullptr)},
      {"no_viable_candidate", r.no_viable_candidate},
      {"wall_clock_seconds", r.wall_clock_seconds},
  };
}

RunRecord run_record_from_json(const nlohmann::json& j)
{
  if (!j.is_object() || !j.contains("schema_version")) throw RecordError("not a run record: missing schema_version");
  const auto& v = j.at("schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    throw RecordError("unsupported run record schema version " + v.dump() + " (this build reads version " +
                      std::to_string(kSchemaVersion) + ")");
  }
  try {
    RunRecord r;
    r.schema_version = kSchemaVersion;
    r.run_id = j.at("run_id").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config = j.at("config");
    r.descriptor = sim::EnvDescriptor::from_json(j.at("descriptor"));
    for (const auto& it : j.at("iterations")) r.iterations.push_back(iteration_from_json(it));
    r.best = optional_incumbent(j.at("best"));
    r.best_source = j.at("best_source").get<std::string>();
    if (!j.at("best_policy").is_null()) r.best_policy = trainer::policy_from_json(j.at("best_policy"));
    r.no_viable_candidate = j.at("no_viable_candidate").get<bool>();
    r.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
    return r;
  } catch (const std::exception& e) {
    throw RecordError(std::string("malformed run record: ") + e.what());
  }
}

std::string serialize(const RunRecord& r)
{
  return to_json(r).dump(2) + "\n";
}

void persist(const RunRecord& r, const std::string& path)
{
  write_file(path, serialize(r));
}

RunRecord load(const std::string& path)
{
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RecordError(path + ": " + e.what());
  }
  try {
    return run_record_from_json(j);
  } catch (const RecordError& e) {
    throw RecordError(path + ": " + e.what());
  }
}

nlohmann::json strip_timing(nlohmann::json j)
{
  strip_in_place(j);
  return j;
}

}  // namespace stride::search
