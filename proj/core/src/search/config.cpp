#include "stride/search/config.hpp"

#include <filesystem>

#include "stride/common/io.hpp"
#include "stride/common/json_reader.hpp"

namespace stride::search {

nlohmann::json to_json(const RunConfig& c)
{
  nlohmann::json trainer = trainer::to_json(c.trainer);
  trainer.erase("seed");
  return {
      {"task", c.env.task},
      {"style_guidance", c.style_guidance},
      {"output_dir", c.output_dir},
      {"terrain", sim::to_json(c.env.terrain)},
      {"sim", sim::to_json(c.env.physics)},
      {"trainer", trainer},
      {"backend", llm::to_json(c.backend)},
      {"loop", {{"N", c.loop.iterations}, {"K", c.loop.samples}, {"seed", c.loop.seed}, {"workers", c.loop.workers}}},
      {"batch", {{"runs", c.batch.runs}, {"jobs", c.batch.jobs}}},
      {"human_init",
       {{"source_file", c.human_init.source_file},
        {"source", c.human_init.source},
        {"guidance", c.human_init.guidance}}},
  };
}

RunConfig run_config_from_json(const nlohmann::json& j, const std::string& base_dir)
{
  RunConfig c;
  ObjectReader r(j, "");
  r.get("task", c.env.task);
  r.get("style_guidance", c.style_guidance);
  r.get("output_dir", c.output_dir);
  if (c.env.task.empty()) throw ConfigError("task: must not be empty");

  if (const auto* t = r.child("terrain")) c.env.terrain = sim::terrain_config_from_json(*t, "terrain");
  if (const auto* s = r.child("sim")) c.env.physics = sim::physics_config_from_json(*s, "sim");
  if (const auto* t = r.child("trainer")) {
    if (t->is_object() && t->contains("seed")) {
      throw ConfigError("trainer.seed: training seeds are derived from loop.seed and the candidate program");
    }
    c.trainer = trainer::train_config_from_json(*t, "trainer");
  }
  if (const auto* b = r.child("backend")) c.backend = llm::backend_config_from_json(*b, "backend");

  if (const auto* l = r.child("loop")) {
    ObjectReader lr(*l, "loop");
    lr.get("N", c.loop.iterations);
    lr.get("K", c.loop.samples);
    lr.get("seed", c.loop.seed);
    lr.get("workers", c.loop.workers);
    lr.finish();
    if (c.loop.iterations < 1) throw ConfigError("loop.N: must be >= 1");
    if (c.loop.samples < 1) throw ConfigError("loop.K: must be >= 1");
  }

  if (const auto* b = r.child("batch")) {
    ObjectReader br(*b, "batch");
    br.get("runs", c.batch.runs);
    br.get("jobs", c.batch.jobs);
    br.finish();
    if (c.batch.runs < 1) throw ConfigError("batch.runs: must be >= 1");
    if (c.batch.jobs < 1) throw ConfigError("batch.jobs: must be >= 1");
  }

  if (const auto* h = r.child("human_init")) {
    ObjectReader hr(*h, "human_init");
    hr.get("source_file", c.human_init.source_file);
    hr.get("source", c.human_init.source);
    hr.get("guidance", c.human_init.guidance);
    hr.finish();
    if (c.human_init.source.empty() && !c.human_init.source_file.empty()) {
      std::filesystem::path p(c.human_init.source_file);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      try {
        c.human_init.source = read_file(p.string());
      } catch (const IoError& e) {
        throw ConfigError(std::string("human_init.source_file: ") + e.what());
      }
      if (c.human_init.source.empty()) throw ConfigError("human_init.source_file: file is empty");
    }
  }
  r.finish();
  return c;
}

void apply_override(nlohmann::json& doc, const std::string& assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    value = text;
  }

  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override '" + assignment + "': empty key segment");
    if (!node->is_object()) throw ConfigError(key.substr(0, start == 0 ? 0 : start - 1) + ": not an object");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = nlohmann::json::object();
    start = dot + 1;
  }
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  const auto parent = std::filesystem::path(path).parent_path();
  return run_config_from_json(doc, parent.empty() ? "." : parent.string());
}

}  // namespace stride::search
