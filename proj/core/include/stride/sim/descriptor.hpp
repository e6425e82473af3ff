#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stride/sim/config.hpp"

namespace stride::sim {

struct ObservationVariable
{
  std::string name;
  std::string unit;
  std::string description;
};

struct ActionVariable
{
  std::string name;
  std::string unit;
  double lower = 0.0;
  double upper = 0.0;
};

/// Machine-readable catalogue of what a reward program may read, handed to
/// the generator in place of simulator source.
struct EnvDescriptor
{
  std::vector<ObservationVariable> observations;
  std::vector<ActionVariable> actions;
  std::string task;
  nlohmann::json terrain;
  int horizon_steps = 0;
  double dt = 0.0;
  double target_distance = 0.0;

  std::vector<std::string> variable_names() const;

  /// Canonical form: object keys sorted, list order preserved.
  nlohmann::json to_json() const;
  std::string canonical_json() const;

  static EnvDescriptor from_json(const nlohmann::json& j);
};

EnvDescriptor describe(const EnvConfig& config);

}  // namespace stride::sim
