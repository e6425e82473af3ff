#include "stride/sim/descriptor.hpp"

#include <stdexcept>

#include "stride/sim/world.hpp"

namespace stride::sim {

namespace {

std::vector<ObservationVariable> observation_catalogue()
{
  std::vector<ObservationVariable> v = {
      {"pos_x", "m", "hip x position in the world frame; forward is +x"},
      {"pos_z", "m", "hip height in the world frame"},
      {"torso_pitch", "rad", "torso lean from vertical; positive leans forward"},
      {"vel_x", "m/s", "forward velocity of the hip"},
      {"vel_z", "m/s", "vertical velocity of the hip"},
      {"pitch_rate", "rad/s", "torso pitch angular velocity"},
  };
  const char* what[] = {"hip flexion (positive swings the thigh forward)",
                        "knee flexion (0 is straight, positive bends)",
                        "ankle dorsiflexion (positive lifts the toes)"};
  for (std::size_t k = 0; k < kJointCount; ++k) {
    const std::string side = k < 3 ? "left " : "right ";
    v.push_back({std::string(kJointNames[k]) + "_angle", "rad", side + what[k % 3]});
  }
  for (std::size_t k = 0; k < kJointCount; ++k) {
    const std::string side = k < 3 ? "left " : "right ";
    v.push_back({std::string(kJointNames[k]) + "_vel", "rad/s", side + what[k % 3] + " rate"});
  }
  v.push_back({"contact_L", "flag", "1 when the left foot touches the ground, else 0"});
  v.push_back({"contact_R", "flag", "1 when the right foot touches the ground, else 0"});
  v.push_back({"height_above_terrain", "m",
               "hip height above the terrain directly below it; standing height is about 0.86"});
  return v;
}

}  // namespace

std::vector<std::string> EnvDescriptor::variable_names() const
{
  std::vector<std::string> out;
  out.reserve(observations.size());
  for (const auto& o : observations) out.push_back(o.name);
  return out;
}

nlohmann::json EnvDescriptor::to_json() const
{
  nlohmann::json obs = nlohmann::json::array();
  for (const auto& o : observations) obs.push_back({{"name", o.name}, {"unit", o.unit}, {"description", o.description}});
  nlohmann::json act = nlohmann::json::array();
  for (const auto& a : actions) {
    act.push_back({{"name", a.name}, {"unit", a.unit}, {"lower", a.lower}, {"upper", a.upper}});
  }
  return {
      {"observations", obs},
      {"actions", act},
      {"task", task},
      {"terrain", terrain},
      {"horizon_steps", horizon_steps},
      {"dt", dt},
      {"target_distance", target_distance},
  };
}

std::string EnvDescriptor::canonical_json() const
{
  return to_json().dump(2);
}

EnvDescriptor EnvDescriptor::from_json(const nlohmann::json& j)
{
  EnvDescriptor d;
  try {
    for (const auto& o : j.at("observations")) {
      d.observations.push_back(
          {o.at("name").get<std::string>(), o.at("unit").get<std::string>(), o.at("description").get<std::string>()});
    }
    for (const auto& a : j.at("actions")) {
      d.actions.push_back({a.at("name").get<std::string>(), a.at("unit").get<std::string>(), a.at("lower").get<double>(),
                           a.at("upper").get<double>()});
    }
    d.task = j.at("task").get<std::string>();
    d.terrain = j.at("terrain");
    d.horizon_steps = j.at("horizon_steps").get<int>();
    d.dt = j.at("dt").get<double>();
    d.target_distance = j.at("target_distance").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed environment descriptor: ") + e.what());
  }
  return d;
}

EnvDescriptor describe(const EnvConfig& config)
{
  EnvDescriptor d;
  d.observations = observation_catalogue();
  for (const char* j : kJointNames) {
    d.actions.push_back({std::string(j) + "_torque", "N*m", -config.physics.torque_limit, config.physics.torque_limit});
  }
  d.task = config.task;
  d.terrain = config.terrain.build().summary();
  d.horizon_steps = config.physics.horizon_steps;
  d.dt = config.physics.dt;
  d.target_distance = config.physics.target_distance;
  return d;
}

}  // namespace stride::sim
