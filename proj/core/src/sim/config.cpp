#include "stride/sim/config.hpp"

#include "stride/common/json_reader.hpp"

namespace stride::sim {

void validate(const PhysicsConfig& p)
{
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("env.sim.") + name + ": must be > 0");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0)) throw ConfigError(std::string("env.sim.") + name + ": must be >= 0");
  };
  positive(p.dt, "dt");
  non_negative(p.gravity, "gravity");
  positive(p.torque_limit, "torque_limit");
  positive(p.contact_stiffness, "contact_stiffness");
  non_negative(p.contact_damping, "contact_damping");
  non_negative(p.friction, "friction");
  non_negative(p.tangential_damping, "tangential_damping");
  non_negative(p.joint_damping, "joint_damping");
  non_negative(p.posture_stiffness, "posture_stiffness");
  non_negative(p.ankle_stiffness, "ankle_stiffness");
  positive(p.fall_height_fraction, "fall_height_fraction");
  positive(p.fall_pitch, "fall_pitch");
  if (p.horizon_steps < 1) throw ConfigError("env.sim.horizon_steps: must be >= 1");
  positive(p.target_distance, "target_distance");
  non_negative(p.start_jitter, "start_jitter");
  non_negative(p.init_noise, "init_noise");
}

nlohmann::json to_json(const TerrainConfig& c)
{
  return {
      {"kind", std::string(to_string(c.kind))},
      {"amplitude", c.params.amplitude},
      {"wavelength", c.params.wavelength},
      {"cell_width", c.params.cell_width},
      {"height_range", c.params.height_range},
      {"x_min", c.params.x_min},
      {"x_max", c.params.x_max},
      {"seed", c.seed},
  };
}

nlohmann::json to_json(const PhysicsConfig& c)
{
  return {
      {"dt", c.dt},
      {"gravity", c.gravity},
      {"torque_limit", c.torque_limit},
      {"contact_stiffness", c.contact_stiffness},
      {"contact_damping", c.contact_damping},
      {"friction", c.friction},
      {"tangential_damping", c.tangential_damping},
      {"joint_damping", c.joint_damping},
      {"posture_stiffness", c.posture_stiffness},
      {"ankle_stiffness", c.ankle_stiffness},
      {"fall_height_fraction", c.fall_height_fraction},
      {"fall_pitch", c.fall_pitch},
      {"horizon_steps", c.horizon_steps},
      {"target_distance", c.target_distance},
      {"start_jitter", c.start_jitter},
      {"init_noise", c.init_noise},
  };
}

TerrainConfig terrain_config_from_json(const nlohmann::json& j, const std::string& path)
{
  TerrainConfig c;
  ObjectReader r(j, path);
  std::string kind = std::string(to_string(c.kind));
  r.get("kind", kind);
  try {
    c.kind = terrain_kind_from_string(kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(r.path_of("kind") + ": " + e.what());
  }
  r.get("amplitude", c.params.amplitude);
  r.get("wavelength", c.params.wavelength);
  r.get("cell_width", c.params.cell_width);
  r.get("height_range", c.params.height_range);
  r.get("x_min", c.params.x_min);
  r.get("x_max", c.params.x_max);
  r.get("seed", c.seed);
  r.finish();
  try {
    (void)c.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return c;
}

PhysicsConfig physics_config_from_json(const nlohmann::json& j, const std::string& path)
{
  PhysicsConfig c;
  ObjectReader r(j, path);
  r.get("dt", c.dt);
  r.get("gravity", c.gravity);
  r.get("torque_limit", c.torque_limit);
  r.get("contact_stiffness", c.contact_stiffness);
  r.get("contact_damping", c.contact_damping);
  r.get("friction", c.friction);
  r.get("tangential_damping", c.tangential_damping);
  r.get("joint_damping", c.joint_damping);
  r.get("posture_stiffness", c.posture_stiffness);
  r.get("ankle_stiffness", c.ankle_stiffness);
  r.get("fall_height_fraction", c.fall_height_fraction);
  r.get("fall_pitch", c.fall_pitch);
  r.get("horizon_steps", c.horizon_steps);
  r.get("target_distance", c.target_distance);
  r.get("start_jitter", c.start_jitter);
  r.get("init_noise", c.init_noise);
  r.finish();
  validate(c);
  return c;
}

}  // namespace stride::sim
