#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "stride/sim/terrain.hpp"

namespace stride::sim {

struct TerrainConfig
{
  TerrainKind kind = TerrainKind::flat;
  TerrainParams params;
  std::uint64_t seed = 0;

  Terrain build() const { return Terrain::make(kind, params, seed); }
};

struct PhysicsConfig
{
  double dt = 1.0 / 240.0;
  double gravity = 9.81;
  double torque_limit = 40.0;          // |torque| bound per joint (N m)
  double contact_stiffness = 3.0e4;    // normal spring per contact point (N/m)
  double contact_damping = 1.0e3;      // normal damper per contact point (N s/m)
  double friction = 0.9;               // Coulomb coefficient
  double tangential_damping = 3.0e3;   // viscous tangential grip before the Coulomb clamp (N s/m)
  double joint_damping = 0.5;          // passive joint damping (N m s/rad)
  double posture_stiffness = 100.0;    // passive hip/knee spring toward the standing pose (N m/rad)
  double ankle_stiffness = 250.0;      // passive ankle spring toward the standing pose (N m/rad)
  double fall_height_fraction = 0.6;   // fallen below this fraction of standing hip height
  double fall_pitch = 1.2;             // or when |pitch| exceeds this (rad)
  int horizon_steps = 2400;            // episode length for fitness evaluation
  double target_distance = 10.0;       // distance that earns fitness 1 (m)
  double start_jitter = 0.0;           // episode start x drawn from [0, start_jitter] (m)
  double init_noise = 0.0;             // std of initial joint-angle noise (rad)
};

struct EnvConfig
{
  TerrainConfig terrain;
  PhysicsConfig physics;
  std::string task = "sprint forward as fast as possible";
};

void validate(const PhysicsConfig& physics);

nlohmann::json to_json(const TerrainConfig& c);
nlohmann::json to_json(const PhysicsConfig& c);

/// Strict readers: unknown keys raise ConfigError naming the key path.
TerrainConfig terrain_config_from_json(const nlohmann::json& j, const std::string& path);
PhysicsConfig physics_config_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace stride::sim
