#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stride/sim/config.hpp"
#include "stride/sim/terrain.hpp"

namespace stride::sim {

inline constexpr std::size_t kJointCount = 6;
inline constexpr std::size_t kDof = 3 + kJointCount;  // x, z, pitch, then the joints
inline constexpr std::size_t kObservationCount = 21;
inline constexpr double kStandingHeight = 0.86;       // hip height above the ground in the rest pose

inline constexpr std::array<const char*, kJointCount> kJointNames = {
    "hip_L", "knee_L", "ankle_L", "hip_R", "knee_R", "ankle_R",
};

struct JointLimit
{
  double lower;
  double upper;
};

/// Hip flexion is positive forward, knee flexion positive backward,
/// ankle dorsiflexion (toes up) positive.
inline constexpr std::array<JointLimit, kJointCount> kJointLimits = {{
    {-0.6, 1.6}, {0.0, 2.2}, {-0.7, 0.7},
    {-0.6, 1.6}, {0.0, 2.2}, {-0.7, 0.7},
}};

/// Generalized coordinates of the planar biped. (x, z) is the hip joint,
/// pitch the torso lean (positive forward).
struct WorldState
{
  std::array<double, kDof> q{};
  std::array<double, kDof> qd{};
  double time = 0.0;
  std::array<bool, 2> contact{};  // left, right foot touching the ground

  double x() const { return q[0]; }
  double z() const { return q[1]; }
  double pitch() const { return q[2]; }
  double joint(std::size_t j) const { return q[3 + j]; }
  double joint_velocity(std::size_t j) const { return qd[3 + j]; }

  bool finite() const;
};

class SimulationDiverged : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// World-frame points of interest, exposed for tests and trajectory dumps.
struct BodyPoints
{
  std::array<double, 2> hip;
  std::array<double, 2> head;
  std::array<std::array<double, 2>, 2> knee;
  std::array<std::array<double, 2>, 2> ankle;
  std::array<std::array<double, 2>, 2> heel;
  std::array<std::array<double, 2>, 2> toe;
};

/// Observation variable names in binding order.
const std::vector<std::string>& observation_names();

/// Planar torso + two 3-link legs on a height field. Immutable after
/// construction, so one instance may step many states from many threads.
class Simulator
{
public:
  explicit Simulator(const EnvConfig& config);

  const EnvConfig& config() const { return config_; }
  const PhysicsConfig& physics() const { return config_.physics; }
  const Terrain& terrain() const { return terrain_; }

  /// Standing rest pose with the feet on the terrain. The seed drives the
  /// optional start-position jitter and joint-angle noise.
  WorldState reset(std::uint64_t seed) const;

  /// Advances one dt. Torques are clamped to the torque limit.
  /// Throws SimulationDiverged when the successor is not finite.
  void step(WorldState& state, std::span<const double> torques) const;

  bool fallen(const WorldState& state) const;
  double height_above_terrain(const WorldState& state) const;

  /// Writes kObservationCount values in observation_names() order.
  void observe(const WorldState& state, std::span<double> out) const;
  std::map<std::string, double> observe(const WorldState& state) const;

  BodyPoints points(const WorldState& state) const;

  std::array<double, 2> center_of_mass(const WorldState& state) const;
  std::array<double, 2> center_of_mass_velocity(const WorldState& state) const;
  double kinetic_energy(const WorldState& state) const;

private:
  EnvConfig config_;
  Terrain terrain_;
};

/// Free-function form of Simulator::step for one-off use.
WorldState step(const WorldState& state, std::span<const double> torques, const Terrain& terrain,
                const PhysicsConfig& physics);

std::map<std::string, double> observe(const WorldState& state, const Terrain& terrain);

struct EpisodeResult
{
  double distance = 0.0;
  int steps = 0;
  bool fell = false;
  bool diverged = false;
  std::map<std::string, double> component_sums;
  double fitness = 0.0;
};

/// Sprint success score: min(1, max(0, distance) / target_distance).
double fitness(double distance, const PhysicsConfig& physics);
double fitness(const EpisodeResult& result, const PhysicsConfig& physics);

}  // namespace stride::sim
