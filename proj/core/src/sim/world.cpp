#include "stride/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace stride::sim {

namespace {

using Vec2 = Eigen::Vector2d;
using VecQ = Eigen::Matrix<double, kDof, 1>;
using MatQ = Eigen::Matrix<double, kDof, kDof>;
using Jac = Eigen::Matrix<double, 2, kDof>;

constexpr std::size_t kPitch = 2;

// Link geometry in the link frame (x forward, z up when the link angle is 0).
constexpr double kTorsoMass = 10.0, kTorsoLength = 0.5;
constexpr double kThighMass = 4.0, kThighLength = 0.4;
constexpr double kShankMass = 3.0, kShankLength = 0.4;
constexpr double kFootMass = 1.0, kFootLength = 0.2;

const Vec2 kTorsoCom{0.0, 0.25};
const Vec2 kHead{0.0, 0.5};
const Vec2 kThighCom{0.0, -0.2};
const Vec2 kKnee{0.0, -0.4};
const Vec2 kShankCom{0.0, -0.2};
const Vec2 kAnkle{0.0, -0.4};
const Vec2 kFootCom{0.05, -0.03};
const Vec2 kHeel{-0.05, -0.06};
const Vec2 kToe{0.15, -0.06};

double rod_inertia(double m, double len) { return m * len * len / 12.0; }

Vec2 rotate(double a, const Vec2& v)
{
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

std::size_t hip_index(int leg) { return 3 + 3 * static_cast<std::size_t>(leg); }

// Depth of a body in a leg chain: 0 torso, 1 thigh, 2 shank, 3 foot.
enum Level { torso = 0, thigh = 1, shank = 2, foot = 3 };

/// Positions, link angles and link angular rates for one state.
struct Frame
{
  Vec2 hip;
  double a_torso = 0.0, w_torso = 0.0;
  std::array<double, 2> a_thigh{}, a_shank{}, a_foot{};
  std::array<double, 2> w_thigh{}, w_shank{}, w_foot{};
  std::array<Vec2, 2> knee, ankle;

  Frame(const std::array<double, kDof>& q, const std::array<double, kDof>& qd)
  {
    hip = {q[0], q[1]};
    a_torso = -q[kPitch];
    w_torso = -qd[kPitch];
    for (int l = 0; l < 2; ++l) {
      const std::size_t h = hip_index(l);
      a_thigh[l] = a_torso + q[h];
      a_shank[l] = a_thigh[l] - q[h + 1];
      a_foot[l] = a_shank[l] + q[h + 2];
      w_thigh[l] = w_torso + qd[h];
      w_shank[l] = w_thigh[l] - qd[h + 1];
      w_foot[l] = w_shank[l] + qd[h + 2];
      knee[l] = hip + rotate(a_thigh[l], kKnee);
      ankle[l] = knee[l] + rotate(a_shank[l], kAnkle);
    }
  }

  Vec2 point(Level level, int leg, const Vec2& local) const
  {
    switch (level) {
      case torso: return hip + rotate(a_torso, local);
      case thigh: return hip + rotate(a_thigh[leg], local);
      case shank: return knee[leg] + rotate(a_shank[leg], local);
      case foot: return ankle[leg] + rotate(a_foot[leg], local);
    }
    return hip;
  }

  /// Jacobian of a world point rigidly attached to the given link.
  Jac jacobian(Level level, int leg, const Vec2& p) const
  {
    Jac j = Jac::Zero();
    j(0, 0) = 1.0;
    j(1, 1) = 1.0;
    j.col(kPitch) = -perp(p - hip);
    if (level >= thigh) {
      const std::size_t h = hip_index(leg);
      j.col(h) = perp(p - hip);
      if (level >= shank) j.col(h + 1) = -perp(p - knee[leg]);
      if (level >= foot) j.col(h + 2) = perp(p - ankle[leg]);
    }
    return j;
  }

  /// Angular-rate weights of a link over the generalized velocities.
  VecQ rate_weights(Level level, int leg) const
  {
    VecQ w = VecQ::Zero();
    w(kPitch) = -1.0;
    if (level >= thigh) {
      const std::size_t h = hip_index(leg);
      w(h) = 1.0;
      if (level >= shank) w(h + 1) = -1.0;
      if (level >= foot) w(h + 2) = 1.0;
    }
    return w;
  }

  /// Acceleration of the point when all generalized accelerations are zero.
  Vec2 centripetal(Level level, int leg, const Vec2& p) const
  {
    if (level == torso) return -w_torso * w_torso * (p - hip);
    if (level == thigh) return -w_thigh[leg] * w_thigh[leg] * (p - hip);
    Vec2 a = -w_thigh[leg] * w_thigh[leg] * (knee[leg] - hip);
    if (level == shank) return a - w_shank[leg] * w_shank[leg] * (p - knee[leg]);
    a -= w_shank[leg] * w_shank[leg] * (ankle[leg] - knee[leg]);
    return a - w_foot[leg] * w_foot[leg] * (p - ankle[leg]);
  }
};

struct Link
{
  Level level;
  double mass;
  double inertia;
  Vec2 com;
};

const std::array<Link, 4> kLinks = {{
    {torso, kTorsoMass, rod_inertia(kTorsoMass, kTorsoLength), kTorsoCom},
    {thigh, kThighMass, rod_inertia(kThighMass, kThighLength), kThighCom},
    {shank, kShankMass, rod_inertia(kShankMass, kShankLength), kShankCom},
    {foot, kFootMass, rod_inertia(kFootMass, kFootLength), kFootCom},
}};

double penetration(const Terrain& terrain, const Vec2& p) { return terrain.height_at(p.x()) - p.y(); }

std::array<bool, 2> foot_contacts(const Frame& f, const Terrain& terrain)
{
  std::array<bool, 2> c{};
  for (int l = 0; l < 2; ++l) {
    c[l] = penetration(terrain, f.point(foot, l, kHeel)) >= 0.0 ||
           penetration(terrain, f.point(foot, l, kToe)) >= 0.0;
  }
  return c;
}

void advance(WorldState& s, std::span<const double> torques, const Terrain& terrain, const PhysicsConfig& p)
{
  if (torques.size() != kJointCount) throw std::invalid_argument("step: expected one torque per joint");

  const Frame f(s.q, s.qd);
  const Eigen::Map<const VecQ> qd(s.qd.data());

  MatQ mass = MatQ::Zero();
  MatQ stiff = MatQ::Zero();
  MatQ damp = MatQ::Zero();
  VecQ force = VecQ::Zero();
  const Vec2 gravity{0.0, -p.gravity};

  for (const Link& link : kLinks) {
    const int legs = link.level == torso ? 1 : 2;
    for (int l = 0; l < legs; ++l) {
      const Vec2 c = f.point(link.level, l, link.com);
      const Jac j = f.jacobian(link.level, l, c);
      const VecQ w = f.rate_weights(link.level, l);
      mass.noalias() += link.mass * j.transpose() * j;
      mass.noalias() += link.inertia * w * w.transpose();
      force.noalias() += link.mass * j.transpose() * (gravity - f.centripetal(link.level, l, c));
    }
  }

  for (std::size_t k = 0; k < kJointCount; ++k) {
    const std::size_t i = 3 + k;
    const double u = std::clamp(torques[k], -p.torque_limit, p.torque_limit);
    const double spring = k % 3 == 2 ? p.ankle_stiffness : p.posture_stiffness;
    force(i) += u - p.joint_damping * s.qd[i] - spring * s.q[i];
    damp(i, i) += p.joint_damping;
    stiff(i, i) += spring;
  }

  for (int l = 0; l < 2; ++l) {
    for (const Vec2* local : {&kHeel, &kToe}) {
      const Vec2 pt = f.point(foot, l, *local);
      const double depth = penetration(terrain, pt);
      if (depth <= 0.0) continue;
      const Jac j = f.jacobian(foot, l, pt);
      const Vec2 v = j * qd;
      const double normal = p.contact_stiffness * depth - p.contact_damping * v.y();
      if (normal <= 0.0) continue;
      double tangent = -p.tangential_damping * v.x();
      const double bound = p.friction * normal;
      const bool sliding = std::fabs(tangent) > bound;
      if (sliding) tangent = std::copysign(bound, tangent);

      force.noalias() += j.transpose() * Vec2{tangent, normal};
      const auto jz = j.row(1);
      stiff.noalias() += p.contact_stiffness * jz.transpose() * jz;
      damp.noalias() += p.contact_damping * jz.transpose() * jz;
      if (!sliding) {
        const auto jx = j.row(0);
        damp.noalias() += p.tangential_damping * jx.transpose() * jx;
      }
    }
  }

  // Linearly implicit step: forces are expanded to first order around the
  // current state, positions advance with the trapezoid of old and new
  // velocity. Ballistic motion is integrated exactly.
  const double dt = p.dt;
  const MatQ a = mass + dt * damp + 0.5 * dt * dt * stiff;
  const VecQ rhs = dt * (force - dt * stiff * qd);
  const Eigen::LLT<MatQ> solver(a);
  VecQ v = qd + solver.solve(rhs);
  VecQ q = Eigen::Map<const VecQ>(s.q.data()) + 0.5 * dt * (qd + v);

  // Joint limits: an internal impulse through the effective inertia stops
  // each joint that would leave its range, so the base momentum stays
  // consistent; the angle is then projected back onto the limit.
  const MatQ a_inv = solver.solve(MatQ::Identity());
  for (int pass = 0; pass < 4; ++pass) {
    bool changed = false;
    for (std::size_t k = 0; k < kJointCount; ++k) {
      const auto i = static_cast<Eigen::Index>(3 + k);
      const bool below = q(i) < kJointLimits[k].lower && v(i) < 0.0;
      const bool above = q(i) > kJointLimits[k].upper && v(i) > 0.0;
      if (!below && !above) continue;
      const double impulse = -v(i) / a_inv(i, i);
      v.noalias() += a_inv.col(i) * impulse;
      changed = true;
    }
    if (!changed) break;
  }
  for (std::size_t k = 0; k < kJointCount; ++k) {
    const auto i = static_cast<Eigen::Index>(3 + k);
    q(i) = std::clamp(q(i), kJointLimits[k].lower, kJointLimits[k].upper);
  }
  for (std::size_t i = 0; i < kDof; ++i) {
    s.q[i] = q(static_cast<Eigen::Index>(i));
    s.qd[i] = v(static_cast<Eigen::Index>(i));
  }
  s.time += dt;

  if (!s.finite()) throw SimulationDiverged("simulation diverged at t = " + std::to_string(s.time) + " s");
  s.contact = foot_contacts(Frame(s.q, s.qd), terrain);
}

void write_observation(const WorldState& s, const Terrain& terrain, std::span<double> out)
{
  if (out.size() != kObservationCount) throw std::invalid_argument("observe: expected 21 output slots");
  out[0] = s.q[0];
  out[1] = s.q[1];
  out[2] = s.q[kPitch];
  out[3] = s.qd[0];
  out[4] = s.qd[1];
  out[5] = s.qd[kPitch];
  for (std::size_t k = 0; k < kJointCount; ++k) {
    out[6 + k] = s.q[3 + k];
    out[12 + k] = s.qd[3 + k];
  }
  out[18] = s.contact[0] ? 1.0 : 0.0;
  out[19] = s.contact[1] ? 1.0 : 0.0;
  out[20] = s.q[1] - terrain.height_at(s.q[0]);
}

std::map<std::string, double> observation_map(const WorldState& s, const Terrain& terrain)
{
  std::array<double, kObservationCount> values{};
  write_observation(s, terrain, values);
  std::map<std::string, double> out;
  const auto& names = observation_names();
  for (std::size_t i = 0; i < kObservationCount; ++i) out.emplace(names[i], values[i]);
  return out;
}

}  // namespace

bool WorldState::finite() const
{
  auto ok = [](double v) { return std::isfinite(v); };
  return std::all_of(q.begin(), q.end(), ok) && std::all_of(qd.begin(), qd.end(), ok) && std::isfinite(time);
}

const std::vector<std::string>& observation_names()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"pos_x", "pos_z", "torso_pitch", "vel_x", "vel_z", "pitch_rate"};
    for (const char* j : kJointNames) n.push_back(std::string(j) + "_angle");
    for (const char* j : kJointNames) n.push_back(std::string(j) + "_vel");
    n.insert(n.end(), {"contact_L", "contact_R", "height_above_terrain"});
    return n;
  }();
  return names;
}

Simulator::Simulator(const EnvConfig& config) : config_(config), terrain_(config.terrain.build())
{
  validate(config_.physics);
}

WorldState Simulator::reset(std::uint64_t seed) const
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  WorldState s;
  s.q[0] = physics().start_jitter * jitter(rng);
  for (std::size_t k = 0; k < kJointCount; ++k) {
    const double v = physics().init_noise * noise(rng);
    s.q[3 + k] = std::clamp(v, kJointLimits[k].lower, kJointLimits[k].upper);
  }

  // Lower the body until the lowest sole point rests on the terrain.
  s.q[1] = 0.0;
  const Frame f(s.q, s.qd);
  double gap = std::numeric_limits<double>::infinity();
  for (int l = 0; l < 2; ++l) {
    for (const Vec2* local : {&kHeel, &kToe}) gap = std::min(gap, -penetration(terrain_, f.point(foot, l, *local)));
  }
  s.q[1] = -gap;
  s.contact = foot_contacts(Frame(s.q, s.qd), terrain_);
  return s;
}

void Simulator::step(WorldState& state, std::span<const double> torques) const
{
  advance(state, torques, terrain_, physics());
}

double Simulator::height_above_terrain(const WorldState& state) const
{
  return state.z() - terrain_.height_at(state.x());
}

bool Simulator::fallen(const WorldState& state) const
{
  return height_above_terrain(state) < physics().fall_height_fraction * kStandingHeight ||
         std::fabs(state.pitch()) > physics().fall_pitch;
}

void Simulator::observe(const WorldState& state, std::span<double> out) const
{
  write_observation(state, terrain_, out);
}

std::map<std::string, double> Simulator::observe(const WorldState& state) const
{
  return observation_map(state, terrain_);
}

BodyPoints Simulator::points(const WorldState& state) const
{
  const Frame f(state.q, state.qd);
  auto arr = [](const Vec2& v) { return std::array<double, 2>{v.x(), v.y()}; };
  BodyPoints b{};
  b.hip = arr(f.hip);
  b.head = arr(f.point(torso, 0, kHead));
  for (int l = 0; l < 2; ++l) {
    b.knee[l] = arr(f.knee[l]);
    b.ankle[l] = arr(f.ankle[l]);
    b.heel[l] = arr(f.point(foot, l, kHeel));
    b.toe[l] = arr(f.point(foot, l, kToe));
  }
  return b;
}

std::array<double, 2> Simulator::center_of_mass(const WorldState& state) const
{
  const Frame f(state.q, state.qd);
  Vec2 sum = Vec2::Zero();
  double total = 0.0;
  for (const Link& link : kLinks) {
    for (int l = 0; l < (link.level == torso ? 1 : 2); ++l) {
      sum += link.mass * f.point(link.level, l, link.com);
      total += link.mass;
    }
  }
  return {sum.x() / total, sum.y() / total};
}

std::array<double, 2> Simulator::center_of_mass_velocity(const WorldState& state) const
{
  const Frame f(state.q, state.qd);
  const Eigen::Map<const VecQ> qd(state.qd.data());
  Vec2 sum = Vec2::Zero();
  double total = 0.0;
  for (const Link& link : kLinks) {
    for (int l = 0; l < (link.level == torso ? 1 : 2); ++l) {
      const Vec2 c = f.point(link.level, l, link.com);
      sum += link.mass * (f.jacobian(link.level, l, c) * qd);
      total += link.mass;
    }
  }
  return {sum.x() / total, sum.y() / total};
}

double Simulator::kinetic_energy(const WorldState& state) const
{
  const Frame f(state.q, state.qd);
  const Eigen::Map<const VecQ> qd(state.qd.data());
  double e = 0.0;
  for (const Link& link : kLinks) {
    for (int l = 0; l < (link.level == torso ? 1 : 2); ++l) {
      const Vec2 c = f.point(link.level, l, link.com);
      const Vec2 v = f.jacobian(link.level, l, c) * qd;
      const double w = f.rate_weights(link.level, l).dot(qd);
      e += 0.5 * link.mass * v.squaredNorm() + 0.5 * link.inertia * w * w;
    }
  }
  return e;
}

WorldState step(const WorldState& state, std::span<const double> torques, const Terrain& terrain,
                const PhysicsConfig& physics)
{
  WorldState next = state;
  advance(next, torques, terrain, physics);
  return next;
}

std::map<std::string, double> observe(const WorldState& state, const Terrain& terrain)
{
  return observation_map(state, terrain);
}

double fitness(double distance, const PhysicsConfig& physics)
{
  if (!(distance > 0.0)) return 0.0;
  return std::min(1.0, distance / physics.target_distance);
}

double fitness(const EpisodeResult& result, const PhysicsConfig& physics)
{
  return fitness(result.distance, physics);
}

}  // namespace stride::sim
