#pragma once

#include <string>
#include <vector>

#include "core/network.hpp"

namespace rovernet {

/// Planar pose. heading is radians, wrapped to (-pi, pi] after every update.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

struct Obstacle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
};

struct World {
  std::vector<Obstacle> obstacles;
  Pose start;
  double goal_x = 0.0;
  double goal_y = 0.0;

  /// Throws std::invalid_argument if any obstacle has a non-positive radius
  /// or the start/goal sits inside an obstacle inflated by rover_radius.
  void validate(double rover_radius) const;
};

/// Proximity readings in [0, 1]: 1 means an obstacle is touching the rover,
/// 0 means nothing within sensing range.
struct SensorReading {
  double left = 0.0;
  double right = 0.0;
};

/// Wheel speeds in [0, v_max].
struct MotorCommand {
  double v_left = 0.0;
  double v_right = 0.0;
};

struct SimConfig {
  double dt = 0.1;              // seconds per step
  double wheelbase = 0.5;       // wheel separation, world units
  double v_max = 1.0;           // wheel speed cap, units/second
  double k_goal = 1.0;          // turn gain toward the goal bearing
  double sense_range = 3.0;     // sensor reach, world units
  double sensor_angle_left = 0.785398163397448279;   // +pi/4 off heading
  double sensor_angle_right = -0.785398163397448279;  // -pi/4 off heading
  double rover_radius = 0.1;
  double goal_tolerance = 0.25;
  std::size_t max_steps = 2000;

  /// Throws std::invalid_argument on non-positive scalars (k_goal may be
  /// zero) or when dt*v_max exceeds rover_radius, which could tunnel the
  /// rover through an obstacle boundary in one step.
  void validate() const;
};

enum class Outcome { ReachedGoal, Collision, Timeout };

std::string to_string(Outcome outcome);

struct TrajectoryStep {
  Pose pose;
  SensorReading sensors;
  MotorCommand motors;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  Outcome outcome = Outcome::Timeout;
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Bearing of (to_x, to_y) as seen from (from_x, from_y), in (-pi, pi].
double bearing(double from_x, double from_y, double to_x, double to_y);

/// Casts one ray per sensor (left at heading + sensor_angle_left, right at
/// heading + sensor_angle_right) and converts the nearest intersection
/// distance d with any obstacle (inflated by rover_radius) into
/// clamp(1 - d/sense_range, 0, 1); no hit within range reads 0.
SensorReading sense(const Pose& pose, const World& world,
                    const SimConfig& cfg);

/// Feeds (left, right) through the network and clamps each output times
/// v_max into [0, v_max]. The network must map 2 inputs to 2 outputs.
MotorCommand motor_from_network(const Network& net, const SensorReading& s,
                                const SimConfig& cfg);

/// Differential-drive step with a goal-bearing turn term:
///   v = (v_left + v_right) / 2
///   omega = k_goal * wrap(bearing - heading) + (v_right - v_left) / wheelbase
///   heading' = wrap(heading + omega * dt)
///   x' = x + v * dt * cos(heading'),  y' = y + v * dt * sin(heading')
Pose step_kinematics(const Pose& pose, const MotorCommand& cmd, double goal_x,
                     double goal_y, const SimConfig& cfg);

/// True iff the rover center is strictly inside any obstacle inflated by
/// rover_radius; tangency does not collide.
bool check_collision(const Pose& pose, const World& world,
                     const SimConfig& cfg);

/// Runs sense -> motor -> record each step, terminating with Collision,
/// then ReachedGoal (within goal_tolerance), then Timeout once max_steps
/// steps have been taken. The start pose is recorded, so a trajectory holds
/// at most max_steps + 1 entries. Deterministic.
Trajectory simulate(const Network& net, const World& world,
                    const SimConfig& cfg);

}  // namespace rovernet
