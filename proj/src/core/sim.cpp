#include "core/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "core/errors.hpp"

namespace rovernet {
namespace {

constexpr double kPi = std::numbers::pi;

// Smallest non-negative ray parameter t with |origin + t*dir - center| = R,
// or a negative value when the ray misses the circle. dir must be unit.
double ray_circle_hit(double px, double py, double dx, double dy, double cx,
                      double cy, double R) {
  const double tox = cx - px;
  const double toy = cy - py;
  const double proj = tox * dx + toy * dy;
  const double disc = R * R - (tox * tox + toy * toy - proj * proj);
  if (disc < 0.0) return -1.0;
  const double sq = std::sqrt(disc);
  const double t1 = proj - sq;
  if (t1 >= 0.0) return t1;
  const double t2 = proj + sq;
  if (t2 >= 0.0) return t2;
  return -1.0;
}

double ray_reading(const Pose& pose, double angle, const World& world,
                   const SimConfig& cfg) {
  const double dx = std::cos(pose.heading + angle);
  const double dy = std::sin(pose.heading + angle);
  double nearest = std::numeric_limits<double>::infinity();
  for (const Obstacle& ob : world.obstacles) {
    const double t = ray_circle_hit(pose.x, pose.y, dx, dy, ob.cx, ob.cy,
                                    ob.radius + cfg.rover_radius);
    if (t >= 0.0 && t < nearest) nearest = t;
  }
  if (std::isinf(nearest)) return 0.0;
  return std::clamp(1.0 - nearest / cfg.sense_range, 0.0, 1.0);
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

}  // namespace

void World::validate(double rover_radius) const {
  for (const Obstacle& ob : obstacles) {
    if (!(ob.radius > 0.0)) {
      throw std::invalid_argument("obstacle radius must be positive");
    }
    const double inflated = ob.radius + rover_radius;
    if (std::hypot(start.x - ob.cx, start.y - ob.cy) < inflated) {
      throw std::invalid_argument("start pose lies inside an obstacle");
    }
    if (std::hypot(goal_x - ob.cx, goal_y - ob.cy) < inflated) {
      throw std::invalid_argument("goal lies inside an obstacle");
    }
  }
}

void SimConfig::validate() const {
  require_positive(dt, "dt");
  require_positive(wheelbase, "wheelbase");
  require_positive(v_max, "v_max");
  require_positive(sense_range, "sense_range");
  require_positive(rover_radius, "rover_radius");
  require_positive(goal_tolerance, "goal_tolerance");
  if (!(k_goal >= 0.0)) {
    throw std::invalid_argument("k_goal must be non-negative");
  }
  if (max_steps == 0) {
    throw std::invalid_argument("max_steps must be positive");
  }
  if (dt * v_max > rover_radius) {
    throw std::invalid_argument(
        "dt*v_max exceeds rover_radius; one step could tunnel through an "
        "obstacle boundary");
  }
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::ReachedGoal: return "ReachedGoal";
    case Outcome::Collision: return "Collision";
    case Outcome::Timeout: return "Timeout";
  }
  return "Timeout";
}

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

double bearing(double from_x, double from_y, double to_x, double to_y) {
  return std::atan2(to_y - from_y, to_x - from_x);
}

SensorReading sense(const Pose& pose, const World& world,
                    const SimConfig& cfg) {
  SensorReading reading;
  reading.left = ray_reading(pose, cfg.sensor_angle_left, world, cfg);
  reading.right = ray_reading(pose, cfg.sensor_angle_right, world, cfg);
  return reading;
}

MotorCommand motor_from_network(const Network& net, const SensorReading& s,
                                const SimConfig& cfg) {
  if (net.topology.inputs() != 2 || net.topology.outputs() != 2) {
    throw ShapeError("motor network must map 2 sensor inputs to 2 outputs");
  }
  const double input[2] = {s.left, s.right};
  const std::vector<double> out = forward(net, input).outputs();
  MotorCommand cmd;
  cmd.v_left = std::clamp(out[0] * cfg.v_max, 0.0, cfg.v_max);
  cmd.v_right = std::clamp(out[1] * cfg.v_max, 0.0, cfg.v_max);
  return cmd;
}

Pose step_kinematics(const Pose& pose, const MotorCommand& cmd, double goal_x,
                     double goal_y, const SimConfig& cfg) {
  const double v = (cmd.v_left + cmd.v_right) / 2.0;
  const double to_goal = bearing(pose.x, pose.y, goal_x, goal_y);
  const double omega = cfg.k_goal * wrap_angle(to_goal - pose.heading) +
                       (cmd.v_right - cmd.v_left) / cfg.wheelbase;
  Pose next;
  next.heading = wrap_angle(pose.heading + omega * cfg.dt);
  next.x = pose.x + v * cfg.dt * std::cos(next.heading);
  next.y = pose.y + v * cfg.dt * std::sin(next.heading);
  return next;
}

bool check_collision(const Pose& pose, const World& world,
                     const SimConfig& cfg) {
  for (const Obstacle& ob : world.obstacles) {
    if (std::hypot(pose.x - ob.cx, pose.y - ob.cy) <
        ob.radius + cfg.rover_radius) {
      return true;
    }
  }
  return false;
}

Trajectory simulate(const Network& net, const World& world,
                    const SimConfig& cfg) {
  cfg.validate();
  world.validate(cfg.rover_radius);

  Trajectory traj;
  Pose pose = world.start;
  pose.heading = wrap_angle(pose.heading);
  while (true) {
    const SensorReading s = sense(pose, world, cfg);
    const MotorCommand cmd = motor_from_network(net, s, cfg);
    traj.steps.push_back({pose, s, cmd});
    if (check_collision(pose, world, cfg)) {
      traj.outcome = Outcome::Collision;
      break;
    }
    if (std::hypot(world.goal_x - pose.x, world.goal_y - pose.y) <=
        cfg.goal_tolerance) {
      traj.outcome = Outcome::ReachedGoal;
      break;
    }
    if (traj.steps.size() == cfg.max_steps + 1) {
      traj.outcome = Outcome::Timeout;
      break;
    }
    pose = step_kinematics(pose, cmd, world.goal_x, world.goal_y, cfg);
  }
  return traj;
}

}  // namespace rovernet
