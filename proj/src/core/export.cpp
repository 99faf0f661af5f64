#include "core/export.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "core/errors.hpp"

namespace rovernet {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  return out;
}

struct Bounds {
  double min_x, max_x, min_y, max_y;

  void include(double x, double y) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
};

}  // namespace

void export_trajectory_csv(const Trajectory& t, std::ostream& out) {
  if (t.steps.empty()) {
    throw std::invalid_argument("trajectory is empty");
  }
  out << "step,x,y,heading,sense_left,sense_right,v_left,v_right\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const TrajectoryStep& s = t.steps[i];
    out << i << ',' << num(s.pose.x) << ',' << num(s.pose.y) << ','
        << num(s.pose.heading) << ',' << num(s.sensors.left) << ','
        << num(s.sensors.right) << ',' << num(s.motors.v_left) << ','
        << num(s.motors.v_right) << '\n';
  }
  if (!out) {
    throw IoError("failed while writing trajectory CSV");
  }
}

void export_trajectory_csv(const Trajectory& t, const std::string& path) {
  std::ofstream out = open_for_writing(path);
  export_trajectory_csv(t, out);
}

void export_trajectory_svg(const Trajectory& t, const World& world,
                           std::ostream& out) {
  if (t.steps.empty()) {
    throw std::invalid_argument("trajectory is empty");
  }

  const Pose& first = t.steps.front().pose;
  Bounds b{first.x, first.x, first.y, first.y};
  for (const TrajectoryStep& s : t.steps) {
    b.include(s.pose.x, s.pose.y);
  }
  b.include(world.goal_x, world.goal_y);
  for (const Obstacle& ob : world.obstacles) {
    b.include(ob.cx - ob.radius, ob.cy - ob.radius);
    b.include(ob.cx + ob.radius, ob.cy + ob.radius);
  }

  const double extent =
      std::max({b.max_x - b.min_x, b.max_y - b.min_y, 1e-9});
  const double pad = 0.10 * extent;
  // World +y points up; SVG +y points down, so y is negated throughout.
  const double view_x = b.min_x - pad;
  const double view_y = -b.max_y - pad;
  const double view_w = (b.max_x - b.min_x) + 2.0 * pad;
  const double view_h = (b.max_y - b.min_y) + 2.0 * pad;
  const double stroke = 0.005 * extent;
  const double cross = 0.03 * extent;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(view_x)
      << ' ' << num(view_y) << ' ' << num(view_w) << ' ' << num(view_h)
      << "\">\n";
  for (const Obstacle& ob : world.obstacles) {
    out << "  <circle cx=\"" << num(ob.cx) << "\" cy=\"" << num(-ob.cy)
        << "\" r=\"" << num(ob.radius)
        << "\" fill=\"#c8c8c8\" stroke=\"#555555\" stroke-width=\""
        << num(stroke) << "\"/>\n";
  }
  const double gx = world.goal_x;
  const double gy = -world.goal_y;
  out << "  <line x1=\"" << num(gx - cross) << "\" y1=\"" << num(gy)
      << "\" x2=\"" << num(gx + cross) << "\" y2=\"" << num(gy)
      << "\" stroke=\"#cc0000\" stroke-width=\"" << num(stroke) << "\"/>\n"
      << "  <line x1=\"" << num(gx) << "\" y1=\"" << num(gy - cross)
      << "\" x2=\"" << num(gx) << "\" y2=\"" << num(gy + cross)
      << "\" stroke=\"#cc0000\" stroke-width=\"" << num(stroke) << "\"/>\n";
  out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\""
      << num(stroke) << "\" points=\"";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Pose& p = t.steps[i].pose;
    out << (i == 0 ? "" : " ") << num(p.x) << ',' << num(-p.y);
  }
  out << "\"/>\n</svg>\n";
  if (!out) {
    throw IoError("failed while writing trajectory SVG");
  }
}

void export_trajectory_svg(const Trajectory& t, const World& world,
                           const std::string& path) {
  std::ofstream out = open_for_writing(path);
  export_trajectory_svg(t, world, out);
}

}  // namespace rovernet
