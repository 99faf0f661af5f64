#pragma once

#include <iosfwd>
#include <string>

#include "core/sim.hpp"

namespace rovernet {

/// Writes one row per recorded step with columns
/// step,x,y,heading,sense_left,sense_right,v_left,v_right.
void export_trajectory_csv(const Trajectory& t, std::ostream& out);
void export_trajectory_csv(const Trajectory& t, const std::string& path);

/// Draws the world (obstacles as circles, goal as a cross) and the
/// trajectory as a single polyline into an SVG with a 10% padded viewBox.
/// The y axis is flipped so +y in world coordinates points up on screen.
void export_trajectory_svg(const Trajectory& t, const World& world,
                           std::ostream& out);
void export_trajectory_svg(const Trajectory& t, const World& world,
                           const std::string& path);

}  // namespace rovernet
