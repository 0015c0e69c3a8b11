#pragma once

#include <vector>

#include "crowdsim/human.hpp"
#include "crowdsim/scene.hpp"
#include "crowdsim/vec2.hpp"

namespace crowdsim {

// Waypoint chain toward a destination. Consecutive waypoints are grid-visible
// and the last waypoint is the destination.
struct Path {
  std::vector<Vec2> waypoints;
  std::size_t cursor = 0;
};

// A* over the 8-connected grid followed by string pulling. Throws
// ValidationError when the goal is unreachable (the loader rules this out
// for scene-defined endpoints).
Path plan_path(const OccupancyGrid& grid, Vec2 start, Vec2 goal);

// Reversed waypoints for the return leg after a destination swap.
Path reversed(const Path& path);

// Advances the cursor past waypoints within kWaypointRadius and returns the
// unit direction to the current one; zero only at the final waypoint within
// kGoalTolerance.
Vec2 desired_direction(const Human& h, Path& path);

double path_length(const Path& path);

}  // namespace crowdsim
