#include "crowdsim/planner.hpp"

#include <algorithm>

#include "crowdsim/errors.hpp"

namespace crowdsim {

Path plan_path(const OccupancyGrid& grid, Vec2 start, Vec2 goal) {
  Path path;
  if (distance(start, goal) < 1e-12) {
    path.waypoints = {goal};
    return path;
  }
  const auto cs = grid.cell_of(start);
  const auto cg = grid.cell_of(goal);
  if (!cs || !cg) throw ValidationError("plan_path: endpoint outside the grid");
  const auto grid_path = grid_shortest_path(grid, *cs, *cg);
  if (!grid_path) throw ValidationError("plan_path: goal unreachable from start");

  std::vector<Vec2> points;
  points.push_back(start);
  for (std::size_t i = 1; i + 1 < grid_path->cells.size(); ++i) {
    points.push_back(grid.cell_center(grid_path->cells[i].first, grid_path->cells[i].second));
  }
  points.push_back(goal);

  // String pulling: greedily keep the farthest grid-visible waypoint.
  std::vector<Vec2> pulled;
  pulled.push_back(points.front());
  std::size_t anchor = 0;
  while (anchor + 1 < points.size()) {
    std::size_t far = anchor + 1;
    for (std::size_t k = points.size() - 1; k > anchor + 1; --k) {
      if (grid.segment_free(points[anchor], points[k])) {
        far = k;
        break;
      }
    }
    pulled.push_back(points[far]);
    anchor = far;
  }
  path.waypoints = std::move(pulled);
  return path;
}

Path reversed(const Path& path) {
  Path r;
  r.waypoints.assign(path.waypoints.rbegin(), path.waypoints.rend());
  r.cursor = 0;
  return r;
}

Vec2 desired_direction(const Human& h, Path& path) {
  if (path.waypoints.empty()) return {};
  const std::size_t last = path.waypoints.size() - 1;
  while (path.cursor < last && distance(h.x, path.waypoints[path.cursor]) < kWaypointRadius) {
    ++path.cursor;
  }
  const Vec2 target = path.waypoints[path.cursor];
  const double d = distance(h.x, target);
  if (path.cursor == last && d <= kGoalTolerance) return {};
  if (d < 1e-12) return {};
  return (target - h.x) * (1.0 / d);
}

double path_length(const Path& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    len += distance(path.waypoints[i - 1], path.waypoints[i]);
  }
  return len;
}

}  // namespace crowdsim
