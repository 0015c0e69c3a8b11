#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crowdsim/geometry.hpp"
#include "crowdsim/params.hpp"
#include "crowdsim/vec2.hpp"

namespace crowdsim {

struct HumanSpec {
  int id = 0;
  Vec2 position;
  Vec2 destination;
  double radius = kDefaultHumanRadius;
  double mass = kDefaultHumanMass;
  double desired_speed = kDefaultDesiredSpeed;
  double desired_angular_speed = kDefaultDesiredAngularSpeed;
  double heading = 0.0;

  bool operator==(const HumanSpec&) const = default;
};

struct EpisodeSpec {
  Vec2 agent_start;
  double agent_heading = 0.0;
  Vec2 goal;

  bool operator==(const EpisodeSpec&) const = default;
};

struct Scene {
  std::string name;
  Polygon floor;                    // CCW after load
  std::vector<Polygon> obstacles;   // CCW after load
  double grid_resolution = 0.25;    // m
  std::vector<HumanSpec> humans;
  std::vector<EpisodeSpec> episodes;

  bool operator==(const Scene&) const = default;
};

// Rasterized free/blocked map derived deterministically from a Scene.
// A cell is blocked when its center is outside the floor or within the
// inflation radius of an obstacle edge or the floor boundary.
struct OccupancyGrid {
  Vec2 origin;
  double resolution = 0.25;
  int width = 0;
  int height = 0;
  double inflation = kDefaultHumanRadius;
  std::vector<std::uint8_t> cells;  // 1 = blocked

  int index(int cx, int cy) const { return cy * width + cx; }
  bool in_bounds(int cx, int cy) const { return cx >= 0 && cx < width && cy >= 0 && cy < height; }
  bool is_blocked(int cx, int cy) const { return cells[static_cast<std::size_t>(index(cx, cy))] != 0; }
  Vec2 cell_center(int cx, int cy) const {
    return {origin.x + (cx + 0.5) * resolution, origin.y + (cy + 0.5) * resolution};
  }
  std::optional<std::pair<int, int>> cell_of(Vec2 p) const;
  bool is_free_point(Vec2 p) const;
  // True when every cell touched by segment [a,b] is free.
  bool segment_free(Vec2 a, Vec2 b) const;
};

OccupancyGrid build_grid(const Scene& scene);

// Loads, normalizes windings, and validates. Throws ParseError / ValidationError / IoError.
Scene load_scene(const std::filesystem::path& path);
Scene scene_from_json_text(const std::string& text);

void save_scene(const Scene& scene, const std::filesystem::path& path);
std::string scene_to_json_text(const Scene& scene);

// Throws ValidationError naming the first violated invariant.
void validate_scene(const Scene& scene);

// Floor area minus obstacle area clipped to the floor, m^2.
double navigable_area(const Scene& scene);

// Humans per square meter of navigable area.
double human_density(const Scene& scene);

// Signed clearance: distance to the nearest obstacle edge or floor boundary,
// negative when p is inside an obstacle or outside the floor.
double distance_to_obstacles(const Scene& scene, Vec2 p);

// Shortest 8-connected grid path between the cells containing a and b,
// in meters. nullopt when no path exists or an endpoint cell is blocked.
std::optional<double> geodesic_distance(const OccupancyGrid& grid, Vec2 a, Vec2 b);

struct GridPath {
  std::vector<std::pair<int, int>> cells;
  double length = 0.0;  // meters
};

// A* over the 8-connected grid; exact (straight, diagonal) move counts keep
// path lengths bit-reproducible and symmetric.
std::optional<GridPath> grid_shortest_path(const OccupancyGrid& grid, std::pair<int, int> start,
                                           std::pair<int, int> goal);

// Dijkstra distances (meters) from the cell containing source to every free
// cell; +inf where unreachable.
std::vector<double> distance_field(const OccupancyGrid& grid, Vec2 source);

}  // namespace crowdsim
