#include "crowdsim/scene_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>

#include "crowdsim/errors.hpp"
#include "crowdsim/integrator.hpp"
#include "crowdsim/rng.hpp"

namespace crowdsim {

namespace {

constexpr int kMaxPlacementAttempts = 10000;
constexpr int kMaxSceneRerolls = 120;
constexpr double kHumanClearance = 0.2;   // minimum pairwise skin-to-skin at start
constexpr double kObstacleMargin = 0.1;   // extra clearance beyond the body radius
constexpr double kMinCorridor = 1.4;      // gap kept between obstacles and walls
constexpr int kVetSteps = 500;            // certification horizon for emitted scenes

// Generated humans are unit-mass particles: the interaction constants the
// dynamics model ships with are calibrated for that scale, and heavier bodies
// drown the anticipatory force in the destination-seeking term.
constexpr double kGenMass = 1.0;
constexpr double kGenRadius = 0.3;

struct Placement {
  const Scene* scene;
  const OccupancyGrid* grid;

  bool usable(Vec2 p, double radius) const {
    if (!point_in_polygon(p, scene->floor)) return false;
    if (distance_to_obstacles(*scene, p) < radius + kObstacleMargin) return false;
    return grid->is_free_point(p);
  }
};

Polygon rectangle(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

double sample_density(RngStream& rng, double lo, double hi) {
  // Skewed toward the low end so default suites average near typical indoor
  // crowdedness (~0.19 humans/m^2) while still spanning the full range.
  const double u = rng.uniform();
  return lo * std::pow(hi / lo, std::pow(u, 1.5));
}

// Crowds stay collision-free only when every run stays collision-free:
// candidate scenes are certified by simulating them with default parameters.
bool vet_scene(const Scene& scene) {
  const RunResult result = run(scene, SimParams{}, kVetSteps, 0);
  std::set<int> reached;
  for (const SimEvent& e : result.log.events) {
    if (e.kind == SimEventKind::human_human_overlap) return false;
    if (e.kind == SimEventKind::human_reached_destination) reached.insert(e.actors.at(0));
  }
  return reached.size() == scene.humans.size();
}

struct Box {
  double min_x, max_x, min_y, max_y;
};

// Start is drawn from start_box, goal from goal_box (they may coincide); in
// lane scenes the boxes sit on opposite sides so episodes cross the traffic.
void add_episodes(Scene& scene, const OccupancyGrid& grid, const Placement& place,
                  RngStream& rng, int count, Box start_box, Box goal_box,
                  double min_goal_dist) {
  for (int e = 0; e < count; ++e) {
    if (e % 2 == 1) std::swap(start_box, goal_box);
    EpisodeSpec ep;
    bool ok = false;
    for (int i = 0; i < 600 && !ok; ++i) {
      const Vec2 p{rng.uniform(start_box.min_x, start_box.max_x),
                   rng.uniform(start_box.min_y, start_box.max_y)};
      if (!place.usable(p, kGenRadius)) continue;
      ep.agent_start = p;
      ok = true;
    }
    if (!ok) throw ValidationError("scene generation failed: no free agent start");
    ok = false;
    for (int i = 0; i < 600 && !ok; ++i) {
      const Vec2 g{rng.uniform(goal_box.min_x, goal_box.max_x),
                   rng.uniform(goal_box.min_y, goal_box.max_y)};
      if (!place.usable(g, kGenRadius)) continue;
      const auto geo = geodesic_distance(grid, ep.agent_start, g);
      if (!geo || *geo < min_goal_dist) continue;
      ep.goal = g;
      ok = true;
    }
    if (!ok) throw ValidationError("scene generation failed: no reachable episode goal");
    ep.agent_heading = rng.uniform(0.0, kTwoPi);
    scene.episodes.push_back(ep);
  }
}

// Free-roaming crowd in a rectangle, humans and destinations scattered by
// rejection sampling. Suits low densities where crossings stay pairwise.
std::optional<Scene> open_candidate(RngStream& rng, double density,
                                    const GeneratorConfig& config, const std::string& name) {
  const int n = density <= 0.15 ? rng.uniform_int(5, 8) : rng.uniform_int(4, 6);
  const double aspect = rng.uniform(1.0, 1.5);

  Scene scene;
  scene.name = name;
  scene.grid_resolution = 0.25;

  // Obstacles shrink navigable area; size the floor from the target count.
  const int max_obstacles =
      density <= 0.15 ? std::min(config.obstacle_count_range[1], 2) : 0;
  const int want_obstacles =
      max_obstacles > 0 ? rng.uniform_int(std::min(config.obstacle_count_range[0], max_obstacles),
                                          max_obstacles)
                        : 0;
  double obstacle_area_budget = 0.0;
  const double base_area = n / density;
  const double area = base_area + (want_obstacles > 0 ? 2.0 : 0.0);
  const double width = std::sqrt(area * aspect);
  const double height = area / width;
  if (width < 3.0 || height < 3.0) return std::nullopt;
  scene.floor = rectangle(0.0, 0.0, width, height);

  for (int k = 0; k < want_obstacles; ++k) {
    for (int attempt = 0; attempt < 60; ++attempt) {
      const double ow = rng.uniform(0.6, std::max(0.65, std::min(2.0, width / 5.0)));
      const double oh = rng.uniform(0.6, std::max(0.65, std::min(2.0, height / 5.0)));
      if (width - 2.0 * kMinCorridor - ow <= 0.1 || height - 2.0 * kMinCorridor - oh <= 0.1) {
        continue;
      }
      const double ox = rng.uniform(kMinCorridor, width - kMinCorridor - ow);
      const double oy = rng.uniform(kMinCorridor, height - kMinCorridor - oh);
      const Polygon cand = rectangle(ox, oy, ox + ow, oy + oh);
      bool clear = true;
      for (const Polygon& other : scene.obstacles) {
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cand.size(); ++i) {
          gap = std::min(gap,
                         segment_polygon_distance(cand[i], cand[(i + 1) % cand.size()], other));
        }
        if (gap < kMinCorridor) {
          clear = false;
          break;
        }
      }
      if (clear) {
        scene.obstacles.push_back(cand);
        obstacle_area_budget += ow * oh;
        break;
      }
    }
  }

  const double nav_area = navigable_area(scene);
  const int count = std::max(1, static_cast<int>(std::ceil(density * nav_area - 1e-9)));

  const OccupancyGrid grid = build_grid(scene);
  const Placement place{&scene, &grid};
  const double diag = std::hypot(width, height);
  const double min_dest_dist = std::min(5.0, 0.45 * diag);
  const double sep = std::clamp(0.16 * std::min(width, height), 0.85, 1.25);
  const double margin = 0.7;
  if (width <= 2.0 * margin || height <= 2.0 * margin) return std::nullopt;

  int attempts = kMaxPlacementAttempts;
  for (int i = 0; i < count; ++i) {
    HumanSpec h;
    h.id = i;
    h.radius = kGenRadius;
    h.mass = kGenMass;
    h.desired_speed = rng.uniform(1.0, 1.25);
    bool placed = false;
    while (attempts-- > 0) {
      const Vec2 p{rng.uniform(margin, width - margin), rng.uniform(margin, height - margin)};
      if (!place.usable(p, h.radius)) continue;
      bool clear = true;
      for (const HumanSpec& other : scene.humans) {
        if (distance(p, other.position) - h.radius - other.radius <= std::max(kHumanClearance,
                                                                              sep - 0.6)) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      h.position = p;
      placed = true;
      break;
    }
    if (!placed) {
      if (attempts <= 0) {
        throw ValidationError("scene generation failed: could not place humans after " +
                              std::to_string(kMaxPlacementAttempts) +
                              " attempts; lower the density");
      }
      return std::nullopt;
    }
    bool has_dest = false;
    while (attempts-- > 0) {
      const Vec2 d{rng.uniform(margin, width - margin), rng.uniform(margin, height - margin)};
      if (!place.usable(d, h.radius)) continue;
      const auto geo = geodesic_distance(grid, h.position, d);
      if (!geo || *geo < min_dest_dist) continue;
      bool spread = true;
      for (const HumanSpec& other : scene.humans) {
        if (distance(d, other.destination) < sep) {
          spread = false;
          break;
        }
      }
      if (!spread) continue;
      h.destination = d;
      h.heading = wrap_angle_2pi(std::atan2(d.y - h.position.y, d.x - h.position.x));
      has_dest = true;
      break;
    }
    if (!has_dest) {
      if (attempts <= 0) {
        throw ValidationError("scene generation failed: could not place destinations after " +
                              std::to_string(kMaxPlacementAttempts) +
                              " attempts; lower the density");
      }
      return std::nullopt;
    }
    scene.humans.push_back(h);
  }

  const Box all{margin, width - margin, margin, height - margin};
  add_episodes(scene, grid, place, rng, config.episodes_per_scene, all, all,
               std::min(3.0, 0.5 * diag));
  (void)obstacle_area_budget;
  return scene;
}

// Parallel private shuttle tracks (one human per lane, alternating heading),
// optionally with one free human crossing the lanes. Dense rooms keep crowd
// flow structured the same way real corridors do.
std::optional<Scene> lane_candidate(RngStream& rng, double density,
                                    const GeneratorConfig& config, const std::string& name,
                                    bool wanderer) {
  const double pitch = 0.8;
  const double margin = 0.5;

  int lanes = 0;
  double track = 0.0, width = 0.0;
  for (int k = 4 + rng.uniform_int(0, 2); k <= 12; ++k) {
    const int n = k + (wanderer ? 1 : 0);
    const double area = n / density;
    if (area < config.area_range[0] || area > config.area_range[1]) continue;
    const double w = 2.0 * margin + pitch * (k - 1);
    const double h = area / w;
    const double len = h - 2.0 * margin;
    if (len >= 1.3 && len <= 7.0) {
      lanes = k;
      track = len;
      width = w;
      break;
    }
  }
  if (lanes == 0) return std::nullopt;
  const double height = track + 2.0 * margin;

  Scene scene;
  scene.name = name;
  scene.grid_resolution = 0.25;
  scene.floor = rectangle(0.0, 0.0, width, height);

  for (int i = 0; i < lanes; ++i) {
    HumanSpec h;
    h.id = i;
    h.radius = kGenRadius;
    h.mass = kGenMass;
    h.desired_speed = rng.uniform(1.0, 1.2);
    const double x = margin + pitch * i + rng.uniform(-0.04, 0.04);
    const double y0 = margin, y1 = margin + track;
    if (i % 2 == 0) {
      h.position = {x, y0};
      h.destination = {x, y1};
    } else {
      h.position = {x, y1};
      h.destination = {x, y0};
    }
    h.heading = wrap_angle_2pi(std::atan2(h.destination.y - h.position.y,
                                          h.destination.x - h.position.x));
    scene.humans.push_back(h);
  }
  if (wanderer) {
    HumanSpec h;
    h.id = lanes;
    h.radius = kGenRadius;
    h.mass = kGenMass;
    h.desired_speed = rng.uniform(1.0, 1.15);
    const double y = margin + track * rng.uniform(0.35, 0.65);
    h.position = {margin - 0.1, y};
    h.destination = {width - margin + 0.1, y};
    h.heading = 0.0;
    scene.humans.push_back(h);
  }

  const OccupancyGrid grid = build_grid(scene);
  const Placement place{&scene, &grid};
  // Episodes traverse the lane band so the agent must negotiate the traffic.
  const Box left{0.45, 0.62, 0.45, height - 0.45};
  const Box right{width - 0.62, width - 0.45, 0.45, height - 0.45};
  add_episodes(scene, grid, place, rng, config.episodes_per_scene, left, right,
               std::max(1.2, width - 1.4));
  return scene;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (count < 1) throw ValidationError("generator: count must be >= 1");
  if (!(density_range[0] > 0.0) || density_range[1] > 1.0 ||
      density_range[0] > density_range[1]) {
    throw ValidationError("generator: density range must lie in (0, 1]");
  }
  if (!(area_range[0] > 0.0) || area_range[0] > area_range[1]) {
    throw ValidationError("generator: invalid area range");
  }
  if (obstacle_count_range[0] < 0 || obstacle_count_range[0] > obstacle_count_range[1]) {
    throw ValidationError("generator: invalid obstacle count range");
  }
  for (double d : densities) {
    if (!(d > 0.0) || d > 1.0) throw ValidationError("generator: explicit density out of (0, 1]");
  }
  if (episodes_per_scene < 0) throw ValidationError("generator: episodes_per_scene must be >= 0");
}

Scene generate_scene(const GeneratorConfig& config, int scene_index) {
  config.validate();

  for (std::uint64_t salt = 0; salt < kMaxSceneRerolls; ++salt) {
    RngStream rng(config.seed, 0x5ce0e9ULL * (static_cast<std::uint64_t>(scene_index) + 1) + salt);

    const double density =
        config.densities.empty()
            ? sample_density(rng, config.density_range[0], config.density_range[1])
            : config.densities[static_cast<std::size_t>(scene_index) % config.densities.size()];

    char name[64];
    std::snprintf(name, sizeof(name), "%s_%02d", config.name_prefix.c_str(), scene_index);

    std::optional<Scene> candidate;
    try {
      if (density < 0.19) {
        candidate = open_candidate(rng, density, config, name);
      } else if (density < 0.30) {
        candidate = lane_candidate(rng, density, config, name, /*wanderer=*/true);
      } else {
        candidate = lane_candidate(rng, density, config, name, /*wanderer=*/false);
      }
    } catch (const ValidationError&) {
      if (salt + 1 == kMaxSceneRerolls) throw;
      continue;
    }
    if (!candidate) {
      if (getenv("CROWDSIM_GEN_DEBUG")) fprintf(stderr, "salt %llu: no candidate\n", (unsigned long long)salt);
      continue;
    }

    try {
      validate_scene(*candidate);
    } catch (const ValidationError& e) {
      if (getenv("CROWDSIM_GEN_DEBUG")) fprintf(stderr, "salt %llu: validate: %s\n", (unsigned long long)salt, e.what());
      continue;
    }
    if (!vet_scene(*candidate)) {
      if (getenv("CROWDSIM_GEN_DEBUG")) fprintf(stderr, "salt %llu: vet failed\n", (unsigned long long)salt);
      continue;
    }
    return *candidate;
  }
  throw ValidationError(
      "scene generation failed: no collision-free configuration found; lower the density");
}

std::vector<Scene> generate_scenes(const GeneratorConfig& config) {
  config.validate();
  std::vector<Scene> scenes;
  scenes.reserve(static_cast<std::size_t>(config.count));
  for (int i = 0; i < config.count; ++i) {
    scenes.push_back(generate_scene(config, i));
  }
  return scenes;
}

Scene generate_fixed_area_scene(double area, int n_humans, std::uint64_t seed,
                                const std::string& name) {
  if (!(area > 0.0)) throw ValidationError("generator: area must be positive");
  if (n_humans < 1) throw ValidationError("generator: need at least one human");

  RngStream rng(seed, 0xbe9cULL + static_cast<std::uint64_t>(n_humans));
  const double side = std::sqrt(area);

  Scene scene;
  scene.name = name;
  scene.floor = rectangle(0.0, 0.0, side, side);
  scene.grid_resolution = 0.25;

  const OccupancyGrid grid = build_grid(scene);
  const Placement place{&scene, &grid};
  const double min_dest_dist = std::min(5.0, 0.5 * side);
  const double margin = 0.7;

  int attempts = kMaxPlacementAttempts * 4;
  for (int i = 0; i < n_humans; ++i) {
    HumanSpec h;
    h.id = i;
    h.radius = kGenRadius;
    h.mass = kGenMass;
    h.desired_speed = 1.2;
    bool placed = false;
    while (attempts-- > 0) {
      const Vec2 p{rng.uniform(margin, side - margin), rng.uniform(margin, side - margin)};
      if (!place.usable(p, h.radius)) continue;
      bool clear = true;
      for (const HumanSpec& other : scene.humans) {
        if (distance(p, other.position) - h.radius - other.radius <= kHumanClearance) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      h.position = p;
      placed = true;
      break;
    }
    if (!placed) {
      throw ValidationError("scene generation failed: too many humans for the area");
    }
    bool has_dest = false;
    while (attempts-- > 0) {
      const Vec2 d{rng.uniform(margin, side - margin), rng.uniform(margin, side - margin)};
      if (!place.usable(d, h.radius)) continue;
      const auto geo = geodesic_distance(grid, h.position, d);
      if (!geo || *geo < min_dest_dist) continue;
      h.destination = d;
      h.heading = wrap_angle_2pi(std::atan2(d.y - h.position.y, d.x - h.position.x));
      has_dest = true;
      break;
    }
    if (!has_dest) {
      throw ValidationError("scene generation failed: no reachable destination found");
    }
    scene.humans.push_back(h);
  }
  validate_scene(scene);
  return scene;
}

}  // namespace crowdsim
