#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "crowdsim/scene.hpp"

namespace crowdsim {

struct GeneratorConfig {
  int count = 20;
  std::array<double, 2> density_range{0.1, 0.5};  // humans / m^2
  std::array<double, 2> area_range{10.0, 300.0};  // m^2
  std::array<int, 2> obstacle_count_range{0, 3};
  std::uint64_t seed = 0;
  // Optional explicit per-scene densities; overrides density_range sampling.
  std::vector<double> densities;
  int episodes_per_scene = 3;
  std::string name_prefix = "scene";

  void validate() const;  // throws ValidationError
};

// Procedural rectangular scenes: a rectangle floor, block obstacles, humans
// placed by rejection sampling with positive skin-to-skin clearance, and
// reachable destinations. Every emitted scene passes validate_scene.
// Throws ValidationError when placement fails repeatedly (density too high).
std::vector<Scene> generate_scenes(const GeneratorConfig& config);

Scene generate_scene(const GeneratorConfig& config, int scene_index);

// Obstacle-free square floor of the given area with exactly n humans; used by
// the scaling benchmark so only the crowd size varies.
Scene generate_fixed_area_scene(double area, int n_humans, std::uint64_t seed,
                                const std::string& name);

}  // namespace crowdsim
