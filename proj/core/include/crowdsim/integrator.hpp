#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "crowdsim/human.hpp"
#include "crowdsim/params.hpp"
#include "crowdsim/planner.hpp"
#include "crowdsim/rng.hpp"
#include "crowdsim/scene.hpp"

namespace crowdsim {

enum class SimEventKind { human_human_overlap, human_reached_destination, destination_swapped };

const char* to_string(SimEventKind kind);

struct SimEvent {
  SimEventKind kind;
  int step = 0;
  std::vector<int> actors;  // human ids
};

// World state at a fixed simulated time. Humans are kept sorted by id so that
// pairwise accumulation order is canonical regardless of roster order.
struct SimState {
  std::shared_ptr<const Scene> scene;
  std::shared_ptr<const OccupancyGrid> grid;
  SimParams params;
  std::vector<Human> humans;
  std::vector<Path> paths;       // aligned with humans
  std::vector<RngStream> rngs;   // aligned with humans, substreams keyed by id
  std::vector<SimEvent> events;
  int step_index = 0;
  double time = 0.0;  // step_index * dt
};

SimState make_sim_state(const Scene& scene, const SimParams& params, std::uint64_t seed);

struct StepStats {
  double dynamics_seconds = 0.0;  // wall time of the force/torque + update phase
};

// Advances all humans by one dt: desired directions and desired orientations
// refresh first, then forces and torques are evaluated synchronously against
// the pre-step state, then velocities (clamped) and poses update, then
// overlap events and destination swaps are recorded.
StepStats step(SimState& state);

struct TrajectoryRow {
  int step = 0;
  int human_id = 0;
  Vec2 x;
  Vec2 v;
  double psi = 0.0;
  double omega = 0.0;
};

struct TrajectoryLog {
  std::vector<TrajectoryRow> rows;  // one per human per step
  std::vector<SimEvent> events;
  std::vector<double> step_dynamics_seconds;  // one per step
};

struct RunResult {
  SimState state;
  TrajectoryLog log;
};

RunResult run(const Scene& scene, const SimParams& params, int steps, std::uint64_t seed);

// CSV with header "step,human_id,x,y,vx,vy,psi,omega", 9 significant digits.
std::string trajectory_csv(const TrajectoryLog& log);

std::string events_json(const std::vector<SimEvent>& events);
std::vector<SimEvent> events_from_json_text(const std::string& text);

std::string timing_json(const TrajectoryLog& log, int n_humans);

}  // namespace crowdsim
