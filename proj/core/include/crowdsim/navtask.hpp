#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crowdsim/integrator.hpp"
#include "crowdsim/metrics.hpp"
#include "crowdsim/scene.hpp"

namespace crowdsim {

enum class Action { Forward, TurnLeft, TurnRight, Stop };

const char* to_string(Action a);

// Sensor view handed to policies. Human state is never exposed symbolically;
// humans are visible only as lidar returns.
struct Observation {
  double goal_distance = 0.0;  // Euclidean, m
  double goal_bearing = 0.0;   // rad, relative to heading; positive = left
  std::vector<double> lidar;   // ranges in (0, max_range]
  int step_index = 0;
};

struct EnvConfig {
  double forward_step = 0.25;  // m
  double turn_angle = std::numbers::pi / 6.0;  // 30 degrees
  double success_radius = 0.2;  // m, on the geodesic distance to goal
  double agent_radius = 0.18;   // m
  int t_max = 500;
  int lidar_rays = 16;
  double lidar_range = 5.0;  // m
  metrics::RewardParams reward;
};

struct EpisodeLogRow {
  int t = 0;
  Action action = Action::Stop;
  Vec2 agent;
  double heading = 0.0;
  double reward = 0.0;
  bool collided = false;
  double dtg = 0.0;
};

// Point-goal navigation episode over a live crowd. The agent perceives the
// goal vector and lidar only; humans do not react to the agent.
class NavEnv {
 public:
  NavEnv(const Scene& scene, const EpisodeSpec& episode, const SimParams& params,
         std::uint64_t seed, EnvConfig config = {});

  const Observation& observation() const { return obs_; }
  bool done() const { return done_; }

  struct StepResult {
    Observation obs;
    double reward = 0.0;
    bool done = false;
  };

  // Applies the action, advances the crowd one dt, counts debounced
  // agent-human contacts, and computes the reward. Throws ValidationError
  // when called after the episode is done.
  StepResult step(Action action);

  metrics::EpisodeReport report() const;
  const std::vector<EpisodeLogRow>& log() const { return log_; }

  // Geodesic distance to goal; exact Euclidean when the straight segment to
  // the goal is clear, grid distance otherwise.
  double distance_to_goal() const { return dtg_; }
  Vec2 agent_position() const { return agent_; }
  double agent_heading() const { return heading_; }

 private:
  double compute_dtg(Vec2 p) const;
  Observation make_observation() const;
  bool move_clear(Vec2 from, Vec2 to) const;

  SimState crowd_;
  EnvConfig cfg_;
  Vec2 agent_;
  double heading_ = 0.0;
  Vec2 goal_;
  std::vector<double> goal_field_;  // grid distances from the goal cell
  bool stopped_ = false;
  bool done_ = false;
  bool success_ = false;
  bool in_contact_ = false;
  int steps_ = 0;
  long collisions_ = 0;
  double traveled_ = 0.0;
  double reward_sum_ = 0.0;
  double dtg_ = 0.0;
  double shortest_ = 0.0;
  Observation obs_;
  std::vector<EpisodeLogRow> log_;
};

// Scripted baseline: stop in the success radius, align with the goal bearing,
// walk forward, side-step toward open space when the forward ray is short.
Action greedy_policy(const Observation& obs);

Action random_policy(RngStream& rng);

// JSON-lines episode log; the final record carries success/spl/cpd.
void write_episode_log(std::ostream& out, const std::vector<EpisodeLogRow>& rows,
                       const metrics::EpisodeReport& final_report);

}  // namespace crowdsim
