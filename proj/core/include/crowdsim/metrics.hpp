#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crowdsim/integrator.hpp"

namespace crowdsim {
namespace metrics {

// Percentage of steps free of any human-human overlap event.
double car(const std::vector<SimEvent>& events, int total_steps);

// Percentage of humans with at least one arrival event.
double gr(const std::vector<SimEvent>& events, int n_humans);

// Mean dynamics wall time per human per step, seconds.
double mct(const std::vector<double>& step_dynamics_seconds, int n_humans, int steps);

// Success weighted by normalized inverse path length.
double spl(bool success, double shortest, double traveled);

// Agent-human collisions per meter traveled. Throws ValidationError for the
// degenerate immobile-collision case (traveled == 0 with collisions > 0).
double cpd(long collisions, double traveled);

struct RewardParams {
  double r_collision = -1e-4;
  double r_success = 2.5;
  double r_shaping = 1.0;
};

// r = R_c * [collided] + R_s * [succeeded] + R_f * (d_prev - d_now); the
// shaping sign rewards moving closer to the goal.
double reward_step(double d_prev, double d_now, bool collided, bool succeeded,
                   const RewardParams& params);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool ok = false;  // false when underdetermined (fewer than 2 distinct x)
};

LinearFit least_squares(std::span<const std::pair<double, double>> points);

struct DynamicsReport {
  double car = 0.0;
  double gr = 0.0;
  double mct = 0.0;
  int n_humans = 0;
  int steps = 0;
};

struct EpisodeReport {
  bool success = false;
  double spl = 0.0;
  double dtg = 0.0;
  std::optional<double> cpd;  // nullopt for the degenerate immobile case
  double path_length = 0.0;
  long collisions = 0;
  double reward_sum = 0.0;
};

struct DynamicsRow {
  std::string scene;
  int n_humans = 0;
  int steps = 0;
  double car = 0.0;
  double gr = 0.0;
  double mct_seconds = 0.0;
};

struct EpisodeRow {
  std::string scene;
  int episode = 0;
  EpisodeReport report;
};

struct NavAggregate {
  double sr = 0.0;        // % of successful episodes
  double spl = 0.0;       // mean SPL
  double dtg = 0.0;       // mean final distance to goal, m
  double cpd = 0.0;       // mean collisions per meter
  int episodes = 0;
  int cpd_degenerate = 0;  // episodes excluded from the cpd mean
};

// Combined report emitted by the evaluation commands.
struct MetricsReport {
  std::optional<double> car;
  std::optional<double> gr;
  std::optional<double> mct_seconds;
  std::vector<DynamicsRow> scenes;
  std::vector<EpisodeRow> episodes;
  std::optional<NavAggregate> nav;
};

NavAggregate aggregate_episodes(const std::vector<EpisodeRow>& episodes);

// JSON with top-level keys car, gr, mct_seconds, episodes (plus per-scene
// rows). Timing fields are omitted when include_timing is false.
std::string report_json(const MetricsReport& report, bool include_timing);

// Flat CSV export of the same content.
std::string report_csv(const MetricsReport& report, bool include_timing);

MetricsReport report_from_json_text(const std::string& text);

}  // namespace metrics
}  // namespace crowdsim
