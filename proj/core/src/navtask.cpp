#include "crowdsim/navtask.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "crowdsim/errors.hpp"
#include "crowdsim/geometry.hpp"
#include "json.hpp"

namespace crowdsim {

namespace {

// True when segment [a,b] stays inside the floor and crosses no obstacle.
bool segment_clear_of_polygons(const Scene& scene, Vec2 a, Vec2 b) {
  if (!point_in_polygon(a, scene.floor) || !point_in_polygon(b, scene.floor)) return false;
  const std::size_t n = scene.floor.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (segments_intersect(a, b, scene.floor[j], scene.floor[i])) return false;
  }
  for (const Polygon& obs : scene.obstacles) {
    if (point_in_polygon(a, obs) || point_in_polygon(b, obs)) return false;
    const std::size_t m = obs.size();
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
      if (segments_intersect(a, b, obs[j], obs[i])) return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(Action a) {
  switch (a) {
    case Action::Forward:
      return "forward";
    case Action::TurnLeft:
      return "turn_left";
    case Action::TurnRight:
      return "turn_right";
    case Action::Stop:
      return "stop";
  }
  return "unknown";
}

NavEnv::NavEnv(const Scene& scene, const EpisodeSpec& episode, const SimParams& params,
               std::uint64_t seed, EnvConfig config)
    : crowd_(make_sim_state(scene, params, seed)),
      cfg_(config),
      agent_(episode.agent_start),
      heading_(wrap_angle_2pi(episode.agent_heading)),
      goal_(episode.goal) {
  goal_field_ = distance_field(*crowd_.grid, goal_);
  dtg_ = compute_dtg(agent_);
  if (!std::isfinite(dtg_)) throw ValidationError("episode goal is unreachable from agent start");
  shortest_ = std::max(dtg_, 1e-9);
  obs_ = make_observation();
}

double NavEnv::compute_dtg(Vec2 p) const {
  if (segment_clear_of_polygons(*crowd_.scene, p, goal_)) return distance(p, goal_);
  const auto cell = crowd_.grid->cell_of(p);
  if (cell && !crowd_.grid->is_blocked(cell->first, cell->second)) {
    return goal_field_[static_cast<std::size_t>(crowd_.grid->index(cell->first, cell->second))];
  }
  // Inside the inflated margin: fall back to the best neighboring free cell.
  if (cell) {
    double best = std::numeric_limits<double>::infinity();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int cx = cell->first + dx;
        const int cy = cell->second + dy;
        if (!crowd_.grid->in_bounds(cx, cy) || crowd_.grid->is_blocked(cx, cy)) continue;
        const double base =
            goal_field_[static_cast<std::size_t>(crowd_.grid->index(cx, cy))];
        best = std::min(best, base + distance(p, crowd_.grid->cell_center(cx, cy)));
      }
    }
    return best;
  }
  return std::numeric_limits<double>::infinity();
}

namespace {

// Free travel distance of a disc of radius r along dir before touching the
// edge [a,b]: a capsule cast, i.e. a thin ray against the edge inflated by r.
double sweep_vs_segment(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b, double r, double limit) {
  double range = limit;
  const Vec2 n_hat = normalized(Vec2{-(b - a).y, (b - a).x});
  for (const double side : {1.0, -1.0}) {
    const Vec2 offset = n_hat * (r * side);
    if (const auto t = ray_segment_hit(origin, dir, a + offset, b + offset)) {
      range = std::min(range, *t);
    }
  }
  for (const Vec2 v : {a, b}) {
    if (const auto t = ray_circle_hit(origin, dir, v, r)) range = std::min(range, *t);
  }
  return range;
}

}  // namespace

Observation NavEnv::make_observation() const {
  Observation obs;
  const Vec2 to_goal = goal_ - agent_;
  obs.goal_distance = norm(to_goal);
  obs.goal_bearing = wrap_angle_pi(std::atan2(to_goal.y, to_goal.x) - heading_);
  obs.step_index = steps_;
  obs.lidar.resize(static_cast<std::size_t>(cfg_.lidar_rays));
  const Scene& scene = *crowd_.scene;
  const double r = cfg_.agent_radius;
  // Readings are body-clearance ranges: how far the agent disc can travel
  // along each bearing before touching anything, so a short forward ray
  // matches exactly the moves the environment would reject.
  for (int k = 0; k < cfg_.lidar_rays; ++k) {
    const double bearing = heading_ + kTwoPi * k / cfg_.lidar_rays;
    const Vec2 dir = unit_from_angle(bearing);
    double range = cfg_.lidar_range;
    const std::size_t n = scene.floor.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      range = sweep_vs_segment(agent_, dir, scene.floor[j], scene.floor[i], r, range);
    }
    for (const Polygon& obstacle : scene.obstacles) {
      const std::size_t m = obstacle.size();
      for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        range = sweep_vs_segment(agent_, dir, obstacle[j], obstacle[i], r, range);
      }
    }
    for (const Human& h : crowd_.humans) {
      if (const auto t = ray_circle_hit(agent_, dir, h.x, h.r + r)) range = std::min(range, *t);
    }
    obs.lidar[static_cast<std::size_t>(k)] = std::max(range, 1e-6);
  }
  return obs;
}

bool NavEnv::move_clear(Vec2 from, Vec2 to) const {
  const Scene& scene = *crowd_.scene;
  if (!point_in_polygon(to, scene.floor)) return false;
  if (segment_polygon_distance(from, to, scene.floor) < cfg_.agent_radius) return false;
  for (const Polygon& obs : scene.obstacles) {
    if (point_in_polygon(to, obs)) return false;
    if (segment_polygon_distance(from, to, obs) < cfg_.agent_radius) return false;
  }
  return true;
}

NavEnv::StepResult NavEnv::step(Action action) {
  if (done_) throw ValidationError("step called on a finished episode");

  const double d_prev = dtg_;
  const Vec2 before = agent_;

  switch (action) {
    case Action::Forward: {
      const Vec2 target = agent_ + cfg_.forward_step * unit_from_angle(heading_);
      if (move_clear(agent_, target)) agent_ = target;
      break;
    }
    case Action::TurnLeft:
      heading_ = wrap_angle_2pi(heading_ + cfg_.turn_angle);
      break;
    case Action::TurnRight:
      heading_ = wrap_angle_2pi(heading_ - cfg_.turn_angle);
      break;
    case Action::Stop:
      stopped_ = true;
      break;
  }

  crowdsim::step(crowd_);

  // Debounced contact: count transitions into contact only.
  double min_skin = std::numeric_limits<double>::infinity();
  for (const Human& h : crowd_.humans) {
    min_skin = std::min(min_skin, distance(agent_, h.x) - cfg_.agent_radius - h.r);
  }
  const bool contact_now = min_skin <= 0.0;
  const bool collided = contact_now && !in_contact_;
  in_contact_ = contact_now;
  if (collided) ++collisions_;

  traveled_ += distance(before, agent_);
  dtg_ = compute_dtg(agent_);
  steps_ += 1;
  success_ = stopped_ && dtg_ <= cfg_.success_radius;
  done_ = stopped_ || steps_ >= cfg_.t_max;

  const double reward = metrics::reward_step(d_prev, dtg_, collided, success_, cfg_.reward);
  reward_sum_ += reward;

  log_.push_back({steps_, action, agent_, heading_, reward, collided, dtg_});
  obs_ = make_observation();
  return {obs_, reward, done_};
}

metrics::EpisodeReport NavEnv::report() const {
  metrics::EpisodeReport rep;
  rep.success = success_;
  rep.dtg = dtg_;
  rep.path_length = traveled_;
  rep.collisions = collisions_;
  rep.reward_sum = reward_sum_;
  rep.spl = metrics::spl(success_, shortest_, traveled_);
  if (traveled_ == 0.0 && collisions_ > 0) {
    rep.cpd = std::nullopt;  // degenerate immobile-collision case
  } else {
    rep.cpd = metrics::cpd(collisions_, traveled_);
  }
  return rep;
}

Action greedy_policy(const Observation& obs) {
  constexpr double kAlignTolerance = 15.0 * std::numbers::pi / 180.0;
  constexpr double kBlockedRange = 0.5;
  if (obs.goal_distance <= 0.2) return Action::Stop;
  // Side-stepping outranks re-alignment: turning back toward the goal while
  // the forward ray is short livelocks against walls. The rotation direction
  // is sticky (left unless the right side is clearly more open); re-picking
  // the better side every step oscillates as the heading swings.
  if (!obs.lidar.empty() && obs.lidar[0] < kBlockedRange) {
    const std::size_t k = obs.lidar.size();
    double left = 0.0, right = 0.0;
    for (std::size_t i = 1; i <= k / 4; ++i) {
      left += obs.lidar[i];
      right += obs.lidar[k - i];
    }
    return right - left > 1.0 ? Action::TurnRight : Action::TurnLeft;
  }
  if (std::abs(obs.goal_bearing) > kAlignTolerance) {
    // Only swing toward the goal when the ray nearest that direction is
    // open; otherwise keep walking tangentially past the blockage.
    const std::size_t k = obs.lidar.size();
    const std::size_t idx =
        k == 0 ? 0
               : static_cast<std::size_t>(std::llround(wrap_angle_2pi(obs.goal_bearing) /
                                                       (kTwoPi / static_cast<double>(k)))) %
                     k;
    if (k == 0 || obs.lidar[idx] >= kBlockedRange) {
      return obs.goal_bearing > 0 ? Action::TurnLeft : Action::TurnRight;
    }
  }
  return Action::Forward;
}

Action random_policy(RngStream& rng) {
  switch (rng.uniform_int(0, 3)) {
    case 0:
      return Action::Forward;
    case 1:
      return Action::TurnLeft;
    case 2:
      return Action::TurnRight;
    default:
      return Action::Stop;
  }
}

void write_episode_log(std::ostream& out, const std::vector<EpisodeLogRow>& rows,
                       const metrics::EpisodeReport& final_report) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EpisodeLogRow& r = rows[i];
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["action"] = to_string(r.action);
    j["agent"] = {r.agent.x, r.agent.y, r.heading};
    j["reward"] = r.reward;
    j["collided"] = r.collided;
    j["dtg"] = r.dtg;
    if (i + 1 == rows.size()) {
      j["success"] = final_report.success;
      j["spl"] = final_report.spl;
      if (final_report.cpd.has_value()) {
        j["cpd"] = *final_report.cpd;
      } else {
        j["cpd"] = nullptr;
      }
    }
    out << j.dump() << "\n";
  }
}

}  // namespace crowdsim
