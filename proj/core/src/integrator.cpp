#include "crowdsim/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "crowdsim/contact.hpp"
#include "crowdsim/dynamics.hpp"
#include "crowdsim/errors.hpp"
#include "json.hpp"

namespace crowdsim {

void SimParams::validate() const {
  if (!(tau_adj > 0.0)) throw ValidationError("tau_adj must be positive");
  if (!(tau_soc > 0.0)) throw ValidationError("tau_soc must be positive");
  if (!(tau_rot > 0.0)) throw ValidationError("tau_rot must be positive");
  if (k_soc < 0.0) throw ValidationError("k_soc must be non-negative");
  if (sigma_zeta < 0.0) throw ValidationError("sigma_zeta must be non-negative");
  if (sigma_eta < 0.0) throw ValidationError("sigma_eta must be non-negative");
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(v_max > 0.0)) throw ValidationError("v_max must be positive");
  if (!(omega_max > 0.0)) throw ValidationError("omega_max must be positive");
  if (!(contact.k_normal > 0.0)) throw ValidationError("contact.k_normal must be positive");
  if (contact.c_damp < 0.0) throw ValidationError("contact.c_damp must be non-negative");
  if (contact.mu < 0.0) throw ValidationError("contact.mu must be non-negative");
}

const char* to_string(SimEventKind kind) {
  switch (kind) {
    case SimEventKind::human_human_overlap:
      return "human_human_overlap";
    case SimEventKind::human_reached_destination:
      return "human_reached_destination";
    case SimEventKind::destination_swapped:
      return "destination_swapped";
  }
  return "unknown";
}

SimState make_sim_state(const Scene& scene, const SimParams& params, std::uint64_t seed) {
  params.validate();
  SimState state;
  state.scene = std::make_shared<Scene>(scene);
  state.grid = std::make_shared<OccupancyGrid>(build_grid(scene));
  state.params = params;

  std::vector<HumanSpec> specs = scene.humans;
  std::sort(specs.begin(), specs.end(),
            [](const HumanSpec& a, const HumanSpec& b) { return a.id < b.id; });

  for (const HumanSpec& spec : specs) {
    Human h;
    h.id = spec.id;
    h.x = spec.position;
    h.v = {0.0, 0.0};
    h.v_des = spec.desired_speed;
    h.psi = wrap_angle_2pi(spec.heading);
    h.psi0 = h.psi;
    h.omega = 0.0;
    h.omega0 = spec.desired_angular_speed;
    h.r = spec.radius;
    h.m = spec.mass;
    h.destination = spec.destination;
    h.origin = spec.position;
    state.humans.push_back(h);
    state.paths.push_back(plan_path(*state.grid, spec.position, spec.destination));
    state.rngs.emplace_back(seed, static_cast<std::uint64_t>(static_cast<std::uint32_t>(spec.id)));
  }
  for (std::size_t i = 0; i < state.humans.size(); ++i) {
    state.humans[i].e_hat = desired_direction(state.humans[i], state.paths[i]);
  }
  return state;
}

StepStats step(SimState& state) {
  const std::size_t n = state.humans.size();
  const SimParams& params = state.params;

  // Navigation bookkeeping: desired direction from the planner, desired
  // orientation from the current velocity (held when nearly at rest).
  for (std::size_t i = 0; i < n; ++i) {
    Human& h = state.humans[i];
    h.e_hat = desired_direction(h, state.paths[i]);
    if (norm(h.v) > 1e-6) h.psi0 = wrap_angle_2pi(std::atan2(h.v.y, h.v.x));
  }

  const auto t0 = std::chrono::steady_clock::now();

  // Accelerations from the state at time rho, for all humans (synchronous).
  std::vector<Vec2> accel(n);
  std::vector<double> ang_accel(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Human& h = state.humans[i];
    accel[i] = total_force(state, i, state.rngs[i]) * (1.0 / h.m);
    ang_accel[i] = total_torque(state, i, state.rngs[i]) / h.inertia();
  }

  // Velocity updates with clamps, then semi-implicit position update.
  for (std::size_t i = 0; i < n; ++i) {
    Human& h = state.humans[i];
    h.v += accel[i] * params.dt;
    const double speed = norm(h.v);
    if (speed > params.v_max) h.v = h.v * (params.v_max / speed);
    h.omega = std::clamp(h.omega + ang_accel[i] * params.dt, -params.omega_max, params.omega_max);
    h.x += h.v * params.dt;
    h.psi = wrap_angle_2pi(h.psi + h.omega * params.dt);
  }

  const auto t1 = std::chrono::steady_clock::now();

  state.step_index += 1;
  state.time = state.step_index * params.dt;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Human& a = state.humans[i];
      const Human& b = state.humans[j];
      if (distance(a.x, b.x) - a.r - b.r < 0.0) {
        state.events.push_back(
            {SimEventKind::human_human_overlap, state.step_index, {a.id, b.id}});
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    Human& h = state.humans[i];
    if (distance(h.x, h.destination) <= kGoalTolerance) {
      state.events.push_back({SimEventKind::human_reached_destination, state.step_index, {h.id}});
      std::swap(h.destination, h.origin);
      state.events.push_back({SimEventKind::destination_swapped, state.step_index, {h.id}});
      // Return along the same trajectory.
      state.paths[i] = reversed(state.paths[i]);
    }
  }

  StepStats stats;
  stats.dynamics_seconds = std::chrono::duration<double>(t1 - t0).count();
  return stats;
}

RunResult run(const Scene& scene, const SimParams& params, int steps, std::uint64_t seed) {
  if (steps < 0) throw ValidationError("steps must be non-negative");
  RunResult result{make_sim_state(scene, params, seed), {}};
  SimState& state = result.state;
  TrajectoryLog& log = result.log;
  log.rows.reserve(static_cast<std::size_t>(steps) * state.humans.size());

  for (int s = 0; s < steps; ++s) {
    const StepStats stats = step(state);
    log.step_dynamics_seconds.push_back(stats.dynamics_seconds);
    for (const Human& h : state.humans) {
      log.rows.push_back({state.step_index, h.id, h.x, h.v, h.psi, h.omega});
    }
  }
  log.events = state.events;
  return result;
}

std::string trajectory_csv(const TrajectoryLog& log) {
  std::string out = "step,human_id,x,y,vx,vy,psi,omega\n";
  char buf[192];
  for (const TrajectoryRow& r : log.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.step, r.human_id,
                  r.x.x, r.x.y, r.v.x, r.v.y, r.psi, r.omega);
    out += buf;
  }
  return out;
}

std::string events_json(const std::vector<SimEvent>& events) {
  nlohmann::ordered_json j;
  j["events"] = nlohmann::ordered_json::array();
  for (const SimEvent& e : events) {
    nlohmann::ordered_json ej;
    ej["kind"] = to_string(e.kind);
    ej["step"] = e.step;
    ej["actors"] = e.actors;
    j["events"].push_back(ej);
  }
  return j.dump(2) + "\n";
}

std::vector<SimEvent> events_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("events file is not valid JSON: ") + e.what());
  }
  std::vector<SimEvent> events;
  for (const auto& ej : j.at("events")) {
    SimEvent e;
    const std::string kind = ej.at("kind").get<std::string>();
    if (kind == "human_human_overlap") {
      e.kind = SimEventKind::human_human_overlap;
    } else if (kind == "human_reached_destination") {
      e.kind = SimEventKind::human_reached_destination;
    } else if (kind == "destination_swapped") {
      e.kind = SimEventKind::destination_swapped;
    } else {
      throw ParseError("unknown event kind \"" + kind + "\"");
    }
    e.step = ej.at("step").get<int>();
    e.actors = ej.at("actors").get<std::vector<int>>();
    events.push_back(e);
  }
  return events;
}

std::string timing_json(const TrajectoryLog& log, int n_humans) {
  nlohmann::ordered_json j;
  j["n_humans"] = n_humans;
  j["steps"] = log.step_dynamics_seconds.size();
  double total = 0.0;
  for (double s : log.step_dynamics_seconds) total += s;
  j["dynamics_seconds_total"] = total;
  j["step_dynamics_seconds"] = log.step_dynamics_seconds;
  return j.dump(2) + "\n";
}

}  // namespace crowdsim
