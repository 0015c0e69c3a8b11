#pragma once

#include <numbers>

namespace crowdsim {

// Penalty contact constants. Not part of the interaction model; tuned so that
// penetration stays below 10% of a human radius at default walking speeds.
struct ContactParams {
  double k_normal = 5000.0;  // N/m
  double c_damp = 100.0;     // N*s/m, applied only while approaching
  double mu = 0.0;           // tangential friction coefficient

  bool operator==(const ContactParams&) const = default;
};

struct SimParams {
  double tau_adj = 0.5;   // adjust-force characteristic time, s
  double tau_soc = 3.0;   // interaction time horizon, s
  double tau_rot = 0.2;   // adjust-torque characteristic time, s
  double k_soc = 1.5;     // interaction energy scale
  double sigma_zeta = 0.0;  // fluctuation force std, N
  double sigma_eta = 0.0;   // fluctuation torque std, N*m
  double dt = 0.1;          // integration interval, s
  double v_max = 2.0;               // speed clamp, m/s
  double omega_max = 2.0 * std::numbers::pi;  // angular speed clamp, rad/s
  ContactParams contact;

  // Throws ValidationError on nonsensical values.
  void validate() const;

  bool operator==(const SimParams&) const = default;
};

// Humans within this distance of their destination are considered arrived.
inline constexpr double kGoalTolerance = 0.3;  // m

// A path waypoint counts as reached within this radius.
inline constexpr double kWaypointRadius = 0.5;  // m

// Fallback per-human attributes for scenes that omit them.
inline constexpr double kDefaultHumanRadius = 0.3;       // m
inline constexpr double kDefaultHumanMass = 80.0;        // kg
inline constexpr double kDefaultDesiredSpeed = 1.4;      // m/s
inline constexpr double kDefaultDesiredAngularSpeed = std::numbers::pi / 2.0;  // rad/s

}  // namespace crowdsim
