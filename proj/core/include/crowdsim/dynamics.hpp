#pragma once

#include "crowdsim/human.hpp"
#include "crowdsim/params.hpp"
#include "crowdsim/rng.hpp"
#include "crowdsim/vec2.hpp"

namespace crowdsim {

struct SimState;

// Outcome of the disc-vs-disc time-to-collision quadratic.
struct TtcResult {
  enum class Kind { collides, diverging, never, overlapping };
  Kind kind = Kind::never;
  double tau = 0.0;  // valid only when kind == collides; always > 0 there
};

// Steers toward the destination: (m / tau_adj) * (v_des * e_hat - v).
Vec2 adjust_force(const Human& h, const SimParams& params);

// Solves ||x_rel + tau * v_rel|| = r_sum for the earliest root.
// a = |v_rel|^2, b = -x_rel.v_rel, c = |x_rel|^2 - r_sum^2, tau = (b - sqrt(b^2-ac)) / a.
TtcResult time_to_collision(Vec2 x_rel, Vec2 v_rel, double r_sum);

// E(tau) = (k_soc / tau^2) * exp(-tau / tau_soc).
double interaction_energy(double tau, const SimParams& params);

// Anticipatory repulsion on hi from hj: -grad_{x_rel} E(tau(x_rel)).
// Zero unless the pair is on a genuine collision course.
Vec2 social_force(const Human& hi, const Human& hj, const SimParams& params);

// Random magnitude N(0, sigma^2) along a uniformly random direction.
Vec2 fluctuation_force(RngStream& rng, double sigma_zeta);

// Orientation controller torque; the wrapped-angle factor lies in [-1, 1).
double adjust_torque(const Human& h, const SimParams& params);

double fluctuation_torque(RngStream& rng, double sigma_eta);

// Full per-human force: adjust + sum of social and contact terms over other
// humans (in ascending index order) + obstacle contacts + fluctuation.
// Draws from rng only when sigma_zeta > 0.
Vec2 total_force(const SimState& state, std::size_t i, RngStream& rng);

// Full per-human torque: adjust + contact torques + fluctuation.
double total_torque(const SimState& state, std::size_t i, RngStream& rng);

}  // namespace crowdsim
