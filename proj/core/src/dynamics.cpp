#include "crowdsim/dynamics.hpp"

#include <cmath>

#include "crowdsim/contact.hpp"
#include "crowdsim/integrator.hpp"

namespace crowdsim {

namespace {

// Discriminants below this are treated as no-collision: grad tau carries a
// 1/sqrt(disc) factor that blows up at tangency.
constexpr double kDiscFloor = 1e-12;

constexpr double kTinySpeedSq = 1e-24;

}  // namespace

Vec2 adjust_force(const Human& h, const SimParams& params) {
  return (h.m / params.tau_adj) * (h.v_des * h.e_hat - h.v);
}

TtcResult time_to_collision(Vec2 x_rel, Vec2 v_rel, double r_sum) {
  const double c = norm_sq(x_rel) - r_sum * r_sum;
  if (c <= 0.0) return {TtcResult::Kind::overlapping, 0.0};
  const double a = norm_sq(v_rel);
  const double b = -dot(x_rel, v_rel);
  if (a < kTinySpeedSq) return {TtcResult::Kind::never, 0.0};  // stationary relative motion
  const double disc = b * b - a * c;
  if (disc < 0.0) return {TtcResult::Kind::never, 0.0};
  const double tau = (b - std::sqrt(disc)) / a;
  if (tau <= 0.0) return {TtcResult::Kind::diverging, 0.0};
  return {TtcResult::Kind::collides, tau};
}

double interaction_energy(double tau, const SimParams& params) {
  return params.k_soc / (tau * tau) * std::exp(-tau / params.tau_soc);
}

Vec2 social_force(const Human& hi, const Human& hj, const SimParams& params) {
  const Vec2 x_rel = hi.x - hj.x;
  const Vec2 v_rel = hi.v - hj.v;
  const double r_sum = hi.r + hj.r;

  const double c = norm_sq(x_rel) - r_sum * r_sum;
  if (c <= 0.0) return {};  // overlapping: separation is the contact model's job
  const double a = norm_sq(v_rel);
  if (a < kTinySpeedSq) return {};
  const double b = -dot(x_rel, v_rel);
  const double disc = b * b - a * c;
  if (disc < kDiscFloor) return {};
  const double sqrt_disc = std::sqrt(disc);
  const double tau = (b - sqrt_disc) / a;
  if (tau <= 0.0) return {};

  const double energy = interaction_energy(tau, params);
  // dE/dtau = -E * (2/tau + 1/tau_soc)
  const double denergy = -energy * (2.0 / tau + 1.0 / params.tau_soc);
  // grad tau = (-v_rel + (b*v_rel + a*x_rel)/sqrt(disc)) / a
  const Vec2 grad_tau = ((v_rel * b + x_rel * a) * (1.0 / sqrt_disc) - v_rel) * (1.0 / a);
  return grad_tau * (-denergy);
}

Vec2 fluctuation_force(RngStream& rng, double sigma_zeta) {
  const double magnitude = rng.normal(sigma_zeta);
  const double angle = rng.uniform(0.0, kTwoPi);
  return magnitude * unit_from_angle(angle);
}

double adjust_torque(const Human& h, const SimParams& params) {
  const double inertia = h.inertia();
  const double dpsi = wrap_angle_2pi(h.psi0 - h.psi);
  const double factor = dpsi / std::numbers::pi - 1.0;  // in [-1, 1)
  return inertia / params.tau_rot * (factor * h.omega0 - h.omega);
}

double fluctuation_torque(RngStream& rng, double sigma_eta) { return rng.normal(sigma_eta); }

Vec2 total_force(const SimState& state, std::size_t i, RngStream& rng) {
  const Human& hi = state.humans[i];
  Vec2 f = adjust_force(hi, state.params);
  for (std::size_t j = 0; j < state.humans.size(); ++j) {
    if (j == i) continue;
    const Human& hj = state.humans[j];
    f += social_force(hi, hj, state.params);
    f += contact_force_human_human(hi, hj, state.params.contact);
  }
  f += contact_force_human_obstacle(hi, *state.scene, state.params.contact);
  if (state.params.sigma_zeta > 0.0) f += fluctuation_force(rng, state.params.sigma_zeta);
  return f;
}

double total_torque(const SimState& state, std::size_t i, RngStream& rng) {
  const Human& hi = state.humans[i];
  double torque = adjust_torque(hi, state.params);
  if (state.params.contact.mu > 0.0) {
    for (std::size_t j = 0; j < state.humans.size(); ++j) {
      if (j == i) continue;
      if (const auto c = contact_human_human(hi, state.humans[j], state.params.contact)) {
        torque += contact_torque(hi, c->point, c->tangential_force);
      }
    }
    for (const Contact& c : contacts_human_obstacle(hi, *state.scene, state.params.contact)) {
      torque += contact_torque(hi, c.point, c.tangential_force);
    }
  }
  if (state.params.sigma_eta > 0.0) torque += fluctuation_torque(rng, state.params.sigma_eta);
  return torque;
}

}  // namespace crowdsim
