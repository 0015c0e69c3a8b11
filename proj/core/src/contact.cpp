#include "crowdsim/contact.hpp"

#include <algorithm>
#include <cmath>

#include "crowdsim/geometry.hpp"
#include "crowdsim/rng.hpp"

namespace crowdsim {

namespace {

constexpr double kCoincidentEps = 1e-9;

// Spring + approach-only damping + capped kinetic friction along the contact
// normal n_hat (pointing away from the other body, toward this one).
Contact make_contact(Vec2 n_hat, double penetration, Vec2 rel_velocity, Vec2 point,
                     const ContactParams& params) {
  Contact c;
  const double normal_mag = params.k_normal * penetration;
  c.normal_force = normal_mag * n_hat;
  const double approach = dot(rel_velocity, n_hat);
  if (approach < 0.0) c.normal_force += (-params.c_damp * approach) * n_hat;
  if (params.mu > 0.0) {
    const Vec2 tangential_vel = rel_velocity - dot(rel_velocity, n_hat) * n_hat;
    const double slip = norm(tangential_vel);
    if (slip > 1e-9) {
      c.tangential_force = (-params.mu * norm(c.normal_force) / slip) * tangential_vel;
    }
  }
  c.point = point;
  return c;
}

}  // namespace

std::optional<Contact> contact_human_human(const Human& hi, const Human& hj,
                                           const ContactParams& params) {
  const Vec2 delta = hi.x - hj.x;
  const double dist = norm(delta);
  const double gap = dist - (hi.r + hj.r);
  if (gap >= 0.0) return std::nullopt;

  Vec2 n_hat;
  if (dist < kCoincidentEps) {
    // Coincident centers: deterministic pushout direction hashed from the
    // unordered id pair, opposite signs for the two bodies.
    const std::uint64_t lo = static_cast<std::uint32_t>(std::min(hi.id, hj.id));
    const std::uint64_t hi_id = static_cast<std::uint32_t>(std::max(hi.id, hj.id));
    const std::uint64_t h = mix64((lo << 32) ^ hi_id);
    const double angle = kTwoPi * (static_cast<double>(h >> 11) * 0x1.0p-53);
    n_hat = unit_from_angle(hi.id <= hj.id ? angle : angle + std::numbers::pi);
  } else {
    n_hat = delta * (1.0 / dist);
  }
  const Vec2 point = hi.x - n_hat * hi.r;
  return make_contact(n_hat, -gap, hi.v - hj.v, point, params);
}

std::vector<Contact> contacts_human_obstacle(const Human& h, const Scene& scene,
                                             const ContactParams& params) {
  std::vector<Contact> contacts;

  for (const Polygon& obs : scene.obstacles) {
    const double sd = polygon_signed_distance(h.x, obs);
    if (sd >= h.r) continue;
    const Vec2 nearest = closest_point_on_polygon_boundary(h.x, obs);
    Vec2 away = sd >= 0.0 ? h.x - nearest : nearest - h.x;  // direction of increasing clearance
    if (norm(away) < kCoincidentEps) continue;
    away = normalized(away);
    contacts.push_back(make_contact(away, h.r - sd, h.v, nearest, params));
  }

  // The floor boundary acts as a wall ring; clearance grows inward.
  const double wall_dist = point_in_polygon(h.x, scene.floor)
                               ? distance_to_polygon_boundary(h.x, scene.floor)
                               : -distance_to_polygon_boundary(h.x, scene.floor);
  if (wall_dist < h.r) {
    const Vec2 nearest = closest_point_on_polygon_boundary(h.x, scene.floor);
    Vec2 inward = wall_dist >= 0.0 ? h.x - nearest : nearest - h.x;
    if (norm(inward) >= kCoincidentEps) {
      inward = normalized(inward);
      contacts.push_back(make_contact(inward, h.r - wall_dist, h.v, nearest, params));
    }
  }
  return contacts;
}

Vec2 contact_force_human_human(const Human& hi, const Human& hj, const ContactParams& params) {
  const auto c = contact_human_human(hi, hj, params);
  if (!c) return {};
  return c->normal_force + c->tangential_force;
}

Vec2 contact_force_human_obstacle(const Human& h, const Scene& scene,
                                  const ContactParams& params) {
  Vec2 f;
  for (const Contact& c : contacts_human_obstacle(h, scene, params)) {
    f += c.normal_force + c.tangential_force;
  }
  return f;
}

double contact_torque(const Human& h, Vec2 contact_point, Vec2 tangential_force) {
  return cross(contact_point - h.x, tangential_force);
}

}  // namespace crowdsim
