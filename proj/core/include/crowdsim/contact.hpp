#pragma once

#include <optional>
#include <vector>

#include "crowdsim/human.hpp"
#include "crowdsim/params.hpp"
#include "crowdsim/scene.hpp"
#include "crowdsim/vec2.hpp"

namespace crowdsim {

// One resolved penalty contact acting on a human.
struct Contact {
  Vec2 normal_force;      // spring + damping along the contact normal
  Vec2 tangential_force;  // kinetic friction, zero when mu == 0
  Vec2 point;             // contact point on the body surface
};

// Penetration-activated contact between two humans; nullopt when the
// skin-to-skin distance is >= 0.
std::optional<Contact> contact_human_human(const Human& hi, const Human& hj,
                                           const ContactParams& params);

// Contacts against every penetrated obstacle edge and the floor boundary.
std::vector<Contact> contacts_human_obstacle(const Human& h, const Scene& scene,
                                             const ContactParams& params);

// Net contact force on hi from hj (exact action-reaction with the swap).
Vec2 contact_force_human_human(const Human& hi, const Human& hj, const ContactParams& params);

// Net contact force from all penetrated obstacles and walls.
Vec2 contact_force_human_obstacle(const Human& h, const Scene& scene, const ContactParams& params);

// z-torque of the tangential force about the body center.
double contact_torque(const Human& h, Vec2 contact_point, Vec2 tangential_force);

}  // namespace crowdsim
