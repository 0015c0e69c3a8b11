#pragma once

#include "crowdsim/params.hpp"
#include "crowdsim/vec2.hpp"

namespace crowdsim {

// Runtime state of one simulated human (disc particle on the 2D floor).
struct Human {
  int id = 0;
  Vec2 x;               // position, m
  Vec2 v;               // linear velocity, m/s
  Vec2 e_hat;           // unit desired direction; zero only when arrived
  double v_des = kDefaultDesiredSpeed;  // desired speed, m/s
  double psi = 0.0;     // orientation, rad, wrapped to [0, 2pi)
  double psi0 = 0.0;    // desired orientation, rad
  double omega = 0.0;   // angular velocity, rad/s
  double omega0 = kDefaultDesiredAngularSpeed;  // desired angular speed, rad/s
  double r = kDefaultHumanRadius;  // body radius, m
  double m = kDefaultHumanMass;    // mass, kg
  Vec2 destination;
  Vec2 origin;          // initial position, for destination cycling

  // Moment of inertia I = m * r^2; derived, never stored.
  double inertia() const { return m * r * r; }
};

}  // namespace crowdsim
