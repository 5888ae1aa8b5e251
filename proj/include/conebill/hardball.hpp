#pragma once
/**
 * @file hardball.hpp
 * @brief Point masses on a line and their isomorphism with a cone billiard.
 *
 * With y_i = sqrt(m_i) x_i the kinetic energy becomes |dy/dt|^2 / 2 and the
 * ordering constraint x_i <= x_{i+1} becomes the half-space
 * (y, a_i) >= 0 with a_i proportional to (-1/sqrt(m_i)) e_i + (1/sqrt(m_{i+1})) e_{i+1}.
 * Elastic collisions of neighbours are then specular reflections in that wall.
 */

#include <cstdint>
#include <utility>
#include <vector>

#include "conebill/cone.hpp"
#include "conebill/simulator.hpp"

namespace conebill {

struct HardBallSystem {
  std::vector<double> masses;
  std::vector<double> positions;   ///< strictly increasing
  std::vector<double> velocities;
};

struct BallEvent {
  double t = 0;
  int left = 0;  ///< the pair is (left, left + 1)
  double velocity_left = 0;
  double velocity_right = 0;
};

struct BallRun {
  std::vector<BallEvent> events;
  Terminal terminal = Terminal::Escaped;
};

/// Cone image of a ball system and the coordinate change between them.
struct BallCone {
  ConeSpec cone;               ///< N - 1 walls in R^N
  std::vector<double> scale;   ///< sqrt(m_i)

  VectorXd to_cone(const std::vector<double>& x) const;
  std::vector<double> from_cone(const VectorXd& y) const;
};

BallCone balls_to_cone(const std::vector<double>& masses);

/// Validates masses and ordering; throws TooFewBalls, NonpositiveMass or InvalidState.
void validate(const HardBallSystem& system);

/// Post-collision velocities of a 1-D elastic two-body collision.
std::pair<double, double> elastic_collision(double m1, double v1, double m2, double v2);

/// Event-driven simulation; simultaneous collisions end the run as a corner hit.
BallRun simulate_balls(const HardBallSystem& system, std::int64_t max_events);

struct ConjugacyReport {
  std::size_t ball_events = 0;
  std::size_t cone_events = 0;
  bool sequences_match = false;   ///< same length and pair index == wall index throughout
  double max_time_rel_error = 0;  ///< over matched events, after speed normalization
  bool times_match = false;       ///< max_time_rel_error <= 1e-8
  Terminal ball_terminal = Terminal::Escaped;
  Terminal cone_terminal = Terminal::Escaped;
  bool pass() const { return sequences_match && times_match && ball_terminal == cone_terminal; }
};

ConjugacyReport conjugacy_check(const HardBallSystem& system, std::int64_t horizon);

/// Cone trajectory of the ball system (unit speed, time rescaled by |w|).
TrajectoryRecord cone_trajectory(const HardBallSystem& system, std::int64_t horizon);

}  // namespace conebill
