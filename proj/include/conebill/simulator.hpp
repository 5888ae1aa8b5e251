#pragma once
/**
 * @file simulator.hpp
 * @brief Exact event-driven billiard flow in a polyhedral cone.
 *
 * The particle moves with unit speed along straight lines and reflects
 * specularly, v' = v - 2 (v, a_i) a_i, on the wall it reaches first.
 * Reaching two walls at once is a corner hit and ends the motion.
 */

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "conebill/cone.hpp"
#include "conebill/constants.hpp"

namespace conebill {

/// Relative tolerance on the two earliest hit times that declares a corner hit.
inline constexpr double kCornerTolerance = 1e-12;
/// (v, a_i) above this is not approaching wall i (grazing counts as no hit).
inline constexpr double kGrazingTolerance = 1e-12;
/// Positions may sit this far outside Q.
inline constexpr double kContainmentTolerance = 1e-9;

struct BilliardState {
  VectorXd q;
  VectorXd v;
  double t = 0;
};

struct CollisionEvent {
  double t = 0;
  int wall = 0;
  VectorXd q_at;
  VectorXd v_before;
  VectorXd v_after;
};

struct Escape {};

struct CornerHit {
  double t = 0;
  int wall_a = 0;
  int wall_b = 0;
  VectorXd q_at;
};

using NextEvent = std::variant<CollisionEvent, Escape, CornerHit>;

enum class Terminal { Escaped, CornerHit, StepLimit };

constexpr std::string_view to_string(Terminal t) {
  switch (t) {
    case Terminal::Escaped: return "Escaped";
    case Terminal::CornerHit: return "CornerHit";
    case Terminal::StepLimit: return "StepLimit";
  }
  return "Unknown";
}

struct TrajectoryRecord {
  BilliardState initial;
  std::vector<CollisionEvent> events;
  Terminal terminal = Terminal::Escaped;
  std::vector<VectorXd> velocities;  ///< v_0, ..., v_N

  std::size_t collisions() const { return events.size(); }
};

/// Builds a valid state, normalizing v to unit speed. Throws InvalidState.
BilliardState make_state(const ConeSpec& cone, const VectorXd& q, const VectorXd& v, double t = 0);

NextEvent next_event(const BilliardState& state, const ConeSpec& cone);

/// max_steps budget derived from the main bound: ceil(bound_main) + 1, saturated.
std::int64_t default_max_steps(const BoundsReport& report);

TrajectoryRecord run(const BilliardState& initial, const ConeSpec& cone, std::int64_t max_steps);

/// Length of the polygonal line through v_0, ..., v_N.
double zigzag_length(const TrajectoryRecord& record);

struct AuditCheck {
  std::string name;
  double observed = 0;
  double limit = 0;
  bool pass = false;
};

struct AuditVerdict {
  std::vector<AuditCheck> checks;
  bool pass() const;
};

/// Compares a trajectory against every bound in the report and the 2/d zigzag ceiling.
AuditVerdict audit(const TrajectoryRecord& record, const BoundsReport& report);

}  // namespace conebill
