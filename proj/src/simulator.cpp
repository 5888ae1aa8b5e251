#include "conebill/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conebill {

BilliardState make_state(const ConeSpec& cone, const VectorXd& q, const VectorXd& v, double t) {
  if (q.size() != cone.dim() || v.size() != cone.dim())
    throw Error(ErrorCode::DimensionMismatch, "state dimension differs from cone dimension");
  const double speed = v.norm();
  if (!(speed > 0) || !std::isfinite(speed)) throw Error(ErrorCode::InvalidState, "velocity must be nonzero");
  if (!contains(cone, q, kContainmentTolerance)) throw Error(ErrorCode::InvalidState, "position outside the cone");
  return {q, v / speed, t};
}

NextEvent next_event(const BilliardState& state, const ConeSpec& cone) {
  const VectorXd z = margins(cone, state.q);
  if (z.minCoeff() < -kContainmentTolerance) throw Error(ErrorCode::InvalidState, "position outside the cone");
  const VectorXd rate = cone.normals().transpose() * state.v;

  double first = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  int first_wall = -1;
  int second_wall = -1;
  for (Eigen::Index i = 0; i < cone.walls(); ++i) {
    if (rate(i) >= -kGrazingTolerance) continue;
    const double t = std::max(0.0, -z(i) / rate(i));
    if (t < first) {
      second = first;
      second_wall = first_wall;
      first = t;
      first_wall = static_cast<int>(i);
    } else if (t < second) {
      second = t;
      second_wall = static_cast<int>(i);
    }
  }
  if (first_wall < 0) return Escape{};

  VectorXd q_at = state.q + first * state.v;
  if (second_wall >= 0 && second - first < kCornerTolerance * (1.0 + first))
    return CornerHit{state.t + first, first_wall, second_wall, std::move(q_at)};

  const auto normal = cone.normal(first_wall);
  q_at -= q_at.dot(normal) * normal;
  CollisionEvent event;
  event.t = state.t + first;
  event.wall = first_wall;
  event.q_at = std::move(q_at);
  event.v_before = state.v;
  event.v_after = (state.v - 2.0 * state.v.dot(normal) * normal).normalized();
  return event;
}

std::int64_t default_max_steps(const BoundsReport& report) {
  constexpr double cap = 1e15;
  if (!(report.bound_main < cap)) return static_cast<std::int64_t>(cap);
  return static_cast<std::int64_t>(std::ceil(report.bound_main)) + 1;
}

TrajectoryRecord run(const BilliardState& initial, const ConeSpec& cone, std::int64_t max_steps) {
  if (initial.q.size() != cone.dim() || initial.v.size() != cone.dim())
    throw Error(ErrorCode::DimensionMismatch, "state dimension differs from cone dimension");
  if (std::abs(initial.v.norm() - 1.0) > 1e-12) throw Error(ErrorCode::InvalidState, "velocity is not unit");

  TrajectoryRecord record;
  record.initial = initial;
  record.velocities.push_back(initial.v);
  BilliardState state = initial;
  while (true) {
    NextEvent next = next_event(state, cone);
    if (std::holds_alternative<Escape>(next)) {
      record.terminal = Terminal::Escaped;
      break;
    }
    if (std::holds_alternative<CornerHit>(next)) {
      record.terminal = Terminal::CornerHit;
      break;
    }
    if (static_cast<std::int64_t>(record.events.size()) >= max_steps) {
      record.terminal = Terminal::StepLimit;
      break;
    }
    auto& event = std::get<CollisionEvent>(next);
    state = {event.q_at, event.v_after, event.t};
    record.velocities.push_back(event.v_after);
    record.events.push_back(std::move(event));
  }
  return record;
}

double zigzag_length(const TrajectoryRecord& record) {
  double total = 0;
  for (std::size_t k = 1; k < record.velocities.size(); ++k)
    total += (record.velocities[k] - record.velocities[k - 1]).norm();
  return total;
}

bool AuditVerdict::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

AuditVerdict audit(const TrajectoryRecord& record, const BoundsReport& report) {
  if (record.initial.q.size() != report.m)
    throw Error(ErrorCode::ConeMismatch, "trajectory dimension differs from the report's cone");
  for (const auto& event : record.events)
    if (event.wall < 0 || event.wall >= report.n)
      throw Error(ErrorCode::ConeMismatch, "trajectory references a wall the report's cone lacks");

  const auto n_obs = static_cast<double>(record.collisions());
  AuditVerdict verdict;
  auto bound_check = [&](const char* name, double limit) {
    verdict.checks.push_back({name, n_obs, limit, n_obs <= limit});
  };
  bound_check("bound_main", report.bound_main);
  bound_check("bound_dd", report.bound_dd);
  bound_check("bound_sevryuk", report.bound_sevryuk);
  bound_check("bound_bfk", report.bound_bfk);
  if (report.bound_wedge) bound_check("bound_wedge", static_cast<double>(*report.bound_wedge));
  if (report.tridiagonal_applicable && report.bound_tridiagonal)
    bound_check("bound_tridiagonal", static_cast<double>(*report.bound_tridiagonal));
  const double ceiling = 2.0 / report.d;
  const double length = zigzag_length(record);
  verdict.checks.push_back({"zigzag_ceiling", length, ceiling, length <= ceiling + 1e-9});
  verdict.checks.push_back({"no_step_limit", record.terminal == Terminal::StepLimit ? 1.0 : 0.0, 0.0,
                            record.terminal != Terminal::StepLimit});
  return verdict;
}

}  // namespace conebill
